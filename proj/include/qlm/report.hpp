#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "qlm/flat_distance.hpp"
#include "qlm/graph_geometry.hpp"
#include "qlm/level_set.hpp"
#include "qlm/mass.hpp"
#include "qlm/stability.hpp"

namespace qlm {

using json = nlohmann::ordered_json;

/// All numeric output goes through one fixed formatting (12 significant
/// digits) so repeated runs are byte-identical.
inline std::string num(double v) {
    v += 0.0;  // normalize -0
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return std::string(buf);
}

/// JSON numbers are emitted as preformatted strings for the same reason:
/// locale- and library-independent byte stability.
inline json jnum(double v) { return json(num(v)); }

inline json to_json(const AdmissibilityReport& r) {
    json j;
    j["min_scalar_curvature"] = jnum(r.min_scalar_curvature);
    j["curvature_verdict"] = to_string(r.curvature_verdict);
    j["mean_convex_fraction"] = jnum(r.mean_convex_fraction);
    j["mean_convex_verdict"] = to_string(r.mean_convex_verdict);
    j["outer_minimizing_verdict"] = to_string(r.outer_minimizing_verdict);
    j["locally_constant_verdict"] = to_string(r.locally_constant_verdict);
    json osc = json::array();
    for (double v : r.horizon_oscillation) osc.push_back(jnum(v));
    j["horizon_oscillation"] = osc;
    j["samples"] = r.samples;
    j["admissible"] = r.admissible();
    return j;
}

inline json to_json(const SignReport& r) {
    json j;
    j["positive"] = r.positive;
    j["negative"] = r.negative;
    j["zero"] = r.zero;
    j["min"] = jnum(r.min_H);
    j["max"] = jnum(r.max_H);
    j["verdict"] = to_string(r.verdict);
    return j;
}

inline json to_json(const PenroseResult& r) {
    json j;
    j["boundary_mass"] = jnum(r.boundary_mass);
    j["horizon_term"] = jnum(r.horizon_term);
    j["margin"] = jnum(r.margin);
    return j;
}

inline json to_json(const CurrentDecomposition& d) {
    json j;
    j["h_ref"] = jnum(d.h_ref);
    j["mass_b_plus"] = jnum(d.mass_b_plus);
    j["mass_b_minus"] = jnum(d.mass_b_minus);
    j["mass_a"] = jnum(d.mass_a);
    j["flat_distance_bound"] = jnum(d.bound());
    return j;
}

inline json to_json(const StabilityReport& r) {
    json j;
    j["xi"] = jnum(r.xi);
    j["mass"] = jnum(r.mass);
    j["h_o"] = jnum(r.h_o);
    j["threshold_area"] = jnum(r.threshold);
    j["ode"] = {{"trivial", r.ode.trivial},
                {"checked", r.ode.checked},
                {"violations", r.ode.violations},
                {"worst_excess", jnum(r.ode.worst_excess)}};
    j["height"] = {{"gap", jnum(r.height.gap)},
                   {"bound_form", jnum(r.height.bound_form)},
                   {"ratio", jnum(r.height.ratio)}};
    j["volume"] = {{"graph", jnum(r.volume.vol_graph)},
                   {"domain", jnum(r.volume.vol_domain)},
                   {"excess", jnum(r.volume.excess)},
                   {"below_threshold", jnum(r.volume.v_minus)},
                   {"above_threshold", jnum(r.volume.v_plus)},
                   {"explicit_bound", jnum(r.volume.explicit_bound)},
                   {"bound_dominates", r.volume.bound_dominates}};
    return j;
}

inline json to_json(const ConvergenceRun& run) {
    json j;
    j["family"] = run.family;
    j["df_slope"] = jnum(run.df_slope);
    j["vol_slope"] = jnum(run.vol_slope);
    j["monotone_mass"] = run.monotone_mass;
    j["theorem_case"] = run.theorem_case;
    json els = json::array();
    for (const auto& el : run.elements) {
        els.push_back({{"param", jnum(el.param)},
                       {"mass", jnum(el.mass)},
                       {"h_o", jnum(el.h_o)},
                       {"gap", jnum(el.gap)},
                       {"d_f_bound", jnum(el.d_f_bound)},
                       {"vol_excess", jnum(el.vol_excess)},
                       {"sup_distance", jnum(el.sup_distance)}});
    }
    j["elements"] = els;
    return j;
}

// ---- CSV / dat -----------------------------------------------------------

inline std::string mass_table_csv(const std::vector<MassRow>& rows) {
    std::string s = "h,area,mass,flux,minkowski_deficit,regular\n";
    for (const auto& r : rows) {
        s += num(r.h) + "," + num(r.area) + "," + num(r.mass) + "," + num(r.flux) + "," +
             num(r.minkowski_deficit) + "," + (r.regular ? "1" : "0") + "\n";
    }
    return s;
}

inline std::string area_profile_csv(const AreaProfile& p) {
    std::string s = "h,V,Vprime_fd,Vprime_var,regular\n";
    for (size_t k = 0; k < p.h.size(); ++k) {
        s += num(p.h[k]) + "," + num(p.area[k]) + "," + num(p.dA_fd[k]) + "," +
             num(p.dA_var[k]) + "," + (p.regular[k] ? "1" : "0") + "\n";
    }
    return s;
}

inline std::string convergence_csv(const ConvergenceRun& run) {
    std::string s = "param,mass,dF_bound,vol_excess,h_o,gap,sup_distance\n";
    for (const auto& el : run.elements) {
        s += num(el.param) + "," + num(el.mass) + "," + num(el.d_f_bound) + "," +
             num(el.vol_excess) + "," + num(el.h_o) + "," + num(el.gap) + "," +
             num(el.sup_distance) + "\n";
    }
    return s;
}

/// Two-column whitespace .dat (log mass, log d_F bound) for plotting.
inline std::string convergence_dat(const ConvergenceRun& run) {
    std::string s;
    for (const auto& el : run.elements) {
        if (!(el.mass > 0.0) || !(el.d_f_bound > 0.0)) continue;
        s += num(std::log(el.mass)) + " " + num(std::log(el.d_f_bound)) + "\n";
    }
    return s;
}

inline std::string gnuplot_script(const std::string& dat_name, const std::string& out_name) {
    std::string s;
    s += "set terminal pngcairo size 800,600\n";
    s += "set output '" + out_name + "'\n";
    s += "set xlabel 'log m_BY'\n";
    s += "set ylabel 'log d_F bound'\n";
    s += "plot '" + dat_name + "' using 1:2 with linespoints title 'flat-distance bound'\n";
    return s;
}

inline void write_text_file(const std::filesystem::path& path, const std::string& content) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file " + path.string());
    out << content;
}

}  // namespace qlm
