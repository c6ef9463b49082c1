// qlm: quasi-local mass diagnostics for graphical data over a Euclidean domain.
//
// Subcommands:
//   analyze   admissibility, mass table, inequalities, stability report
//   sequence  one-parameter sweep toward zero mass with flat-distance bounds
//   verify    named invariant suite, machine-readable pass/fail lines
//   level     per-height table at configured levels
//
// Exit codes: 0 all checks pass, 1 an inequality or invariant is violated,
// 2 configuration error.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "qlm/qlm.hpp"

namespace {

using qlm::json;
using qlm::num;

struct InvariantResult {
    std::string name;
    bool pass = false;
    double measured = 0.0;
    double tolerance = 0.0;
    std::string detail;
};

// ---- invariant registry ---------------------------------------------------

std::vector<InvariantResult> run_invariants(const qlm::RunConfig& cfg) {
    std::vector<InvariantResult> out;
    auto add = [&](const std::string& name, double measured, double tolerance,
                   const std::string& detail = "") {
        InvariantResult r;
        r.name = name;
        r.measured = measured;
        r.tolerance = tolerance;
        r.pass = measured <= tolerance;
        r.detail = detail;
        out.push_back(r);
    };
    auto wanted = [&](const std::string& name) {
        if (cfg.invariants.empty()) return true;
        for (const auto& w : cfg.invariants)
            if (w == name) return true;
        return false;
    };

    const qlm::GridSpec grid = qlm::grid_spec(cfg);
    qlm::FamilySpec sch;
    sch.kind = qlm::FamilySpec::Kind::schwarzschild;
    sch.n = 3;
    sch.mass = 1.0;
    sch.outer_radius = 4.0;
    const qlm::ScalarField fld = qlm::instantiate(sch, qlm::GridSpec::uniform(3, cfg.resolution));

    if (wanted("boundary-mass-closed-form")) {
        // m_BY at r = 4, m = 1 is 4 (1 - 1/sqrt 2).
        const double expected = 4.0 * (1.0 - 1.0 / std::sqrt(2.0));
        add("boundary-mass-closed-form", std::abs(qlm::boundary_mass(fld) - expected), 1e-9);
    }
    if (wanted("flux-conserved-on-scalar-flat")) {
        const auto rows = qlm::mass_table(fld, cfg.ladder);
        double lo = 1e300, hi = -1e300;
        for (const auto& r : rows)
            if (r.regular) {
                lo = std::min(lo, r.flux);
                hi = std::max(hi, r.flux);
            }
        add("flux-conserved-on-scalar-flat", hi - lo, 1e-9);
    }
    if (wanted("bulk-boundary-conservation")) {
        qlm::FamilySpec bump;
        bump.kind = qlm::FamilySpec::Kind::bump;
        bump.amplitude = 1.0;
        bump.outer_radius = 4.0;
        const qlm::ScalarField bf = qlm::instantiate(bump, grid);
        const double fmax = bf.max_value();
        const auto res = qlm::monotonicity_and_bulk_identity(bf, 0.55 * fmax, 0.9 * fmax);
        add("bulk-boundary-conservation", res.residual, 1e-6);
    }
    if (wanted("minkowski-round-slice")) {
        const double h = 0.5 * (fld.min_value() + fld.max_value());
        const auto ls = qlm::extract_level_set(fld, h);
        add("minkowski-round-slice", std::abs(qlm::minkowski_check(ls, 3).deficit), 1e-9);
    }
    if (wanted("flux-integrand-identity")) {
        const double h = 0.5 * (fld.min_value() + fld.max_value());
        add("flux-integrand-identity",
            qlm::flux_integrand_identity_check(qlm::extract_level_set(fld, h)), 1e-12);
    }
    if (wanted("horizon-lower-bound")) {
        const auto pr = qlm::penrose_check(fld);
        add("horizon-lower-bound", -pr.margin, 0.0,
            "margin " + num(pr.margin));
    }
    if (wanted("comparison-ode-below-area")) {
        // Small mass in a large ball so the threshold height is interior and the
        // comparison solution is actually integrated.
        qlm::FamilySpec small = sch;
        small.mass = 0.2;
        small.outer_radius = 16.0;
        const qlm::ScalarField sf = qlm::instantiate(small, qlm::GridSpec::uniform(3, cfg.resolution));
        const auto ode = qlm::ode_comparison(sf, qlm::boundary_mass(sf), cfg.xi);
        add("comparison-ode-below-area", double(ode.violations), 0.0,
            std::to_string(ode.checked) + " heights checked");
    }
    if (wanted("graph-volume-bound")) {
        const auto vol = qlm::volume_estimate_check(fld, qlm::boundary_mass(fld), cfg.xi);
        add("graph-volume-bound", vol.bound_dominates ? 0.0 : 1.0, 0.0,
            "excess " + num(vol.excess));
    }
    if (wanted("grid-level-area")) {
        // Marching extraction against the exact sphere area at mid-height.
        const qlm::ScalarField gf = qlm::resample_without_profile(fld);
        const double h = 0.5 * (gf.min_value() + gf.max_value());
        const auto ls = qlm::extract_level_set(gf, h);
        const double r = fld.radial->radius_of_height(h);
        const double exact = qlm::unit_sphere_area(3) * r * r;
        add("grid-level-area", std::abs(ls.area() - exact) / exact, 0.02);
    }
    if (wanted("grid-ball-volume")) {
        const qlm::Domain ball(3, qlm::Region::make_ball(qlm::Vec(3), 1.0));
        qlm::AnalyticProfile zero{[](const qlm::Vec&) { return 0.0; },
                                  [](const qlm::Vec&) { return qlm::Vec(3); },
                                  [](const qlm::Vec&) { return qlm::SymMat(3); }};
        const qlm::ScalarField gf = qlm::ScalarField::build(ball, grid, zero);
        const double exact = qlm::unit_ball_volume(3);
        add("grid-ball-volume", std::abs(gf.masked_volume() - exact) / exact, 0.01);
    }
    if (wanted("radial-tensor-curvature-agreement")) {
        double worst = 0.0;
        for (double r : {2.5, 3.0, 3.5, 3.9}) {
            const auto rc = qlm::radial_curvature(*fld.radial, r);
            qlm::Vec x(3);
            x[0] = r;
            const auto ts = qlm::curvature_from_derivatives(x, fld.profile->grad(x),
                                                            fld.profile->hess(x));
            worst = std::max({worst, std::abs(rc.H_hat - ts.H_hat), std::abs(rc.R - ts.R)});
        }
        add("radial-tensor-curvature-agreement", worst, 1e-8);
    }
    if (wanted("decomposition-masses-nonnegative")) {
        const auto dec = qlm::decompose(fld, qlm::compute_h_o(fld, cfg.xi, qlm::boundary_mass(fld)));
        const double worst =
            std::max({-dec.mass_a, -dec.mass_b_plus, -dec.mass_b_minus});
        add("decomposition-masses-nonnegative", worst, 0.0,
            "bound " + num(dec.bound()));
    }
    return out;
}

// ---- subcommands ----------------------------------------------------------

int cmd_analyze(const qlm::RunConfig& cfg) {
    const qlm::ScalarField fld = qlm::instantiate(cfg.family, qlm::grid_spec(cfg));
    const double mass = qlm::boundary_mass(fld);

    json j;
    j["family"] = qlm::family_kind_name(cfg.family.kind);
    j["dim"] = cfg.family.n;
    j["resolution"] = cfg.resolution;
    j["boundary_mass"] = qlm::jnum(mass);

    bool violated = false;
    const auto adm = qlm::check_admissibility(fld);
    j["admissibility"] = qlm::to_json(adm);
    if (cfg.family.admissible_expected && !adm.admissible()) violated = true;

    j["mean_curvature_sign"] = qlm::to_json(qlm::mean_curvature_sign_check(fld));

    const auto rows = qlm::mass_table(fld, cfg.ladder);
    double worst_deficit = 0.0, worst_flux_drop = 0.0;
    double prev_flux = -1e300;
    for (const auto& r : rows) {
        if (!r.regular) continue;
        worst_deficit = std::min(worst_deficit, r.minkowski_deficit);
        if (prev_flux > -1e299) worst_flux_drop = std::min(worst_flux_drop, r.flux - prev_flux);
        prev_flux = r.flux;
    }
    j["worst_minkowski_deficit"] = qlm::jnum(worst_deficit);
    j["worst_flux_drop"] = qlm::jnum(worst_flux_drop);
    // The total-mean-curvature inequality only binds on mean-convex slices.
    if (adm.mean_convex_verdict == qlm::Verdict::pass && worst_deficit < -1e-6) violated = true;
    if (adm.curvature_verdict == qlm::Verdict::pass && worst_flux_drop < -1e-6 * (1.0 + std::abs(prev_flux)))
        violated = true;

    if (fld.domain.has_horizon()) {
        const auto pr = qlm::penrose_check(fld);
        j["horizon_lower_bound"] = qlm::to_json(pr);
        if (!(pr.margin > 0.0)) violated = true;
    }
    if (mass > 0.0) {
        const auto stab = qlm::stability_report(fld, mass, cfg.xi);
        j["stability"] = qlm::to_json(stab);
        if (stab.ode.violations > 0) violated = true;
        if (!stab.volume.bound_dominates) violated = true;
        j["flat_decomposition"] = qlm::to_json(qlm::decompose(fld, stab.h_o));
    }
    j["violations_found"] = violated;

    const std::filesystem::path out(cfg.out_dir);
    qlm::write_text_file(out / "analyze.json", j.dump(2) + "\n");
    qlm::write_text_file(out / "mass_table.csv", qlm::mass_table_csv(rows));
    std::cout << (violated ? "VIOLATION" : "OK") << " mass=" << num(mass) << " outputs in "
              << out.string() << "\n";
    return violated ? 1 : 0;
}

int cmd_sequence(const qlm::RunConfig& cfg) {
    if (cfg.sweep.empty()) throw qlm::ConfigError("sequence requires a non-empty sweep");
    const qlm::RunConfig& c = cfg;
    const auto run = qlm::convergence_run(
        qlm::family_kind_name(cfg.family.kind), cfg.sweep,
        [&c](double p) { return qlm::sweep_spec(c, p); }, qlm::grid_spec(cfg), cfg.xi);

    const std::filesystem::path out(cfg.out_dir);
    qlm::write_text_file(out / "sequence.json", qlm::to_json(run).dump(2) + "\n");
    qlm::write_text_file(out / "sequence.csv", qlm::convergence_csv(run));
    qlm::write_text_file(out / "sequence.dat", qlm::convergence_dat(run));
    qlm::write_text_file(out / "sequence.gnuplot",
                         qlm::gnuplot_script("sequence.dat", "sequence.png"));

    // The sweep itself only violates the theory if the distance bound fails to
    // shrink along a mass-decreasing tail.
    bool violated = false;
    if (run.elements.size() >= 2 && run.monotone_mass) {
        const double first = run.elements.front().d_f_bound;
        const double last = run.elements.back().d_f_bound;
        if (last > first + 1e-12) violated = true;
    }
    std::cout << (violated ? "VIOLATION" : "OK") << " df_slope=" << num(run.df_slope)
              << " vol_slope=" << num(run.vol_slope) << " outputs in " << out.string() << "\n";
    return violated ? 1 : 0;
}

int cmd_verify(const qlm::RunConfig& cfg) {
    const auto results = run_invariants(cfg);
    if (results.empty()) throw qlm::ConfigError("no invariants matched the configured names");
    bool all_pass = true;
    json j = json::array();
    for (const auto& r : results) {
        all_pass = all_pass && r.pass;
        std::cout << (r.pass ? "PASS " : "FAIL ") << r.name << " measured=" << num(r.measured)
                  << " tolerance=" << num(r.tolerance)
                  << (r.detail.empty() ? "" : " (" + r.detail + ")") << "\n";
        j.push_back({{"name", r.name},
                     {"pass", r.pass},
                     {"measured", qlm::jnum(r.measured)},
                     {"tolerance", qlm::jnum(r.tolerance)},
                     {"detail", r.detail}});
    }
    qlm::write_text_file(std::filesystem::path(cfg.out_dir) / "verify.json", j.dump(2) + "\n");
    return all_pass ? 0 : 1;
}

int cmd_level(const qlm::RunConfig& cfg) {
    const qlm::ScalarField fld = qlm::instantiate(cfg.family, qlm::grid_spec(cfg));
    std::vector<qlm::MassRow> rows;
    if (cfg.levels.empty()) {
        rows = qlm::mass_table(fld, cfg.ladder);
    } else {
        for (double h : cfg.levels) {
            if (h < fld.min_value() || h > fld.max_value())
                throw qlm::ConfigError("level " + num(h) + " lies outside the height range [" +
                                       num(fld.min_value()) + ", " + num(fld.max_value()) + "]");
            qlm::MassRow row;
            row.h = h;
            const auto ls = qlm::extract_level_set(fld, h);
            row.area = ls.area();
            row.regular = ls.regular && !ls.empty();
            if (row.regular) {
                row.mass = qlm::brown_york_mass(ls, fld.dim());
                row.flux = qlm::lam_functional(ls, fld.dim());
                row.minkowski_deficit = qlm::minkowski_check(ls, fld.dim()).deficit;
            }
            rows.push_back(row);
        }
    }
    const auto prof = qlm::area_profile(fld, cfg.ladder);
    const std::filesystem::path out(cfg.out_dir);
    qlm::write_text_file(out / "levels.csv", qlm::mass_table_csv(rows));
    qlm::write_text_file(out / "area_profile.csv", qlm::area_profile_csv(prof));
    std::cout << "OK " << rows.size() << " levels, outputs in " << out.string() << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"quasi-local mass diagnostics for graphical data"};
    app.require_subcommand(1);

    std::string config_path;
    int resolution = -1;
    double xi = -1.0;
    std::string out_dir;
    int dim = -1;
    std::string family;

    for (const char* name : {"analyze", "sequence", "verify", "level"}) {
        auto* sub = app.add_subcommand(name);
        sub->add_option("--config", config_path, "JSON configuration file")->required();
        sub->add_option("--resolution", resolution, "override grid resolution");
        sub->add_option("--xi", xi, "override the threshold parameter");
        sub->add_option("--out", out_dir, "override the output directory");
        sub->add_option("--dim", dim, "override the ambient dimension");
        sub->add_option("--family", family, "override the family kind");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        qlm::RunConfig cfg = qlm::load_config(config_path);
        if (resolution > 0) cfg.resolution = resolution;
        if (xi > 0.0) cfg.xi = xi;
        if (!out_dir.empty()) cfg.out_dir = out_dir;
        if (dim > 0) cfg.family.n = dim;
        if (!family.empty()) cfg.family.kind = qlm::parse_family_kind(family);
        if (cfg.resolution < 8) throw qlm::ConfigError("grid resolution must be at least 8");
        if (!(cfg.xi >= 1.0)) throw qlm::ConfigError("xi must be >= 1");

        const std::string sub = app.get_subcommands().front()->get_name();
        // Sweep elements are validated per parameter inside `sequence`; the base
        // spec alone need not be instantiable there.
        if (sub != "sequence") {
            try {
                cfg.family.check();
            } catch (const std::exception& e) {
                throw qlm::ConfigError(e.what());
            }
        }
        if (sub == "analyze") return cmd_analyze(cfg);
        if (sub == "sequence") return cmd_sequence(cfg);
        if (sub == "verify") return cmd_verify(cfg);
        return cmd_level(cfg);
    } catch (const qlm::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
