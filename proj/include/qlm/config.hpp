#pragma once

#include <fstream>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "qlm/families.hpp"
#include "qlm/field.hpp"

namespace qlm {

/// Everything a run needs; parsed from JSON, then overridden by CLI flags.
struct RunConfig {
    FamilySpec family;
    std::vector<double> sweep;      // parameter ladder for `sequence`
    std::string sweep_parameter = "mass";  // "mass" | "depth"
    std::vector<double> levels;     // explicit heights for `level` (empty = ladder)
    int resolution = 32;
    int ladder = 64;                // interior heights in tables
    double xi = 1.0;
    std::string out_dir = "out";
    std::vector<std::string> invariants;  // empty = all registered
};

/// Malformed configuration. The CLI maps this to exit code 2.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline FamilySpec::Kind parse_family_kind(const std::string& name) {
    static const std::map<std::string, FamilySpec::Kind> table = {
        {"schwarzschild", FamilySpec::Kind::schwarzschild},
        {"bump", FamilySpec::Kind::bump},
        {"gravity_well", FamilySpec::Kind::gravity_well},
        {"constant", FamilySpec::Kind::constant},
    };
    const auto it = table.find(name);
    if (it == table.end()) throw ConfigError("unknown family kind: " + name);
    return it->second;
}

inline const char* family_kind_name(FamilySpec::Kind k) {
    switch (k) {
        case FamilySpec::Kind::schwarzschild: return "schwarzschild";
        case FamilySpec::Kind::bump: return "bump";
        case FamilySpec::Kind::gravity_well: return "gravity_well";
        case FamilySpec::Kind::constant: return "constant";
    }
    return "?";
}

inline RunConfig parse_config(const nlohmann::json& j) {
    RunConfig cfg;
    try {
        if (j.contains("family")) {
            const auto& f = j.at("family");
            cfg.family.kind = parse_family_kind(f.value("kind", "schwarzschild"));
            cfg.family.n = f.value("dim", 3);
            cfg.family.mass = f.value("mass", cfg.family.mass);
            cfg.family.amplitude = f.value("amplitude", cfg.family.amplitude);
            cfg.family.width = f.value("width", cfg.family.width);
            cfg.family.depth = f.value("depth", cfg.family.depth);
            cfg.family.constant = f.value("constant", cfg.family.constant);
            cfg.family.outer_radius = f.value("outer_radius", cfg.family.outer_radius);
            cfg.family.admissible_expected = f.value("admissible_expected", true);
        }
        if (j.contains("grid")) cfg.resolution = j.at("grid").value("resolution", cfg.resolution);
        cfg.ladder = j.value("ladder", cfg.ladder);
        cfg.xi = j.value("xi", cfg.xi);
        cfg.out_dir = j.value("out", cfg.out_dir);
        if (j.contains("sweep")) {
            const auto& s = j.at("sweep");
            if (s.is_array()) {
                cfg.sweep = s.get<std::vector<double>>();
            } else {
                cfg.sweep_parameter = s.value("parameter", cfg.sweep_parameter);
                cfg.sweep = s.at("values").get<std::vector<double>>();
            }
        }
        if (j.contains("levels")) cfg.levels = j.at("levels").get<std::vector<double>>();
        if (j.contains("invariants"))
            cfg.invariants = j.at("invariants").get<std::vector<std::string>>();
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("malformed config: ") + e.what());
    }
    if (cfg.resolution < 8) throw ConfigError("grid.resolution must be at least 8");
    if (cfg.ladder < 4) throw ConfigError("ladder must be at least 4");
    if (!(cfg.xi >= 1.0)) throw ConfigError("xi must be >= 1");
    if (cfg.sweep_parameter != "mass" && cfg.sweep_parameter != "depth")
        throw ConfigError("sweep.parameter must be 'mass' or 'depth'");
    for (double v : cfg.sweep)
        if (!(v > 0.0)) throw ConfigError("sweep values must be positive");
    return cfg;
}

inline RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    return parse_config(j);
}

/// Family spec for one point of the configured sweep.
inline FamilySpec sweep_spec(const RunConfig& cfg, double param) {
    FamilySpec spec = cfg.family;
    if (cfg.sweep_parameter == "mass") {
        spec.mass = param;
    } else {
        spec.depth = param;
        spec.width = cfg.family.width / (param * param);  // wells narrow as they deepen
    }
    return spec;
}

inline GridSpec grid_spec(const RunConfig& cfg) {
    return GridSpec::uniform(cfg.family.n, cfg.resolution);
}

}  // namespace qlm
