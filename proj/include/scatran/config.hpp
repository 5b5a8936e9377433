#pragma once

#include <fstream>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"

#include "scatran/boundary.hpp"
#include "scatran/buoyancy.hpp"
#include "scatran/cases.hpp"
#include "scatran/errors.hpp"
#include "scatran/io.hpp"

namespace scatran {

/// Full description of one benchmark run. Parsed from a versioned JSON
/// document; every field has a case-appropriate default.
struct CaseConfig {
    int schema = 1;
    std::string case_id = "conv1d"; // conv1d | diff1d | blob | buoyancy
    std::string variant = "weno5-loc";
    double epsilon = 1e-6;
    int power = 3;
    double delta = 0.0; // conv1d: mirrored stretching; diff1d/buoyancy presets override
    std::vector<int> ns = {10, 20, 40, 80, 160, 320, 640};

    int nx = 128;
    int nz = 128;
    double lx = 5.0;
    double lz = 5.0;
    int refine = 1;

    double reynolds = 100.0;
    double schmidt = 500.0;
    double prandtl = 6.0;
    double richardson = 0.74;
    double phi_surface = 1.0;
    std::string temp_top = "dirichlet:0";   // buoyancy scalar BCs (z sides)
    std::string temp_bottom = "neumann";
    std::string phi_top = "dirichlet:1";
    std::string phi_bottom = "neumann";

    double cfl = 0.4;
    double dt_cap = 0.0;   // 0 = none
    double fixed_dt = 0.0; // 0 = auto
    double end_time = 45.0;

    double t_inject = 11.0;
    double amplitude = 0.02;
    std::uint64_t seed = 2024;
    int lattice_nx = 64;
    int lattice_nz = 64;
    std::string disturbance_file;

    double series_interval = 0.05;
    double snapshot_interval = 0.0;
    std::vector<std::pair<std::string, double>> profiles; // axis ("x"|"z"), coordinate
    double arrival_z = 4.0;
    double arrival_threshold = 0.5;

    double cg_tol = 1e-10;
    int cg_max_iter = 0;

    SchemeVariant scheme() const {
        SchemeVariant v;
        if (variant == "weno5-loc") v = SchemeVariant::loc(epsilon);
        else if (variant == "weno5-js" || variant == "weno5-js3") v = SchemeVariant::js(epsilon, variant == "weno5-js" ? power : 3);
        else if (variant == "weno5-js2") v = SchemeVariant::js(epsilon, 2);
        else if (variant == "central5") v = SchemeVariant::central5();
        else throw ConfigError("unknown scheme variant '" + variant + "'");
        v.validate();
        return v;
    }

    double diffusivity_phi() const { return 1.0 / (reynolds * schmidt); }
    double diffusivity_temp() const { return 1.0 / (reynolds * prandtl); }

    void validate() const {
        if (schema != 1) throw ConfigError("unsupported config schema " + std::to_string(schema));
        static const std::set<std::string> cases = {"conv1d", "diff1d", "blob", "buoyancy"};
        if (cases.count(case_id) == 0) throw ConfigError("unknown case '" + case_id + "'");
        scheme();
        if (delta < 0.0) throw ConfigError("stretching delta must be >= 0");
        if (reynolds <= 0.0 || schmidt <= 0.0 || prandtl <= 0.0)
            throw ConfigError("Re, Sc and Pr must be positive");
        if (richardson <= 0.0 && case_id == "buoyancy")
            throw ConfigError("Ri must be positive for the buoyancy case");
        if (nx < 4 || nz < 4) throw ConfigError("grid must have at least 4 cells per direction");
        if (refine < 1 || refine > 5) throw ConfigError("R must be in 1..5");
        if (!(cfl > 0.0) || cfl > 1.0) throw ConfigError("cfl must be in (0, 1]");
        if (end_time <= 0.0) throw ConfigError("end_time must be positive");
        for (const auto& bc : {temp_top, temp_bottom, phi_top, phi_bottom}) parse_bc(bc);
        for (const auto& p : profiles)
            if (p.first != "x" && p.first != "z")
                throw ConfigError("profile axis must be 'x' or 'z'");
    }

    static BoundaryKind parse_bc(const std::string& s) {
        if (s == "neumann") return BoundaryKind::neumann();
        if (s == "periodic")
            throw ConfigError("top/bottom scalar sides cannot be periodic in this case family");
        if (s == "free-slip")
            throw ConfigError("free-slip applies to velocity components, not scalars");
        if (s.rfind("dirichlet:", 0) == 0) return BoundaryKind::dirichlet(std::stod(s.substr(10)));
        throw ConfigError("unknown boundary kind '" + s + "' (use neumann or dirichlet:<value>)");
    }

    BuoyancyConfig buoyancy() const {
        BuoyancyConfig b;
        b.nx = nx;
        b.nz = nz;
        b.lx = lx;
        b.lz = lz;
        b.delta_z = delta;
        b.refine = refine;
        b.variant = scheme();
        b.reynolds = reynolds;
        b.schmidt = schmidt;
        b.prandtl = prandtl;
        b.richardson = richardson;
        b.phi_surface = phi_surface;
        b.step.cfl = cfl;
        if (dt_cap > 0.0) b.step.dt_cap = dt_cap;
        if (fixed_dt > 0.0) b.step.fixed_dt = fixed_dt;
        b.t_end = end_time;
        b.temp_top = parse_bc(temp_top);
        b.temp_bottom = parse_bc(temp_bottom);
        b.phi_top = parse_bc(phi_top);
        b.phi_bottom = parse_bc(phi_bottom);
        b.disturbance.t_inject = t_inject;
        b.disturbance.amplitude = amplitude;
        b.disturbance.seed = seed;
        b.disturbance.lattice_nx = lattice_nx;
        b.disturbance.lattice_nz = lattice_nz;
        b.series_interval = series_interval;
        b.z_arrival = arrival_z;
        b.arrival_threshold = arrival_threshold;
        b.cg_tol = cg_tol;
        b.cg_max_iter = cg_max_iter;
        return b;
    }
};

namespace detail_cfg {

template <typename T>
void read(const nlohmann::json& j, const char* key, T& out) {
    if (j.contains(key)) out = j.at(key).get<T>();
}

inline void check_keys(const nlohmann::json& j, const std::set<std::string>& allowed,
                       const std::string& where) {
    std::string unknown;
    for (auto it = j.begin(); it != j.end(); ++it)
        if (allowed.count(it.key()) == 0) unknown += (unknown.empty() ? "" : ", ") + it.key();
    if (!unknown.empty())
        throw ConfigError("unknown config key(s) in " + where + ": " + unknown);
}

} // namespace detail_cfg

inline CaseConfig config_from_json(const nlohmann::json& j) {
    using detail_cfg::read;
    detail_cfg::check_keys(
        j,
        {"schema", "case", "variant", "epsilon", "power", "delta", "ns", "nx", "nz", "lx",
         "lz", "R", "re", "sc", "pr", "ri", "phi_surface", "bcs", "cfl", "dt_cap",
         "fixed_dt", "end_time", "disturbance", "series_interval", "snapshot_interval",
         "profiles", "arrival", "cg"},
        "document root");
    CaseConfig c;
    read(j, "schema", c.schema);
    if (j.contains("case")) c.case_id = j.at("case").get<std::string>();

    // case presets before explicit overrides
    if (c.case_id == "diff1d") {
        c.delta = 3.0;
        c.schmidt = 500.0;
    } else if (c.case_id == "blob") {
        c.nx = c.nz = 160;
        c.end_time = 2.0;
    } else if (c.case_id == "buoyancy") {
        c.delta = 3.0;
        c.schmidt = 50.0;
        c.refine = 2;
        c.epsilon = 1e-6;
    }

    read(j, "variant", c.variant);
    read(j, "epsilon", c.epsilon);
    read(j, "power", c.power);
    read(j, "delta", c.delta);
    read(j, "ns", c.ns);
    read(j, "nx", c.nx);
    read(j, "nz", c.nz);
    read(j, "lx", c.lx);
    read(j, "lz", c.lz);
    read(j, "R", c.refine);
    read(j, "re", c.reynolds);
    read(j, "sc", c.schmidt);
    read(j, "pr", c.prandtl);
    read(j, "ri", c.richardson);
    read(j, "phi_surface", c.phi_surface);
    read(j, "cfl", c.cfl);
    read(j, "dt_cap", c.dt_cap);
    read(j, "fixed_dt", c.fixed_dt);
    read(j, "end_time", c.end_time);
    read(j, "series_interval", c.series_interval);
    read(j, "snapshot_interval", c.snapshot_interval);

    if (j.contains("bcs")) {
        const auto& b = j.at("bcs");
        detail_cfg::check_keys(b, {"temp_top", "temp_bottom", "phi_top", "phi_bottom"}, "bcs");
        read(b, "temp_top", c.temp_top);
        read(b, "temp_bottom", c.temp_bottom);
        read(b, "phi_top", c.phi_top);
        read(b, "phi_bottom", c.phi_bottom);
    }
    if (j.contains("disturbance")) {
        const auto& d = j.at("disturbance");
        detail_cfg::check_keys(d, {"t_inject", "amplitude", "seed", "lattice_nx", "lattice_nz", "file"},
                               "disturbance");
        read(d, "t_inject", c.t_inject);
        read(d, "amplitude", c.amplitude);
        read(d, "seed", c.seed);
        read(d, "lattice_nx", c.lattice_nx);
        read(d, "lattice_nz", c.lattice_nz);
        read(d, "file", c.disturbance_file);
    }
    if (j.contains("arrival")) {
        const auto& a = j.at("arrival");
        detail_cfg::check_keys(a, {"z", "threshold"}, "arrival");
        read(a, "z", c.arrival_z);
        read(a, "threshold", c.arrival_threshold);
    }
    if (j.contains("cg")) {
        const auto& g = j.at("cg");
        detail_cfg::check_keys(g, {"tol", "max_iter"}, "cg");
        read(g, "tol", c.cg_tol);
        read(g, "max_iter", c.cg_max_iter);
    }
    if (j.contains("profiles")) {
        for (const auto& p : j.at("profiles")) {
            detail_cfg::check_keys(p, {"axis", "coord"}, "profiles[]");
            c.profiles.emplace_back(p.at("axis").get<std::string>(), p.at("coord").get<double>());
        }
    }
    // phi top Dirichlet tracks phi_surface unless set explicitly
    if (!j.contains("bcs") || !j.at("bcs").contains("phi_top"))
        c.phi_top = "dirichlet:" + format_double(c.phi_surface);
    c.validate();
    return c;
}

inline nlohmann::json config_to_json(const CaseConfig& c) {
    nlohmann::json j;
    j["schema"] = c.schema;
    j["case"] = c.case_id;
    j["variant"] = c.variant;
    j["epsilon"] = c.epsilon;
    j["power"] = c.power;
    j["delta"] = c.delta;
    j["ns"] = c.ns;
    j["nx"] = c.nx;
    j["nz"] = c.nz;
    j["lx"] = c.lx;
    j["lz"] = c.lz;
    j["R"] = c.refine;
    j["re"] = c.reynolds;
    j["sc"] = c.schmidt;
    j["pr"] = c.prandtl;
    j["ri"] = c.richardson;
    j["phi_surface"] = c.phi_surface;
    j["bcs"] = {{"temp_top", c.temp_top},
                {"temp_bottom", c.temp_bottom},
                {"phi_top", c.phi_top},
                {"phi_bottom", c.phi_bottom}};
    j["cfl"] = c.cfl;
    j["dt_cap"] = c.dt_cap;
    j["fixed_dt"] = c.fixed_dt;
    j["end_time"] = c.end_time;
    j["disturbance"] = {{"t_inject", c.t_inject}, {"amplitude", c.amplitude},
                        {"seed", c.seed},         {"lattice_nx", c.lattice_nx},
                        {"lattice_nz", c.lattice_nz}, {"file", c.disturbance_file}};
    j["series_interval"] = c.series_interval;
    j["snapshot_interval"] = c.snapshot_interval;
    nlohmann::json profs = nlohmann::json::array();
    for (const auto& p : c.profiles) profs.push_back({{"axis", p.first}, {"coord", p.second}});
    j["profiles"] = profs;
    j["arrival"] = {{"z", c.arrival_z}, {"threshold", c.arrival_threshold}};
    j["cg"] = {{"tol", c.cg_tol}, {"max_iter", c.cg_max_iter}};
    return j;
}

inline CaseConfig parse_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("config is not valid JSON (" + path + "): " + e.what());
    }
    if (!j.is_object()) throw ConfigError("config root must be a JSON object: " + path);
    return config_from_json(j);
}

} // namespace scatran
