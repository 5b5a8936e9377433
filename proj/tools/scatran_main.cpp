// Command-line front end: case execution, convergence sweeps, scheme
// comparisons and table reproduction. See README for usage.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "scatran/buoyancy.hpp"
#include "scatran/cases.hpp"
#include "scatran/config.hpp"
#include "scatran/io.hpp"

using namespace scatran;

namespace {

struct CliOverrides {
    std::string config_path;
    std::string out_dir;
    std::string case_id;
    std::string variant;
    int nx = 0, nz = 0, refine = 0;
    double end_time = 0.0;
    std::uint64_t seed = 0;
    bool has_seed = false;
    bool paper_scale = false;
    bool dump_mesh = false;
};

void add_common(CLI::App* cmd, CliOverrides& o) {
    cmd->add_option("--config", o.config_path, "JSON configuration file");
    cmd->add_option("--out", o.out_dir, "output directory (default $SCATRAN_OUT or ./out)");
    cmd->add_option("--case", o.case_id, "case id: conv1d | diff1d | blob | buoyancy");
    cmd->add_option("--variant", o.variant, "scheme: weno5-loc | weno5-js[23] | central5");
    cmd->add_option("--nx", o.nx, "base cells in x");
    cmd->add_option("--nz", o.nz, "base cells in z");
    cmd->add_option("--R", o.refine, "scalar subgrid refinement factor");
    cmd->add_option("--end-time", o.end_time, "simulation end time");
    cmd->add_flag("--paper-scale", o.paper_scale, "full-size buoyancy preset (400x256, Sc=500, R=3)");
    cmd->add_flag("--dump-mesh", o.dump_mesh, "also write mesh CSV dumps");
    auto* s = cmd->add_option("--seed", o.seed, "disturbance seed");
    s->each([&o](const std::string&) { o.has_seed = true; });
}

CaseConfig resolve_config(const CliOverrides& o) {
    CaseConfig cfg;
    if (!o.config_path.empty()) {
        cfg = parse_config(o.config_path);
    } else {
        nlohmann::json j = nlohmann::json::object();
        if (!o.case_id.empty()) j["case"] = o.case_id;
        cfg = config_from_json(j);
    }
    if (!o.case_id.empty()) cfg.case_id = o.case_id;
    if (o.paper_scale) {
        cfg.case_id = "buoyancy";
        cfg.nx = 400;
        cfg.nz = 256;
        cfg.refine = 3;
        cfg.schmidt = 500.0;
        cfg.delta = 3.0;
    }
    if (!o.variant.empty()) cfg.variant = o.variant;
    if (o.nx > 0) cfg.nx = o.nx;
    if (o.nz > 0) cfg.nz = o.nz;
    if (o.refine > 0) cfg.refine = o.refine;
    if (o.end_time > 0.0) cfg.end_time = o.end_time;
    if (o.has_seed) cfg.seed = o.seed;
    cfg.validate();
    return cfg;
}

std::string output_root(const CliOverrides& o) {
    if (!o.out_dir.empty()) return o.out_dir;
    if (const char* env = std::getenv("SCATRAN_OUT")) return env;
    return "out";
}

double wall_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// --- run ------------------------------------------------------------------

int run_conv1d_single(const CaseConfig& cfg, RunManifest& man) {
    Conv1DConfig c;
    c.variant = cfg.scheme();
    c.delta = cfg.delta;
    c.ns = {cfg.nx};
    auto rep = case_1d_convection(c);
    std::printf("conv1d %s N=%d: L1 = %.6e\n", cfg.variant.c_str(), cfg.nx, rep.rows[0].l1);
    man.emit("run.csv", report_csv(rep));
    return 0;
}

int run_diff1d_single(const CaseConfig& cfg, RunManifest& man) {
    Diff1DConfig c;
    c.delta = cfg.delta;
    c.reynolds = cfg.reynolds;
    c.schmidt = cfg.schmidt;
    c.ns = {cfg.nx};
    auto rep = case_1d_diffusion(c);
    std::printf("diff1d delta=%g N=%d: L1 = %.6e\n", cfg.delta, cfg.nx, rep.rows[0].l1);
    man.emit("run.csv", report_csv(rep));
    return 0;
}

int run_blob_single(const CaseConfig& cfg, RunManifest& man) {
    BlobConfig c;
    c.n = cfg.nx;
    c.refine = cfg.refine;
    c.variant = cfg.scheme();
    auto r = case_2d_sheared_blob(c);
    std::printf("blob %dx%d R=%d: final-time L1 = %.6e (%ld steps)\n", cfg.nx, cfg.nx, cfg.refine,
                r.l1, r.steps);
    auto grid = StaggeredGrid2D{
        build_uniform_mesh(cfg.nx, 0.0, 5.0, GhostRule::Periodic, GhostRule::Periodic),
        build_uniform_mesh(cfg.nx, 0.0, 5.0)};
    auto dual = refine_dual(grid, cfg.refine);
    std::vector<double> xs, zs;
    for (int i = 0; i < dual.fine.nx(); ++i) xs.push_back(dual.fine.x.center(i));
    for (int k = 0; k < dual.fine.nz(); ++k) zs.push_back(dual.fine.z.center(k));
    man.emit("blob_final.vtk", vtk_rectilinear("sheared blob, t=2", xs, zs, {{"phi", &r.phi}}));
    man.emit("blob_initial.vtk",
             vtk_rectilinear("sheared blob, t=0", xs, zs, {{"phi", &r.phi_initial}}));
    std::vector<std::vector<double>> row{{static_cast<double>(cfg.nx), r.l1}};
    man.emit("run.csv", csv_table({"n", "l1_error"}, row));
    return 0;
}

std::string series_csv(const BuoyancySim& sim) {
    // scales: L = 1 cm, U = 1 cm/s, theta = 1 s
    std::string s = "# nondimensional units: L=1cm U=1cm/s theta=1s; T*=(T-T_s)/(T_B0-T_s), "
                    "phi*=(phi-phi_B0)/(phi_s-phi_B0)\n";
    s += "t,total_phi,total_T,max_u,max_w,div_norm,cg_iters,phi_min,phi_max,T_min,T_max,z_front\n";
    for (const auto& r : sim.series()) {
        s += format_double(r.t) + ',' + format_double(r.total_phi) + ',' +
             format_double(r.total_temp) + ',' + format_double(r.max_u) + ',' +
             format_double(r.max_w) + ',' + format_double(r.div_norm) + ',' +
             std::to_string(r.cg_iters) + ',' + format_double(r.phi_min) + ',' +
             format_double(r.phi_max) + ',' + format_double(r.temp_min) + ',' +
             format_double(r.temp_max) + ',' + format_double(r.z_front) + '\n';
    }
    return s;
}

void write_profiles(const CaseConfig& cfg, BuoyancySim& sim, RunManifest& man,
                    const std::string& stem) {
    auto profs = cfg.profiles;
    if (profs.empty()) profs = {{"z", 4.5}};
    for (const auto& [axis, coord] : profs) {
        if (axis == "z") {
            double z_actual = 0.0;
            auto vals = sim.phi_profile(coord, &z_actual);
            std::string s = "# phi* profile along x at z=" + format_double(z_actual) + " t=" +
                            format_double(sim.time()) + "\nx,phi\n";
            for (int i = 0; i < sim.transport().fine_nx(); ++i)
                s += format_double(sim.dual().fine.x.center(i)) + ',' +
                     format_double(vals[static_cast<std::size_t>(i)]) + '\n';
            man.emit(stem + "_z" + format_double(coord) + ".csv", s);
        } else {
            int best = 0;
            double dist = 1e300;
            for (int i = 0; i < sim.transport().fine_nx(); ++i) {
                const double d = std::abs(sim.dual().fine.x.center(i) - coord);
                if (d < dist) {
                    dist = d;
                    best = i;
                }
            }
            std::string s = "# phi* profile along z at x=" +
                            format_double(sim.dual().fine.x.center(best)) + " t=" +
                            format_double(sim.time()) + "\nz,phi\n";
            const Field& phi = sim.concentration();
            for (int k = 0; k < sim.transport().fine_nz(); ++k)
                s += format_double(sim.dual().fine.z.center(k)) + ',' + format_double(phi(best, k)) +
                     '\n';
            man.emit(stem + "_x" + format_double(coord) + ".csv", s);
        }
    }
}

void write_snapshot(BuoyancySim& sim, RunManifest& man, int index) {
    std::vector<double> xs, zs;
    for (int i = 0; i < sim.transport().fine_nx(); ++i) xs.push_back(sim.dual().fine.x.center(i));
    for (int k = 0; k < sim.transport().fine_nz(); ++k) zs.push_back(sim.dual().fine.z.center(k));
    char name[64];
    std::snprintf(name, sizeof(name), "scalars_%04d.vtk", index);
    man.emit(name, vtk_rectilinear("fine-grid scalars t=" + format_double(sim.time()), xs, zs,
                                   {{"T", &sim.temperature()}, {"phi", &sim.concentration()}}));

    const int nx = sim.flow().nx(), nz = sim.flow().nz();
    Field uc(nx, nz), wc(nx, nz), div(nx, nz);
    const Field& u = sim.flow().u();
    const Field& w = sim.flow().w();
    for (int k = 0; k < nz; ++k)
        for (int i = 0; i < nx; ++i) {
            const double ur = (i + 1 < nx) ? u(i + 1, k) : u(0, k);
            uc(i, k) = 0.5 * (u(i, k) + ur);
            wc(i, k) = 0.5 * (w(i, k) + w(i, k + 1));
        }
    sim.flow().divergence(u, w, div);
    std::vector<double> xb, zb;
    for (int i = 0; i < nx; ++i) xb.push_back(sim.dual().base.x.center(i));
    for (int k = 0; k < nz; ++k) zb.push_back(sim.dual().base.z.center(k));
    std::snprintf(name, sizeof(name), "flow_%04d.vtk", index);
    man.emit(name, vtk_rectilinear("base-grid flow t=" + format_double(sim.time()), xb, zb,
                                   {{"u", &uc}, {"w", &wc}, {"p", &sim.flow().p()}, {"div", &div}}));
}

int run_buoyancy(const CaseConfig& cfg, RunManifest& man, long& steps) {
    BuoyancyConfig b = cfg.buoyancy();
    if (!cfg.disturbance_file.empty()) {
        int lnx = 0, lnz = 0;
        b.disturbance.lattice = load_lattice_csv(cfg.disturbance_file, lnx, lnz);
        b.disturbance.lattice_nx = lnx;
        b.disturbance.lattice_nz = lnz;
    }
    BuoyancySim sim(b);
    man.emit("disturbance_field.csv",
             lattice_csv(sim.config().disturbance.lattice, sim.config().disturbance.lattice_nx,
                         sim.config().disturbance.lattice_nz));

    int snap_index = 0;
    double next_snap = cfg.snapshot_interval > 0.0 ? 0.0 : -1.0;
    sim.on_sample = [&](BuoyancySim& s, const SeriesSample& smp) {
        if (next_snap >= 0.0 && smp.t >= next_snap - 1e-9) {
            write_snapshot(s, man, snap_index++);
            next_snap += cfg.snapshot_interval;
        }
    };
    sim.run();
    steps = sim.steps();

    man.emit("series.csv", series_csv(sim));
    write_profiles(cfg, sim, man, "profile");
    if (std::isnan(sim.arrival_time()))
        std::printf("buoyancy: plume did not reach z=%g by t=%g (not reached)\n", cfg.arrival_z,
                    cfg.end_time);
    else
        std::printf("buoyancy: plume reached z=%g at t=%.3f\n", cfg.arrival_z, sim.arrival_time());
    std::printf("steps=%ld  total_phi=%.6e  total_T=%.6f  phi* in [%.3e, 1%+.3e]\n", sim.steps(),
                sim.series().back().total_phi, sim.series().back().total_temp, sim.run_phi_min(),
                sim.run_phi_max() - 1.0);
    return 0;
}

int cmd_run(const CliOverrides& o) {
    CaseConfig cfg = resolve_config(o);
    const auto t0 = std::chrono::steady_clock::now();
    RunManifest man(output_root(o) + "/" + cfg.case_id);
    man.set_config_echo(config_to_json(cfg).dump(2));
    int rc = 0;
    long steps = 0;
    if (cfg.case_id == "conv1d") rc = run_conv1d_single(cfg, man);
    else if (cfg.case_id == "diff1d") rc = run_diff1d_single(cfg, man);
    else if (cfg.case_id == "blob") rc = run_blob_single(cfg, man);
    else rc = run_buoyancy(cfg, man, steps);
    if (o.dump_mesh) {
        StaggeredGrid2D g{
            build_uniform_mesh(cfg.nx, 0.0, cfg.lx, GhostRule::Periodic, GhostRule::Periodic),
            cfg.delta > 0.0
                ? build_stretched_mesh(StretchSpec{cfg.delta, cfg.nz, 0.0, cfg.lz, Clustering::toward_end})
                : build_uniform_mesh(cfg.nz, 0.0, cfg.lz)};
        man.emit("mesh_x.csv", mesh_csv(g.x));
        man.emit("mesh_z.csv", mesh_csv(g.z));
    }
    man.set_accounting(wall_since(t0), steps);
    man.write();
    std::printf("artifacts in %s\n", man.dir().c_str());
    return rc;
}

// --- converge ---------------------------------------------------------------

int cmd_converge(const CliOverrides& o) {
    CaseConfig cfg = resolve_config(o);
    const auto t0 = std::chrono::steady_clock::now();
    RunManifest man(output_root(o) + "/converge-" + cfg.case_id + "-" + cfg.variant);
    man.set_config_echo(config_to_json(cfg).dump(2));
    ConvergenceReport rep;
    if (cfg.case_id == "conv1d") {
        Conv1DConfig c;
        c.variant = cfg.scheme();
        c.delta = cfg.delta;
        c.ns = cfg.ns;
        rep = case_1d_convection(c);
    } else if (cfg.case_id == "diff1d") {
        Diff1DConfig c;
        c.delta = cfg.delta;
        c.reynolds = cfg.reynolds;
        c.schmidt = cfg.schmidt;
        c.ns = cfg.ns;
        rep = case_1d_diffusion(c);
    } else if (cfg.case_id == "blob") {
        std::vector<int> ns = cfg.ns;
        if (!ns.empty() && ns.front() == 10) ns = {40, 80, 160, 320}; // blob's own default sweep
        rep = blob_convergence(ns, cfg.scheme());
    } else {
        throw ConfigError("converge supports conv1d, diff1d and blob");
    }
    std::fputs(report_table(rep).c_str(), stdout);
    man.emit("report.csv", report_csv(rep));
    man.emit("report.txt", report_table(rep));
    man.set_accounting(wall_since(t0), 0);
    man.write();
    return 0;
}

// --- compare ----------------------------------------------------------------

int cmd_compare(const CliOverrides& o, const std::string& variants_arg, double profile_z) {
    CaseConfig cfg = resolve_config(o);
    if (cfg.case_id != "buoyancy")
        throw ConfigError("compare runs the buoyancy case; use converge for the 1D/blob sweeps");
    std::vector<std::string> variants;
    std::string cur;
    for (char ch : variants_arg) {
        if (ch == ',') {
            if (!cur.empty()) variants.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    if (!cur.empty()) variants.push_back(cur);
    if (variants.empty()) throw ConfigError("--variants needs a comma-separated list");

    const auto t0 = std::chrono::steady_clock::now();
    RunManifest man(output_root(o) + "/compare-buoyancy");
    man.set_config_echo(config_to_json(cfg).dump(2));

    std::vector<std::vector<double>> profiles;
    std::vector<double> xs;
    std::string overs = "variant,phi_min,phi_max,overshoot\n";
    double z_actual = 0.0;
    for (const auto& v : variants) {
        CaseConfig one = cfg;
        one.variant = v;
        one.validate();
        BuoyancySim sim(one.buoyancy());
        sim.run();
        profiles.push_back(sim.phi_profile(profile_z, &z_actual));
        if (xs.empty())
            for (int i = 0; i < sim.transport().fine_nx(); ++i)
                xs.push_back(sim.dual().fine.x.center(i));
        overs += v + ',' + format_double(sim.run_phi_min()) + ',' +
                 format_double(sim.run_phi_max()) + ',' +
                 format_double(std::max(0.0, sim.run_phi_max() - 1.0)) + '\n';
        std::printf("%-10s  phi* in [%.3e, 1%+.3e]\n", v.c_str(), sim.run_phi_min(),
                    sim.run_phi_max() - 1.0);
    }
    std::string s = "# phi* profiles at z=" + format_double(z_actual) + " t=" +
                    format_double(cfg.end_time) + "\nx";
    for (const auto& v : variants) s += "," + v;
    s += '\n';
    for (std::size_t i = 0; i < xs.size(); ++i) {
        s += format_double(xs[i]);
        for (const auto& p : profiles) s += ',' + format_double(p[i]);
        s += '\n';
    }
    man.emit("profiles.csv", s);
    man.emit("overshoot.csv", overs);
    man.set_accounting(wall_since(t0), 0);
    man.write();
    return 0;
}

// --- tables -----------------------------------------------------------------

int cmd_tables(const CliOverrides& o, int blob_max) {
    const auto t0 = std::chrono::steady_clock::now();
    RunManifest man(output_root(o) + "/tables");
    auto put = [&](const ConvergenceReport& rep, int table) {
        std::printf("--- table %d ---\n%s", table, report_table(rep).c_str());
        const std::string stem = "table" + std::to_string(table) + "_" + rep.variant_id + "_d" +
                                 format_double(rep.delta);
        man.emit(stem + ".csv", report_csv(rep));
        man.emit(stem + ".txt", report_table(rep));
    };

    for (auto v : {SchemeVariant::loc(1e-6), SchemeVariant::js(1e-6, 3), SchemeVariant::central5()}) {
        Conv1DConfig c;
        c.variant = v;
        put(case_1d_convection(c), 1);
    }
    {
        Conv1DConfig c;
        c.variant = SchemeVariant::loc(1.0);
        put(case_1d_convection(c), 2);
    }
    for (double d : {1.0, 3.0}) {
        Conv1DConfig c;
        c.variant = SchemeVariant::loc(1e-6);
        c.delta = d;
        put(case_1d_convection(c), 3);
    }
    for (double d : {3.0, 4.5}) {
        Diff1DConfig c;
        c.delta = d;
        put(case_1d_diffusion(c), 4);
    }
    {
        std::vector<int> ns;
        for (int n = 40; n <= blob_max; n *= 2) ns.push_back(n);
        put(blob_convergence(ns, SchemeVariant::loc(1e-6)), 5);
    }
    man.set_accounting(wall_since(t0), 0);
    man.write();
    std::printf("tables in %s\n", man.dir().c_str());
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"structured-grid WENO5 scalar transport and buoyant convection toolkit"};
    app.require_subcommand(1);

    CliOverrides orun, oconv, ocomp, otab;
    auto* run = app.add_subcommand("run", "run a single case and emit its artifacts");
    add_common(run, orun);
    auto* conv = app.add_subcommand("converge", "N-sweep convergence study");
    add_common(conv, oconv);
    auto* comp = app.add_subcommand("compare", "scheme comparison on the buoyancy case");
    add_common(comp, ocomp);
    std::string variants = "central5,weno5-loc,weno5-js2,weno5-js3";
    double profile_z = 4.5;
    comp->add_option("--variants", variants, "comma-separated scheme list");
    comp->add_option("--profile-z", profile_z, "profile height (default 4.5)");
    auto* tab = app.add_subcommand("tables", "reproduce the four 1D tables and the blob table");
    add_common(tab, otab);
    int blob_max = 640;
    tab->add_option("--blob-max", blob_max, "largest blob grid (default 640)");

    CLI11_PARSE(app, argc, argv);
    try {
        if (run->parsed()) return cmd_run(orun);
        if (conv->parsed()) return cmd_converge(oconv);
        if (comp->parsed()) return cmd_compare(ocomp, variants, profile_z);
        if (tab->parsed()) return cmd_tables(otab, blob_max);
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const SolverError& e) {
        std::fprintf(stderr, "solver failure: %s\n", e.what());
        return 3;
    }
    return 0;
}
