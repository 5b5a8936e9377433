#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "scatran/cases.hpp"
#include "scatran/flow.hpp"
#include "scatran/timestep.hpp"
#include "scatran/transport.hpp"

namespace scatran {

/// Disturbance protocol: a seeded random lattice is sampled at fine cell
/// centers and added to T* at t_inject, scaled by the amplitude. The lattice
/// is a fixed function of space, so different grids (and different amplitudes
/// rescaling the same seed) receive the same disturbance field.
struct DisturbanceSpec {
    double t_inject = 11.0;
    double amplitude = 0.02; // T_ran
    std::uint64_t seed = 2024;
    int lattice_nx = 64;
    int lattice_nz = 64;
    std::vector<double> lattice; // loaded or generated; row-major [nz][nx]
};

inline std::vector<double> make_noise_lattice(std::uint64_t seed, int nx, int nz) {
    std::vector<double> lat(static_cast<std::size_t>(nx) * nz);
    for (int b = 0; b < nz; ++b)
        for (int a = 0; a < nx; ++a) {
            // splitmix64 counter-based generator, uniform in [0, 1)
            std::uint64_t c = static_cast<std::uint64_t>(b) * static_cast<std::uint64_t>(nx) +
                              static_cast<std::uint64_t>(a);
            std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (c + 1);
            z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
            z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
            z = z ^ (z >> 31);
            lat[static_cast<std::size_t>(b) * nx + a] = static_cast<double>(z >> 11) * 0x1.0p-53;
        }
    return lat;
}

struct BuoyancyConfig {
    int nx = 128;
    int nz = 128;
    double lx = 5.0;
    double lz = 5.0;
    double delta_z = 3.0;
    int refine = 2;
    SchemeVariant variant = SchemeVariant::loc();
    double reynolds = 100.0;
    double schmidt = 50.0;
    double prandtl = 6.0;
    double richardson = 1.0;
    double phi_surface = 1.0; // nondimensional top value of the gas scalar
    BoundaryKind temp_top = BoundaryKind::dirichlet(0.0);
    BoundaryKind temp_bottom = BoundaryKind::neumann();
    BoundaryKind phi_top = BoundaryKind::dirichlet(1.0);
    BoundaryKind phi_bottom = BoundaryKind::neumann();
    StepControl step;
    double t_end = 45.0;
    DisturbanceSpec disturbance;
    double series_interval = 0.05;
    double z_arrival = 4.0;          // depth the falling plume must reach
    double arrival_threshold = 0.5;  // T* level set marking the front
    double cg_tol = 1e-10;
    int cg_max_iter = 0;
};

struct SeriesSample {
    double t = 0.0;
    double total_phi = 0.0;
    double total_temp = 0.0;
    double max_u = 0.0;
    double max_w = 0.0;
    double div_norm = 0.0; // max divergence / (velocity scale / min spacing)
    int cg_iters = 0;
    double phi_min = 0.0, phi_max = 0.0;
    double temp_min = 0.0, temp_max = 0.0;
    double z_front = 0.0; // lowest z with T* <= threshold
};

/// First time the tracked front (lowest z with T* at or below the threshold
/// level set) crosses z_target, linearly interpolated between samples.
/// Returns NaN while the front has not arrived.
inline double plume_arrival_time(const std::vector<SeriesSample>& series, double z_target) {
    for (std::size_t j = 0; j < series.size(); ++j) {
        if (series[j].z_front <= z_target) {
            if (j == 0 || !(series[j - 1].z_front > z_target)) return series[j].t;
            const auto& a = series[j - 1];
            const auto& b = series[j];
            const double f = (a.z_front - z_target) / (a.z_front - b.z_front);
            return a.t + f * (b.t - a.t);
        }
    }
    return std::numeric_limits<double>::quiet_NaN();
}

/// The unstably stratified 5L x 5L case: temperature-driven Boussinesq
/// convection on the base grid, T* and phi* advanced on the fine grid.
/// Momentum advances first; scalars see the midpoint average of the projected
/// velocities, frozen over the step.
class BuoyancySim {
  public:
    explicit BuoyancySim(const BuoyancyConfig& cfg)
        : cfg_(cfg),
          grid_{build_uniform_mesh(cfg.nx, 0.0, cfg.lx, GhostRule::Periodic, GhostRule::Periodic),
                build_stretched_mesh(StretchSpec{cfg.delta_z, cfg.nz, 0.0, cfg.lz, Clustering::toward_end})},
          dual_(refine_dual(grid_, cfg.refine)),
          flow_(grid_, FlowOptions{cfg.reynolds, cfg.richardson, cfg.cg_tol, cfg.cg_max_iter}),
          transport_(dual_, make_specs(cfg), cfg.variant), t_base_(cfg.nx, cfg.nz),
          u_old_(cfg.nx, cfg.nz, Location::XFace), w_old_(cfg.nx, cfg.nz + 1, Location::ZFace) {
        cfg_.step.validate();
        if (cfg_.disturbance.lattice.empty())
            cfg_.disturbance.lattice = make_noise_lattice(
                cfg_.disturbance.seed, cfg_.disturbance.lattice_nx, cfg_.disturbance.lattice_nz);
        Field& temp = transport_.scalar(0);
        for (int k = 0; k < transport_.fine_nz(); ++k)
            for (int i = 0; i < transport_.fine_nx(); ++i) temp(i, k) = 1.0;
        // phi starts at the bulk value 0
        record_sample();
    }

    const BuoyancyConfig& config() const { return cfg_; }
    const DualMesh& dual() const { return dual_; }
    FlowSolver& flow() { return flow_; }
    ScalarTransport& transport() { return transport_; }
    Field& temperature() { return transport_.scalar(0); }
    Field& concentration() { return transport_.scalar(1); }
    double time() const { return t_; }
    long steps() const { return steps_; }
    bool injected() const { return injected_; }
    const std::vector<SeriesSample>& series() const { return series_; }
    double arrival_time() const { return arrival_time_; }
    double phi_overshoot() const { return run_phi_max_ - 1.0; }
    double run_phi_min() const { return run_phi_min_; }
    double run_phi_max() const { return run_phi_max_; }
    /// Restart the per-step phi* bound tracking (e.g. after the startup
    /// transient of the discontinuous initial surface value has decayed).
    void reset_phi_bounds() {
        auto [lo, hi] = transport_.scalar(1).minmax();
        run_phi_min_ = lo;
        run_phi_max_ = hi;
    }

    std::function<void(BuoyancySim&, const SeriesSample&)> on_sample;

    void advance_to(double target) {
        target = std::min(target, cfg_.t_end);
        const double eps = 1e-12;
        while (t_ < target - eps) {
            const double dt_auto = stable_dt();
            double dt = dt_auto;
            if (!injected_ && t_ + dt > cfg_.disturbance.t_inject - eps)
                dt = std::min(dt, cfg_.disturbance.t_inject - t_);
            const double next_series = (std::floor(t_ / cfg_.series_interval + 1e-9) + 1.0) *
                                       cfg_.series_interval;
            dt = std::min(dt, next_series - t_);
            dt = std::min(dt, target - t_);
            if (dt <= 0.0) break;

            step(dt);
            t_ += dt;
            ++steps_;

            if (!injected_ && t_ >= cfg_.disturbance.t_inject - eps) inject_disturbance();
            if (std::abs(t_ / cfg_.series_interval - std::round(t_ / cfg_.series_interval)) < 1e-9 ||
                t_ >= target - eps)
                record_sample();
        }
    }

    void run() { advance_to(cfg_.t_end); }

    /// phi* along the fine row nearest z (returns the row's actual z).
    std::vector<double> phi_profile(double z, double* z_actual = nullptr) const {
        const Field& phi = transport_.scalar(1);
        const int k = nearest_fine_row(z);
        if (z_actual != nullptr) *z_actual = dual_.fine.z.center(k);
        std::vector<double> out(static_cast<std::size_t>(transport_.fine_nx()));
        for (int i = 0; i < transport_.fine_nx(); ++i) out[static_cast<std::size_t>(i)] = phi(i, k);
        return out;
    }

    /// w at base x-centers, linearly interpolated in z between the two faces
    /// bracketing the requested height.
    std::vector<double> w_profile(double z) const {
        const Mesh1D& mz = grid_.z;
        int k = 0;
        while (k + 1 < cfg_.nz && mz.face(k + 1) <= z) ++k;
        const double theta = (z - mz.face(k)) / (mz.face(k + 1) - mz.face(k));
        std::vector<double> out(static_cast<std::size_t>(cfg_.nx));
        const Field& w = flow_.w();
        for (int i = 0; i < cfg_.nx; ++i)
            out[static_cast<std::size_t>(i)] = (1.0 - theta) * w(i, k) + theta * w(i, k + 1);
        return out;
    }

    std::vector<double> base_x_centers() const {
        std::vector<double> out(static_cast<std::size_t>(cfg_.nx));
        for (int i = 0; i < cfg_.nx; ++i) out[static_cast<std::size_t>(i)] = grid_.x.center(i);
        return out;
    }

    double noise_at(double x, double z) const {
        const auto& d = cfg_.disturbance;
        int a = static_cast<int>(x / (cfg_.lx / d.lattice_nx));
        int b = static_cast<int>(z / (cfg_.lz / d.lattice_nz));
        a = std::min(std::max(a, 0), d.lattice_nx - 1);
        b = std::min(std::max(b, 0), d.lattice_nz - 1);
        return d.lattice[static_cast<std::size_t>(b) * d.lattice_nx + a];
    }

  private:
    static std::vector<ScalarSpec> make_specs(const BuoyancyConfig& cfg) {
        ScalarSpec temp;
        temp.name = "T";
        temp.diffusivity = 1.0 / (cfg.reynolds * cfg.prandtl);
        temp.bcs = {BoundaryKind::periodic(), BoundaryKind::periodic(), cfg.temp_bottom, cfg.temp_top};
        temp.couples_to_buoyancy = true;
        ScalarSpec phi;
        phi.name = "phi";
        phi.diffusivity = 1.0 / (cfg.reynolds * cfg.schmidt);
        phi.bcs = {BoundaryKind::periodic(), BoundaryKind::periodic(), cfg.phi_bottom, cfg.phi_top};
        return {temp, phi};
    }

    double stable_dt() const {
        const double d_scalar = std::max(1.0 / (cfg_.reynolds * cfg_.prandtl),
                                         1.0 / (cfg_.reynolds * cfg_.schmidt));
        return select_dt(cfg_.step, flow_.max_abs_u(), flow_.max_abs_w(),
                         dual_.fine.x.min_spacing(), dual_.fine.z.min_spacing(),
                         std::min(grid_.x.min_spacing(), grid_.z.min_spacing()),
                         1.0 / cfg_.reynolds, d_scalar);
    }

    void step(double dt) {
        transport_.restrict_to_base(transport_.scalar(0), t_base_);
        u_old_ = flow_.u();
        w_old_ = flow_.w();
        last_stats_ = flow_.step(dt, dt_prev_, &t_base_);
        dt_prev_ = dt;
        // scalars see the midpoint velocities, frozen for the step
        Field& u = flow_.u();
        Field& w = flow_.w();
        for (int k = 0; k < cfg_.nz; ++k)
            for (int i = 0; i < cfg_.nx; ++i)
                u_old_(i, k) = 0.5 * (u_old_(i, k) + u(i, k));
        for (int k = 0; k <= cfg_.nz; ++k)
            for (int i = 0; i < cfg_.nx; ++i)
                w_old_(i, k) = 0.5 * (w_old_(i, k) + w(i, k));
        transport_.interpolate_velocity(u_old_, w_old_);
        transport_.advance(dt);
        auto [pmin, pmax] = transport_.scalar(1).minmax();
        run_phi_min_ = std::min(run_phi_min_, pmin);
        run_phi_max_ = std::max(run_phi_max_, pmax);
    }

    void inject_disturbance() {
        Field& temp = transport_.scalar(0);
        const double amp = cfg_.disturbance.amplitude;
        for (int k = 0; k < transport_.fine_nz(); ++k)
            for (int i = 0; i < transport_.fine_nx(); ++i)
                temp(i, k) += amp * noise_at(dual_.fine.x.center(i), dual_.fine.z.center(k));
        injected_ = true;
    }

    int nearest_fine_row(double z) const {
        int best = 0;
        double dist = std::numeric_limits<double>::infinity();
        for (int k = 0; k < transport_.fine_nz(); ++k) {
            const double d = std::abs(dual_.fine.z.center(k) - z);
            if (d < dist) {
                dist = d;
                best = k;
            }
        }
        return best;
    }

    void record_sample() {
        SeriesSample s;
        s.t = t_;
        s.total_temp = transport_.total(transport_.scalar(0));
        s.total_phi = transport_.total(transport_.scalar(1));
        s.max_u = flow_.max_abs_u();
        s.max_w = flow_.max_abs_w();
        const double uscale = std::max({1.0, s.max_u, s.max_w});
        const double dmin = std::min(grid_.x.min_spacing(), grid_.z.min_spacing());
        s.div_norm = flow_.max_divergence() / (uscale / dmin);
        s.cg_iters = last_stats_.cg_iterations;
        auto [tmin, tmax] = transport_.scalar(0).minmax();
        auto [pmin, pmax] = transport_.scalar(1).minmax();
        s.temp_min = tmin;
        s.temp_max = tmax;
        s.phi_min = pmin;
        s.phi_max = pmax;
        s.z_front = front_depth();
        series_.push_back(s);
        if (std::isnan(arrival_time_)) arrival_time_ = plume_arrival_time(series_, cfg_.z_arrival);
        if (on_sample) on_sample(*this, s);
    }

    double front_depth() const {
        const Field& temp = transport_.scalar(0);
        for (int k = 0; k < transport_.fine_nz(); ++k) {
            const double* r = temp.row(k);
            for (int i = 0; i < transport_.fine_nx(); ++i)
                if (r[i] <= cfg_.arrival_threshold) return dual_.fine.z.center(k);
        }
        return std::numeric_limits<double>::infinity();
    }

    BuoyancyConfig cfg_;
    StaggeredGrid2D grid_;
    DualMesh dual_;
    FlowSolver flow_;
    ScalarTransport transport_;
    Field t_base_, u_old_, w_old_;
    FlowStepStats last_stats_;
    double t_ = 0.0;
    double dt_prev_ = 0.0;
    long steps_ = 0;
    bool injected_ = false;
    std::vector<SeriesSample> series_;
    double arrival_time_ = std::numeric_limits<double>::quiet_NaN();
    double run_phi_min_ = 0.0, run_phi_max_ = 0.0;
};

} // namespace scatran
