#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "scatran/boundary.hpp"
#include "scatran/diffusion.hpp"
#include "scatran/errors.hpp"
#include "scatran/field.hpp"
#include "scatran/mesh.hpp"
#include "scatran/reconstruction.hpp"
#include "scatran/timestep.hpp"
#include "scatran/transport.hpp"

namespace scatran {

/// L1 = (1/N) sum |q_i - exact(x_i)| over interior cells.
inline double l1_error(const std::vector<double>& values, const std::vector<double>& exact) {
    double acc = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) acc += std::abs(values[i] - exact[i]);
    return acc / static_cast<double>(values.size());
}

inline double l1_error(const Field& f, const std::function<double(double, double)>& exact,
                       const Mesh1D& mx, const Mesh1D& mz) {
    double acc = 0.0;
    for (int k = 0; k < f.nz(); ++k)
        for (int i = 0; i < f.nx(); ++i) acc += std::abs(f(i, k) - exact(mx.center(i), mz.center(k)));
    return acc / (static_cast<double>(f.nx()) * f.nz());
}

/// log2(e_N / e_2N); 0 error yields the undefined-order sentinel (quiet NaN).
inline double observed_order(double e_coarse, double e_fine) {
    if (!(e_coarse > 0.0) || !(e_fine > 0.0)) return std::numeric_limits<double>::quiet_NaN();
    return std::log2(e_coarse / e_fine);
}

struct ConvergenceRow {
    int n = 0;
    double l1 = 0.0;
    double order = std::numeric_limits<double>::quiet_NaN(); // vs the previous row
};

struct ConvergenceReport {
    std::string case_id;
    std::string variant_id;
    double epsilon = 0.0;
    double delta = 0.0;
    std::vector<ConvergenceRow> rows;

    void push(int n, double l1) {
        ConvergenceRow r;
        r.n = n;
        r.l1 = l1;
        if (!rows.empty()) r.order = observed_order(rows.back().l1, l1);
        rows.push_back(r);
    }
};

inline std::string variant_id(const SchemeVariant& v) {
    switch (v.kind) {
    case WenoKind::LiuOsherChan: return "weno5-loc";
    case WenoKind::JiangShu: return v.power == 2 ? "weno5-js2" : "weno5-js3";
    case WenoKind::UpstreamCentral: return "central5";
    }
    return "?";
}

// ---------------------------------------------------------------------------
// 1D sine-advection convergence case (periodic [0, 2], u = 1, one time unit)
// ---------------------------------------------------------------------------

struct Conv1DConfig {
    SchemeVariant variant = SchemeVariant::loc();
    double delta = 0.0; // 0 = uniform, > 0 = mirrored stretching
    std::vector<int> ns = {10, 20, 40, 80, 160, 320, 640};
    // dt = dt_ref (640/N)^(5/3): small enough that RK3 never masks the
    // fifth-order spatial convergence at N = 640
    double dt_ref = 5e-5;
};

namespace detail1d {

inline void wrap_periodic(std::vector<double>& q, int n) {
    for (int j = 1; j <= 3; ++j) {
        q[static_cast<std::size_t>(3 - j)] = q[static_cast<std::size_t>(n + 3 - j)];
        q[static_cast<std::size_t>(n + 2 + j)] = q[static_cast<std::size_t>(2 + j)];
    }
}

} // namespace detail1d

inline ConvergenceReport case_1d_convection(const Conv1DConfig& cfg) {
    cfg.variant.validate();
    ConvergenceReport rep;
    rep.case_id = cfg.delta > 0.0 ? "conv1d-stretched" : "conv1d";
    rep.variant_id = variant_id(cfg.variant);
    rep.epsilon = cfg.variant.epsilon;
    rep.delta = cfg.delta;

    for (int n : cfg.ns) {
        Mesh1D mesh = cfg.delta > 0.0
                          ? build_stretched_mesh(StretchSpec{cfg.delta, n, 0.0, 2.0, Clustering::midpoint},
                                                 GhostRule::Periodic, GhostRule::Periodic)
                          : build_uniform_mesh(n, 0.0, 2.0, GhostRule::Periodic, GhostRule::Periodic);
        FluxTable tab(mesh);
        std::vector<double> phi(static_cast<std::size_t>(n) + 6, 0.0);
        std::vector<double> s1 = phi, s2 = phi;
        std::vector<double> uf(static_cast<std::size_t>(n) + 1, 1.0);
        std::vector<double> flux(static_cast<std::size_t>(n) + 1, 0.0);
        std::vector<double> rhs(static_cast<std::size_t>(n), 0.0);
        for (int i = 0; i < n; ++i)
            phi[static_cast<std::size_t>(i + 3)] = std::sin(M_PI * mesh.center(i));

        const double dt_target = cfg.dt_ref * std::pow(640.0 / n, 5.0 / 3.0);
        const long steps = std::lround(std::ceil(1.0 / dt_target));
        const double dt = 1.0 / static_cast<double>(steps);

        auto eval = [&](std::vector<double>& state, std::vector<double>& out) {
            detail1d::wrap_periodic(state, n);
            convective_rhs_line(tab, cfg.variant, state.data(), uf.data(), flux.data(), out.data());
        };
        for (long s = 0; s < steps; ++s) {
            eval(phi, rhs);
            for (int i = 0; i < n; ++i)
                s1[static_cast<std::size_t>(i + 3)] =
                    phi[static_cast<std::size_t>(i + 3)] + dt * rhs[static_cast<std::size_t>(i)];
            eval(s1, rhs);
            for (int i = 0; i < n; ++i)
                s2[static_cast<std::size_t>(i + 3)] = 0.75 * phi[static_cast<std::size_t>(i + 3)] +
                                                      0.25 * s1[static_cast<std::size_t>(i + 3)] +
                                                      0.25 * dt * rhs[static_cast<std::size_t>(i)];
            eval(s2, rhs);
            for (int i = 0; i < n; ++i)
                phi[static_cast<std::size_t>(i + 3)] =
                    phi[static_cast<std::size_t>(i + 3)] / 3.0 +
                    2.0 / 3.0 * s2[static_cast<std::size_t>(i + 3)] +
                    2.0 / 3.0 * dt * rhs[static_cast<std::size_t>(i)];
        }

        std::vector<double> numeric(static_cast<std::size_t>(n)), exact(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) {
            numeric[static_cast<std::size_t>(i)] = phi[static_cast<std::size_t>(i + 3)];
            exact[static_cast<std::size_t>(i)] = std::sin(M_PI * (mesh.center(i) - 1.0));
        }
        rep.push(n, l1_error(numeric, exact));
    }
    return rep;
}

// ---------------------------------------------------------------------------
// 1D erf diffusion case on a stretched mesh ([0, 5L], Dirichlet 1 at x = 0)
// ---------------------------------------------------------------------------

struct Diff1DConfig {
    double delta = 3.0;
    std::vector<int> ns = {10, 20, 40, 80, 160, 320, 640};
    double reynolds = 100.0;
    double schmidt = 500.0;
    double t_start = 10.0;
    double duration = 1.0;
    double domain = 5.0;
    double cfl = 0.4;
};

inline ConvergenceReport case_1d_diffusion(const Diff1DConfig& cfg) {
    ConvergenceReport rep;
    rep.case_id = "diff1d";
    rep.variant_id = "central4";
    rep.delta = cfg.delta;
    const double D = 1.0 / (cfg.reynolds * cfg.schmidt);

    for (int n : cfg.ns) {
        Mesh1D mesh = build_stretched_mesh(StretchSpec{cfg.delta, n, 0.0, cfg.domain, Clustering::toward_start});
        DiffusionTable tab = DiffusionTable::for_centers(mesh);
        std::vector<double> phi(static_cast<std::size_t>(n) + 6, 0.0);
        std::vector<double> s1 = phi, s2 = phi;
        std::vector<double> rhs(static_cast<std::size_t>(n), 0.0);

        auto analytic = [&](double x, double t) { return 1.0 - std::erf(x / std::sqrt(4.0 * D * t)); };
        for (int i = 0; i < n; ++i)
            phi[static_cast<std::size_t>(i + 3)] = analytic(mesh.center(i), cfg.t_start);

        auto fill = [&](std::vector<double>& q) {
            for (int j = 1; j <= 3; ++j) {
                // Dirichlet (odd) about phi(0) = 1 on the left, zero-gradient right
                q[static_cast<std::size_t>(3 - j)] = 2.0 - q[static_cast<std::size_t>(2 + j)];
                q[static_cast<std::size_t>(n + 2 + j)] = q[static_cast<std::size_t>(n + 3 - j)];
            }
        };
        auto eval = [&](std::vector<double>& state, std::vector<double>& out) {
            fill(state);
            tab.apply_line(state.data(), out.data());
            for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] *= D;
        };

        const double dx_min = mesh.min_spacing();
        const double dt_target = cfg.cfl * dx_min * dx_min / (4.0 * D);
        const long steps = std::lround(std::ceil(cfg.duration / dt_target));
        const double dt = cfg.duration / static_cast<double>(steps);
        for (long s = 0; s < steps; ++s) {
            eval(phi, rhs);
            for (int i = 0; i < n; ++i)
                s1[static_cast<std::size_t>(i + 3)] =
                    phi[static_cast<std::size_t>(i + 3)] + dt * rhs[static_cast<std::size_t>(i)];
            eval(s1, rhs);
            for (int i = 0; i < n; ++i)
                s2[static_cast<std::size_t>(i + 3)] = 0.75 * phi[static_cast<std::size_t>(i + 3)] +
                                                      0.25 * s1[static_cast<std::size_t>(i + 3)] +
                                                      0.25 * dt * rhs[static_cast<std::size_t>(i)];
            eval(s2, rhs);
            for (int i = 0; i < n; ++i)
                phi[static_cast<std::size_t>(i + 3)] =
                    phi[static_cast<std::size_t>(i + 3)] / 3.0 +
                    2.0 / 3.0 * s2[static_cast<std::size_t>(i + 3)] +
                    2.0 / 3.0 * dt * rhs[static_cast<std::size_t>(i)];
        }

        std::vector<double> numeric(static_cast<std::size_t>(n)), exact(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) {
            numeric[static_cast<std::size_t>(i)] = phi[static_cast<std::size_t>(i + 3)];
            exact[static_cast<std::size_t>(i)] = analytic(mesh.center(i), cfg.t_start + cfg.duration);
        }
        rep.push(n, l1_error(numeric, exact));
    }
    return rep;
}

// ---------------------------------------------------------------------------
// 2D sheared-blob reversal case (5L x 5L, prescribed zero-viscosity shear)
// ---------------------------------------------------------------------------

struct BlobConfig {
    int n = 160; // nx = nz
    int refine = 1;
    SchemeVariant variant = SchemeVariant::loc();
    double cfl = 0.25;
    double t_reverse = 1.0;
    double t_end = 2.0;
};

struct BlobResult {
    double l1 = 0.0;
    long steps = 0;
    Field phi;        // final fine field
    Field phi_initial;
};

inline double blob_initial(double x, double z) {
    const double r = std::sqrt((x - 2.5) * (x - 2.5) + (z - 2.5) * (z - 2.5));
    return r <= 1.0 ? 0.5 * (1.0 + std::cos(M_PI * r)) : 0.0;
}

inline double blob_shear_u(double z) { return 2.0 * std::atan(10.0 * (z - 2.5)) / M_PI; }

inline BlobResult case_2d_sheared_blob(const BlobConfig& cfg) {
    const int n = cfg.n;
    StaggeredGrid2D base{build_uniform_mesh(n, 0.0, 5.0, GhostRule::Periodic, GhostRule::Periodic),
                         build_uniform_mesh(n, 0.0, 5.0)};
    DualMesh dual = refine_dual(base, cfg.refine);

    ScalarSpec spec;
    spec.name = "phi";
    spec.diffusivity = 0.0;
    spec.bcs = {BoundaryKind::periodic(), BoundaryKind::periodic(), BoundaryKind::neumann(),
                BoundaryKind::neumann()};
    ScalarTransport transport(dual, {spec}, cfg.variant);

    Field& phi = transport.scalar(0);
    for (int k = 0; k < transport.fine_nz(); ++k)
        for (int i = 0; i < transport.fine_nx(); ++i)
            phi(i, k) = blob_initial(dual.fine.x.center(i), dual.fine.z.center(k));
    BlobResult out;
    out.phi_initial = phi;

    Field u_base(n, n, Location::XFace);
    Field w_base(n, n + 1, Location::ZFace, 0.0);
    double umax = 0.0;
    for (int k = 0; k < n; ++k) {
        const double uz = blob_shear_u(base.z.center(k));
        umax = std::max(umax, std::abs(uz));
        for (int i = 0; i < n; ++i) u_base(i, k) = uz;
    }
    transport.interpolate_velocity(u_base, w_base);

    const double dx_fine = dual.fine.x.min_spacing();
    double t = 0.0;
    bool reversed = false;
    long steps = 0;
    while (t < cfg.t_end - 1e-13) {
        double dt = cfg.cfl * dx_fine / umax;
        const double next_event = (!reversed && t < cfg.t_reverse) ? cfg.t_reverse : cfg.t_end;
        if (t + dt > next_event - 1e-13) dt = next_event - t;
        transport.advance(dt);
        t += dt;
        ++steps;
        if (!reversed && t >= cfg.t_reverse - 1e-13) {
            for (int k = 0; k < n; ++k)
                for (int i = 0; i < n; ++i) u_base(i, k) = -u_base(i, k);
            transport.interpolate_velocity(u_base, w_base);
            reversed = true;
        }
    }

    double acc = 0.0;
    for (int k = 0; k < transport.fine_nz(); ++k)
        for (int i = 0; i < transport.fine_nx(); ++i)
            acc += std::abs(phi(i, k) - out.phi_initial(i, k));
    out.l1 = acc / (static_cast<double>(transport.fine_nx()) * transport.fine_nz());
    out.steps = steps;
    out.phi = phi;
    return out;
}

inline ConvergenceReport blob_convergence(const std::vector<int>& ns, const SchemeVariant& variant,
                                          double cfl = 0.25) {
    ConvergenceReport rep;
    rep.case_id = "blob";
    rep.variant_id = variant_id(variant);
    rep.epsilon = variant.epsilon;
    for (int n : ns) {
        BlobConfig c;
        c.n = n;
        c.variant = variant;
        c.cfl = cfl;
        rep.push(n, case_2d_sheared_blob(c).l1);
    }
    return rep;
}

} // namespace scatran
