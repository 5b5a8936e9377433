// Acceptance criteria 1-5 (table reproduction) and 9 (always-on property
// suites). Prints one pass/fail line per criterion.

#include <array>
#include <complex>
#include <cstdlib>

#include "acceptance_support.hpp"
#include "scatran/cases.hpp"
#include "scatran/flow.hpp"
#include "scatran/io.hpp"
#include "scatran/timestep.hpp"
#include "support.hpp"

using namespace scatran;
using namespace acceptance;

namespace {

struct PaperTable {
    std::vector<double> err;
    std::vector<double> ord; // ord[0] unused
};

const PaperTable t1_loc{{1.17e-2, 2.47e-3, 3.30e-4, 2.53e-5, 1.57e-6, 6.13e-8, 1.04e-9},
                        {0, 2.24, 2.90, 3.70, 4.01, 4.68, 5.89}};
const PaperTable t1_js{{2.11e-2, 1.10e-3, 3.26e-5, 9.98e-7, 3.12e-8, 9.76e-10, 3.13e-11},
                       {0, 4.27, 5.07, 5.03, 5.00, 5.00, 4.96}};
const PaperTable t1_c5{{3.11e-3, 1.01e-4, 3.18e-6, 9.99e-8, 3.15e-9, 1.03e-10, 4.26e-12},
                       {0, 4.95, 4.99, 4.99, 4.99, 4.94, 4.59}};
const PaperTable t2_loc{{3.46e-3, 1.76e-4, 2.83e-6, 9.44e-8, 3.11e-9, 1.02e-10, 4.26e-12},
                        {0, 4.30, 5.96, 4.91, 4.92, 4.93, 4.59}};
const PaperTable t3_d1{{1.20e-2, 2.41e-3, 3.91e-4, 6.27e-5, 1.41e-5, 3.45e-6, 8.62e-7},
                       {0, 2.32, 2.63, 2.64, 2.15, 2.03, 2.00}};
const PaperTable t3_d3{{3.58e-2, 6.28e-3, 1.60e-3, 3.77e-4, 9.26e-5, 2.31e-5, 5.77e-6},
                       {0, 2.51, 1.98, 2.08, 2.03, 2.00, 2.00}};
const PaperTable t4_d3{{1.47e-4, 2.22e-4, 2.45e-4, 2.11e-5, 1.73e-6, 1.12e-7, 7.19e-9},
                       {0, -0.595, -0.141, 3.54, 3.61, 3.95, 3.96}};
const PaperTable t4_d45{{1.27e-3, 3.26e-4, 2.53e-5, 1.50e-6, 1.00e-7, 6.72e-9, 4.37e-10},
                        {0, 1.96, 3.69, 4.07, 3.91, 3.90, 3.94}};
const PaperTable t5{{1.34e-3, 3.51e-4, 7.30e-5, 9.33e-6, 5.92e-7}, {0, 1.93, 2.26, 2.97, 3.98}};

bool errors_within_3x(const ConvergenceReport& rep, const PaperTable& paper, std::string& why) {
    for (std::size_t r = 0; r < rep.rows.size(); ++r) {
        if (!within_factor(rep.rows[r].l1, paper.err[r], 3.0)) {
            why = "N=" + std::to_string(rep.rows[r].n) + " error " + fmt(rep.rows[r].l1) +
                  " vs paper " + fmt(paper.err[r]);
            return false;
        }
    }
    return true;
}

bool criterion1(Reporter& rep) {
    Conv1DConfig c;
    c.variant = SchemeVariant::loc(1e-6);
    auto loc = case_1d_convection(c);
    c.variant = SchemeVariant::js(1e-6, 3);
    auto js = case_1d_convection(c);
    c.variant = SchemeVariant::central5();
    auto c5 = case_1d_convection(c);

    std::string why;
    bool ok = errors_within_3x(loc, t1_loc, why) && errors_within_3x(js, t1_js, why) &&
              errors_within_3x(c5, t1_c5, why);
    if (!ok) {
        rep.line(1, "Table 1 reproduction", false, "absolute error out of range: " + why);
        return false;
    }
    for (std::size_t r = 1; r < js.rows.size(); ++r) {
        if (!order_matches(js.rows[r].order, 4.7, 5.3, t1_js.ord[r])) {
            rep.line(1, "Table 1 reproduction", false,
                     "JS order N=" + std::to_string(js.rows[r].n) + " = " + fmt(js.rows[r].order));
            return false;
        }
        if (!order_matches(c5.rows[r].order, 4.7, 5.3, t1_c5.ord[r])) {
            rep.line(1, "Table 1 reproduction", false,
                     "C5 order N=" + std::to_string(c5.rows[r].n) + " = " + fmt(c5.rows[r].order));
            return false;
        }
    }
    bool loc_monotone = true;
    for (std::size_t r = 2; r < loc.rows.size(); ++r)
        loc_monotone = loc_monotone && loc.rows[r].order >= loc.rows[r - 1].order - 0.05;
    const bool loc_start = std::abs(loc.rows[1].order - 2.24) <= 0.4;
    const bool loc_final = loc.rows.back().order >= 5.0;
    if (!(loc_monotone && loc_start && loc_final)) {
        rep.line(1, "Table 1 reproduction", false,
                 "LOC order climb: start " + fmt(loc.rows[1].order) + " final " +
                     fmt(loc.rows.back().order));
        return false;
    }
    rep.line(1, "Table 1 reproduction", true,
             "JS/C5 orders ~5, LOC climbs " + fmt(loc.rows[1].order) + " -> " +
                 fmt(loc.rows.back().order) + ", errors within 3x");
    return true;
}

bool criterion2(Reporter& rep) {
    Conv1DConfig c;
    c.variant = SchemeVariant::loc(1.0);
    auto r = case_1d_convection(c);
    std::string why;
    if (!errors_within_3x(r, t2_loc, why)) {
        rep.line(2, "Table 2 reproduction (eps = 1)", false, why);
        return false;
    }
    for (std::size_t idx = 3; idx <= 5; ++idx) { // rows N = 80, 160, 320
        if (r.rows[idx].order < 4.8) {
            rep.line(2, "Table 2 reproduction (eps = 1)", false,
                     "order N=" + std::to_string(r.rows[idx].n) + " = " + fmt(r.rows[idx].order));
            return false;
        }
    }
    rep.line(2, "Table 2 reproduction (eps = 1)", true,
             "orders N=80..320: " + fmt(r.rows[3].order) + ", " + fmt(r.rows[4].order) + ", " +
                 fmt(r.rows[5].order));
    return true;
}

bool criterion3(Reporter& rep) {
    bool ok = true;
    std::string detail;
    for (double delta : {1.0, 3.0}) {
        Conv1DConfig c;
        c.variant = SchemeVariant::loc(1e-6);
        c.delta = delta;
        auto r = case_1d_convection(c);
        const PaperTable& paper = (delta == 1.0) ? t3_d1 : t3_d3;
        std::string why;
        if (!errors_within_3x(r, paper, why)) {
            ok = false;
            detail = "delta=" + fmt(delta) + ": " + why;
            break;
        }
        for (std::size_t idx = 5; idx < r.rows.size(); ++idx) { // N >= 320
            if (!order_matches(r.rows[idx].order, 1.9, 2.1, paper.ord[idx])) {
                ok = false;
                detail = "delta=" + fmt(delta) + " order N=" + std::to_string(r.rows[idx].n) +
                         " = " + fmt(r.rows[idx].order);
                break;
            }
        }
        detail += "delta=" + fmt(delta) + " final order " + fmt(r.rows.back().order) + "; ";
        if (!ok) break;
    }
    rep.line(3, "Table 3 reproduction (stretched convection)", ok, detail);
    return ok;
}

bool criterion4(Reporter& rep) {
    bool ok = true;
    std::string detail;
    for (double delta : {3.0, 4.5}) {
        Diff1DConfig c;
        c.delta = delta;
        auto r = case_1d_diffusion(c);
        const PaperTable& paper = (delta == 3.0) ? t4_d3 : t4_d45;
        std::string why;
        if (!errors_within_3x(r, paper, why)) {
            ok = false;
            detail = "delta=" + fmt(delta) + ": " + why;
            break;
        }
        for (std::size_t idx = 4; idx < r.rows.size(); ++idx) { // N >= 160
            if (!order_matches(r.rows[idx].order, 3.9, 4.1, paper.ord[idx])) {
                ok = false;
                detail = "delta=" + fmt(delta) + " order N=" + std::to_string(r.rows[idx].n) +
                         " = " + fmt(r.rows[idx].order);
                break;
            }
        }
        detail += "delta=" + fmt(delta) + " final order " + fmt(r.rows.back().order) + "; ";
        if (!ok) break;
    }
    rep.line(4, "Table 4 reproduction (erf diffusion)", ok, detail);
    return ok;
}

bool criterion5(Reporter& rep) {
    const bool with640 = std::getenv("SCATRAN_SKIP_BLOB640") == nullptr;
    std::vector<int> ns = {40, 80, 160, 320};
    if (with640) ns.push_back(640);
    auto r = blob_convergence(ns, SchemeVariant::loc(1e-6));

    std::string why;
    PaperTable paper = t5;
    if (!with640) {
        paper.err.pop_back();
        paper.ord.pop_back();
    }
    if (!errors_within_3x(r, paper, why)) {
        rep.line(5, "Table 5 reproduction (sheared blob)", false, why);
        return false;
    }
    bool ok = std::abs(r.rows[1].order - 1.93) <= 0.4; // 80^2 row near 1.9
    for (std::size_t idx = 2; idx < r.rows.size(); ++idx)
        ok = ok && r.rows[idx].order >= r.rows[idx - 1].order - 0.1; // rising
    if (with640) ok = ok && r.rows.back().order >= 3.5;
    else ok = ok && std::abs(r.rows.back().order - 2.97) <= 0.3;
    std::string detail = "orders";
    for (std::size_t idx = 1; idx < r.rows.size(); ++idx) detail += " " + fmt(r.rows[idx].order);
    detail += with640 ? " (640^2 included)" : " (640^2 skipped)";
    rep.line(5, "Table 5 reproduction (sheared blob)", ok, detail);
    return ok;
}

// --- criterion 9: property suites -------------------------------------------

bool prop_weights() {
    for (auto variant : {SchemeVariant::loc(1e-6), SchemeVariant::js(1e-6, 3),
                         SchemeVariant::js(1e-6, 2), SchemeVariant::central5()}) {
        for (int trial = 0; trial < 100; ++trial) {
            std::array<double, 3> is{10.0 * testsupport::uniform01(7, 3u * trial),
                                     10.0 * testsupport::uniform01(7, 3u * trial + 1),
                                     10.0 * testsupport::uniform01(7, 3u * trial + 2)};
            for (auto side : {FaceSide::Plus, FaceSide::Minus}) {
                auto w = weno_weights(variant, is, side);
                const double sum = w.normalized[0] + w.normalized[1] + w.normalized[2];
                if (std::abs(sum - 1.0) > 1e-13) return false;
                for (double v : w.normalized)
                    if (v < 0.0 || v > 1.0) return false;
            }
        }
    }
    return true;
}

bool prop_telescoping() {
    auto mesh = build_uniform_mesh(64, 0.0, 2.0, GhostRule::Periodic, GhostRule::Periodic);
    FluxTable tab(mesh);
    std::vector<double> phi(64 + 6), uf(65), flux(65), rhs(64);
    for (int i = 0; i < 64; ++i) phi[static_cast<std::size_t>(i + 3)] = testsupport::uniform01(3, static_cast<std::uint64_t>(i));
    for (int j = 1; j <= 3; ++j) {
        phi[static_cast<std::size_t>(3 - j)] = phi[static_cast<std::size_t>(64 + 3 - j)];
        phi[static_cast<std::size_t>(64 + 2 + j)] = phi[static_cast<std::size_t>(2 + j)];
    }
    for (int f = 0; f <= 64; ++f) uf[static_cast<std::size_t>(f)] = 2.0 * testsupport::uniform01(5, static_cast<std::uint64_t>(f)) - 1.0;
    uf[64] = uf[0];
    convective_rhs_line(tab, SchemeVariant::loc(), phi.data(), uf.data(), flux.data(), rhs.data());
    double total = 0.0, scale = 0.0;
    for (int i = 0; i < 64; ++i) total += rhs[static_cast<std::size_t>(i)] * mesh.spacing(i);
    for (int f = 0; f <= 64; ++f) scale += std::abs(flux[static_cast<std::size_t>(f)]);
    return std::abs(total) <= 1e-12 * scale;
}

bool prop_energy_identity() {
    const int n = 64;
    StaggeredGrid2D grid{build_uniform_mesh(n, 0.0, 2.0, GhostRule::Periodic, GhostRule::Periodic),
                         build_uniform_mesh(n, 0.0, 2.0, GhostRule::Periodic, GhostRule::Periodic)};
    FlowSolver fs(grid, FlowOptions{});
    const double dx = grid.x.spacing(0);
    auto P = [&](int i, int k) {
        return testsupport::uniform01(11, static_cast<std::uint64_t>((((k % n) + n) % n) * n +
                                                                     (((i % n) + n) % n))) -
               0.5;
    };
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i) {
            fs.u()(i, k) = (P(i, k + 1) - P(i, k)) / dx;
            fs.w()(i, k) = -(P(i + 1, k) - P(i, k)) / dx;
        }
    for (int i = 0; i < n; ++i) fs.w()(i, n) = fs.w()(i, 0);
    fs.fill_velocity_ghosts(fs.u(), fs.w());
    Field cu(n, n), cw(n, n + 1);
    fs.convective_u(fs.u(), fs.w(), cu);
    fs.convective_w(fs.u(), fs.w(), cw);
    const double vol = dx * dx;
    double acc = 0.0, scale = 0.0;
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i) {
            acc += fs.u()(i, k) * cu(i, k) * vol + fs.w()(i, k) * cw(i, k) * vol;
            scale += (std::abs(fs.u()(i, k) * cu(i, k)) + std::abs(fs.w()(i, k) * cw(i, k))) * vol;
        }
    return std::abs(acc) <= 1e-11 * scale;
}

bool prop_projection(double& div_after) {
    const int n = 16;
    StaggeredGrid2D grid{build_uniform_mesh(n, 0.0, 5.0, GhostRule::Periodic, GhostRule::Periodic),
                         build_uniform_mesh(n, 0.0, 5.0)};
    FlowSolver fs(grid, FlowOptions{});
    Field us(n, n, Location::XFace), ws(n, n + 1, Location::ZFace, 0.0);
    const double dx = grid.x.spacing(0);
    std::vector<double> psi(static_cast<std::size_t>(n) * (n + 1), 0.0);
    for (int k = 1; k < n; ++k)
        for (int i = 0; i < n; ++i)
            psi[static_cast<std::size_t>(k) * n + i] = testsupport::uniform01(13, static_cast<std::uint64_t>(k) * n + i);
    auto P = [&](int i, int k) { return psi[static_cast<std::size_t>(k) * n + (((i % n) + n) % n)]; };
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i) {
            us(i, k) = (P(i, k + 1) - P(i, k)) / grid.z.spacing(k);
            ws(i, k) = -(P(i + 1, k) - P(i, k)) / dx;
        }
    Field chi(n, n);
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i) chi(i, k) = testsupport::uniform01(17, static_cast<std::uint64_t>(k * n + i));
    const double dt = 1e-3;
    Field u = us, w = ws;
    fs.project(u, w, chi, -dt);
    Field div(n, n);
    fs.divergence(u, w, div);
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i) div(i, k) /= dt;
    Field p(n, n);
    fs.pressure_poisson_solve(div, p);
    fs.project(u, w, p, dt);
    Field d2(n, n);
    fs.divergence(u, w, d2);
    div_after = 0.0;
    double err = 0.0;
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i) {
            div_after = std::max(div_after, std::abs(d2(i, k)));
            err = std::max(err, std::abs(u(i, k) - us(i, k)));
        }
    return div_after <= 1e-8 && err <= 1e-8;
}

bool prop_poisson_dense() {
    const int n = 8;
    StaggeredGrid2D grid{build_uniform_mesh(n, 0.0, 5.0, GhostRule::Periodic, GhostRule::Periodic),
                         build_uniform_mesh(n, 0.0, 5.0)};
    FlowSolver fs(grid, FlowOptions{});
    const int m = n * n;
    std::vector<std::vector<double>> M(static_cast<std::size_t>(m),
                                       std::vector<double>(static_cast<std::size_t>(m), 0.0));
    for (int col = 0; col < m; ++col) {
        Field p(n, n, Location::Center, 0.0);
        p(col % n, col / n) = 1.0;
        Field u(n, n, Location::XFace, 0.0), w(n, n + 1, Location::ZFace, 0.0);
        fs.project(u, w, p, 1.0);
        Field d(n, n);
        fs.divergence(u, w, d);
        for (int k = 0; k < n; ++k)
            for (int i = 0; i < n; ++i)
                M[static_cast<std::size_t>(k * n + i)][static_cast<std::size_t>(col)] = d(i, k);
    }
    Field b(n, n);
    std::vector<double> rhs(static_cast<std::size_t>(m));
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i) {
            b(i, k) = std::cos(2.0 * M_PI * i / n) * std::sin(M_PI * (k + 0.5) / n);
            rhs[static_cast<std::size_t>(k * n + i)] = b(i, k);
        }
    double mean = 0.0;
    for (double v : rhs) mean += v;
    mean /= m;
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i) {
            b(i, k) -= mean;
            rhs[static_cast<std::size_t>(k * n + i)] -= mean;
        }
    for (int r = 0; r < m; ++r) {
        for (int c2 = 0; c2 < m; ++c2) M[static_cast<std::size_t>(r)][static_cast<std::size_t>(c2)] += 1.0 / m;
        rhs[static_cast<std::size_t>(r)] = -rhs[static_cast<std::size_t>(r)];
    }
    auto pd = testsupport::solve_dense(M, rhs);
    double pm = 0.0;
    for (double v : pd) pm += v;
    pm /= m;
    Field p(n, n);
    fs.pressure_poisson_solve(b, p);
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            if (std::abs(p(i, k) - (pd[static_cast<std::size_t>(k * n + i)] - pm)) > 1e-9)
                return false;
    return true;
}

bool prop_temporal_orders(double& ord3, double& ord2) {
    auto decay = [](double q) { return -q; };
    auto rk3_err = [&](double dt) {
        double q = 1.0;
        const int steps = static_cast<int>(std::lround(1.0 / dt));
        for (int s = 0; s < steps; ++s) q = rk3_step(q, decay, dt);
        return std::abs(q - std::exp(-1.0));
    };
    ord3 = testsupport::richardson_order(rk3_err, 0.02);
    auto ab2_err = [](double dt) {
        const int steps = static_cast<int>(std::lround(1.0 / dt));
        double q = 1.0, a_prev = -q;
        q += dt * a_prev;
        for (int s = 1; s < steps; ++s) {
            const double a_n = -q;
            q = ab2_step(q, a_n, a_prev, dt);
            a_prev = a_n;
        }
        return std::abs(q - std::exp(-1.0));
    };
    ord2 = testsupport::richardson_order(ab2_err, 0.01);
    return std::abs(ord3 - 3.0) <= 0.1 && std::abs(ord2 - 2.0) <= 0.1;
}

bool prop_ghost_idempotence() {
    Field f(8, 8);
    for (int k = 0; k < 8; ++k)
        for (int i = 0; i < 8; ++i) f(i, k) = 0.3 * i - 0.9 * k + 0.05 * i * k;
    ScalarBcs bcs{BoundaryKind::periodic(), BoundaryKind::periodic(), BoundaryKind::neumann(),
                  BoundaryKind::dirichlet(1.5)};
    fill_scalar_ghosts(f, bcs);
    Field once = f;
    fill_scalar_ghosts(f, bcs);
    for (int k = -3; k < 11; ++k)
        for (int i = -3; i < 11; ++i)
            if (f(i, k) != once(i, k)) return false;
    return true;
}

bool prop_conservation() {
    const int n = 16;
    StaggeredGrid2D base{build_uniform_mesh(n, 0.0, 2.0, GhostRule::Periodic, GhostRule::Periodic),
                         build_uniform_mesh(n, 0.0, 2.0, GhostRule::Periodic, GhostRule::Periodic)};
    auto dual = refine_dual(base, 2);
    ScalarSpec spec;
    spec.name = "phi";
    spec.bcs = {BoundaryKind::periodic(), BoundaryKind::periodic(), BoundaryKind::periodic(),
                BoundaryKind::periodic()};
    ScalarTransport tr(dual, {spec}, SchemeVariant::loc());
    Field& phi = tr.scalar(0);
    for (int k = 0; k < tr.fine_nz(); ++k)
        for (int i = 0; i < tr.fine_nx(); ++i)
            phi(i, k) = 1.0 + 0.4 * std::sin(M_PI * dual.fine.x.center(i)) *
                                  std::cos(2.0 * M_PI * dual.fine.z.center(k));
    Field u(n, n, Location::XFace), w(n, n + 1, Location::ZFace);
    const double dx = base.x.spacing(0);
    auto P = [&](int i, int k) {
        return testsupport::uniform01(77, static_cast<std::uint64_t>((((k % n) + n) % n) * n +
                                                                     (((i % n) + n) % n)));
    };
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i) {
            u(i, k) = (P(i, k + 1) - P(i, k)) / dx;
            w(i, k) = -(P(i + 1, k) - P(i, k)) / dx;
        }
    for (int i = 0; i < n; ++i) w(i, n) = w(i, 0);
    tr.interpolate_velocity(u, w);
    const double total0 = tr.total(phi);
    for (int s = 0; s < 1000; ++s) tr.advance(1e-3);
    return std::abs(tr.total(phi) - total0) <= 1e-10 * std::abs(total0);
}

bool criterion9(Reporter& rep) {
    std::string detail;
    bool ok = true;
    if (!prop_weights()) { ok = false; detail += "weights;"; }
    if (!prop_telescoping()) { ok = false; detail += "telescoping;"; }
    if (!prop_energy_identity()) { ok = false; detail += "energy;"; }
    double div_after = 0.0;
    if (!prop_projection(div_after)) { ok = false; detail += "projection;"; }
    if (!prop_poisson_dense()) { ok = false; detail += "poisson-dense;"; }
    double o3 = 0.0, o2 = 0.0;
    if (!prop_temporal_orders(o3, o2)) { ok = false; detail += "temporal-orders;"; }
    if (!prop_ghost_idempotence()) { ok = false; detail += "ghost-idempotence;"; }
    if (!prop_conservation()) { ok = false; detail += "conservation;"; }
    if (ok)
        detail = "convexity, telescoping, energy identity, projection (div " + fmt(div_after) +
                 "), dense-LU match, RK3/AB2 orders " + fmt(o3) + "/" + fmt(o2) +
                 ", idempotence, conservation";
    rep.line(9, "property suites", ok, detail);
    return ok;
}

} // namespace

int main() {
    Reporter rep;
    criterion1(rep);
    criterion2(rep);
    criterion3(rep);
    criterion4(rep);
    criterion5(rep);
    criterion9(rep);
    return rep.exit_code();
}
