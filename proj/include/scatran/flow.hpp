#pragma once

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "scatran/boundary.hpp"
#include "scatran/diffusion.hpp"
#include "scatran/errors.hpp"
#include "scatran/field.hpp"
#include "scatran/mesh.hpp"

namespace scatran {

struct FlowOptions {
    double reynolds = 100.0;
    double richardson = 0.0; // buoyancy coefficient in beta(T*) = Ri (T* - 1)
    double cg_tol = 1e-10;   // relative residual
    int cg_max_iter = 0;     // 0 -> 10 sqrt(n_cells)
};

struct FlowStepStats {
    int cg_iterations = 0;
    double cg_residual = 0.0;
};

/// 2D incompressible Navier-Stokes on the staggered base grid, periodic in x
/// with free-slip top/bottom walls. Kinetic-energy-conserving fourth-order
/// convection, fourth-order diffusion, optional Boussinesq buoyancy in the
/// w-momentum, AB2 time advance and a pressure projection solved by
/// diagonally preconditioned conjugate gradients.
///
/// u holds the nx unique periodic x-faces; w holds all nz+1 z-faces with the
/// wall faces pinned to zero.
class FlowSolver {
  public:
    FlowSolver(const StaggeredGrid2D& grid, const FlowOptions& opt)
        : grid_(grid), opt_(opt), nx_(grid.nx()), nz_(grid.nz()), pz_(grid.z.periodic()),
          u_(nx_, nz_, Location::XFace), w_(nx_, nz_ + 1, Location::ZFace),
          p_(nx_, nz_, Location::Center), a_prev_(nx_, nz_, Location::XFace),
          c_prev_(nx_, nz_ + 1, Location::ZFace), wbar_(nx_, nz_, Location::XFace),
          ubar_(nx_, nz_ + 1, Location::ZFace), scratch_(nx_, nz_ + 1) {
        if (!grid.x.periodic())
            throw ConfigError("flow solver requires a periodic x direction");
        build_tables();
    }

    int nx() const { return nx_; }
    int nz() const { return nz_; }
    const StaggeredGrid2D& grid() const { return grid_; }
    Field& u() { return u_; }
    Field& w() { return w_; }
    Field& p() { return p_; }
    const Field& u() const { return u_; }
    const Field& w() const { return w_; }
    const Field& p() const { return p_; }

    void fill_velocity_ghosts(Field& u, Field& w) const {
        fill_u_periodic_x(u);
        fill_center_periodic_x(w);
        if (pz_) {
            // doubly periodic: u is cell-centered in z, w has nz unique z-faces
            for (int i = -ghost_depth; i < nx_ + ghost_depth; ++i) {
                for (int j = 1; j <= ghost_depth; ++j) {
                    u(i, -j) = u(i, nz_ - j);
                    u(i, nz_ - 1 + j) = u(i, j - 1);
                    w(i, -j) = w(i, nz_ - j);
                    w(i, nz_ + j) = w(i, j);
                }
                w(i, nz_) = w(i, 0);
            }
        } else {
            fill_velocity_ghosts_freeslip(u, w, Side::Bottom);
            fill_velocity_ghosts_freeslip(u, w, Side::Top);
        }
    }

    /// C_x(u, wbar) at u-locations: the skew product form with 4th-order
    /// difference weights (-1, 8, -8, 1). Ghosts of u and w must be filled.
    void convective_u(const Field& u, const Field& w, Field& out) const {
        interp_wbar(w);
        for (int k = 0; k < nz_; ++k) {
            const double* uk = u.row(k);
            const double* ukm2 = u.row(k - 2);
            const double* ukm1 = u.row(k - 1);
            const double* ukp1 = u.row(k + 1);
            const double* ukp2 = u.row(k + 2);
            const double* bk = wbar_.row(k);
            const double* bkm2 = wbar_.row(k - 2);
            const double* bkm1 = wbar_.row(k - 1);
            const double* bkp1 = wbar_.row(k + 1);
            const double* bkp2 = wbar_.row(k + 2);
            const double dz = zden_c_[static_cast<std::size_t>(k)];
            double* o = out.row(k);
            for (int i = 0; i < nx_; ++i) {
                const double uc = uk[i];
                const double xt = -uk[i + 2] * (uc + uk[i + 2]) + 8.0 * uk[i + 1] * (uc + uk[i + 1]) -
                                  8.0 * uk[i - 1] * (uc + uk[i - 1]) + uk[i - 2] * (uc + uk[i - 2]);
                const double bc = bk[i];
                const double zt = -ukp2[i] * (bc + bkp2[i]) + 8.0 * ukp1[i] * (bc + bkp1[i]) -
                                  8.0 * ukm1[i] * (bc + bkm1[i]) + ukm2[i] * (bc + bkm2[i]);
                o[i] = -0.5 * (xt * xden_f_[static_cast<std::size_t>(i)] + zt * dz);
            }
        }
    }

    /// C_z(w, ubar) at interior w-locations (wall rows left untouched; on a
    /// doubly periodic grid all unique faces are interior).
    void convective_w(const Field& u, const Field& w, Field& out) const {
        interp_ubar(u);
        for (int k = pz_ ? 0 : 1; k < nz_; ++k) {
            const double* wk = w.row(k);
            const double* wkm2 = w.row(k - 2);
            const double* wkm1 = w.row(k - 1);
            const double* wkp1 = w.row(k + 1);
            const double* wkp2 = w.row(k + 2);
            const double* ak = ubar_.row(k);
            const double dz = zden_f_[static_cast<std::size_t>(k)];
            double* o = out.row(k);
            for (int i = 0; i < nx_; ++i) {
                const double wc = wk[i];
                const double zt = -wkp2[i] * (wc + wkp2[i]) + 8.0 * wkp1[i] * (wc + wkp1[i]) -
                                  8.0 * wkm1[i] * (wc + wkm1[i]) + wkm2[i] * (wc + wkm2[i]);
                const double ac = ak[i];
                const double xt = -wk[i + 2] * (ac + ak[i + 2]) + 8.0 * wk[i + 1] * (ac + ak[i + 1]) -
                                  8.0 * wk[i - 1] * (ac + ak[i - 1]) + wk[i - 2] * (ac + ak[i - 2]);
                o[i] = -0.5 * (zt * dz + xt * xden_c_[static_cast<std::size_t>(i)]);
            }
        }
    }

    /// a at u-locations, c at interior w-locations; c includes the buoyancy
    /// Ri (T* - 1) when a base-restricted T* field is supplied.
    void momentum_rhs(const Field& u, const Field& w, const Field* t_base, Field& a, Field& c) const {
        convective_u(u, w, a);
        convective_w(u, w, c);
        const double inv_re = 1.0 / opt_.reynolds;
        diffusive_add(diff_ux_, diff_uz_, inv_re, u, a);
        for (int k = 1; k < nz_; ++k) { // interior w rows only
            const double* cz = diff_wz_.coeffs(k);
            const double* r0 = w.row(k - 3);
            const double* r1 = w.row(k - 2);
            const double* r2 = w.row(k - 1);
            const double* r3 = w.row(k);
            const double* r4 = w.row(k + 1);
            const double* r5 = w.row(k + 2);
            const double* r6 = w.row(k + 3);
            double* o = c.row(k);
            for (int i = 0; i < nx_; ++i) {
                const double* cx = diff_wx_.coeffs(i);
                const double* qx = r3 + i - 3;
                const double lx = cx[0] * qx[0] + cx[1] * qx[1] + cx[2] * qx[2] + cx[3] * qx[3] +
                                  cx[4] * qx[4] + cx[5] * qx[5] + cx[6] * qx[6];
                const double lz = cz[0] * r0[i] + cz[1] * r1[i] + cz[2] * r2[i] + cz[3] * r3[i] +
                                  cz[4] * r4[i] + cz[5] * r5[i] + cz[6] * r6[i];
                o[i] += inv_re * (lx + lz);
            }
        }
        if (t_base != nullptr && opt_.richardson != 0.0) {
            for (int k = 1; k < nz_; ++k) {
                const double th = tface_theta_[static_cast<std::size_t>(k)];
                const double* tlo = t_base->row(k - 1);
                const double* thi = t_base->row(k);
                double* o = c.row(k);
                for (int i = 0; i < nx_; ++i) {
                    const double tf = tlo[i] + (thi[i] - tlo[i]) * th;
                    o[i] += opt_.richardson * (tf - 1.0);
                }
            }
        }
    }

    /// Solve the pressure Poisson system for the predictor divergence field
    /// (rhs = div(u*)/dt per cell). Warm-started PCG on the volume-scaled SPD
    /// operator; the result is gauge-fixed to zero mean.
    FlowStepStats pressure_poisson_solve(const Field& div_over_dt, Field& p) const {
        const std::size_t n = static_cast<std::size_t>(nx_) * nz_;
        rhs_.assign(n, 0.0);
        for (int k = 0; k < nz_; ++k)
            for (int i = 0; i < nx_; ++i)
                rhs_[flat(i, k)] = -vol_[flat(i, k)] * div_over_dt(i, k);
        double mean = 0.0;
        for (double v : rhs_) mean += v;
        mean /= static_cast<double>(n);
        for (double& v : rhs_) v -= mean;

        xsol_.assign(n, 0.0);
        for (int k = 0; k < nz_; ++k)
            for (int i = 0; i < nx_; ++i) xsol_[flat(i, k)] = p(i, k); // warm start

        FlowStepStats st = cg_solve();

        double pm = 0.0;
        for (double v : xsol_) pm += v;
        pm /= static_cast<double>(n);
        for (int k = 0; k < nz_; ++k)
            for (int i = 0; i < nx_; ++i) p(i, k) = xsol_[flat(i, k)] - pm;
        return st;
    }

    /// u <- u* - dt (p_E - p_W)/dxc, w <- w* - dt (p_N - p_S)/dzc.
    void project(Field& u, Field& w, Field& p_in, double dt) const {
        fill_center_periodic_x(p_in);
        for (int k = 0; k < nz_; ++k) {
            double* uk = u.row(k);
            const double* pk = p_in.row(k);
            for (int i = 0; i < nx_; ++i)
                uk[i] -= dt * (pk[i] - pk[i - 1]) * inv_dxc_[static_cast<std::size_t>(i)];
        }
        for (int k = 1; k < nz_; ++k) {
            double* wk = w.row(k);
            const double* plo = p_in.row(k - 1);
            const double* phi = p_in.row(k);
            const double inv = inv_dzc_[static_cast<std::size_t>(k)];
            for (int i = 0; i < nx_; ++i) wk[i] -= dt * (phi[i] - plo[i]) * inv;
        }
    }

    /// Compact discrete divergence per cell (interior).
    void divergence(const Field& u, const Field& w, Field& div) const {
        for (int k = 0; k < nz_; ++k) {
            const double idz = 1.0 / grid_.z.spacing(k);
            const double* uk = u.row(k);
            const double* wk = w.row(k);
            const double* wk1 = w.row(k + 1);
            double* d = div.row(k);
            for (int i = 0; i < nx_; ++i) {
                const double ur = (i + 1 < nx_) ? uk[i + 1] : u(0, k);
                d[i] = (ur - uk[i]) * inv_dx_[static_cast<std::size_t>(i)] + (wk1[i] - wk[i]) * idz;
            }
        }
    }

    double max_divergence() const {
        Field d(nx_, nz_);
        divergence(u_, w_, d);
        double m = 0.0;
        for (int k = 0; k < nz_; ++k)
            for (int i = 0; i < nx_; ++i) m = std::max(m, std::abs(d(i, k)));
        return m;
    }

    /// One AB2 + projection step. t_base: buoyancy-coupled T* restricted to
    /// base centers (nullptr for no buoyancy). dt_prev = 0 marks the startup
    /// step (forward Euler).
    FlowStepStats step(double dt, double dt_prev, const Field* t_base) {
        if (pz_) throw ConfigError("flow step requires free-slip walls in z");
        fill_velocity_ghosts(u_, w_);
        Field a(nx_, nz_, Location::XFace);
        Field c(nx_, nz_ + 1, Location::ZFace);
        momentum_rhs(u_, w_, t_base, a, c);

        const double rho = (dt_prev > 0.0) ? dt / dt_prev : 0.0;
        const double ca = dt * (1.0 + 0.5 * rho);
        const double cb = dt * 0.5 * rho;
        for (int k = 0; k < nz_; ++k) {
            double* uk = u_.row(k);
            const double* ak = a.row(k);
            const double* apk = a_prev_.row(k);
            for (int i = 0; i < nx_; ++i) uk[i] += ca * ak[i] - cb * apk[i];
        }
        for (int k = 1; k < nz_; ++k) {
            double* wk = w_.row(k);
            const double* ck = c.row(k);
            const double* cpk = c_prev_.row(k);
            for (int i = 0; i < nx_; ++i) wk[i] += ca * ck[i] - cb * cpk[i];
        }
        a_prev_ = a;
        c_prev_ = c;

        Field div(nx_, nz_);
        divergence(u_, w_, div);
        const double inv_dt = 1.0 / dt;
        for (int k = 0; k < nz_; ++k)
            for (int i = 0; i < nx_; ++i) div(i, k) *= inv_dt;
        FlowStepStats st = pressure_poisson_solve(div, p_);
        project(u_, w_, p_, dt);
        return st;
    }

    double max_abs_u() const {
        double m = 0.0;
        for (int k = 0; k < nz_; ++k) {
            const double* r = u_.row(k);
            for (int i = 0; i < nx_; ++i) m = std::max(m, std::abs(r[i]));
        }
        return m;
    }
    double max_abs_w() const {
        double m = 0.0;
        for (int k = 0; k <= nz_; ++k) {
            const double* r = w_.row(k);
            for (int i = 0; i < nx_; ++i) m = std::max(m, std::abs(r[i]));
        }
        return m;
    }

    double kinetic_energy() const {
        double ke = 0.0;
        for (int k = 0; k < nz_; ++k) {
            const double dz = grid_.z.spacing(k);
            const double* uk = u_.row(k);
            const double* wk = w_.row(k);
            const double* wk1 = w_.row(k + 1);
            for (int i = 0; i < nx_; ++i) {
                const double wc = 0.5 * (wk[i] + wk1[i]);
                const double ur = (i + 1 < nx_) ? uk[i + 1] : u_(0, k);
                const double uc = 0.5 * (uk[i] + ur);
                ke += 0.5 * (uc * uc + wc * wc) * grid_.x.spacing(i) * dz;
            }
        }
        return ke;
    }

  private:
    std::size_t flat(int i, int k) const {
        return static_cast<std::size_t>(k) * nx_ + static_cast<std::size_t>(i);
    }

    void build_tables() {
        const Mesh1D& mx = grid_.x;
        const Mesh1D& mz = grid_.z;
        xden_f_.resize(static_cast<std::size_t>(nx_));
        xden_c_.resize(static_cast<std::size_t>(nx_));
        for (int i = 0; i < nx_; ++i) {
            xden_f_[static_cast<std::size_t>(i)] =
                1.0 / (-mx.face(i + 2) + 8.0 * mx.face(i + 1) - 8.0 * mx.face(i - 1) + mx.face(i - 2));
            xden_c_[static_cast<std::size_t>(i)] =
                1.0 / (-mx.center(i + 2) + 8.0 * mx.center(i + 1) - 8.0 * mx.center(i - 1) +
                       mx.center(i - 2));
        }
        zden_c_.resize(static_cast<std::size_t>(nz_));
        for (int k = 0; k < nz_; ++k)
            zden_c_[static_cast<std::size_t>(k)] =
                1.0 / (-mz.center(k + 2) + 8.0 * mz.center(k + 1) - 8.0 * mz.center(k - 1) +
                       mz.center(k - 2));
        zden_f_.resize(static_cast<std::size_t>(nz_) + 1);
        for (int k = pz_ ? 0 : 1; k < nz_; ++k)
            zden_f_[static_cast<std::size_t>(k)] =
                1.0 / (-mz.face(k + 2) + 8.0 * mz.face(k + 1) - 8.0 * mz.face(k - 1) + mz.face(k - 2));

        // 4-point interpolation weights, centered with ghost support
        wbar_xw_.resize(static_cast<std::size_t>(nx_)); // centers i-2..i+1 -> face i
        ubar_xw_.resize(static_cast<std::size_t>(nx_)); // faces i-1..i+2 -> center i
        for (int i = 0; i < nx_; ++i) {
            lagrange4_weights({mx.center(i - 2), mx.center(i - 1), mx.center(i), mx.center(i + 1)},
                              mx.face(i), wbar_xw_[static_cast<std::size_t>(i)]);
            lagrange4_weights({mx.face(i - 1), mx.face(i), mx.face(i + 1), mx.face(i + 2)},
                              mx.center(i), ubar_xw_[static_cast<std::size_t>(i)]);
        }
        wbar_zw_.resize(static_cast<std::size_t>(nz_) + 4); // faces k-1..k+2 -> center k, k in [-2, nz+1]
        for (int k = -2; k < nz_ + 2; ++k)
            lagrange4_weights({mz.face(k - 1), mz.face(k), mz.face(k + 1), mz.face(k + 2)},
                              mz.center(k), wbar_zw_[static_cast<std::size_t>(k + 2)]);
        ubar_zw_.resize(static_cast<std::size_t>(nz_) + 1); // centers k-2..k+1 -> face k
        for (int k = pz_ ? 0 : 1; k < nz_; ++k)
            lagrange4_weights({mz.center(k - 2), mz.center(k - 1), mz.center(k), mz.center(k + 1)},
                              mz.face(k), ubar_zw_[static_cast<std::size_t>(k)]);

        diff_ux_ = DiffusionTable::for_faces(mx, nx_);
        diff_uz_ = DiffusionTable::for_centers(mz);
        diff_wx_ = DiffusionTable::for_centers(mx);
        diff_wz_ = DiffusionTable::for_faces(mz, nz_ + 1);

        inv_dx_.resize(static_cast<std::size_t>(nx_));
        inv_dxc_.resize(static_cast<std::size_t>(nx_));
        for (int i = 0; i < nx_; ++i) {
            inv_dx_[static_cast<std::size_t>(i)] = 1.0 / mx.spacing(i);
            inv_dxc_[static_cast<std::size_t>(i)] = 1.0 / (mx.center(i) - mx.center(i - 1));
        }
        if (pz_) return; // projection machinery is wall-z only
        inv_dzc_.resize(static_cast<std::size_t>(nz_) + 1, 0.0);
        for (int k = 1; k < nz_; ++k)
            inv_dzc_[static_cast<std::size_t>(k)] = 1.0 / (mz.center(k) - mz.center(k - 1));
        tface_theta_.resize(static_cast<std::size_t>(nz_) + 1, 0.0);
        for (int k = 1; k < nz_; ++k)
            tface_theta_[static_cast<std::size_t>(k)] =
                (mz.face(k) - mz.center(k - 1)) / (mz.center(k) - mz.center(k - 1));

        vol_.resize(static_cast<std::size_t>(nx_) * nz_);
        diag_.resize(vol_.size());
        txe_.resize(static_cast<std::size_t>(nx_));
        dxv_.resize(static_cast<std::size_t>(nx_));
        for (int i = 0; i < nx_; ++i) {
            txe_[static_cast<std::size_t>(i)] = 1.0 / (mx.center(i + 1) - mx.center(i));
            dxv_[static_cast<std::size_t>(i)] = mx.spacing(i);
        }
        tzn_.resize(static_cast<std::size_t>(nz_), 0.0);
        for (int k = 0; k + 1 < nz_; ++k)
            tzn_[static_cast<std::size_t>(k)] = 1.0 / (mz.center(k + 1) - mz.center(k));
        for (int k = 0; k < nz_; ++k)
            for (int i = 0; i < nx_; ++i) {
                vol_[flat(i, k)] = mx.spacing(i) * mz.spacing(k);
                const double txe = mz.spacing(k) * txe_[static_cast<std::size_t>(i)];
                const double txw = mz.spacing(k) * txe_[static_cast<std::size_t>((i + nx_ - 1) % nx_)];
                const double tzn = (k + 1 < nz_) ? mx.spacing(i) * tzn_[static_cast<std::size_t>(k)] : 0.0;
                const double tzs = (k > 0) ? mx.spacing(i) * tzn_[static_cast<std::size_t>(k - 1)] : 0.0;
                diag_[flat(i, k)] = txe + txw + tzn + tzs;
            }
    }

    /// Volume-scaled negative Laplacian (SPD): (A p)_(i,k) = sum_f T_f (p_c - p_nb).
    /// Periodic seam and wall rows handled outside the hot loop.
    void apply_poisson(const std::vector<double>& pin, std::vector<double>& out) const {
        const double* tx = txe_.data();
        for (int k = 0; k < nz_; ++k) {
            const double dzk = grid_.z.spacing(k);
            const double* pc = pin.data() + flat(0, k);
            const double* pn = (k + 1 < nz_) ? pin.data() + flat(0, k + 1) : nullptr;
            const double* ps = (k > 0) ? pin.data() + flat(0, k - 1) : nullptr;
            const double tn = (k + 1 < nz_) ? tzn_[static_cast<std::size_t>(k)] : 0.0;
            const double ts = (k > 0) ? tzn_[static_cast<std::size_t>(k - 1)] : 0.0;
            double* o = out.data() + flat(0, k);
            for (int i = 1; i < nx_ - 1; ++i) {
                double acc = dzk * (tx[i] * (pc[i] - pc[i + 1]) + tx[i - 1] * (pc[i] - pc[i - 1]));
                acc += dxv_[static_cast<std::size_t>(i)] *
                       (tn * (pc[i] - (pn ? pn[i] : pc[i])) + ts * (pc[i] - (ps ? ps[i] : pc[i])));
                o[i] = acc;
            }
            for (const int i : {0, nx_ - 1}) {
                const int ie = (i + 1 < nx_) ? i + 1 : 0;
                const int iw = (i > 0) ? i - 1 : nx_ - 1;
                double acc =
                    dzk * (tx[i] * (pc[i] - pin[flat(ie, k)]) + tx[iw] * (pc[i] - pin[flat(iw, k)]));
                acc += dxv_[static_cast<std::size_t>(i)] *
                       (tn * (pc[i] - (pn ? pn[i] : pc[i])) + ts * (pc[i] - (ps ? ps[i] : pc[i])));
                o[i] = acc;
            }
        }
    }

    FlowStepStats cg_solve() const {
        const std::size_t n = rhs_.size();
        const int cap = (opt_.cg_max_iter > 0)
                            ? opt_.cg_max_iter
                            : 10 * static_cast<int>(std::sqrt(static_cast<double>(n))) + 20;
        r_.assign(n, 0.0);
        z_.assign(n, 0.0);
        q_.assign(n, 0.0);
        d_.assign(n, 0.0);

        double bnorm = 0.0;
        for (std::size_t j = 0; j < n; ++j) bnorm += rhs_[j] * rhs_[j];
        bnorm = std::sqrt(bnorm);
        if (bnorm == 0.0) {
            xsol_.assign(n, 0.0);
            return {0, 0.0};
        }
        apply_poisson(xsol_, q_);
        double rz = 0.0, rnorm2 = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            r_[j] = rhs_[j] - q_[j];
            z_[j] = r_[j] / diag_[j];
            rz += r_[j] * z_[j];
            rnorm2 += r_[j] * r_[j];
        }
        d_ = z_;

        const double tol2 = opt_.cg_tol * opt_.cg_tol * bnorm * bnorm;
        int iter = 0;
        while (rnorm2 > tol2) {
            if (iter >= cap)
                throw SolverError("pressure CG stagnated: relative residual " +
                                      std::to_string(std::sqrt(rnorm2) / bnorm) + " after " +
                                      std::to_string(iter) + " iterations",
                                  std::sqrt(rnorm2) / bnorm);
            apply_poisson(d_, q_);
            // 4-lane accumulators: fixed summation order, shorter FP chains
            double dq0 = 0.0, dq1 = 0.0, dq2 = 0.0, dq3 = 0.0;
            std::size_t j = 0;
            for (; j + 4 <= n; j += 4) {
                dq0 += d_[j] * q_[j];
                dq1 += d_[j + 1] * q_[j + 1];
                dq2 += d_[j + 2] * q_[j + 2];
                dq3 += d_[j + 3] * q_[j + 3];
            }
            for (; j < n; ++j) dq0 += d_[j] * q_[j];
            const double alpha = rz / ((dq0 + dq1) + (dq2 + dq3));

            double a0 = 0.0, a1 = 0.0, a2 = 0.0, a3 = 0.0;
            double b0 = 0.0, b1 = 0.0, b2 = 0.0, b3 = 0.0;
            for (j = 0; j + 4 <= n; j += 4) {
                for (std::size_t l = 0; l < 4; ++l) {
                    const std::size_t m = j + l;
                    xsol_[m] += alpha * d_[m];
                    const double rj = r_[m] - alpha * q_[m];
                    r_[m] = rj;
                    z_[m] = rj / diag_[m];
                }
                a0 += r_[j] * z_[j];
                a1 += r_[j + 1] * z_[j + 1];
                a2 += r_[j + 2] * z_[j + 2];
                a3 += r_[j + 3] * z_[j + 3];
                b0 += r_[j] * r_[j];
                b1 += r_[j + 1] * r_[j + 1];
                b2 += r_[j + 2] * r_[j + 2];
                b3 += r_[j + 3] * r_[j + 3];
            }
            for (; j < n; ++j) {
                xsol_[j] += alpha * d_[j];
                const double rj = r_[j] - alpha * q_[j];
                r_[j] = rj;
                z_[j] = rj / diag_[j];
                a0 += r_[j] * z_[j];
                b0 += r_[j] * r_[j];
            }
            const double rz_new = (a0 + a1) + (a2 + a3);
            rnorm2 = (b0 + b1) + (b2 + b3);
            const double beta = rz_new / rz;
            rz = rz_new;
            for (j = 0; j < n; ++j) d_[j] = z_[j] + beta * d_[j];
            ++iter;
        }
        return {iter, std::sqrt(rnorm2) / bnorm};
    }

    /// w interpolated to u-locations, including two ghost rows each side.
    void interp_wbar(const Field& w) const {
        // stage 1: z-faces -> z-centers at every x-center (ghost columns too)
        for (int k = -2; k < nz_ + 2; ++k) {
            const auto& wz = wbar_zw_[static_cast<std::size_t>(k + 2)];
            const double* r0 = w.row(k - 1);
            const double* r1 = w.row(k);
            const double* r2 = w.row(k + 1);
            const double* r3 = w.row(k + 2);
            double* o = scratch_.row(k);
            for (int i = -3; i < nx_ + 3; ++i)
                o[i] = wz[0] * r0[i] + wz[1] * r1[i] + wz[2] * r2[i] + wz[3] * r3[i];
        }
        // stage 2: x-centers -> x-faces
        for (int k = -2; k < nz_ + 2; ++k) {
            const double* s = scratch_.row(k);
            double* o = wbar_.row(k);
            for (int i = 0; i < nx_; ++i) {
                const auto& wx = wbar_xw_[static_cast<std::size_t>(i)];
                o[i] = wx[0] * s[i - 2] + wx[1] * s[i - 1] + wx[2] * s[i] + wx[3] * s[i + 1];
            }
        }
        fill_u_periodic_x(wbar_);
    }

    /// u interpolated to interior w-locations.
    void interp_ubar(const Field& u) const {
        const int k0 = pz_ ? 0 : 1;
        for (int k = k0; k < nz_; ++k) {
            const auto& wz = ubar_zw_[static_cast<std::size_t>(k)];
            const double* r0 = u.row(k - 2);
            const double* r1 = u.row(k - 1);
            const double* r2 = u.row(k);
            const double* r3 = u.row(k + 1);
            double* o = scratch_.row(k);
            for (int i = -3; i < nx_ + 3; ++i)
                o[i] = wz[0] * r0[i] + wz[1] * r1[i] + wz[2] * r2[i] + wz[3] * r3[i];
        }
        for (int k = k0; k < nz_; ++k) {
            const double* s = scratch_.row(k);
            double* o = ubar_.row(k);
            for (int i = 0; i < nx_; ++i) {
                const auto& wx = ubar_xw_[static_cast<std::size_t>(i)];
                o[i] = wx[0] * s[i - 1] + wx[1] * s[i] + wx[2] * s[i + 1] + wx[3] * s[i + 2];
            }
        }
        fill_center_periodic_x(ubar_);
    }

    StaggeredGrid2D grid_;
    FlowOptions opt_;
    int nx_, nz_;
    bool pz_ = false;
    Field u_, w_, p_;
    Field a_prev_, c_prev_;
    mutable Field wbar_, ubar_, scratch_;

    std::vector<double> xden_f_, xden_c_, zden_c_, zden_f_;
    std::vector<std::array<double, 4>> wbar_xw_, ubar_xw_, wbar_zw_, ubar_zw_;
    DiffusionTable diff_ux_, diff_uz_, diff_wx_, diff_wz_;
    std::vector<double> inv_dx_, inv_dxc_, inv_dzc_, tface_theta_;
    std::vector<double> vol_, diag_, txe_, tzn_, dxv_;
    mutable std::vector<double> rhs_, xsol_, r_, z_, q_, d_;
};

} // namespace scatran
