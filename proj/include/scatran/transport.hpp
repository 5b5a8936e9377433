#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "scatran/boundary.hpp"
#include "scatran/diffusion.hpp"
#include "scatran/errors.hpp"
#include "scatran/field.hpp"
#include "scatran/mesh.hpp"
#include "scatran/reconstruction.hpp"

namespace scatran {

/// One transported scalar on the fine grid.
struct ScalarSpec {
    std::string name;
    double diffusivity = 0.0; // 1/(Re Sc) or 1/(Re Pr)
    ScalarBcs bcs;
    bool couples_to_buoyancy = false;
};

/// Linear map to the nondimensional variable: q* = (q - ref_zero)/(ref_one - ref_zero).
/// For temperature ref_zero = T_s, ref_one = T_B0; for the gas concentration
/// ref_zero = phi_B0, ref_one = phi_s.
struct NondimensionalMap {
    double ref_zero = 0.0;
    double ref_one = 1.0;
    double normalize(double q) const {
        if (ref_one == ref_zero) throw ConfigError("nondimensional map has a zero denominator");
        return (q - ref_zero) / (ref_one - ref_zero);
    }
};

/// Dual-mesh scalar advancement: base-grid velocities are interpolated onto
/// the refined subgrid once per step, every scalar is advanced there with the
/// WENO convection + central diffusion right-hand side and SSP-RK3.
/// Scalars live exclusively on the fine grid (R = 1 makes it the base grid).
class ScalarTransport {
  public:
    ScalarTransport(const DualMesh& dual, std::vector<ScalarSpec> specs, SchemeVariant variant)
        : dual_(&dual), specs_(std::move(specs)), variant_(variant), fnx_(dual.fine.nx()),
          fnz_(dual.fine.nz()), tab_x_(dual.fine.x), tab_z_(dual.fine.z),
          diff_x_(DiffusionTable::for_centers(dual.fine.x)),
          diff_z_(DiffusionTable::for_centers(dual.fine.z)),
          u_fine_(fnx_ + 1, fnz_, Location::XFace), w_fine_(fnx_, fnz_ + 1, Location::ZFace),
          stage1_(fnx_, fnz_), stage2_(fnx_, fnz_), rhs_(fnx_, fnz_),
          tmp_u_(static_cast<std::size_t>(fnx_ + 1) * dual.base.nz()),
          tmp_w_(static_cast<std::size_t>(fnx_) * (dual.base.nz() + 1)),
          flux_a_(static_cast<std::size_t>(std::max(fnx_, fnz_)) + 1),
          flux_b_(static_cast<std::size_t>(fnx_) + 1), flux_c_(static_cast<std::size_t>(fnx_) + 1) {
        variant_.validate();
        int buoyant = 0;
        for (const auto& s : specs_) buoyant += s.couples_to_buoyancy ? 1 : 0;
        if (buoyant > 1) throw ConfigError("at most one scalar may couple to buoyancy");
        for (const auto& s : specs_) {
            if (s.diffusivity < 0.0) throw ConfigError("scalar diffusivity must be >= 0");
            fields_.emplace_back(fnx_, fnz_, Location::Center, 0.0);
        }
    }

    const DualMesh& dual() const { return *dual_; }
    int fine_nx() const { return fnx_; }
    int fine_nz() const { return fnz_; }
    std::size_t count() const { return specs_.size(); }
    const ScalarSpec& spec(std::size_t s) const { return specs_[s]; }
    Field& scalar(std::size_t s) { return fields_[s]; }
    const Field& scalar(std::size_t s) const { return fields_[s]; }
    Field& u_fine() { return u_fine_; }
    Field& w_fine() { return w_fine_; }
    const SchemeVariant& variant() const { return variant_; }

    int buoyant_index() const {
        for (std::size_t s = 0; s < specs_.size(); ++s)
            if (specs_[s].couples_to_buoyancy) return static_cast<int>(s);
        return -1;
    }

    /// Base-grid face velocities onto every fine face location through the
    /// precomputed 4-point Lagrange stencils (separable, two passes).
    /// Coincident points are exact copies.
    void interpolate_velocity(const Field& u_base, const Field& w_base) {
        const int bnz = dual_->base.nz();
        const auto& ux = dual_->u_x;
        const auto& uz = dual_->u_z;
        const int nIu = static_cast<int>(ux.size());
        for (int kb = 0; kb < bnz; ++kb) {
            double* t = tmp_u_.data() + static_cast<std::size_t>(kb) * (fnx_ + 1);
            for (int I = 0; I < nIu; ++I) {
                const auto& ix = ux.index[static_cast<std::size_t>(I)];
                const auto& wx = ux.weight[static_cast<std::size_t>(I)];
                t[I] = wx[0] * u_base(ix[0], kb) + wx[1] * u_base(ix[1], kb) +
                       wx[2] * u_base(ix[2], kb) + wx[3] * u_base(ix[3], kb);
            }
        }
        for (int K = 0; K < fnz_; ++K) {
            const auto& iz = uz.index[static_cast<std::size_t>(K)];
            const auto& wz = uz.weight[static_cast<std::size_t>(K)];
            const double* t0 = tmp_u_.data() + static_cast<std::size_t>(iz[0]) * (fnx_ + 1);
            const double* t1 = tmp_u_.data() + static_cast<std::size_t>(iz[1]) * (fnx_ + 1);
            const double* t2 = tmp_u_.data() + static_cast<std::size_t>(iz[2]) * (fnx_ + 1);
            const double* t3 = tmp_u_.data() + static_cast<std::size_t>(iz[3]) * (fnx_ + 1);
            double* o = u_fine_.row(K);
            for (int I = 0; I < nIu; ++I)
                o[I] = wz[0] * t0[I] + wz[1] * t1[I] + wz[2] * t2[I] + wz[3] * t3[I];
            if (dual_->fine.x.periodic()) o[fnx_] = o[0];
        }

        const auto& wxa = dual_->w_x;
        const auto& wza = dual_->w_z;
        const int nKw = static_cast<int>(wza.size());
        for (int kb = 0; kb <= bnz; ++kb) {
            if (dual_->base.z.periodic() && kb == bnz) break;
            double* t = tmp_w_.data() + static_cast<std::size_t>(kb) * fnx_;
            for (int I = 0; I < fnx_; ++I) {
                const auto& ix = wxa.index[static_cast<std::size_t>(I)];
                const auto& wx = wxa.weight[static_cast<std::size_t>(I)];
                t[I] = wx[0] * w_base(ix[0], kb) + wx[1] * w_base(ix[1], kb) +
                       wx[2] * w_base(ix[2], kb) + wx[3] * w_base(ix[3], kb);
            }
        }
        for (int K = 0; K < nKw; ++K) {
            const auto& iz = wza.index[static_cast<std::size_t>(K)];
            const auto& wz = wza.weight[static_cast<std::size_t>(K)];
            const double* t0 = tmp_w_.data() + static_cast<std::size_t>(iz[0]) * fnx_;
            const double* t1 = tmp_w_.data() + static_cast<std::size_t>(iz[1]) * fnx_;
            const double* t2 = tmp_w_.data() + static_cast<std::size_t>(iz[2]) * fnx_;
            const double* t3 = tmp_w_.data() + static_cast<std::size_t>(iz[3]) * fnx_;
            double* o = w_fine_.row(K);
            for (int I = 0; I < fnx_; ++I)
                o[I] = wz[0] * t0[I] + wz[1] * t1[I] + wz[2] * t2[I] + wz[3] * t3[I];
        }
        if (dual_->base.z.periodic())
            for (int I = 0; I < fnx_; ++I) w_fine_(I, fnz_) = w_fine_(I, 0);
    }

    void fill_ghosts(Field& phi, const ScalarSpec& spec) const { fill_scalar_ghosts(phi, spec.bcs); }

    /// d(phi)/dt on the fine interior: WENO convection (x then z) plus the
    /// central diffusion term. Ghosts of phi must be filled.
    void scalar_rhs(const Field& phi, const ScalarSpec& spec, Field& rhs) {
        convective_x(phi, rhs);
        convective_z(phi, rhs);
        if (spec.diffusivity > 0.0) diffusive_add(diff_x_, diff_z_, spec.diffusivity, phi, rhs);
    }

    /// RK3 advance of every scalar with the current (frozen) fine velocities.
    /// Ghost fills precede each stage evaluation; NaNs abort with the first
    /// offending cell and stage.
    void advance(double dt) {
        if (dt == 0.0) return;
        for (std::size_t s = 0; s < specs_.size(); ++s) {
            Field& phi = fields_[s];
            const ScalarSpec& sp = specs_[s];

            fill_ghosts(phi, sp);
            scalar_rhs(phi, sp, rhs_);
            for (int k = 0; k < fnz_; ++k) {
                const double* p = phi.row(k);
                const double* r = rhs_.row(k);
                double* o = stage1_.row(k);
                for (int i = 0; i < fnx_; ++i) o[i] = p[i] + dt * r[i];
            }
            check_finite(stage1_, sp.name, 1);

            fill_ghosts(stage1_, sp);
            scalar_rhs(stage1_, sp, rhs_);
            for (int k = 0; k < fnz_; ++k) {
                const double* p = phi.row(k);
                const double* s1 = stage1_.row(k);
                const double* r = rhs_.row(k);
                double* o = stage2_.row(k);
                for (int i = 0; i < fnx_; ++i)
                    o[i] = 0.75 * p[i] + 0.25 * s1[i] + 0.25 * dt * r[i];
            }
            check_finite(stage2_, sp.name, 2);

            fill_ghosts(stage2_, sp);
            scalar_rhs(stage2_, sp, rhs_);
            const double c13 = 1.0 / 3.0, c23 = 2.0 / 3.0;
            for (int k = 0; k < fnz_; ++k) {
                double* p = phi.row(k);
                const double* s2 = stage2_.row(k);
                const double* r = rhs_.row(k);
                for (int i = 0; i < fnx_; ++i)
                    p[i] = c13 * p[i] + c23 * s2[i] + c23 * dt * r[i];
            }
            check_finite(phi, sp.name, 3);
        }
    }

    /// Area-weighted subcell average onto base cells.
    void restrict_to_base(const Field& fine, Field& base) const {
        const int R = dual_->refine_factor;
        const Mesh1D& fx = dual_->fine.x;
        const Mesh1D& fz = dual_->fine.z;
        const Mesh1D& bx = dual_->base.x;
        const Mesh1D& bz = dual_->base.z;
        for (int k = 0; k < dual_->base.nz(); ++k) {
            for (int i = 0; i < dual_->base.nx(); ++i) {
                double acc = 0.0;
                for (int b = 0; b < R; ++b) {
                    const int K = k * R + b;
                    const double dzf = fz.spacing(K);
                    const double* r = fine.row(K);
                    for (int a = 0; a < R; ++a) {
                        const int I = i * R + a;
                        acc += r[I] * fx.spacing(I) * dzf;
                    }
                }
                base(i, k) = acc / (bx.spacing(i) * bz.spacing(k));
            }
        }
    }

    Field restrict_to_base(const Field& fine) const {
        Field base(dual_->base.nx(), dual_->base.nz());
        restrict_to_base(fine, base);
        return base;
    }

    /// Spatially integrated scalar over the fine interior.
    double total(const Field& fine) const {
        const Mesh1D& fx = dual_->fine.x;
        const Mesh1D& fz = dual_->fine.z;
        double acc = 0.0;
        for (int k = 0; k < fnz_; ++k) {
            const double dz = fz.spacing(k);
            const double* r = fine.row(k);
            double rowsum = 0.0;
            for (int i = 0; i < fnx_; ++i) rowsum += r[i] * fx.spacing(i);
            acc += rowsum * dz;
        }
        return acc;
    }

  private:
    void check_finite(const Field& f, const std::string& name, int stage) const {
        for (int k = 0; k < fnz_; ++k) {
            const double* r = f.row(k);
            double sum = 0.0;
            for (int i = 0; i < fnx_; ++i) sum += r[i];
            if (!std::isfinite(sum)) {
                for (int i = 0; i < fnx_; ++i)
                    if (!std::isfinite(r[i]))
                        throw SolverError("scalar '" + name + "' is not finite at cell (" +
                                          std::to_string(i) + ", " + std::to_string(k) +
                                          ") in RK3 stage " + std::to_string(stage));
            }
        }
    }

    void convective_x(const Field& phi, Field& rhs) {
        double* flux = flux_a_.data();
        for (int k = 0; k < fnz_; ++k) {
            const double* p = phi.row(k) - 3;
            const double* uf = u_fine_.row(k);
            convective_fluxes_line(tab_x_, variant_, p, uf, flux);
            double* o = rhs.row(k);
            for (int i = 0; i < fnx_; ++i)
                o[i] = (flux[i] - flux[i + 1]) * tab_x_.inv_spacing(i);
        }
    }

    template <WenoKind KIND, int RPOW>
    void convective_z_impl(const Field& phi, Field& rhs) {
        const bool pz = tab_z_.periodic();
        const double eps = variant_.epsilon;
        double* prev = flux_b_.data();
        double* cur = flux_c_.data();
        double* first = flux_a_.data(); // saved wrap row for periodic z
        for (int fk = 0; fk <= fnz_; ++fk) {
            if (pz && fk == fnz_) {
                for (int i = 0; i < fnx_; ++i) cur[i] = first[i];
            } else {
                const double* wrow = w_fine_.row(fk);
                const double* rm3 = phi.row(fk - 3);
                const double* rm2 = phi.row(fk - 2);
                const double* rm1 = phi.row(fk - 1);
                const double* r0 = phi.row(fk);
                const double* rp1 = phi.row(fk + 1);
                const double* rp2 = phi.row(fk + 2);
                const double* ap = tab_z_.plus(fk);
                const double* am = tab_z_.minus(fk);
                for (int i = 0; i < fnx_; ++i) {
                    const double wf = wrow[i];
                    cur[i] = (wf >= 0.0)
                                 ? wf * detail::weno_sided<KIND, RPOW, true>(ap, rm3[i], rm2[i],
                                                                             rm1[i], r0[i], rp1[i], eps)
                                 : wf * detail::weno_sided<KIND, RPOW, false>(am, rm2[i], rm1[i],
                                                                              r0[i], rp1[i], rp2[i], eps);
                }
                if (pz && fk == 0)
                    for (int i = 0; i < fnx_; ++i) first[i] = cur[i];
            }
            if (fk > 0) {
                const double inv = tab_z_.inv_spacing(fk - 1);
                double* o = rhs.row(fk - 1);
                for (int i = 0; i < fnx_; ++i) o[i] += (prev[i] - cur[i]) * inv;
            }
            std::swap(prev, cur);
        }
    }

    void convective_z(const Field& phi, Field& rhs) {
        switch (variant_.kind) {
        case WenoKind::LiuOsherChan:
            convective_z_impl<WenoKind::LiuOsherChan, 3>(phi, rhs);
            break;
        case WenoKind::JiangShu:
            if (variant_.power == 2) convective_z_impl<WenoKind::JiangShu, 2>(phi, rhs);
            else convective_z_impl<WenoKind::JiangShu, 3>(phi, rhs);
            break;
        case WenoKind::UpstreamCentral:
            convective_z_impl<WenoKind::UpstreamCentral, 3>(phi, rhs);
            break;
        }
    }

    const DualMesh* dual_;
    std::vector<ScalarSpec> specs_;
    SchemeVariant variant_;
    int fnx_, fnz_;
    FluxTable tab_x_, tab_z_;
    DiffusionTable diff_x_, diff_z_;
    std::vector<Field> fields_;
    Field u_fine_, w_fine_;
    Field stage1_, stage2_, rhs_;
    std::vector<double> tmp_u_, tmp_w_;
    std::vector<double> flux_a_, flux_b_, flux_c_;
};

} // namespace scatran
