#pragma once

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "scatran/errors.hpp"
#include "scatran/field.hpp"
#include "scatran/mesh.hpp"

namespace scatran {

enum class WenoKind { LiuOsherChan, JiangShu, UpstreamCentral };

/// Convection scheme selector. epsilon regularizes the weights; power is the
/// Jiang-Shu exponent r (2 or 3). UpstreamCentral is the linear fifth-order
/// limit obtained by forcing all smoothness indicators to zero.
struct SchemeVariant {
    WenoKind kind = WenoKind::LiuOsherChan;
    double epsilon = 1e-6;
    int power = 3;

    static SchemeVariant loc(double eps = 1e-6) { return {WenoKind::LiuOsherChan, eps, 3}; }
    static SchemeVariant js(double eps = 1e-6, int r = 3) { return {WenoKind::JiangShu, eps, r}; }
    static SchemeVariant central5() { return {WenoKind::UpstreamCentral, 1e-6, 3}; }

    void validate() const {
        if (kind != WenoKind::UpstreamCentral && !(epsilon > 0.0))
            throw ConfigError("scheme epsilon must be > 0");
        if (kind == WenoKind::JiangShu && power != 2 && power != 3)
            throw ConfigError("Jiang-Shu power must be 2 or 3");
    }
};

enum class FaceSide { Plus, Minus };

/// Five consecutive cell values with their center coordinates.
struct StencilValues {
    std::array<double, 5> value;
    std::array<double, 5> coord;
};

/// Modified quadratic Lagrange interpolation through (x0,q0),(x1,q1),(x2,q2)
/// evaluated at x, minus the smoothing correction
///   ((x1-x0) q2 - (x2-x0) q1 + (x2-x1) q0) / (12 (x2-x0)).
/// The correction equals h- h+ q''/24 and converts the point-value quadratic
/// into the flux-form reconstruction; on a uniform mesh the three corrected
/// stencils combine into the classic fifth-order upwind face value.
inline double lagrange_p(const std::array<double, 3>& q, const std::array<double, 3>& x, double at) {
    const double d01 = x[0] - x[1], d02 = x[0] - x[2], d12 = x[1] - x[2];
    if (d01 == 0.0 || d02 == 0.0 || d12 == 0.0)
        throw SolverError("lagrange_p: coincident stencil coordinates");
    const double l0 = (at - x[1]) * (at - x[2]) / (d01 * d02);
    const double l1 = (at - x[0]) * (at - x[2]) / (-d01 * d12);
    const double l2 = (at - x[0]) * (at - x[1]) / (d02 * d12);
    const double corr =
        ((x[1] - x[0]) * q[2] - (x[2] - x[0]) * q[1] + (x[2] - x[1]) * q[0]) / (12.0 * (x[2] - x[0]));
    return l0 * q[0] + l1 * q[1] + l2 * q[2] - corr;
}

/// Liu-Osher-Chan smoothness indicator over one 3-point stencil (a,b,c):
///   IS = 1/2 ((b-a)^2 + (c-b)^2) + (c - 2b + a)^2
inline double smoothness_loc(double a, double b, double c) {
    const double d1 = b - a, d2 = c - b;
    const double curv = d2 - d1;
    return 0.5 * (d1 * d1 + d2 * d2) + curv * curv;
}

/// Jiang-Shu smoothness indicators for the three stencils of a 5-point window.
inline std::array<double, 3> smoothness_js(const std::array<double, 5>& v) {
    const double c13 = 13.0 / 12.0;
    const double is0 = c13 * (v[0] - 2 * v[1] + v[2]) * (v[0] - 2 * v[1] + v[2]) +
                       0.25 * (v[0] - 4 * v[1] + 3 * v[2]) * (v[0] - 4 * v[1] + 3 * v[2]);
    const double is1 = c13 * (v[1] - 2 * v[2] + v[3]) * (v[1] - 2 * v[2] + v[3]) +
                       0.25 * (v[1] - v[3]) * (v[1] - v[3]);
    const double is2 = c13 * (v[2] - 2 * v[3] + v[4]) * (v[2] - 2 * v[3] + v[4]) +
                       0.25 * (3 * v[2] - 4 * v[3] + v[4]) * (3 * v[2] - 4 * v[3] + v[4]);
    return {is0, is1, is2};
}

struct WenoWeights {
    std::array<double, 3> raw;
    std::array<double, 3> normalized;
};

/// Raw and normalized convex-combination weights for the chosen variant.
/// UpstreamCentral is evaluated as the IS == 0 limit.
inline WenoWeights weno_weights(const SchemeVariant& v, std::array<double, 3> is, FaceSide side) {
    if (v.kind == WenoKind::UpstreamCentral) is = {0.0, 0.0, 0.0};
    std::array<double, 3> c{};
    switch (v.kind) {
    case WenoKind::LiuOsherChan:
    case WenoKind::UpstreamCentral:
        c = (side == FaceSide::Plus) ? std::array<double, 3>{1.0 / 12.0, 0.5, 0.25}
                                     : std::array<double, 3>{0.25, 0.5, 1.0 / 12.0};
        break;
    case WenoKind::JiangShu:
        c = (side == FaceSide::Plus) ? std::array<double, 3>{0.1, 0.6, 0.3}
                                     : std::array<double, 3>{0.3, 0.6, 0.1};
        break;
    }
    const int r = (v.kind == WenoKind::JiangShu) ? v.power : 3;
    WenoWeights w{};
    for (int k = 0; k < 3; ++k) {
        const double t = v.epsilon + is[static_cast<std::size_t>(k)];
        const double tp = (r == 3) ? t * t * t : t * t;
        w.raw[static_cast<std::size_t>(k)] = c[static_cast<std::size_t>(k)] / tp;
    }
    const double sum = w.raw[0] + w.raw[1] + w.raw[2];
    for (int k = 0; k < 3; ++k) w.normalized[static_cast<std::size_t>(k)] = w.raw[static_cast<std::size_t>(k)] / sum;
    return w;
}

/// R_i^+ (face x_{i+1/2}) or R_i^- (face x_{i-1/2}) from the 5-point stencil
/// centered on cell i: a convex combination of P_{i-1}, P_i, P_{i+1}.
inline double reconstruct_face(const SchemeVariant& v, const StencilValues& s, double face_x,
                               FaceSide side) {
    const double p0 = lagrange_p({s.value[0], s.value[1], s.value[2]}, {s.coord[0], s.coord[1], s.coord[2]}, face_x);
    const double p1 = lagrange_p({s.value[1], s.value[2], s.value[3]}, {s.coord[1], s.coord[2], s.coord[3]}, face_x);
    const double p2 = lagrange_p({s.value[2], s.value[3], s.value[4]}, {s.coord[2], s.coord[3], s.coord[4]}, face_x);
    std::array<double, 3> is{};
    if (v.kind == WenoKind::JiangShu) {
        is = smoothness_js(s.value);
    } else {
        is = {smoothness_loc(s.value[0], s.value[1], s.value[2]),
              smoothness_loc(s.value[1], s.value[2], s.value[3]),
              smoothness_loc(s.value[2], s.value[3], s.value[4])};
    }
    const auto w = weno_weights(v, is, side);
    return w.normalized[0] * p0 + w.normalized[1] * p1 + w.normalized[2] * p2;
}

struct RValues {
    double plus;  // R_i^+ at the cell's right face
    double minus; // R_i^- at the cell's left face
};

/// The four-case convective operator at one cell:
///   L_i = -(F_{i+1/2} - F_{i-1/2}) / (x_{i+1/2} - x_{i-1/2})
/// where each face flux takes the upwind reconstruction by the sign of the
/// face velocity (u = 0 takes the u > 0 branch; the flux vanishes anyway).
inline double convective_term(double u_left, double u_right, const RValues& cell_m1,
                              const RValues& cell, const RValues& cell_p1, double x_left,
                              double x_right) {
    const double f_right = u_right * (u_right >= 0.0 ? cell.plus : cell_p1.minus);
    const double f_left = u_left * (u_left >= 0.0 ? cell_m1.plus : cell.minus);
    return (f_left - f_right) / (x_right - x_left);
}

/// Precomputed per-face reconstruction coefficients for one mesh direction.
/// For face f (between cells f-1 and f):
///   plus[f]  folds P_{f-2}, P_{f-1}, P_f   evaluated at face f over cells f-3..f+1
///   minus[f] folds P_{f-1}, P_f,   P_{f+1} evaluated at face f over cells f-2..f+2
/// Each stencil contributes 3 coefficients (Eq.-style Lagrange value plus the
/// smoothing correction, both linear in the cell values).
class FluxTable {
  public:
    FluxTable() = default;
    explicit FluxTable(const Mesh1D& mesh) : n_(mesh.cells()), periodic_(mesh.periodic()) {
        plus_.resize(static_cast<std::size_t>(n_) + 1);
        minus_.resize(static_cast<std::size_t>(n_) + 1);
        inv_dx_.resize(static_cast<std::size_t>(n_));
        for (int i = 0; i < n_; ++i) inv_dx_[static_cast<std::size_t>(i)] = 1.0 / mesh.spacing(i);
        for (int f = 0; f <= n_; ++f) {
            const double xf = mesh.face(f);
            for (int s = 0; s < 3; ++s) {
                stencil_coeffs(mesh, f - 2 + s, xf, &plus_[static_cast<std::size_t>(f)][3 * s]);
                stencil_coeffs(mesh, f - 1 + s, xf, &minus_[static_cast<std::size_t>(f)][3 * s]);
            }
        }
    }

    int faces() const { return n_ + 1; }
    bool periodic() const { return periodic_; }
    double inv_spacing(int i) const { return inv_dx_[static_cast<std::size_t>(i)]; }
    const double* plus(int f) const { return plus_[static_cast<std::size_t>(f)].data(); }
    const double* minus(int f) const { return minus_[static_cast<std::size_t>(f)].data(); }

  private:
    // Coefficients of P_c(at) on cells (c-1, c, c+1) as a linear form.
    static void stencil_coeffs(const Mesh1D& mesh, int c, double at, double* out) {
        const double x0 = mesh.center(c - 1), x1 = mesh.center(c), x2 = mesh.center(c + 1);
        const double d01 = x0 - x1, d02 = x0 - x2, d12 = x1 - x2;
        const double denom = 12.0 * (x2 - x0);
        out[0] = (at - x1) * (at - x2) / (d01 * d02) - (x2 - x1) / denom;
        out[1] = (at - x0) * (at - x2) / (-d01 * d12) + (x2 - x0) / denom;
        out[2] = (at - x0) * (at - x1) / (d02 * d12) - (x1 - x0) / denom;
    }

    int n_ = 0;
    bool periodic_ = false;
    std::vector<std::array<double, 9>> plus_, minus_;
    std::vector<double> inv_dx_;
};

namespace detail {

/// Weighted face value from 9 folded stencil coefficients and the 5 upwind-
/// ordered cell values. `plus` selects the weight coefficients of R^+ vs R^-.
/// Branch-free in the sign so mixed-sign velocity fields do not stall on
/// mispredictions.
template <WenoKind KIND>
inline double weno_combine(const double* a, const double* v, bool plus, double eps, int r) {
    double c0, c2;
    if constexpr (KIND == WenoKind::LiuOsherChan) {
        c0 = plus ? 1.0 / 12.0 : 0.25;
        c2 = plus ? 0.25 : 1.0 / 12.0;
    } else {
        c0 = plus ? 0.1 : 0.3;
        c2 = plus ? 0.3 : 0.1;
    }
    const double c1 = (KIND == WenoKind::LiuOsherChan) ? 0.5 : 0.6;
    const double p0 = a[0] * v[0] + a[1] * v[1] + a[2] * v[2];
    const double p1 = a[3] * v[1] + a[4] * v[2] + a[5] * v[3];
    const double p2 = a[6] * v[2] + a[7] * v[3] + a[8] * v[4];
    if constexpr (KIND == WenoKind::UpstreamCentral) {
        return (c0 * p0 + c1 * p1 + c2 * p2) / (c0 + c1 + c2);
    } else {
        double is0, is1, is2;
        if constexpr (KIND == WenoKind::JiangShu) {
            const double c13 = 13.0 / 12.0;
            is0 = c13 * (v[0] - 2 * v[1] + v[2]) * (v[0] - 2 * v[1] + v[2]) +
                  0.25 * (v[0] - 4 * v[1] + 3 * v[2]) * (v[0] - 4 * v[1] + 3 * v[2]);
            is1 = c13 * (v[1] - 2 * v[2] + v[3]) * (v[1] - 2 * v[2] + v[3]) +
                  0.25 * (v[1] - v[3]) * (v[1] - v[3]);
            is2 = c13 * (v[2] - 2 * v[3] + v[4]) * (v[2] - 2 * v[3] + v[4]) +
                  0.25 * (3 * v[2] - 4 * v[3] + v[4]) * (3 * v[2] - 4 * v[3] + v[4]);
        } else {
            is0 = smoothness_loc(v[0], v[1], v[2]);
            is1 = smoothness_loc(v[1], v[2], v[3]);
            is2 = smoothness_loc(v[2], v[3], v[4]);
        }
        const double t0 = eps + is0, t1 = eps + is1, t2 = eps + is2;
        double u0, u1, u2;
        if (r == 3) {
            u0 = t0 * t0 * t0; u1 = t1 * t1 * t1; u2 = t2 * t2 * t2;
        } else {
            u0 = t0 * t0; u1 = t1 * t1; u2 = t2 * t2;
        }
        // a_k = c_k / u_k, normalized with a single divide
        const double q0 = c0 * u1 * u2;
        const double q1 = c1 * u0 * u2;
        const double q2 = c2 * u0 * u1;
        return (q0 * p0 + q1 * p1 + q2 * p2) / (q0 + q1 + q2);
    }
}

template <WenoKind KIND>
inline double face_flux(const FluxTable& tab, int f, double uf, const double* phi_m3, double eps,
                        int r) {
    // phi_m3[j] = phi(j - 3): cell c maps to phi_m3[c + 3].
    const bool plus = uf >= 0.0;
    const double* a = plus ? tab.plus(f) : tab.minus(f);
    const double* v = plus ? phi_m3 + f : phi_m3 + f + 1;
    return uf * weno_combine<KIND>(a, v, plus, eps, r);
}

/// Fully unrolled single-sided reconstruction with compile-time variant and
/// power, for the hot 2D sweeps.
template <WenoKind KIND, int RPOW, bool PLUS>
inline double weno_sided(const double* a, double v0, double v1, double v2, double v3, double v4,
                         double eps) {
    constexpr double c0 = (KIND == WenoKind::LiuOsherChan) ? (PLUS ? 1.0 / 12.0 : 0.25)
                                                           : (PLUS ? 0.1 : 0.3);
    constexpr double c1 = (KIND == WenoKind::LiuOsherChan) ? 0.5 : 0.6;
    constexpr double c2 = (KIND == WenoKind::LiuOsherChan) ? (PLUS ? 0.25 : 1.0 / 12.0)
                                                           : (PLUS ? 0.3 : 0.1);
    const double p0 = a[0] * v0 + a[1] * v1 + a[2] * v2;
    const double p1 = a[3] * v1 + a[4] * v2 + a[5] * v3;
    const double p2 = a[6] * v2 + a[7] * v3 + a[8] * v4;
    if constexpr (KIND == WenoKind::UpstreamCentral) {
        return (c0 * p0 + c1 * p1 + c2 * p2) / (c0 + c1 + c2);
    } else {
        double is0, is1, is2;
        if constexpr (KIND == WenoKind::JiangShu) {
            const double c13 = 13.0 / 12.0;
            is0 = c13 * (v0 - 2 * v1 + v2) * (v0 - 2 * v1 + v2) +
                  0.25 * (v0 - 4 * v1 + 3 * v2) * (v0 - 4 * v1 + 3 * v2);
            is1 = c13 * (v1 - 2 * v2 + v3) * (v1 - 2 * v2 + v3) + 0.25 * (v1 - v3) * (v1 - v3);
            is2 = c13 * (v2 - 2 * v3 + v4) * (v2 - 2 * v3 + v4) +
                  0.25 * (3 * v2 - 4 * v3 + v4) * (3 * v2 - 4 * v3 + v4);
        } else {
            is0 = smoothness_loc(v0, v1, v2);
            is1 = smoothness_loc(v1, v2, v3);
            is2 = smoothness_loc(v2, v3, v4);
        }
        const double t0 = eps + is0, t1 = eps + is1, t2 = eps + is2;
        double u0, u1, u2;
        if constexpr (RPOW == 3) {
            u0 = t0 * t0 * t0;
            u1 = t1 * t1 * t1;
            u2 = t2 * t2 * t2;
        } else {
            u0 = t0 * t0;
            u1 = t1 * t1;
            u2 = t2 * t2;
        }
        const double q0 = c0 * u1 * u2;
        const double q1 = c1 * u0 * u2;
        const double q2 = c2 * u0 * u1;
        return (q0 * p0 + q1 * p1 + q2 * p2) / (q0 + q1 + q2);
    }
}

} // namespace detail

/// Fluxes at faces 0..n from ghost-extended cell values. `phi_m3` points at
/// cell -3. On a periodic axis the wrap face reuses the flux of face 0 so
/// telescoping conservation is exact.
inline void convective_fluxes_line(const FluxTable& tab, const SchemeVariant& v,
                                   const double* phi_m3, const double* u_face, double* flux) {
    const int n = tab.faces() - 1;
    const int last = tab.periodic() ? n - 1 : n;
    switch (v.kind) {
    case WenoKind::LiuOsherChan:
        for (int f = 0; f <= last; ++f)
            flux[f] = detail::face_flux<WenoKind::LiuOsherChan>(tab, f, u_face[f], phi_m3, v.epsilon, 3);
        break;
    case WenoKind::JiangShu:
        for (int f = 0; f <= last; ++f)
            flux[f] = detail::face_flux<WenoKind::JiangShu>(tab, f, u_face[f], phi_m3, v.epsilon, v.power);
        break;
    case WenoKind::UpstreamCentral:
        for (int f = 0; f <= last; ++f)
            flux[f] = detail::face_flux<WenoKind::UpstreamCentral>(tab, f, u_face[f], phi_m3, v.epsilon, 3);
        break;
    }
    if (tab.periodic()) flux[n] = flux[0];
}

/// 1D convective right-hand side L_i = (F_{i-1/2} - F_{i+1/2}) / dx_i.
inline void convective_rhs_line(const FluxTable& tab, const SchemeVariant& v, const double* phi_m3,
                                const double* u_face, double* scratch_flux, double* rhs) {
    convective_fluxes_line(tab, v, phi_m3, u_face, scratch_flux);
    const int n = tab.faces() - 1;
    for (int i = 0; i < n; ++i)
        rhs[i] = (scratch_flux[i] - scratch_flux[i + 1]) * tab.inv_spacing(i);
}

} // namespace scatran
