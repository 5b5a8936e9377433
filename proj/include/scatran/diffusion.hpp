#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <vector>

#include "scatran/errors.hpp"
#include "scatran/field.hpp"
#include "scatran/mesh.hpp"

namespace scatran {

/// Fourth-order central second derivative on a uniform spacing h:
///   (-q_{i+2} + 16 q_{i+1} - 30 q_i + 16 q_{i-1} - q_{i-2}) / (12 h^2)
inline double uniform_second_derivative(const std::array<double, 5>& q, double h) {
    return (-q[4] + 16.0 * q[3] - 30.0 * q[2] + 16.0 * q[1] - q[0]) / (12.0 * h * h);
}

/// Finite-difference weights of the m-th derivative at x0 over arbitrary nodes
/// (Fornberg's recursion, equivalent to differentiating the Lagrange
/// interpolating polynomial).
inline void fd_weights(double x0, const double* nodes, int nnodes, int order, double* out) {
    const int n = nnodes - 1;
    const int m = order;
    std::vector<double> c(static_cast<std::size_t>(nnodes) * (m + 1), 0.0);
    auto C = [&](int i, int k) -> double& { return c[static_cast<std::size_t>(i) * (m + 1) + k]; };
    double c1 = 1.0;
    double c4 = nodes[0] - x0;
    C(0, 0) = 1.0;
    for (int i = 1; i <= n; ++i) {
        const int mn = std::min(i, m);
        double c2 = 1.0;
        const double c5 = c4;
        c4 = nodes[i] - x0;
        for (int j = 0; j < i; ++j) {
            const double c3 = nodes[i] - nodes[j];
            if (c3 == 0.0) throw SolverError("fd_weights: coincident nodes");
            c2 *= c3;
            if (j == i - 1) {
                for (int k = mn; k >= 1; --k)
                    C(i, k) = c1 * (k * C(i - 1, k - 1) - c5 * C(i - 1, k)) / c2;
                C(i, 0) = -c1 * c5 * C(i - 1, 0) / c2;
            }
            for (int k = mn; k >= 1; --k) C(j, k) = (c4 * C(j, k) - k * C(j, k - 1)) / c3;
            C(j, 0) = c4 * C(j, 0) / c3;
        }
        c1 = c2;
    }
    for (int i = 0; i <= n; ++i) out[i] = C(i, m);
}

/// Seven-point second-derivative coefficients on a nonuniform stencil: the
/// five-point fourth-order formula is applied on virtual equispaced points
/// around `at`, each virtual value taken from the degree-6 Lagrange
/// interpolation through the seven real centers. Exact for polynomials up to
/// degree 5 and identical to the uniform formula when the centers are
/// equispaced. `h` is the virtual spacing; when omitted it defaults to the
/// mean local center gap.
inline std::array<double, 7> nonuniform_stencil(const std::array<double, 7>& centers, double at,
                                                double h = 0.0) {
    for (int i = 0; i < 6; ++i)
        if (!(centers[static_cast<std::size_t>(i)] < centers[static_cast<std::size_t>(i + 1)]))
            throw SolverError("nonuniform_stencil: centers must be strictly increasing");
    if (h <= 0.0) h = 0.5 * (centers[4] - centers[2]);
    const std::array<double, 5> w5{-1.0, 16.0, -30.0, 16.0, -1.0};
    const double scale = 1.0 / (12.0 * h * h);
    std::array<double, 7> out{};
    std::array<double, 7> lw{};
    for (int m = -2; m <= 2; ++m) {
        fd_weights(at + m * h, centers.data(), 7, 0, lw.data());
        const double f = w5[static_cast<std::size_t>(m + 2)] * scale;
        for (int j = 0; j < 7; ++j) out[static_cast<std::size_t>(j)] += f * lw[static_cast<std::size_t>(j)];
    }
    return out;
}

/// Per-position 7-point second-derivative coefficients along one direction.
/// Uniform directions use the 5-point fourth-order pattern (zero-padded to 7);
/// stretched ones get Lagrange-derived coefficients over the local 7 points.
class DiffusionTable {
  public:
    DiffusionTable() = default;

    /// coord(i) must be valid for i in [-3, m+2]. `width` supplies the local
    /// spacing entering the 12 h^2 denominator (defaults to the mean gap).
    DiffusionTable(int m, bool uniform, const std::function<double(int)>& coord,
                   const std::function<double(int)>& width = {})
        : m_(m) {
        coeff_.resize(static_cast<std::size_t>(m));
        for (int p = 0; p < m; ++p) {
            auto& c = coeff_[static_cast<std::size_t>(p)];
            const double h = width ? width(p) : 0.5 * (coord(p + 1) - coord(p - 1));
            if (uniform) {
                const double s = 1.0 / (12.0 * h * h);
                c = {0.0, -s, 16.0 * s, -30.0 * s, 16.0 * s, -s, 0.0};
            } else {
                std::array<double, 7> xs{};
                for (int j = 0; j < 7; ++j) xs[static_cast<std::size_t>(j)] = coord(p + j - 3);
                c = nonuniform_stencil(xs, coord(p), h);
            }
        }
    }

    static DiffusionTable for_centers(const Mesh1D& mesh) {
        return DiffusionTable(
            mesh.cells(), mesh.uniform(), [&mesh](int i) { return mesh.center(i); },
            [&mesh](int i) { return mesh.spacing(i); });
    }
    /// Positions at faces 0..count-1 (count = cells()+1 for a wall axis,
    /// cells() for a periodic one where the wrap face is dropped).
    static DiffusionTable for_faces(const Mesh1D& mesh, int count) {
        return DiffusionTable(count, mesh.uniform(), [&mesh](int i) { return mesh.face(i); });
    }

    int size() const { return m_; }
    const double* coeffs(int p) const { return coeff_[static_cast<std::size_t>(p)].data(); }

    /// out[p] = sum_j c[p][j] q(p + j - 3); q_m3 points at position -3.
    void apply_line(const double* q_m3, double* out) const {
        for (int p = 0; p < m_; ++p) {
            const double* c = coeff_[static_cast<std::size_t>(p)].data();
            const double* q = q_m3 + p;
            out[p] = c[0] * q[0] + c[1] * q[1] + c[2] * q[2] + c[3] * q[3] + c[4] * q[4] +
                     c[5] * q[5] + c[6] * q[6];
        }
    }

  private:
    int m_ = 0;
    std::vector<std::array<double, 7>> coeff_;
};

/// rhs += D (d2/dx2 + d2/dz2) q over the interior; ghosts must be filled.
inline void diffusive_add(const DiffusionTable& tx, const DiffusionTable& tz, double diffusivity,
                          const Field& q, Field& rhs) {
    const int nx = q.nx(), nz = q.nz();
    for (int k = 0; k < nz; ++k) {
        const double* cz = tz.coeffs(k);
        const double* r0 = q.row(k - 3);
        const double* r1 = q.row(k - 2);
        const double* r2 = q.row(k - 1);
        const double* r3 = q.row(k);
        const double* r4 = q.row(k + 1);
        const double* r5 = q.row(k + 2);
        const double* r6 = q.row(k + 3);
        double* out = rhs.row(k);
        for (int i = 0; i < nx; ++i) {
            const double* cx = tx.coeffs(i);
            const double* qx = r3 + i - 3;
            const double lx = cx[0] * qx[0] + cx[1] * qx[1] + cx[2] * qx[2] + cx[3] * qx[3] +
                              cx[4] * qx[4] + cx[5] * qx[5] + cx[6] * qx[6];
            const double lz = cz[0] * r0[i] + cz[1] * r1[i] + cz[2] * r2[i] + cz[3] * r3[i] +
                              cz[4] * r4[i] + cz[5] * r5[i] + cz[6] * r6[i];
            out[i] += diffusivity * (lx + lz);
        }
    }
}

/// D * Laplacian as a fresh field (ghosts of q must be filled).
inline Field diffusive_term(const DiffusionTable& tx, const DiffusionTable& tz, double diffusivity,
                            const Field& q) {
    Field out(q.nx(), q.nz(), q.location(), 0.0);
    diffusive_add(tx, tz, diffusivity, q, out);
    return out;
}

} // namespace scatran
