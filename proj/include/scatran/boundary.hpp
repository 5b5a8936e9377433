#pragma once

#include "scatran/errors.hpp"
#include "scatran/field.hpp"
#include "scatran/mesh.hpp"

namespace scatran {

enum class Side { Left, Right, Bottom, Top };

enum class BcType { Periodic, Dirichlet, Neumann, FreeSlipVelocity };

struct BoundaryKind {
    BcType type = BcType::Periodic;
    double value = 0.0; // Dirichlet boundary value Q

    static BoundaryKind periodic() { return {BcType::Periodic, 0.0}; }
    static BoundaryKind dirichlet(double q) { return {BcType::Dirichlet, q}; }
    static BoundaryKind neumann() { return {BcType::Neumann, 0.0}; }
    static BoundaryKind free_slip() { return {BcType::FreeSlipVelocity, 0.0}; }
};

/// One kind per side for a cell-centered scalar.
struct ScalarBcs {
    BoundaryKind left, right, bottom, top;
};

/// Fill the three ghost layers on one side of a cell-centered scalar field.
/// Dirichlet extrapolates odd about the boundary-face value Q
/// (q_ghost = 2Q - q_mirror), Neumann mirrors, Periodic wraps.
/// The x sides only touch interior rows; the z sides sweep the ghost columns
/// as well, which fills the corners (x fill first, then z).
inline void fill_scalar_ghosts(Field& q, Side side, BoundaryKind kind) {
    const int nx = q.nx(), nz = q.nz();
    if (side == Side::Left || side == Side::Right) {
        for (int k = 0; k < nz; ++k) {
            for (int j = 1; j <= ghost_depth; ++j) {
                switch (kind.type) {
                case BcType::Periodic:
                    if (side == Side::Left) q(-j, k) = q(nx - j, k);
                    else q(nx - 1 + j, k) = q(j - 1, k);
                    break;
                case BcType::Dirichlet:
                    if (side == Side::Left) q(-j, k) = 2.0 * kind.value - q(j - 1, k);
                    else q(nx - 1 + j, k) = 2.0 * kind.value - q(nx - j, k);
                    break;
                case BcType::Neumann:
                    if (side == Side::Left) q(-j, k) = q(j - 1, k);
                    else q(nx - 1 + j, k) = q(nx - j, k);
                    break;
                case BcType::FreeSlipVelocity:
                    throw ConfigError("free-slip applies to velocity components, not scalars");
                }
            }
        }
    } else {
        for (int i = -ghost_depth; i < nx + ghost_depth; ++i) {
            for (int j = 1; j <= ghost_depth; ++j) {
                switch (kind.type) {
                case BcType::Periodic:
                    if (side == Side::Bottom) q(i, -j) = q(i, nz - j);
                    else q(i, nz - 1 + j) = q(i, j - 1);
                    break;
                case BcType::Dirichlet:
                    if (side == Side::Bottom) q(i, -j) = 2.0 * kind.value - q(i, j - 1);
                    else q(i, nz - 1 + j) = 2.0 * kind.value - q(i, nz - j);
                    break;
                case BcType::Neumann:
                    if (side == Side::Bottom) q(i, -j) = q(i, j - 1);
                    else q(i, nz - 1 + j) = q(i, nz - j);
                    break;
                case BcType::FreeSlipVelocity:
                    throw ConfigError("free-slip applies to velocity components, not scalars");
                }
            }
        }
    }
}

inline void fill_scalar_ghosts(Field& q, const ScalarBcs& bcs) {
    fill_scalar_ghosts(q, Side::Left, bcs.left);
    fill_scalar_ghosts(q, Side::Right, bcs.right);
    fill_scalar_ghosts(q, Side::Bottom, bcs.bottom);
    fill_scalar_ghosts(q, Side::Top, bcs.top);
}

/// Free-slip wall at a top/bottom boundary: the tangential component u is
/// mirrored (even), the wall-normal component w is odd-reflected about the
/// wall face and exactly zero on it. u is cell-centered in z, w face-located.
inline void fill_velocity_ghosts_freeslip(Field& u, Field& w, Side side) {
    if (side == Side::Left || side == Side::Right)
        throw ConfigError("free-slip fill implemented for top/bottom walls");
    const int nz = u.nz();     // u: z-centers
    const int nzf = w.nz() - 1; // w: z-faces 0..nzf
    const int nxu = u.nx(), nxw = w.nx();
    if (side == Side::Bottom) {
        for (int i = -ghost_depth; i < nxu + ghost_depth; ++i)
            for (int j = 1; j <= ghost_depth; ++j) u(i, -j) = u(i, j - 1);
        for (int i = -ghost_depth; i < nxw + ghost_depth; ++i) {
            w(i, 0) = 0.0;
            for (int j = 1; j <= ghost_depth; ++j) w(i, -j) = -w(i, j);
        }
    } else {
        for (int i = -ghost_depth; i < nxu + ghost_depth; ++i)
            for (int j = 1; j <= ghost_depth; ++j) u(i, nz - 1 + j) = u(i, nz - j);
        for (int i = -ghost_depth; i < nxw + ghost_depth; ++i) {
            w(i, nzf) = 0.0;
            for (int j = 1; j <= ghost_depth; ++j) w(i, nzf + j) = -w(i, nzf - j);
        }
    }
}

/// Periodic wrap in x for a face-located u field storing nx unique faces.
inline void fill_u_periodic_x(Field& u) {
    const int nx = u.nx();
    for (int k = -ghost_depth; k < u.nz() + ghost_depth; ++k)
        for (int j = 1; j <= ghost_depth; ++j) {
            u(-j, k) = u(nx - j, k);
            u(nx - 1 + j, k) = u(j - 1, k);
        }
}

/// Periodic wrap in x for a field with nx cell-centered columns (w, p, scalars).
inline void fill_center_periodic_x(Field& q) {
    const int nx = q.nx();
    for (int k = -ghost_depth; k < q.nz() + ghost_depth; ++k)
        for (int j = 1; j <= ghost_depth; ++j) {
            q(-j, k) = q(nx - j, k);
            q(nx - 1 + j, k) = q(j - 1, k);
        }
}

} // namespace scatran
