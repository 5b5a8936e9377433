#pragma once

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "scatran/errors.hpp"
#include "scatran/field.hpp"

namespace scatran {

/// Where a tanh-stretched mesh concentrates its resolution.
/// `midpoint` is the mirror-about-the-middle construction (two stretched
/// halves joined at the domain center).
enum class Clustering { none, toward_end, toward_start, midpoint };

struct StretchSpec {
    double delta = 0.0; // stretching parameter, 0 = uniform
    int cells = 0;
    double x_begin = 0.0;
    double x_end = 1.0;
    Clustering clustering = Clustering::toward_end;
};

/// How ghost face coordinates are generated on each side.
enum class GhostRule { Periodic, Reflect };

/// 1D face/center coordinate set with a 3-deep ghost extension.
/// Interior faces are indexed 0..n (inclusive), centers 0..n-1; ghosts extend
/// three more faces/centers on each side. Faces are strictly increasing
/// including ghosts.
class Mesh1D {
  public:
    Mesh1D() = default;
    Mesh1D(std::vector<double> interior_faces, GhostRule left, GhostRule right,
           bool uniform, double delta = 0.0)
        : n_(static_cast<int>(interior_faces.size()) - 1), uniform_(uniform),
          delta_(delta), left_(left), right_(right) {
        if (n_ < 4) throw ConfigError("Mesh1D: need at least 4 cells, got " + std::to_string(n_));
        faces_.assign(static_cast<std::size_t>(n_) + 1 + 2 * ghost_depth, 0.0);
        for (int i = 0; i <= n_; ++i) face_ref(i) = interior_faces[static_cast<std::size_t>(i)];
        extend_ghost_faces();
        centers_.assign(static_cast<std::size_t>(n_) + 2 * ghost_depth, 0.0);
        for (int i = -ghost_depth; i < n_ + ghost_depth; ++i)
            centers_[static_cast<std::size_t>(i + ghost_depth)] = 0.5 * (face(i) + face(i + 1));
        for (int i = -ghost_depth; i < n_ + ghost_depth; ++i)
            if (!(face(i) < face(i + 1)))
                throw ConfigError("Mesh1D: non-monotone face coordinates at index " + std::to_string(i));
    }

    int cells() const { return n_; }
    bool uniform() const { return uniform_; }
    double delta() const { return delta_; }
    GhostRule left_rule() const { return left_; }
    GhostRule right_rule() const { return right_; }
    bool periodic() const { return left_ == GhostRule::Periodic; }

    /// Face i+1/2 sits between centers i and i+1; valid for i in [-3, n+3].
    double face(int i) const { return faces_[static_cast<std::size_t>(i + ghost_depth)]; }
    /// Cell center, valid for i in [-3, n+2].
    double center(int i) const { return centers_[static_cast<std::size_t>(i + ghost_depth)]; }
    /// Cell width face(i+1)-face(i), valid for i in [-3, n+2].
    double spacing(int i) const { return face(i + 1) - face(i); }

    double length() const { return face(n_) - face(0); }
    double min_spacing() const {
        double m = spacing(0);
        for (int i = 1; i < n_; ++i) m = std::min(m, spacing(i));
        return m;
    }

  private:
    double& face_ref(int i) { return faces_[static_cast<std::size_t>(i + ghost_depth)]; }

    void extend_ghost_faces() {
        const double L = face_ref(n_) - face_ref(0);
        for (int j = 1; j <= ghost_depth; ++j) {
            if (left_ == GhostRule::Periodic)
                face_ref(-j) = face_ref(0) - (L - (face_ref(n_ - j) - face_ref(0)));
            else
                face_ref(-j) = 2.0 * face_ref(0) - face_ref(j);
            if (right_ == GhostRule::Periodic)
                face_ref(n_ + j) = face_ref(n_) + (face_ref(j) - face_ref(0));
            else
                face_ref(n_ + j) = 2.0 * face_ref(n_) - face_ref(n_ - j);
        }
    }

    int n_ = 0;
    bool uniform_ = true;
    double delta_ = 0.0;
    GhostRule left_ = GhostRule::Reflect, right_ = GhostRule::Reflect;
    std::vector<double> faces_;
    std::vector<double> centers_;
};

inline Mesh1D build_uniform_mesh(int n, double x_begin, double x_end,
                                 GhostRule left = GhostRule::Reflect,
                                 GhostRule right = GhostRule::Reflect) {
    if (n < 4) throw ConfigError("build_uniform_mesh: need n >= 4, got " + std::to_string(n));
    if (!(x_begin < x_end)) throw ConfigError("build_uniform_mesh: x_begin must be < x_end");
    std::vector<double> f(static_cast<std::size_t>(n) + 1);
    for (int i = 0; i <= n; ++i)
        f[static_cast<std::size_t>(i)] = x_begin + (x_end - x_begin) * (static_cast<double>(i) / n);
    f[static_cast<std::size_t>(n)] = x_end;
    return Mesh1D(std::move(f), left, right, true, 0.0);
}

/// Tanh stretching of the face coordinates:
///   x(i) = (1 - tanh(x_phi)/tanh(x_1)) x(0) + tanh(x_phi)/tanh(x_1) x(n),
///   x_phi = (delta/2)(i/n), x_1 = delta/2,
/// which clusters faces toward x(n). `toward_start` flips the distribution,
/// `midpoint` builds one stretched half and mirrors it about the domain middle.
inline Mesh1D build_stretched_mesh(const StretchSpec& spec,
                                   GhostRule left = GhostRule::Reflect,
                                   GhostRule right = GhostRule::Reflect) {
    if (spec.delta < 0.0) throw ConfigError("build_stretched_mesh: delta must be >= 0");
    if (spec.cells < 4) throw ConfigError("build_stretched_mesh: need n >= 4");
    if (!(spec.x_begin < spec.x_end)) throw ConfigError("build_stretched_mesh: x_begin must be < x_end");
    if (spec.delta == 0.0)
        return build_uniform_mesh(spec.cells, spec.x_begin, spec.x_end, left, right);

    const int n = spec.cells;
    auto ratio = [&](double t) { return std::tanh(0.5 * spec.delta * t) / std::tanh(0.5 * spec.delta); };
    std::vector<double> f(static_cast<std::size_t>(n) + 1);

    switch (spec.clustering) {
    case Clustering::none:
        return build_uniform_mesh(n, spec.x_begin, spec.x_end, left, right);
    case Clustering::toward_end:
        for (int i = 0; i <= n; ++i) {
            const double r = ratio(static_cast<double>(i) / n);
            f[static_cast<std::size_t>(i)] = (1.0 - r) * spec.x_begin + r * spec.x_end;
        }
        break;
    case Clustering::toward_start:
        for (int i = 0; i <= n; ++i) {
            const double r = ratio(static_cast<double>(n - i) / n);
            f[static_cast<std::size_t>(i)] = (1.0 - r) * spec.x_end + r * spec.x_begin;
        }
        break;
    case Clustering::midpoint: {
        if (n % 2 != 0) throw ConfigError("build_stretched_mesh: mirrored mesh needs an even cell count");
        const int half = n / 2;
        const double mid = 0.5 * (spec.x_begin + spec.x_end);
        for (int i = 0; i <= half; ++i) {
            const double r = std::tanh(0.5 * spec.delta * (static_cast<double>(i) / half)) /
                             std::tanh(0.5 * spec.delta);
            f[static_cast<std::size_t>(i)] = (1.0 - r) * spec.x_begin + r * mid;
        }
        for (int i = half + 1; i <= n; ++i)
            f[static_cast<std::size_t>(i)] = spec.x_begin + spec.x_end - f[static_cast<std::size_t>(n - i)];
        break;
    }
    }
    f[0] = spec.x_begin;
    f[static_cast<std::size_t>(n)] = spec.x_end;
    return Mesh1D(std::move(f), left, right, false, spec.delta);
}

/// Cell-centered scalars (p, phi, T) at (center, center); u at (face, center);
/// w at (center, face).
struct StaggeredGrid2D {
    Mesh1D x;
    Mesh1D z;
    int nx() const { return x.cells(); }
    int nz() const { return z.cells(); }
};

inline void lagrange4_weights(const std::array<double, 4>& xs, double t, std::array<double, 4>& w) {
    for (int a = 0; a < 4; ++a) {
        double p = 1.0;
        for (int b = 0; b < 4; ++b)
            if (b != a) p *= (t - xs[static_cast<std::size_t>(b)]) /
                             (xs[static_cast<std::size_t>(a)] - xs[static_cast<std::size_t>(b)]);
        w[static_cast<std::size_t>(a)] = p;
    }
}

/// One direction of a tensor-product 4-point Lagrange interpolation:
/// per target point, four source indices and weights. Indices reference the
/// source's interior numbering (periodic sources are wrapped, wall sides are
/// biased inward so no ghost values are needed).
struct InterpAxis {
    std::vector<std::array<int, 4>> index;
    std::vector<std::array<double, 4>> weight;
    std::size_t size() const { return index.size(); }
};

namespace detail {

/// Targets within a relative 1e-12 of a source point collapse to an exact
/// copy, so coincident dual-mesh locations (base faces, odd-R centers) are
/// reproduced bitwise.
inline void snap_coincident(const std::array<double, 4>& xs, double t, std::array<double, 4>& w) {
    const double tol = 1e-12 * (xs[3] - xs[0]);
    for (int a = 0; a < 4; ++a) {
        if (std::abs(t - xs[static_cast<std::size_t>(a)]) <= tol) {
            w = {0.0, 0.0, 0.0, 0.0};
            w[static_cast<std::size_t>(a)] = 1.0;
            return;
        }
    }
}

/// Build an InterpAxis from `m` interior source coordinates onto arbitrary
/// targets. For periodic axes the source pattern repeats with period `length`.
inline InterpAxis build_interp_axis(const std::vector<double>& src, const std::vector<double>& targets,
                                    bool periodic, double length) {
    const int m = static_cast<int>(src.size());
    InterpAxis ax;
    ax.index.resize(targets.size());
    ax.weight.resize(targets.size());
    for (std::size_t tpos = 0; tpos < targets.size(); ++tpos) {
        const double t = targets[tpos];
        // j = last source (<= t) in extended numbering
        int j;
        if (periodic) {
            // extended source e has coordinate src[wrap(e)] + floor-offset*length
            auto coord = [&](int e) {
                int w = ((e % m) + m) % m;
                return src[static_cast<std::size_t>(w)] + static_cast<double>((e - w) / m) * length;
            };
            j = 0;
            while (coord(j + 1) <= t) ++j;
            while (coord(j) > t) --j;
            int lo = j - 1;
            std::array<double, 4> xs{};
            for (int a = 0; a < 4; ++a) xs[static_cast<std::size_t>(a)] = coord(lo + a);
            lagrange4_weights(xs, t, ax.weight[tpos]);
            snap_coincident(xs, t, ax.weight[tpos]);
            for (int a = 0; a < 4; ++a)
                ax.index[tpos][static_cast<std::size_t>(a)] = (((lo + a) % m) + m) % m;
        } else {
            j = 0;
            while (j + 1 < m && src[static_cast<std::size_t>(j + 1)] <= t) ++j;
            int lo = j - 1;
            lo = std::max(0, std::min(lo, m - 4));
            std::array<double, 4> xs{};
            for (int a = 0; a < 4; ++a) xs[static_cast<std::size_t>(a)] = src[static_cast<std::size_t>(lo + a)];
            lagrange4_weights(xs, t, ax.weight[tpos]);
            snap_coincident(xs, t, ax.weight[tpos]);
            for (int a = 0; a < 4; ++a) ax.index[tpos][static_cast<std::size_t>(a)] = lo + a;
        }
    }
    return ax;
}

inline std::vector<double> interior_faces(const Mesh1D& m) {
    std::vector<double> v(static_cast<std::size_t>(m.cells()) + 1);
    for (int i = 0; i <= m.cells(); ++i) v[static_cast<std::size_t>(i)] = m.face(i);
    return v;
}

inline std::vector<double> interior_centers(const Mesh1D& m) {
    std::vector<double> v(static_cast<std::size_t>(m.cells()));
    for (int i = 0; i < m.cells(); ++i) v[static_cast<std::size_t>(i)] = m.center(i);
    return v;
}

/// For a periodic axis the u-velocity has cells()+0 unique faces; drop the
/// duplicated right-boundary face from the source list.
inline std::vector<double> unique_faces(const Mesh1D& m) {
    auto v = interior_faces(m);
    if (m.periodic()) v.pop_back();
    return v;
}

} // namespace detail

/// Base flow grid plus the scalar subgrid refined by an integer factor R.
/// Every base cell is split into R x R equal subcells, so fine faces include
/// every base face exactly. The interpolation stencils move base-grid face
/// velocities onto fine face locations (4-point Lagrange per direction).
struct DualMesh {
    StaggeredGrid2D base;
    int refine_factor = 1;
    StaggeredGrid2D fine;
    InterpAxis u_x; // fine x-faces      <- base x-faces
    InterpAxis u_z; // fine z-centers    <- base z-centers
    InterpAxis w_x; // fine x-centers    <- base x-centers
    InterpAxis w_z; // fine z-faces      <- base z-faces
};

namespace detail {

inline Mesh1D refine_mesh(const Mesh1D& base, int R) {
    const int n = base.cells();
    std::vector<double> f(static_cast<std::size_t>(n) * R + 1);
    for (int i = 0; i < n; ++i) {
        const double x0 = base.face(i);
        const double dx = base.spacing(i);
        for (int m = 0; m < R; ++m)
            f[static_cast<std::size_t>(i) * R + m] = x0 + (dx * m) / R;
    }
    f[static_cast<std::size_t>(n) * R] = base.face(n);
    return Mesh1D(std::move(f), base.left_rule(), base.right_rule(), base.uniform(), base.delta());
}

} // namespace detail

inline DualMesh refine_dual(const StaggeredGrid2D& base, int R) {
    if (R < 1 || R > 5)
        throw ConfigError("refine_dual: refinement factor must be in 1..5, got " + std::to_string(R));
    DualMesh d;
    d.base = base;
    d.refine_factor = R;
    d.fine = StaggeredGrid2D{detail::refine_mesh(base.x, R), detail::refine_mesh(base.z, R)};

    const bool px = base.x.periodic();
    const bool pz = base.z.periodic();
    const double Lx = base.x.length();
    const double Lz = base.z.length();

    d.u_x = detail::build_interp_axis(detail::unique_faces(base.x), detail::unique_faces(d.fine.x), px, Lx);
    d.u_z = detail::build_interp_axis(detail::interior_centers(base.z), detail::interior_centers(d.fine.z),
                                      pz, Lz);
    d.w_x = detail::build_interp_axis(detail::interior_centers(base.x), detail::interior_centers(d.fine.x),
                                      px, Lx);
    d.w_z = detail::build_interp_axis(detail::unique_faces(base.z), detail::unique_faces(d.fine.z), pz, Lz);
    return d;
}

} // namespace scatran
