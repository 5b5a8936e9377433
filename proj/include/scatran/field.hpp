#pragma once

#include <algorithm>
#include <cstddef>
#include <vector>

namespace scatran {

/// Staggering location of a field on a 2D grid.
enum class Location { Center, XFace, ZFace };

inline constexpr int ghost_depth = 3;

/// 2D array with a fixed 3-cell ghost frame. Interior indices run
/// i in [0, nx), k in [0, nz); ghosts extend to [-3, nx+3) x [-3, nz+3).
/// Storage is row-major with i contiguous, so x-direction sweeps are unit stride.
class Field {
  public:
    Field() = default;
    Field(int nx, int nz, Location loc = Location::Center, double init = 0.0)
        : nx_(nx), nz_(nz), loc_(loc), width_(nx + 2 * ghost_depth),
          data_((static_cast<std::size_t>(nx) + 2 * ghost_depth) *
                    (static_cast<std::size_t>(nz) + 2 * ghost_depth),
                init) {}

    int nx() const { return nx_; }
    int nz() const { return nz_; }
    Location location() const { return loc_; }

    double& operator()(int i, int k) { return data_[idx(i, k)]; }
    double operator()(int i, int k) const { return data_[idx(i, k)]; }

    double* row(int k) { return data_.data() + idx(0, k); }            // &f(0,k)
    const double* row(int k) const { return data_.data() + idx(0, k); }
    int row_stride() const { return width_; }

    void fill(double v) { std::fill(data_.begin(), data_.end(), v); }

    /// Interior min/max (ghosts excluded).
    std::pair<double, double> minmax() const {
        double lo = (*this)(0, 0), hi = lo;
        for (int k = 0; k < nz_; ++k) {
            const double* r = row(k);
            for (int i = 0; i < nx_; ++i) {
                lo = std::min(lo, r[i]);
                hi = std::max(hi, r[i]);
            }
        }
        return {lo, hi};
    }

    std::vector<double>& raw() { return data_; }
    const std::vector<double>& raw() const { return data_; }

  private:
    std::size_t idx(int i, int k) const {
        return static_cast<std::size_t>(k + ghost_depth) * width_ +
               static_cast<std::size_t>(i + ghost_depth);
    }

    int nx_ = 0, nz_ = 0;
    Location loc_ = Location::Center;
    int width_ = 0;
    std::vector<double> data_;
};

} // namespace scatran
