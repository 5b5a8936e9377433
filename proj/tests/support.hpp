#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

// Shared oracle helpers for the test suite. These stay independent of the
// library implementation paths they are used to check.
namespace testsupport {

// Deterministic counter-based generator (splitmix64), uniform in [0, 1).
inline double uniform01(std::uint64_t seed, std::uint64_t counter) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (counter + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    z = z ^ (z >> 31);
    return static_cast<double>(z >> 11) * 0x1.0p-53;
}

// Observed order from a dt-halving (Richardson) study of a one-step map.
inline double richardson_order(const std::function<double(double)>& error_of_dt, double dt) {
    const double e1 = error_of_dt(dt);
    const double e2 = error_of_dt(dt / 2.0);
    return std::log2(e1 / e2);
}

// Dense Gaussian elimination with partial pivoting; solves in place.
inline std::vector<double> solve_dense(std::vector<std::vector<double>> a, std::vector<double> b) {
    const int n = static_cast<int>(b.size());
    for (int col = 0; col < n; ++col) {
        int piv = col;
        for (int r = col + 1; r < n; ++r)
            if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
        std::swap(a[piv], a[col]);
        std::swap(b[piv], b[col]);
        for (int r = col + 1; r < n; ++r) {
            const double f = a[r][col] / a[col][col];
            for (int c = col; c < n; ++c) a[r][c] -= f * a[col][c];
            b[r] -= f * b[col];
        }
    }
    std::vector<double> x(static_cast<std::size_t>(n), 0.0);
    for (int r = n - 1; r >= 0; --r) {
        double s = b[r];
        for (int c = r + 1; c < n; ++c) s -= a[r][c] * x[static_cast<std::size_t>(c)];
        x[static_cast<std::size_t>(r)] = s / a[r][r];
    }
    return x;
}

// Quadratic polynomial through three points, evaluated at x (Vandermonde solve).
inline double quadratic_through(double x0, double y0, double x1, double y1, double x2, double y2,
                                double at) {
    std::vector<std::vector<double>> a = {
        {1.0, x0, x0 * x0}, {1.0, x1, x1 * x1}, {1.0, x2, x2 * x2}};
    auto c = solve_dense(a, {y0, y1, y2});
    return c[0] + c[1] * at + c[2] * at * at;
}

} // namespace testsupport
