#ifndef QBM_GRID_HPP
#define QBM_GRID_HPP

#include <cmath>
#include <cstddef>
#include <algorithm>

namespace qbm {

// Uniform time grid t_k = k*dt, k = 0..n-1. All kernel and Green's function
// tables live on such a grid; lag arithmetic then stays exact.
struct TimeGrid {
    double dt = 0.0;
    std::size_t n = 0;

    double t(std::size_t k) const { return dt * static_cast<double>(k); }
    double horizon() const { return n > 1 ? dt * static_cast<double>(n - 1) : 0.0; }

    static TimeGrid from_horizon(double T, double dt) {
        TimeGrid g;
        g.dt = dt;
        g.n = static_cast<std::size_t>(std::ceil(T / dt)) + 1;
        return g;
    }
};

// Trapezoid weight for index k on an n-point grid (dt factor included).
inline double trapezoid_weight(std::size_t k, std::size_t n, double dt) {
    return (k == 0 || k + 1 == n) ? 0.5 * dt : dt;
}

} // namespace qbm

#endif
