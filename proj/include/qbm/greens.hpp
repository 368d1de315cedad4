#ifndef QBM_GREENS_HPP
#define QBM_GREENS_HPP

#include "qbm/grid.hpp"
#include "qbm/kernels.hpp"

#include <complex>
#include <vector>

namespace qbm {

// Homogeneous solutions of M v'' + 2M int_0^t gamma(t-u) v'(u) du + M W^2 v = 0:
// h starts from (1, 0), g from (0, 1/M). They obey h' = -M W^2 g and
// M g' = h - 2M (gamma * g), which the tests use as exactness probes.
struct GreensFunctions {
    TimeGrid grid;
    double mass = 1.0;
    double omega = 1.0;
    std::vector<double> h, hdot, g, gdot;
};

// Volterra integro-differential solve on the kernel table's grid (Heun steps
// with product-trapezoid memory, kernel support truncated at relative 1e-16).
// A local kernel dispatches to the closed Markovian forms.
GreensFunctions solve_greens(const KernelTable& kt, double omega);

// Closed forms for the memoryless kernel 2 g0 delta(t): damped oscillator
// with friction coefficient 2 g0, switching between under-, critically and
// overdamped branches at |g0 - W| = 1e-6 W.
GreensFunctions markovian_greens(double mass, double omega, double gamma0,
                                 const TimeGrid& grid);

// Laplace pictures g^(s) = (1/M)/(s^2 + 2 s gamma^(s) + W^2) and
// h^(s) = (s + 2 gamma^(s)) g^(s) M.
std::complex<double> greens_g_laplace(const SpectralDensity& sd, double omega,
                                      std::complex<double> s);
std::complex<double> greens_h_laplace(const SpectralDensity& sd, double omega,
                                      std::complex<double> s);

// Independent route to g: Bromwich contour at eps = 4/horizon, with the
// Markovian reference at gamma_ref = gamma^(W) subtracted so the remainder
// decays like |s|^-3 and the trapezoid/FFT inversion converges fast.
std::vector<double> bromwich_g(const SpectralDensity& sd, double omega, const TimeGrid& grid);

// Sup norms of the two identity residuals over the grid, normalized by M W^2
// (h' identity) and by 1 (g' identity carries units of h).
struct GreensResiduals {
    double hdot_identity = 0.0;
    double gdot_identity = 0.0;
};
GreensResiduals greens_identity_residuals(const GreensFunctions& gf, const KernelTable& kt);

// Step size targeting ~1e-6 solver accuracy: resolves both the oscillation
// and the kernel decay, then tightens by the Heun error model over the
// effective accumulation window min(T, 3/gamma_eff).
double greens_dt(const SpectralDensity& sd, double omega, double horizon);

} // namespace qbm

#endif
