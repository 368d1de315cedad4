#ifndef QBM_THERMAL_HPP
#define QBM_THERMAL_HPP

#include "qbm/greens.hpp"
#include "qbm/spectral_density.hpp"

#include <cstddef>
#include <vector>

namespace qbm {

// Equilibrium position variance of the dressed oscillator at inverse
// temperature beta. Classical (hbar = 0): equipartition 1/(beta M W^2)
// exactly, independent of the coupling. Quantum: Matsubara sum
//   (1/M beta) sum_r 1 / (W^2 + nu_r^2 + 2 |nu_r| gh(|nu_r|)),
// nu_r = 2 pi r / (beta hbar), gh the Laplace transform of the friction
// kernel, evaluated as an explicit sum plus an integral tail with midpoint
// derivative corrections. terms > 0 fixes the explicit term count; 0 picks
// it from the kernel scales.
double thermal_sigma_xx(const SpectralDensity& sd, double omega, double beta,
                        double hbar, std::size_t terms = 0);

// Equilibrium momentum variance, same route with numerator W^2 + 2 nu gh.
// UV-divergent without a cutoff, so OhmicNoCutoff with hbar > 0 throws.
double thermal_sigma_pp(const SpectralDensity& sd, double omega, double beta,
                        double hbar, std::size_t terms = 0);

// Free energy of the dressed oscillator relative to the bare bath,
//   (1/beta) [ln(beta hbar W) + sum_{r>=1} ln(1 + (W^2 + 2 nu_r gh)/nu_r^2)].
// Reduces to (1/beta) ln(2 sinh(beta hbar W / 2)) at zero coupling. Requires
// hbar > 0 and a cutoff (the sum is log-divergent for OhmicNoCutoff).
double dressed_free_energy(const SpectralDensity& sd, double omega, double beta,
                           double hbar, std::size_t terms = 0);

// Symmetrized stationary autocovariance sigma_xx(t) of the equilibrium
// position process and its spectrum. The spectrum comes from the even-time
// Fourier transform of the relaxation function h,
//   sigma~(w) = hbar w coth(beta hbar w / 2) h~_e(w) / (2 M W^2),
// sampled at w_k = pi k / horizon; the lag table is its cosine transform
// back. Classically sigma_xx(t) = h(|t|) / (beta M W^2) exactly and the lag
// table is filled from h directly.
struct StationaryCovariance {
    TimeGrid grid;               // lag grid of the underlying solve
    double domega = 0.0;         // spectral spacing pi / horizon
    std::vector<double> sigma_t; // sigma_xx at lags t_j >= 0
    std::vector<double> omega;   // frequency nodes k domega up to pi/dt
    std::vector<double> sigma_w; // spectrum at those nodes

    double sigma0() const { return sigma_t.empty() ? 0.0 : sigma_t.front(); }
};

StationaryCovariance stationary_covariance(const GreensFunctions& gf,
                                           double beta, double hbar);

} // namespace qbm

#endif
