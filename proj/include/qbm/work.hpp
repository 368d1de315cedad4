#ifndef QBM_WORK_HPP
#define QBM_WORK_HPP

#include "qbm/greens.hpp"
#include "qbm/protocol.hpp"
#include "qbm/spectral_density.hpp"
#include "qbm/thermal.hpp"

#include <string>
#include <vector>

namespace qbm {

// Time grid whose spacing divides tau exactly (so work integrals end on a
// node) and whose horizon extends extra beyond tau for covariance decay.
TimeGrid work_grid(const SpectralDensity& sd, double omega, double tau,
                   double extra);

// Driven mean position <x(t)> over the full grid, starting from equilibrium
// at f(0):  <x> = f(0)/(M W^2) + int_0^t g(u) [f(t-u) - f(0)] du.
std::vector<double> mean_position(const GreensFunctions& gf, const Protocol& pr);

// Exact Gaussian work statistics of the driven oscillator. Work is linear in
// the Gaussian position process, so its distribution is Gaussian and the
// fluctuation theorems reduce to moment identities:
//   <e^{-beta W}> e^{beta dF} - 1 = expm1(beta (beta sigma^2/2 - (mean - dF)))
//   Crooks slope  = 2 (mean - dF) / sigma^2   (= beta iff the theorem holds).
// The mean is computed twice, through the h quadratic form and through the g
// convolution; the variance twice, in the lag and frequency domains.
struct WorkStatistics {
    double beta = 0.0, hbar = 0.0;
    double delta_f = 0.0;
    double mean = 0.0;
    double mean_response = 0.0;
    double variance = 0.0;
    double variance_spectral = 0.0;
    double jarzynski_residual = 0.0;
    double crooks_beta_eff = 0.0;
    double mean_reverse = 0.0;     // mean - 2 delta_f, exact under reversal
    double variance_reverse = 0.0; // variance, exact under reversal

    double dissipated() const { return mean - delta_f; }
};

WorkStatistics work_statistics(const GreensFunctions& gf, const Protocol& pr,
                               double beta, double hbar);

// x coth x = sum_{n>=0} c_n x^{2n}; c_n = 2^{2n} B_{2n}/(2n)!, exact n <= 10
double xcoth_series_coeff(std::size_t n);

// High-temperature decomposition of the work variance,
//   sigma_W^2 = terms[0] + sum_{n>=1} terms[n],
// terms[0] the classical variance and terms[n] the c_n (beta hbar w/2)^{2n}
// spectral moment. Valid when the drive band satisfies beta hbar w < pi.
std::vector<double> hightemp_variance_terms(const GreensFunctions& gf,
                                            const Protocol& pr, double beta,
                                            double hbar, std::size_t n_terms);

// coth truncated to its low-temperature exponential series
double lowtemp_coth(double x, std::size_t kmax);

// work variance with the coth weight replaced by the truncated form; faithful
// for drives whose band sits at beta hbar w >> 1
double lowtemp_variance(const GreensFunctions& gf, const Protocol& pr,
                        double beta, double hbar, std::size_t kmax);

// Frequency band carrying the drive, |drive_ft| >= 1e-3 of its peak, and the
// regime call: "classical" when beta hbar w_high < 0.1, "quantum" when
// beta hbar w_low > 10, otherwise "crossover".
struct DriveRegime {
    double omega_low = 0.0;
    double omega_high = 0.0;
    std::string label;
};

DriveRegime classify_regime(const Protocol& pr, double beta, double hbar);

} // namespace qbm

#endif
