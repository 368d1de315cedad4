#ifndef QBM_DECHIST_HPP
#define QBM_DECHIST_HPP

#include "qbm/grid.hpp"
#include "qbm/kernels.hpp"
#include "qbm/protocol.hpp"

#include <string>
#include <vector>

namespace qbm {

// Pair of coarse-grained histories: mean U = (x' + x)/2, separation
// u = x' - x, and the per-node Gaussian resolution width sigma.
struct HistoryPair {
    TimeGrid grid;
    std::vector<double> mean_history;
    std::vector<double> separation;
    std::vector<double> sigma;
    void validate() const;
};

// Exponents of the Gaussian decoherence magnitude
//   |D| ~ exp{ -1/2 (LU)^T (nu + (2 s^2)^-1)^-1 (LU)
//              -1/2 u^T (nu^-1 + 2 s^2)^-1 u },
// with L the Langevin operator M d2/dt2 + 2M gamma* d/dt + M W^2 minus the
// drive. Kernel operators are discretized with dt-weighted quadrature; both
// quadratic forms reduce to one SPD solve with nu + (2 s^2)^-1 (the second
// through the Woodbury identity, which avoids inverting the bare noise
// matrix). Exponents are reported unnormalized, <= 0 by construction.
struct DecoherenceExponents {
    double diag_exponent = 0.0;
    double offdiag_exponent = 0.0;
};

DecoherenceExponents decoherence_exponent(const HistoryPair& hp,
                                          const KernelTable& kt, double omega,
                                          const Protocol* drive = nullptr);

// Single-bin model: suppression scale u* = sqrt(1/nu0 + 2 sigma^2) and
// off-diagonal exponent -u^2 / (2 u*^2).
double scalar_offdiag_exponent(double nu0, double sigma, double u);

// Resolvability of trajectories at accuracy sigma against the noise level.
// nu0 is the equal-time noise strength, the noise kernel integrated over one
// system period (the local kernel contributes its full delta weight).
struct ResolvabilityReport {
    double nu0 = 0.0;
    double sigma = 0.0;
    double u_star = 0.0;            // sqrt(1/nu0 + 2 sigma^2)
    double recommended_sigma = 0.0; // 1/sqrt(nu0)
    std::string regime;             // trajectories-valid | marginal | quantum-dominated
};

ResolvabilityReport resolvability_report(const KernelTable& kt, double omega,
                                         double sigma);

// Diagonal weights of a Gaussian-window partition spaced sigma apart applied
// to a centered Gaussian state of the given variance; windows k = -n_half ...
// n_half. Their sum approximates 1 up to window-overlap error.
std::vector<double> partition_weights(double variance, double sigma, int n_half);

} // namespace qbm

#endif
