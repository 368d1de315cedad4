#ifndef QBM_MC_HPP
#define QBM_MC_HPP

#include "qbm/greens.hpp"
#include "qbm/protocol.hpp"
#include "qbm/work.hpp"

#include <cstdint>
#include <vector>

namespace qbm {

// Trajectory sampler for the stationary Gaussian position process. The
// fluctuation spectrum is built from the Laplace-picture response (closed
// damping kernel transforms), not from the time-domain solver tables, so MC
// estimates cross independent numerics before they meet the exact moments.
//
// The process is synthesized as a cosine/sine series over midpoint
// frequencies w_k = (k+1/2) dw with dw = pi/(tau + T_mem); the series
// covariance matches the stationary one up to midpoint-rule error and
// periodization images suppressed by the kernel decay over T_mem. Work is
// linear in the path, so each mode's time integral is done in closed form
// through the protocol transform and every trajectory contributes an exact
// work sample; the only error left is statistical.
struct McModel {
    double beta = 1.0;
    double hbar = 0.0;
    double mass = 1.0;
    double omega = 1.0;
    double delta_f = 0.0;
    double work_det = 0.0;  // work along the mean path, Gregory quadrature
    double var_model = 0.0; // exact variance of the sampled work
    Protocol protocol;
    std::vector<double> omega_k, amp_k;      // mode frequencies, sqrt weights
    std::vector<double> couple_re, couple_im; // per-mode work couplings
    TimeGrid path_grid;                      // diagnostic grid over [0, tau]
    std::vector<double> mean_path;           // <x(t)> on path_grid
};

struct McOptions {
    double omega_max = 0.0; // spectrum truncation, 0 picks a default band
    std::size_t n_path = 512;
};

McModel mc_model(const SpectralDensity& sd, const GreensFunctions& gf,
                 const Protocol& pr, double beta, double hbar,
                 const McOptions& opt = {});

// Work sample and materialized path for realization #index. Both draw the
// same normal stream, so mc_path(index) is the trajectory whose exact work
// integral mc_work(index) returned.
double mc_work(const McModel& model, std::uint64_t seed, std::uint64_t index);
std::vector<double> mc_path(const McModel& model, std::uint64_t seed,
                            std::uint64_t index);

struct McResult {
    std::size_t n_traj = 0;
    double mean = 0.0, mean_se = 0.0;
    double variance = 0.0, variance_se = 0.0;
    double jarzynski_ratio = 0.0; // <exp(-beta(W - dF))> over the sample
    double jarzynski_se = 0.0;    // delete-1 jackknife
    double n_eff = 0.0;           // exponential-weight effective sample size
    bool heavy_tail = false;
    double delta_f = 0.0, beta = 1.0, hbar = 0.0;
    double residual() const { return jarzynski_ratio - 1.0; }
};

// Samples n_traj works; realization i is seeded by (seed, i) alone, so the
// result is bit-identical for any thread count. works, when given, receives
// the individual samples in realization order.
McResult mc_run(const McModel& model, std::size_t n_traj, std::uint64_t seed,
                int threads = 1, std::vector<double>* works = nullptr);

} // namespace qbm

#endif
