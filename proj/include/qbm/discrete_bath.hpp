#ifndef QBM_DISCRETE_BATH_HPP
#define QBM_DISCRETE_BATH_HPP

#include "qbm/protocol.hpp"
#include "qbm/spectral_density.hpp"

#include <cstdint>
#include <vector>

namespace qbm {

// Finite oscillator bath in translated coordinates,
//   H = p^2/2M + (M W^2/2) x^2 - f(t) x
//     + sum_n [ p_n^2/2m_n + (m_n w_n^2/2) (q_n - c_n x / (m_n w_n^2))^2 ],
// whose exact elimination gives the friction kernel
//   gamma(t) = (1/M) sum_n c_n^2/(m_n w_n^2) cos(w_n t).
// Midpoint binning c_n^2 = m_n w_n J(w_n) dw reproduces the continuum kernel
// for t well below the recurrence time 2 pi / dw. Everything here is
// classical; it is the independent oracle for the continuum work statistics.
struct DiscreteBath {
    double mass = 1.0;
    double omega = 1.0;
    double domega = 0.0;
    std::vector<double> omega_n, c_n, m_n;
    double t_rec() const; // 2 pi / dw, earliest kernel recurrence
};

DiscreteBath discretize_bath(const SpectralDensity& sd, double omega,
                             std::size_t n_modes, double omega_max);

// gamma(t) reconstructed from the discrete modes, for kernel-level checks.
double discrete_bath_kernel(const DiscreteBath& bath, double t);

// One classical trajectory: exact Gaussian draw from the coupled Gibbs state
// of H(0) (bare x marginal, bath conditionally centered on kappa_n x), then
// velocity Verlet. Returns the protocol work -int fdot x dt; energy_residual
// gets |H(tau) - H(0) - W|, which checks integrator and accumulator at once.
double discrete_bath_work(const DiscreteBath& bath, const Protocol& pr,
                          double beta, double dt, std::uint64_t seed,
                          std::uint64_t index, double* energy_residual = nullptr);

struct DiscreteBathStats {
    std::size_t n_runs = 0;
    double mean = 0.0, mean_se = 0.0;
    double variance = 0.0, variance_se = 0.0;
    double jarzynski_ratio = 0.0; // <exp(-beta (W - dF))>, dF from the bare well
    double jarzynski_se = 0.0;
    double log_ratio = 0.0, log_ratio_se = 0.0;
    double n_eff = 0.0;
    double energy_residual_max = 0.0;
    double t_rec = 0.0, dt = 0.0;
    double delta_f = 0.0, beta = 1.0;
};

// Ensemble of trajectories; run i is seeded by (seed, i), bit-identical for
// any thread count. dt <= 0 selects tau/steps with steps from 1/(20 w_max).
// works, when given, receives the individual samples in run order.
DiscreteBathStats discrete_bath_run(const DiscreteBath& bath, const Protocol& pr,
                                    double beta, std::size_t n_runs,
                                    std::uint64_t seed, double dt = 0.0,
                                    int threads = 1,
                                    std::vector<double>* works = nullptr);

} // namespace qbm

#endif
