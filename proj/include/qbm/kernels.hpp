#ifndef QBM_KERNELS_HPP
#define QBM_KERNELS_HPP

#include "qbm/grid.hpp"
#include "qbm/spectral_density.hpp"

#include <cstddef>
#include <vector>

namespace qbm {

// Friction and noise kernels sampled on a uniform time grid, plus the matching
// spectra on the midpoint frequency grid w_k = (k+1/2) pi/(n dt). The time
// tables for the friction kernel are continuum-accurate (closed form or
// quadrature-backed); quantum noise tables are band-limited at the Nyquist
// frequency pi/dt, which regularizes the UV-divergent equal-time value and is
// the same convention the trajectory sampler uses for noise synthesis.
struct KernelTable {
    TimeGrid grid;
    double beta = 0.0;
    double hbar = 0.0;
    SpectralDensity sd;

    // local = true means gamma(t) = gamma_delta * delta(t) (Ohmic, no cutoff);
    // the time tables are then empty and nu_delta carries the white-noise
    // strength nu(t) = nu_delta * delta(t).
    bool local = false;
    double gamma_delta = 0.0;
    double nu_delta = 0.0;

    std::vector<double> gamma; // gamma(k dt)
    std::vector<double> nu;    // <xi(k dt) xi(0)>

    std::vector<double> omega;    // midpoint frequency nodes
    std::vector<double> gamma_ft; // J(|w|)/(2M|w|) at the nodes
    std::vector<double> nu_ft;    // noise covariance spectrum at the nodes

    bool classical() const { return hbar == 0.0; }
    double nyquist() const { return 3.14159265358979323846 / grid.dt; }

    // Even-in-t lookups with linear interpolation; zero beyond the horizon.
    double gamma_at(double t) const;
    double nu_at(double t) const;

    // Largest relative deviation of nu_ft from M hbar w coth(beta hbar w/2)
    // gamma_ft (classical limit: (2M/beta) gamma_ft) across the band.
    double fdr_violation() const;
};

KernelTable make_kernel_table(const SpectralDensity& sd, double beta, double hbar,
                              const TimeGrid& grid);

} // namespace qbm

#endif
