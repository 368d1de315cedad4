#include "qbm/thermal.hpp"

#include "qbm/errors.hpp"
#include "qbm/fft.hpp"
#include "qbm/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace qbm {

namespace {

void check_state_args(const SpectralDensity& sd, double omega, double beta,
                      double hbar) {
    sd.validate();
    if (!(omega > 0.0)) throw ConfigError("thermal state needs omega > 0");
    if (!(beta > 0.0)) throw ConfigError("thermal state needs beta > 0");
    if (!(hbar >= 0.0)) throw ConfigError("thermal state needs hbar >= 0");
}

// sum_{r>=1} u(r dnu) for u smooth on (0, inf) and decaying at least like
// 1/nu^2. Explicit terms cover the structured region, then the remainder is
// the midpoint-rule identity: integral from nu_{R+1/2} plus Euler-Maclaurin
// derivative corrections in the summation index.
template <typename F>
double matsubara_sum(F&& u, double dnu, double scale, std::size_t r_override) {
    const double want = std::ceil(8.0 * scale / dnu);
    std::size_t R = want > 2e5 ? static_cast<std::size_t>(2e5)
                               : std::max<std::size_t>(24, static_cast<std::size_t>(want));
    if (r_override > 0)
        R = std::min<std::size_t>(std::max<std::size_t>(r_override, 2), 200000);
    double acc = 0.0, c = 0.0;
    for (std::size_t r = 1; r <= R; ++r) {
        const double y = u(static_cast<double>(r) * dnu) - c;
        const double t = acc + y;
        c = (t - acc) - y;
        acc = t;
    }
    const double m = (static_cast<double>(R) + 0.5) * dnu;
    const double inf = std::numeric_limits<double>::infinity();
    double tail = quad::gk([&](double nu) { return u(nu); }, m, inf, 1e-13) / dnu;
    const double fm1 = u(m - dnu), fp1 = u(m + dnu);
    const double fmh = u(m - 0.5 * dnu), fph = u(m + 0.5 * dnu);
    const double d1 = (-fp1 + 8.0 * fph - 8.0 * fmh + fm1) / 6.0;
    const double d3 = 4.0 * (fp1 - 2.0 * fph + 2.0 * fmh - fm1);
    tail += d1 / 24.0 - 7.0 * d3 / 5760.0;
    return acc + tail;
}

double sum_scale(const SpectralDensity& sd, double omega) {
    return std::max({omega, sd.cutoff, sd.gamma0});
}

} // namespace

double thermal_sigma_xx(const SpectralDensity& sd, double omega, double beta,
                        double hbar, std::size_t terms) {
    check_state_args(sd, omega, beta, hbar);
    const double w2 = omega * omega;
    if (hbar == 0.0) return 1.0 / (beta * sd.mass * w2);
    const double dnu = 2.0 * M_PI / (beta * hbar);
    auto u = [&](double nu) {
        return 1.0 / (w2 + nu * nu + 2.0 * nu * damping_laplace(sd, nu));
    };
    const double s = matsubara_sum(u, dnu, sum_scale(sd, omega), terms);
    return (1.0 / w2 + 2.0 * s) / (sd.mass * beta);
}

double thermal_sigma_pp(const SpectralDensity& sd, double omega, double beta,
                        double hbar, std::size_t terms) {
    check_state_args(sd, omega, beta, hbar);
    if (hbar == 0.0) return sd.mass / beta;
    if (sd.local_kernel())
        throw NumericalError("sigma_pp is UV-divergent without a cutoff");
    const double w2 = omega * omega;
    const double dnu = 2.0 * M_PI / (beta * hbar);
    auto u = [&](double nu) {
        const double twog = 2.0 * nu * damping_laplace(sd, nu);
        return (w2 + twog) / (w2 + nu * nu + twog);
    };
    const double s = matsubara_sum(u, dnu, sum_scale(sd, omega), terms);
    return sd.mass * (1.0 + 2.0 * s) / beta;
}

double dressed_free_energy(const SpectralDensity& sd, double omega, double beta,
                           double hbar, std::size_t terms) {
    check_state_args(sd, omega, beta, hbar);
    if (hbar == 0.0)
        throw ConfigError("dressed_free_energy needs hbar > 0; protocol free "
                          "energy differences have their own closed form");
    if (sd.local_kernel())
        throw NumericalError("free energy is UV-divergent without a cutoff");
    const double w2 = omega * omega;
    const double dnu = 2.0 * M_PI / (beta * hbar);
    auto term = [&](double nu) {
        const double twog = 2.0 * nu * damping_laplace(sd, nu);
        return std::log1p((w2 + twog) / (nu * nu));
    };
    const double s = matsubara_sum(term, dnu, sum_scale(sd, omega), terms);
    return (std::log(beta * hbar * omega) + s) / beta;
}

StationaryCovariance stationary_covariance(const GreensFunctions& gf,
                                           double beta, double hbar) {
    if (!(beta > 0.0)) throw ConfigError("stationary covariance needs beta > 0");
    if (!(hbar >= 0.0)) throw ConfigError("stationary covariance needs hbar >= 0");
    const std::size_t n = gf.grid.n;
    if (n < 3 || gf.h.size() != n)
        throw ConfigError("stationary covariance needs a solved h table");
    const double dt = gf.grid.dt;
    const double mw2 = gf.mass * gf.omega * gf.omega;

    StationaryCovariance sc;
    sc.grid = gf.grid;
    sc.domega = M_PI / (static_cast<double>(n - 1) * dt);

    // h~_e(w_k), the even-extension Fourier transform of h
    std::vector<double> he = fft::dct1(gf.h);
    const double fscale = dt / (2.0 * M_PI);
    sc.omega.resize(n);
    sc.sigma_w.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        sc.omega[k] = static_cast<double>(k) * sc.domega;
        const double weight =
            (2.0 / beta) * (hbar > 0.0 ? xcoth(0.5 * beta * hbar * sc.omega[k]) : 1.0);
        sc.sigma_w[k] = weight * fscale * he[k] / (2.0 * mw2);
    }

    if (hbar == 0.0) {
        // classical lag table straight from the relaxation function
        sc.sigma_t.resize(n);
        for (std::size_t j = 0; j < n; ++j) sc.sigma_t[j] = gf.h[j] / (beta * mw2);
        return sc;
    }
    sc.sigma_t = fft::dct1(sc.sigma_w);
    for (double& v : sc.sigma_t) v *= sc.domega;
    return sc;
}

} // namespace qbm
