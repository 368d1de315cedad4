#include "qbm/work.hpp"

#include "qbm/errors.hpp"
#include "qbm/fft.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>

namespace qbm {

namespace {

using cvec = std::vector<std::complex<double>>;

// trapezoid with third-order Gregory end corrections, O(dt^4) on smooth data
std::vector<double> gregory_weights(std::size_t m, double dt) {
    if (m < 6) throw ConfigError("work integrals need at least 7 grid nodes");
    std::vector<double> w(m + 1, dt);
    w[0] = w[m] = 3.0 / 8.0 * dt;
    w[1] = w[m - 1] = 7.0 / 6.0 * dt;
    w[2] = w[m - 2] = 23.0 / 24.0 * dt;
    return w;
}

// b_j = sum_k K_{|j-k|} a_k for j,k = 0..m via zero-padded FFT
std::vector<double> apply_symmetric_kernel(const std::vector<double>& a,
                                           const std::vector<double>& kern) {
    const std::size_t m = a.size() - 1;
    const std::size_t L = fft::next_pow2(3 * m + 2);
    cvec fa(L, 0.0), fk(L, 0.0);
    for (std::size_t j = 0; j <= m; ++j) fa[j] = a[j];
    for (std::size_t i = 0; i <= 2 * m; ++i)
        fk[i] = kern[i >= m ? i - m : m - i];
    fft::transform(fa, -1);
    fft::transform(fk, -1);
    for (std::size_t i = 0; i < L; ++i) fa[i] *= fk[i];
    fft::transform(fa, +1);
    std::vector<double> b(m + 1);
    for (std::size_t j = 0; j <= m; ++j)
        b[j] = fa[j + m].real() / static_cast<double>(L);
    return b;
}

// sum_{jk} a_j a_k K_{|j-k|}
double quadratic_form(const std::vector<double>& a, const std::vector<double>& kern) {
    const std::vector<double> b = apply_symmetric_kernel(a, kern);
    double q = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) q += a[j] * b[j];
    return q;
}

// causal convolution dt * sum_{k<=j} x_k y_{j-k} via zero-padded FFT
std::vector<double> conv_causal(const std::vector<double>& x,
                                const std::vector<double>& y, double dt) {
    const std::size_t n = x.size();
    const std::size_t L = fft::next_pow2(2 * n);
    cvec fx(L, 0.0), fy(L, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        fx[j] = x[j];
        fy[j] = y[j];
    }
    fft::transform(fx, -1);
    fft::transform(fy, -1);
    for (std::size_t i = 0; i < L; ++i) fx[i] *= fy[i];
    fft::transform(fx, +1);
    std::vector<double> out(n);
    for (std::size_t j = 0; j < n; ++j)
        out[j] = dt * fx[j].real() / static_cast<double>(L);
    return out;
}

// index of tau on the grid; the grid must land on it
std::size_t tau_index(const TimeGrid& grid, double tau) {
    const double r = tau / grid.dt;
    const auto m = static_cast<std::size_t>(std::llround(r));
    if (std::abs(static_cast<double>(m) * grid.dt - tau) > 1e-9 * std::max(tau, 1.0))
        throw ConfigError("time grid does not land on tau; build it with work_grid");
    if (m + 1 > grid.n) throw ConfigError("solve horizon is shorter than tau");
    return m;
}

std::vector<double> weighted_fdot(const Protocol& pr, const TimeGrid& grid,
                                  std::size_t m) {
    std::vector<double> a = gregory_weights(m, grid.dt);
    for (std::size_t j = 0; j <= m; ++j) a[j] *= pr.fdot(grid.t(j));
    return a;
}

// 2 dw sum'_k |drive_ft|^2 w^{2n} spec_k  (trapezoid, even integrand)
double spectral_moment(const StationaryCovariance& sc, const Protocol& pr,
                       std::size_t n2) {
    double s = 0.0;
    for (std::size_t k = 0; k < sc.omega.size(); ++k) {
        const double w = sc.omega[k];
        double pw = 1.0;
        for (std::size_t i = 0; i < n2; ++i) pw *= w * w;
        s += trapezoid_weight(k, sc.omega.size(), sc.domega) *
             std::norm(pr.drive_ft(w)) * pw * sc.sigma_w[k];
    }
    return 2.0 * s;
}

} // namespace

TimeGrid work_grid(const SpectralDensity& sd, double omega, double tau,
                   double extra) {
    if (!(tau > 0.0) || !(extra >= 0.0))
        throw ConfigError("work_grid needs tau > 0 and extra >= 0");
    const double dt0 = greens_dt(sd, omega, tau + extra);
    const auto m = static_cast<std::size_t>(std::ceil(tau / dt0));
    const double dt = tau / static_cast<double>(m);
    const auto n = static_cast<std::size_t>(std::ceil((tau + extra) / dt)) + 1;
    return TimeGrid{dt, n};
}

std::vector<double> mean_position(const GreensFunctions& gf, const Protocol& pr) {
    pr.validate();
    const std::size_t n = gf.grid.n;
    const double x_eq = pr.f(0.0) / (gf.mass * gf.omega * gf.omega);
    std::vector<double> df(n);
    for (std::size_t j = 0; j < n; ++j) df[j] = pr.f(gf.grid.t(j)) - pr.f(0.0);
    std::vector<double> x = conv_causal(gf.g, df, gf.grid.dt);
    for (double& v : x) v += x_eq;
    return x;
}

WorkStatistics work_statistics(const GreensFunctions& gf, const Protocol& pr,
                               double beta, double hbar) {
    pr.validate();
    if (!(beta > 0.0)) throw ConfigError("work statistics need beta > 0");
    if (!(hbar >= 0.0)) throw ConfigError("work statistics need hbar >= 0");
    const std::size_t m = tau_index(gf.grid, pr.tau);
    const double mw2 = gf.mass * gf.omega * gf.omega;

    WorkStatistics ws;
    ws.beta = beta;
    ws.hbar = hbar;
    const double fa = pr.f(0.0), fb = pr.f(pr.tau);
    ws.delta_f = -(fb * fb - fa * fa) / (2.0 * mw2);

    const std::vector<double> a = weighted_fdot(pr, gf.grid, m);
    const std::vector<double> h_lag(gf.h.begin(), gf.h.begin() + m + 1);
    ws.mean = ws.delta_f + quadratic_form(a, h_lag) / (2.0 * mw2);

    // independent mean through the g response
    const std::vector<double> x = mean_position(gf, pr);
    double mr = 0.0;
    for (std::size_t j = 0; j <= m; ++j) mr -= a[j] * x[j];
    ws.mean_response = mr;

    const StationaryCovariance sc = stationary_covariance(gf, beta, hbar);
    const std::vector<double> s_lag(sc.sigma_t.begin(), sc.sigma_t.begin() + m + 1);
    ws.variance = quadratic_form(a, s_lag);
    ws.variance_spectral =
        4.0 * M_PI * M_PI * spectral_moment(sc, pr, 0);

    ws.jarzynski_residual =
        std::expm1(beta * (0.5 * beta * ws.variance - ws.dissipated()));
    ws.crooks_beta_eff = 2.0 * ws.dissipated() / ws.variance;
    ws.mean_reverse = ws.mean - 2.0 * ws.delta_f;
    ws.variance_reverse = ws.variance;
    return ws;
}

double xcoth_series_coeff(std::size_t n) {
    // 2^{2n} B_{2n} / (2n)! with exact Bernoulli numbers through B_20
    static const double b2n[] = {1.0,
                                 1.0 / 6.0,
                                 -1.0 / 30.0,
                                 1.0 / 42.0,
                                 -1.0 / 30.0,
                                 5.0 / 66.0,
                                 -691.0 / 2730.0,
                                 7.0 / 6.0,
                                 -3617.0 / 510.0,
                                 43867.0 / 798.0,
                                 -174611.0 / 330.0};
    if (n > 10) throw ConfigError("xcoth series coefficients tabulated to n = 10");
    if (n == 0) return 1.0;
    return std::pow(2.0, 2.0 * static_cast<double>(n)) * b2n[n] /
           std::tgamma(2.0 * static_cast<double>(n) + 1.0);
}

std::vector<double> hightemp_variance_terms(const GreensFunctions& gf,
                                            const Protocol& pr, double beta,
                                            double hbar, std::size_t n_terms) {
    pr.validate();
    if (!(beta > 0.0) || !(hbar > 0.0))
        throw ConfigError("high-temperature expansion needs beta > 0, hbar > 0");
    tau_index(gf.grid, pr.tau);
    const StationaryCovariance cl = stationary_covariance(gf, beta, 0.0);
    const double fourpi2 = 4.0 * M_PI * M_PI;
    std::vector<double> terms(n_terms + 1);
    for (std::size_t n = 0; n <= n_terms; ++n) {
        const double x2n = std::pow(0.5 * beta * hbar, 2.0 * static_cast<double>(n));
        terms[n] = xcoth_series_coeff(n) * x2n * fourpi2 * spectral_moment(cl, pr, n);
    }
    return terms;
}

double lowtemp_coth(double x, std::size_t kmax) {
    if (!(x > 0.0)) throw NumericalError("low-temperature coth needs x > 0");
    double s = 1.0;
    for (std::size_t k = kmax; k >= 1; --k) s += 2.0 * std::exp(-2.0 * x * static_cast<double>(k));
    return s;
}

double lowtemp_variance(const GreensFunctions& gf, const Protocol& pr,
                        double beta, double hbar, std::size_t kmax) {
    pr.validate();
    if (!(beta > 0.0) || !(hbar > 0.0))
        throw ConfigError("low-temperature expansion needs beta > 0, hbar > 0");
    tau_index(gf.grid, pr.tau);
    const StationaryCovariance cl = stationary_covariance(gf, beta, 0.0);
    double s = 0.0;
    for (std::size_t k = 1; k < cl.omega.size(); ++k) { // x > 0 only; weight(0) = 0
        const double xarg = 0.5 * beta * hbar * cl.omega[k];
        s += trapezoid_weight(k, cl.omega.size(), cl.domega) *
             std::norm(pr.drive_ft(cl.omega[k])) * xarg * lowtemp_coth(xarg, kmax) *
             cl.sigma_w[k];
    }
    return 4.0 * M_PI * M_PI * 2.0 * s;
}

DriveRegime classify_regime(const Protocol& pr, double beta, double hbar) {
    pr.validate();
    if (!(beta > 0.0) || !(hbar >= 0.0))
        throw ConfigError("regime classification needs beta > 0, hbar >= 0");
    const double dw = M_PI / (32.0 * pr.tau);
    const auto nw = static_cast<std::size_t>(std::ceil(4000.0 / pr.tau / dw));
    std::vector<double> mag(nw + 1);
    double peak = 0.0;
    for (std::size_t k = 0; k <= nw; ++k) {
        mag[k] = std::abs(pr.drive_ft(static_cast<double>(k) * dw));
        peak = std::max(peak, mag[k]);
    }
    const double thresh = 1e-3 * peak;
    std::size_t lo = 0, hi = nw;
    while (lo < nw && mag[lo] < thresh) ++lo;
    while (hi > 0 && mag[hi] < thresh) --hi;
    DriveRegime r;
    r.omega_low = static_cast<double>(lo) * dw;
    r.omega_high = static_cast<double>(hi) * dw;
    if (hbar == 0.0 || beta * hbar * r.omega_high < 0.1)
        r.label = "classical";
    else if (beta * hbar * r.omega_low > 10.0)
        r.label = "quantum";
    else
        r.label = "crossover";
    return r;
}

} // namespace qbm
