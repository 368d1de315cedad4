#include "qbm/kernels.hpp"

#include "qbm/errors.hpp"
#include "qbm/fft.hpp"
#include "qbm/quadrature.hpp"

#include <cmath>

namespace qbm {

namespace {

double lerp_even(const std::vector<double>& table, double dt, double t) {
    const double ta = std::abs(t);
    const double x = ta / dt;
    const auto k = static_cast<std::size_t>(x);
    if (k + 1 >= table.size()) return 0.0;
    const double f = x - static_cast<double>(k);
    return table[k] * (1.0 - f) + table[k + 1] * f;
}

// Shared midpoint-rule inverse cosine transform: time table of
// 2 int_0^{pi/dt} S(w) cos(w t_j) dw from spectrum values at w_k = (k+1/2) dw.
std::vector<double> spectrum_to_time(const std::vector<double>& spectrum, double domega) {
    std::vector<double> out = fft::dct2(spectrum);
    for (double& v : out) v *= domega;
    return out;
}

// Euler-transformed alternating sum_{m>=1} (-1)^{m+1} (m + c)^{-p}, |c| < 1.
double alt_eta(double p, double c) {
    constexpr int N = 48;
    double s[N];
    double acc = 0.0, sign = 1.0;
    for (int m = 1; m <= N; ++m) {
        acc += sign * std::pow(static_cast<double>(m) + c, -p);
        s[m - 1] = acc;
        sign = -sign;
    }
    for (int len = N - 1; len > 0; --len)
        for (int i = 0; i < len; ++i) s[i] = 0.5 * (s[i] + s[i + 1]);
    return s[0];
}

// One power component of a kernel's large-t decay, K(t) ~ b t^{-p}.
struct IrTerm {
    double b;
    double p;
};

// Midpoint sampling in frequency periodizes the kernel: by Poisson summation
// the table equals sum_m (-1)^m C(t - 2mT). For kernels with power-law decay
// (power-law baths) the folded images are not negligible; this evaluates
// sum_{m>=1} (-1)^{m+1} [C_ir(2mT - t) + C_ir(2mT + t)] from the asymptotic
// form C_ir(t) = sum_q b_q t^{-p_q}, so it can be added back per node.
double alias_images(const std::vector<IrTerm>& ir, double two_T, double t) {
    const double u = t / two_T;
    double v = 0.0;
    for (const auto& m : ir)
        v += m.b * std::pow(two_T, -m.p) * (alt_eta(m.p, -u) + alt_eta(m.p, u));
    return v;
}

// Large-t asymptotics of 2 int_0^inf S(w) cos(wt) dw from the small-w
// expansion S(w) = sum_q a_q w^{p_q - 1}: each power contributes
// 2 a_q Gamma(p_q) cos(pi p_q / 2) t^{-p_q}.
std::vector<IrTerm> cosine_ir_terms(const std::vector<IrTerm>& spectrum_powers) {
    std::vector<IrTerm> ir;
    for (const auto& m : spectrum_powers)
        ir.push_back({2.0 * m.b * std::tgamma(m.p) * std::cos(0.5 * M_PI * m.p), m.p});
    return ir;
}

// Small-w expansion of the friction spectrum of a power-law bath,
// gamma~(w) = (g0/pi) L^{1-s} w^{s-1} L^2/(w^2+L^2).
std::vector<IrTerm> powerlaw_gamma_ir(const SpectralDensity& sd) {
    const double s = sd.exponent, L = sd.cutoff;
    const double a = sd.gamma0 / M_PI * std::pow(L, 1.0 - s);
    return cosine_ir_terms({{a, s}, {-a / (L * L), s + 2.0}, {a / std::pow(L, 4.0), s + 4.0}});
}

// Same for the noise spectrum (2M/beta) gamma~(w) x coth(x), x = beta hbar w/2.
std::vector<IrTerm> powerlaw_nu_ir(const SpectralDensity& sd, double beta, double hbar) {
    const double s = sd.exponent, L = sd.cutoff;
    const double a = 2.0 * sd.mass / beta * sd.gamma0 / M_PI * std::pow(L, 1.0 - s);
    const double e2 = 0.25 * beta * beta * hbar * hbar; // (beta hbar/2)^2
    const double L2 = L * L;
    return cosine_ir_terms({{a, s},
                            {a * (e2 / 3.0 - 1.0 / L2), s + 2.0},
                            {a * (1.0 / (L2 * L2) - e2 / (3.0 * L2) - e2 * e2 / 45.0), s + 4.0}});
}

} // namespace

double KernelTable::gamma_at(double t) const {
    if (local) throw NumericalError("local (delta) friction kernel has no pointwise value");
    return lerp_even(gamma, grid.dt, t);
}

double KernelTable::nu_at(double t) const {
    if (local) throw NumericalError("local (delta) noise kernel has no pointwise value");
    return lerp_even(nu, grid.dt, t);
}

double KernelTable::fdr_violation() const {
    double scale = 0.0;
    for (double v : nu_ft) scale = std::max(scale, std::abs(v));
    if (scale == 0.0) return 0.0;
    double worst = 0.0;
    for (std::size_t k = 0; k < omega.size(); ++k) {
        const double w = omega[k];
        double ideal;
        if (hbar == 0.0) {
            ideal = (2.0 * sd.mass / beta) * gamma_ft[k];
        } else {
            const double x = 0.5 * beta * hbar * w;
            ideal = sd.mass * hbar * w / std::tanh(x) * gamma_ft[k];
        }
        worst = std::max(worst, std::abs(nu_ft[k] - ideal));
    }
    return worst / scale;
}

KernelTable make_kernel_table(const SpectralDensity& sd, double beta, double hbar,
                              const TimeGrid& grid) {
    sd.validate();
    if (!(beta > 0.0)) throw ConfigError("kernel table needs beta > 0");
    if (hbar < 0.0) throw ConfigError("kernel table needs hbar >= 0");
    if (grid.n < 2 || !(grid.dt > 0.0)) throw ConfigError("kernel table needs a real time grid");

    KernelTable kt;
    kt.grid = grid;
    kt.beta = beta;
    kt.hbar = hbar;
    kt.sd = sd;

    const std::size_t n = grid.n;
    const double domega = M_PI / (static_cast<double>(n) * grid.dt);
    kt.omega.resize(n);
    kt.gamma_ft.resize(n);
    kt.nu_ft.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double w = (static_cast<double>(k) + 0.5) * domega;
        kt.omega[k] = w;
        kt.gamma_ft[k] = damping_spectrum(sd, w);
        kt.nu_ft[k] = noise_spectrum(sd, beta, hbar, w);
    }

    if (sd.local_kernel()) {
        if (hbar > 0.0)
            throw NumericalError(
                "UV-divergent kernel table: Ohmic bath without cutoff at hbar > 0");
        kt.local = true;
        kt.gamma_delta = 2.0 * sd.gamma0;
        kt.nu_delta = (2.0 * sd.mass / beta) * kt.gamma_delta;
        return kt;
    }

    const double two_T = 2.0 * static_cast<double>(n) * grid.dt; // alias period 2 pi/domega

    kt.gamma.resize(n);
    if (sd.kind == BathKind::OhmicDrude) {
        for (std::size_t j = 0; j < n; ++j)
            kt.gamma[j] = sd.gamma0 * sd.cutoff * std::exp(-sd.cutoff * grid.t(j));
    } else {
        // Midpoint transform of the banded spectrum, plus the analytic tail
        // beyond Nyquist and the folded alias images, restores continuum
        // accuracy; the first nodes, where the tail series has not yet turned
        // asymptotic, go through direct quadrature.
        kt.gamma = spectrum_to_time(kt.gamma_ft, domega);
        const double X = kt.nyquist();
        const double s = sd.exponent, L = sd.cutoff;
        const double A = 2.0 * sd.gamma0 * std::pow(L, 3.0 - s) / M_PI;
        const std::vector<quad::PowerTerm> uv{{A, 3.0 - s}, {-A * L * L, 5.0 - s}};
        const std::vector<IrTerm> ir = powerlaw_gamma_ir(sd);
        const std::size_t j0 = std::min<std::size_t>(n, 32);
        for (std::size_t j = j0; j < n; ++j)
            kt.gamma[j] += quad::power_tail_cos(uv, X, grid.t(j)) +
                           alias_images(ir, two_T, grid.t(j));
        for (std::size_t j = 0; j < j0; ++j)
            kt.gamma[j] = damping_kernel_quadrature(sd, grid.t(j));
    }

    if (hbar == 0.0) {
        kt.nu.resize(n);
        for (std::size_t j = 0; j < n; ++j) kt.nu[j] = (2.0 * sd.mass / beta) * kt.gamma[j];
    } else {
        kt.nu = spectrum_to_time(kt.nu_ft, domega);
        if (sd.kind == BathKind::PowerLaw) {
            const std::vector<IrTerm> ir = powerlaw_nu_ir(sd, beta, hbar);
            for (std::size_t j = 0; j < n; ++j) kt.nu[j] += alias_images(ir, two_T, grid.t(j));
        }
    }
    return kt;
}

} // namespace qbm
