#include "qbm/spectral_density.hpp"

#include "qbm/errors.hpp"
#include "qbm/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace qbm {

double xcoth(double x) {
    if (std::abs(x) < 1e-4) {
        const double x2 = x * x;
        return 1.0 + x2 / 3.0 - x2 * x2 / 45.0;
    }
    return x / std::tanh(x);
}

namespace {

// Large-frequency expansion of J/(M w) as sum a_m w^{-p_m}; used for the
// analytic tail beyond the integration band.
std::vector<quad::PowerTerm> damping_tail_terms(const SpectralDensity& sd) {
    const double L = sd.cutoff;
    std::vector<quad::PowerTerm> terms;
    if (sd.kind == BathKind::OhmicDrude) {
        const double A = 2.0 * sd.gamma0 * L * L / M_PI;
        terms.push_back({A, 2.0});
        terms.push_back({-A * L * L, 4.0});
        terms.push_back({A * L * L * L * L, 6.0});
    } else if (sd.kind == BathKind::PowerLaw) {
        const double s = sd.exponent;
        const double A = 2.0 * sd.gamma0 * std::pow(L, 3.0 - s) / M_PI;
        terms.push_back({A, 3.0 - s});
        terms.push_back({-A * L * L, 5.0 - s});
    }
    return terms;
}

// Tail expansion of the noise integrand (hbar/2) J coth(beta hbar w/2)
// (coth ~ 1 far beyond the thermal frequency). Leading Drude piece decays
// like 1/w, which is the log divergence at t = 0.
std::vector<quad::PowerTerm> noise_tail_terms(const SpectralDensity& sd, double hbar) {
    const double L = sd.cutoff;
    std::vector<quad::PowerTerm> terms;
    if (sd.kind == BathKind::OhmicDrude) {
        const double A = hbar * sd.mass * sd.gamma0 * L * L / M_PI;
        terms.push_back({A, 1.0});
        terms.push_back({-A * L * L, 3.0});
        terms.push_back({A * L * L * L * L, 5.0});
    } else if (sd.kind == BathKind::PowerLaw) {
        const double s = sd.exponent;
        const double A = hbar * sd.mass * sd.gamma0 * std::pow(L, 3.0 - s) / M_PI;
        terms.push_back({A, 2.0 - s});
        terms.push_back({-A * L * L, 4.0 - s});
    }
    return terms;
}

// Closed form of the power-law Laplace transform: partial fractions in w^2
// against int_0^inf w^{s-1}/(w^2+a^2) dw = (pi/2) a^{s-2}/sin(pi s/2) give
// gamma^(z) = g0 L^{3-s} z (L^{s-2} - z^{s-2}) / ((z^2 - L^2) sin(pi s/2)),
// which reduces to the Drude form g0 L/(z+L) at s = 1. The removable point
// z = L is crossed with a first-order expansion of the bracket.
template <typename S>
S powerlaw_laplace(const SpectralDensity& sd, S z) {
    const double s = sd.exponent, L = sd.cutoff;
    const double p = s - 2.0;
    const double pref = sd.gamma0 * std::pow(L, 3.0 - s) / std::sin(0.5 * M_PI * s);
    const S zp = std::pow(z, p);
    if (std::abs(z - L) < 1e-5 * L) {
        const double Lp = std::pow(L, p);
        const S bracket = -p * (Lp / L) - 0.5 * p * (p - 1.0) * (Lp / (L * L)) * (z - L);
        return pref * z * bracket / (z + L);
    }
    return pref * z * (std::pow(L, p) - zp) / ((z - L) * (z + L));
}

// Banded cosine transform of an integrand with a possibly integrable
// singularity at w = 0 (sub-Ohmic). Splits off [0, w1] for tanh-sinh.
template <typename F>
double banded_cos_transform(F&& f, double split, double X, double t) {
    const double w1 = std::min(split, X);
    double v = quad::ts([&](double w) { return f(w) * std::cos(w * t); }, 0.0, w1, 1e-12);
    if (w1 < X) v += quad::band_cos(f, w1, X, t);
    return v;
}

} // namespace

void SpectralDensity::validate() const {
    if (!(gamma0 >= 0.0) || !std::isfinite(gamma0))
        throw ConfigError("spectral density: gamma0 must be finite and non-negative");
    if (!(mass > 0.0)) throw ConfigError("spectral density: mass must be positive");
    if (kind != BathKind::OhmicNoCutoff && !(cutoff > 0.0))
        throw ConfigError("spectral density: cutoff must be positive for " + to_string(kind));
    if (kind == BathKind::PowerLaw && !(exponent > 0.0 && exponent < 2.0))
        throw ConfigError("spectral density: power-law exponent must lie in (0, 2)");
}

std::string to_string(BathKind kind) {
    switch (kind) {
        case BathKind::OhmicNoCutoff: return "ohmic";
        case BathKind::OhmicDrude: return "ohmic-drude";
        case BathKind::PowerLaw: return "power-law";
    }
    return "?";
}

double SpectralDensity::j(double omega) const {
    if (omega <= 0.0) return 0.0;
    const double pref = 2.0 * mass * gamma0 / M_PI;
    switch (kind) {
        case BathKind::OhmicNoCutoff: return pref * omega;
        case BathKind::OhmicDrude: {
            const double L2 = cutoff * cutoff;
            return pref * omega * L2 / (omega * omega + L2);
        }
        case BathKind::PowerLaw: {
            const double L2 = cutoff * cutoff;
            return pref * std::pow(cutoff, 1.0 - exponent) * std::pow(omega, exponent) * L2 /
                   (omega * omega + L2);
        }
    }
    return 0.0;
}

double SpectralDensity::j_over_omega(double omega) const {
    const double pref = 2.0 * mass * gamma0 / M_PI;
    if (omega <= 0.0) {
        // limit only finite for s >= 1; PowerLaw s < 1 diverges, s > 1 vanishes
        if (kind == BathKind::PowerLaw) {
            if (exponent > 1.0) return 0.0;
            if (exponent < 1.0) throw NumericalError("J/w diverges at w=0 for sub-Ohmic bath");
        }
        return pref;
    }
    return j(omega) / omega;
}

double design_band(const SpectralDensity& sd, double beta, double hbar, double omega_sys) {
    double scale = std::max(sd.cutoff, omega_sys);
    if (hbar > 0.0 && beta > 0.0) scale = std::max(scale, 1.0 / (beta * hbar));
    if (scale <= 0.0) scale = 1.0;
    return 50.0 * scale;
}

double damping_kernel(const SpectralDensity& sd, double t) {
    sd.validate();
    switch (sd.kind) {
        case BathKind::OhmicNoCutoff:
            throw NumericalError("local (delta) friction kernel has no pointwise value");
        case BathKind::OhmicDrude:
            return sd.gamma0 * sd.cutoff * std::exp(-sd.cutoff * std::abs(t));
        case BathKind::PowerLaw:
            return damping_kernel_quadrature(sd, t);
    }
    return 0.0;
}

double damping_kernel_quadrature(const SpectralDensity& sd, double t, double omega_max) {
    sd.validate();
    if (sd.local_kernel())
        throw NumericalError("local (delta) friction kernel has no pointwise value");
    double X = omega_max > 0.0 ? omega_max : design_band(sd, 0.0, 0.0);
    const double ta = std::abs(t);
    // push the band out until the by-parts tail series is usable
    if (ta > 0.0) X = std::max(X, 40.0 / ta);
    const double M = sd.mass;
    auto f = [&](double w) { return sd.j_over_omega(w) / M; };
    const double body = banded_cos_transform(f, std::min(sd.cutoff, X), X, ta);
    return body + quad::power_tail_cos(damping_tail_terms(sd), X, ta);
}

double damping_laplace(const SpectralDensity& sd, double s) {
    sd.validate();
    switch (sd.kind) {
        case BathKind::OhmicNoCutoff: return sd.gamma0;
        case BathKind::OhmicDrude: return sd.gamma0 * sd.cutoff / (s + sd.cutoff);
        case BathKind::PowerLaw:
            if (!(s > 0.0)) throw NumericalError("damping_laplace needs Re s > 0");
            return powerlaw_laplace(sd, s);
    }
    return 0.0;
}

std::complex<double> damping_laplace(const SpectralDensity& sd, std::complex<double> s) {
    sd.validate();
    using cplx = std::complex<double>;
    switch (sd.kind) {
        case BathKind::OhmicNoCutoff: return cplx(sd.gamma0, 0.0);
        case BathKind::OhmicDrude: return sd.gamma0 * sd.cutoff / (s + sd.cutoff);
        case BathKind::PowerLaw:
            if (!(s.real() > 0.0)) throw NumericalError("damping_laplace needs Re s > 0");
            return powerlaw_laplace(sd, s);
    }
    return cplx(0.0, 0.0);
}

double damping_spectrum(const SpectralDensity& sd, double omega) {
    sd.validate();
    const double w = std::abs(omega);
    return sd.j_over_omega(w) / (2.0 * sd.mass);
}

double noise_spectrum(const SpectralDensity& sd, double beta, double hbar, double omega) {
    sd.validate();
    if (!(beta > 0.0)) throw ConfigError("noise spectrum needs beta > 0");
    const double w = std::abs(omega);
    if (hbar == 0.0) return (2.0 * sd.mass / beta) * damping_spectrum(sd, w);
    // (hbar/2) J coth(beta hbar w / 2), written through x coth x to stay
    // finite at w = 0 where the coth pole cancels against J ~ w
    return sd.j_over_omega(w) / beta * xcoth(0.5 * beta * hbar * w);
}

double noise_kernel(const SpectralDensity& sd, double beta, double hbar, double t,
                    double omega_max) {
    sd.validate();
    if (!(beta > 0.0)) throw ConfigError("noise kernel needs beta > 0");
    if (hbar == 0.0) {
        if (sd.local_kernel())
            throw NumericalError("local (delta) noise kernel has no pointwise value");
        return (2.0 * sd.mass / beta) * damping_kernel(sd, t);
    }
    if (sd.local_kernel())
        throw NumericalError(
            "UV-divergent noise kernel: Ohmic bath without cutoff at hbar > 0");
    double X = omega_max > 0.0 ? omega_max : design_band(sd, beta, hbar);
    const double ta = std::abs(t);
    const bool banded_only = (omega_max > 0.0);
    if (!banded_only && ta > 0.0) X = std::max(X, 40.0 / ta);
    // spectrum (hbar/2) J coth(beta hbar w/2) written through x coth x, finite
    // at w = 0; the covariance is twice its one-sided cosine transform
    auto integrand = [&](double w) {
        return sd.j_over_omega(w) / beta * xcoth(0.5 * beta * hbar * w);
    };
    double v = banded_cos_transform(integrand, std::min(sd.cutoff, X), X, ta);
    // At t = 0 the tail sum keeps only the convergent (p > 1) pieces, so a
    // UV-divergent kernel (Drude at hbar > 0) comes back band-limited at X.
    if (!banded_only) v += quad::power_tail_cos(noise_tail_terms(sd, hbar), X, ta);
    return 2.0 * v;
}

} // namespace qbm
