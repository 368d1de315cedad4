#ifndef QBM_SPECTRAL_DENSITY_HPP
#define QBM_SPECTRAL_DENSITY_HPP

#include <complex>
#include <string>

namespace qbm {

// Bath spectral density J(w) for a harmonic oscillator bilinearly coupled to
// a continuum of modes. gamma0 sets the friction scale so that the Ohmic
// family gives J = (2 M gamma0 / pi) w below the cutoff.
enum class BathKind {
    OhmicNoCutoff, // J = (2 M g0/pi) w; memory kernel is a delta ("local")
    OhmicDrude,    // J = (2 M g0/pi) w L^2/(w^2+L^2)
    PowerLaw       // J = (2 M g0/pi) L^{1-s} w^s L^2/(w^2+L^2), s in (0,2)
};

struct SpectralDensity {
    BathKind kind = BathKind::OhmicDrude;
    double gamma0 = 0.0;
    double cutoff = 0.0;   // Drude frequency Lambda; ignored for OhmicNoCutoff
    double exponent = 1.0; // power-law s
    double mass = 1.0;     // system mass M entering the normalization of J

    double j(double omega) const;           // J(omega) for omega >= 0
    double j_over_omega(double omega) const; // J/omega, finite omega->0 limit where it exists
    bool local_kernel() const { return kind == BathKind::OhmicNoCutoff; }
    void validate() const; // throws ConfigError on bad parameter ranges
};

std::string to_string(BathKind kind);

// x coth(x), smooth through x = 0; the thermal occupation weight everywhere.
double xcoth(double x);

// Friction kernel gamma(t) = (1/M) int_0^inf (J/w) cos(w t) dw.
// OhmicDrude has the closed form g0 L exp(-L|t|), which is what this returns;
// PowerLaw goes through quadrature. OhmicNoCutoff is 2 g0 delta(t) and has no
// pointwise value (NumericalError).
double damping_kernel(const SpectralDensity& sd, double t);

// Same quantity forced through the banded quadrature + analytic tail route,
// regardless of closed forms. omega_max <= 0 selects the design band.
double damping_kernel_quadrature(const SpectralDensity& sd, double t, double omega_max = 0.0);

// One-sided Laplace transform of gamma; Drude: g0 L/(s+L), no cutoff: g0.
double damping_laplace(const SpectralDensity& sd, double s);
std::complex<double> damping_laplace(const SpectralDensity& sd, std::complex<double> s);

// Fourier picture with the convention f~(w) = (1/2pi) int f(t) e^{iwt} dt,
// so damping_spectrum(w) = J(|w|)/(2 M |w|).
double damping_spectrum(const SpectralDensity& sd, double omega);

// Noise covariance spectrum <xi xi>~(w). For hbar > 0 this is
// (hbar/2) J(|w|) coth(beta hbar |w|/2)  (the quantum FDR partner of
// damping_spectrum); at hbar = 0 it degenerates to (2M/beta) damping_spectrum.
// The hbar factor of the covariance is folded in so both regimes return the
// actual <xi xi> spectrum.
double noise_spectrum(const SpectralDensity& sd, double beta, double hbar, double omega);

// Noise covariance kernel <xi(t) xi(0)>. Band-limited to [0, omega_max]
// (omega_max <= 0 selects the design band) with an asymptotic tail correction
// for the convergent tail pieces. The Drude value at t = 0 with hbar > 0 is
// log-divergent in the true continuum; its divergent 1/w tail piece is then
// cut at the band, which is the regularization used throughout.
double noise_kernel(const SpectralDensity& sd, double beta, double hbar, double t,
                    double omega_max = 0.0);

// Design integration band 50 max(Lambda, omega_sys, 1/(beta hbar)).
double design_band(const SpectralDensity& sd, double beta, double hbar, double omega_sys = 0.0);

} // namespace qbm

#endif
