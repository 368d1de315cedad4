#ifndef QBM_PROTOCOL_HPP
#define QBM_PROTOCOL_HPP

#include <complex>
#include <string>

namespace qbm {

// Time dependence of the external force f(t) pulling on the oscillator over
// the window [0, tau]. Outside the window the force is held at its endpoint
// value, so fdot vanishes there.
enum class ProtocolKind {
    Ramp,       // linear f0 -> f1
    Smoothstep, // quintic f0 -> f1 with fdot = fddot = 0 at both ends
    GaussPulse, // f0 + amp exp(-(t-center)^2 / 2 width^2)
    Sine        // f0 + amp sin(2 pi cycles t / tau + phase)
};

struct Protocol {
    ProtocolKind kind = ProtocolKind::Smoothstep;
    double tau = 1.0;
    double f0 = 0.0;
    double f1 = 1.0;     // endpoint value for Ramp and Smoothstep
    double amp = 1.0;    // GaussPulse and Sine amplitude
    double center = 0.5; // GaussPulse center
    double width = 0.1;  // GaussPulse standard deviation
    double cycles = 1.0; // Sine cycles over the window
    double phase = 0.0;  // Sine phase offset

    double f(double t) const;
    double fdot(double t) const;

    // (1/2pi) int_0^tau fdot(t) e^{iwt} dt in closed form. The GaussPulse
    // value is the infinite-window transform, which is why validate()
    // requires the pulse to sit at least 5 widths inside the window.
    std::complex<double> drive_ft(double w) const;

    // the protocol run backwards, f_R(t) = f(tau - t)
    Protocol reversed() const;

    void validate() const;
};

std::string to_string(ProtocolKind kind);

} // namespace qbm

#endif
