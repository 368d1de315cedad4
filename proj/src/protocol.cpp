#include "qbm/protocol.hpp"

#include "qbm/errors.hpp"

#include <algorithm>
#include <cmath>

namespace qbm {

using cplx = std::complex<double>;

namespace {

const cplx kI{0.0, 1.0};

// (e^z - 1)/z, series near 0
cplx expm1_over(cplx z) {
    if (std::abs(z) < 0.5) {
        cplx term = 1.0, sum = 1.0;
        for (int k = 1; k < 16; ++k) {
            term *= z / static_cast<double>(k + 1);
            sum += term;
        }
        return sum;
    }
    return (std::exp(z) - 1.0) / z;
}

// int_0^1 u^m e^{iau} du for m = 0..4; upward recursion is stable only for
// large |a|, otherwise the absolutely convergent power series
void moment_integrals(double a, cplx out[5]) {
    if (std::abs(a) < 8.0) {
        const cplx ia = kI * a;
        for (int m = 0; m <= 4; ++m) {
            cplx term = 1.0 / static_cast<double>(m + 1), sum = term;
            for (int k = 1; k < 64; ++k) {
                term *= ia * static_cast<double>(m + k) /
                        (static_cast<double>(k) * static_cast<double>(m + k + 1));
                sum += term;
                if (std::abs(term) < 1e-18 * std::abs(sum)) break;
            }
            out[m] = sum;
        }
        return;
    }
    const cplx ia = kI * a;
    const cplx ea = std::exp(ia);
    out[0] = (ea - 1.0) / ia;
    for (int m = 1; m <= 4; ++m)
        out[m] = (ea - static_cast<double>(m) * out[m - 1]) / ia;
}

} // namespace

double Protocol::f(double t) const {
    const double tc = std::clamp(t, 0.0, tau);
    switch (kind) {
    case ProtocolKind::Ramp:
        return f0 + (f1 - f0) * tc / tau;
    case ProtocolKind::Smoothstep: {
        const double u = tc / tau;
        return f0 + (f1 - f0) * u * u * u * (10.0 + u * (-15.0 + 6.0 * u));
    }
    case ProtocolKind::GaussPulse: {
        const double z = (tc - center) / width;
        return f0 + amp * std::exp(-0.5 * z * z);
    }
    case ProtocolKind::Sine:
        return f0 + amp * std::sin(2.0 * M_PI * cycles * tc / tau + phase);
    }
    throw ConfigError("unknown protocol kind");
}

double Protocol::fdot(double t) const {
    if (t < 0.0 || t > tau) return 0.0;
    switch (kind) {
    case ProtocolKind::Ramp:
        return (f1 - f0) / tau;
    case ProtocolKind::Smoothstep: {
        const double u = t / tau;
        const double v = u * (1.0 - u);
        return (f1 - f0) * 30.0 * v * v / tau;
    }
    case ProtocolKind::GaussPulse: {
        const double z = (t - center) / width;
        return -amp * z / width * std::exp(-0.5 * z * z);
    }
    case ProtocolKind::Sine: {
        const double wc = 2.0 * M_PI * cycles / tau;
        return amp * wc * std::cos(wc * t + phase);
    }
    }
    throw ConfigError("unknown protocol kind");
}

cplx Protocol::drive_ft(double w) const {
    const double twopi = 2.0 * M_PI;
    switch (kind) {
    case ProtocolKind::Ramp:
        // fdot is constant, so the transform is (df/2pi) (e^{iw tau}-1)/(iw tau)
        return (f1 - f0) / twopi * expm1_over(kI * w * tau);
    case ProtocolKind::Smoothstep: {
        cplx I[5];
        moment_integrals(w * tau, I);
        return (f1 - f0) / twopi * 30.0 * (I[2] - 2.0 * I[3] + I[4]);
    }
    case ProtocolKind::GaussPulse: {
        const double ws = w * width;
        return -kI * amp * width * w * std::exp(-0.5 * ws * ws) *
               std::exp(kI * w * center) / std::sqrt(twopi);
    }
    case ProtocolKind::Sine: {
        const double wc = 2.0 * M_PI * cycles / tau;
        const cplx ep = std::exp(kI * phase);
        const cplx ip = tau * expm1_over(kI * (w + wc) * tau);
        const cplx im = tau * expm1_over(kI * (w - wc) * tau);
        return amp * wc / (2.0 * twopi) * (ep * ip + std::conj(ep) * im);
    }
    }
    throw ConfigError("unknown protocol kind");
}

Protocol Protocol::reversed() const {
    Protocol r = *this;
    switch (kind) {
    case ProtocolKind::Ramp:
    case ProtocolKind::Smoothstep:
        std::swap(r.f0, r.f1);
        break;
    case ProtocolKind::GaussPulse:
        r.center = tau - center;
        break;
    case ProtocolKind::Sine:
        r.amp = -amp;
        r.phase = -(2.0 * M_PI * cycles + phase);
        break;
    }
    return r;
}

void Protocol::validate() const {
    if (!(tau > 0.0)) throw ConfigError("protocol needs tau > 0");
    if (!std::isfinite(f0) || !std::isfinite(f1) || !std::isfinite(amp))
        throw ConfigError("protocol levels must be finite");
    if (kind == ProtocolKind::GaussPulse) {
        if (!(width > 0.0)) throw ConfigError("gauss pulse needs width > 0");
        if (center - 5.0 * width < 0.0 || center + 5.0 * width > tau)
            throw ConfigError("gauss pulse must sit at least 5 widths inside "
                              "the window for the closed-form transform");
    }
    if (kind == ProtocolKind::Sine && !(cycles > 0.0))
        throw ConfigError("sine protocol needs cycles > 0");
}

std::string to_string(ProtocolKind kind) {
    switch (kind) {
    case ProtocolKind::Ramp: return "ramp";
    case ProtocolKind::Smoothstep: return "smoothstep";
    case ProtocolKind::GaussPulse: return "gauss";
    case ProtocolKind::Sine: return "sine";
    }
    return "unknown";
}

} // namespace qbm
