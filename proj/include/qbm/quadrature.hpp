#ifndef QBM_QUADRATURE_HPP
#define QBM_QUADRATURE_HPP

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/ooura_fourier_integrals.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <cmath>
#include <utility>
#include <vector>

namespace qbm::quad {

inline constexpr double kDefaultRelTol = 1e-10;

// Adaptive Gauss-Kronrod on [a, b].
template <typename F>
double gk(F&& f, double a, double b, double rel_tol = kDefaultRelTol, unsigned max_depth = 15) {
    return boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
        std::forward<F>(f), a, b, max_depth, rel_tol);
}

// tanh-sinh on [a, b]; tolerates integrable endpoint singularities
// (needed for sub-Ohmic spectral densities where J/omega ~ omega^{s-1}).
template <typename F>
double ts(F&& f, double a, double b, double rel_tol = kDefaultRelTol) {
    boost::math::quadrature::tanh_sinh<double> integrator;
    return integrator.integrate(std::forward<F>(f), a, b, rel_tol);
}

// int_0^inf f(w) cos(w t) dw for decaying f, t > 0. Ooura's double-exponential
// Fourier method; used as the full-range reference route in tests.
template <typename F>
double fourier_cos(F&& f, double t, double rel_tol = 1e-12) {
    boost::math::quadrature::ooura_fourier_cos<double> integrator(rel_tol);
    auto [value, err] = integrator.integrate(std::forward<F>(f), t);
    (void)err;
    return value;
}

// Band-limited cosine transform int_a^b f(w) cos(w t) dw. For strongly
// oscillatory integrands (t (b-a) large) the range is swept in whole periods
// so the adaptive subdivision depth never saturates.
template <typename F>
double band_cos(F&& f, double a, double b, double t, double rel_tol = kDefaultRelTol) {
    const double ta = std::abs(t);
    if (ta * (b - a) < 30.0)
        return gk([&](double w) { return f(w) * std::cos(w * t); }, a, b, rel_tol);
    const double period = 2.0 * M_PI / ta;
    double edge = std::min(b, a + 6.0 * period);
    double total = gk([&](double w) { return f(w) * std::cos(w * t); }, a, edge, rel_tol);
    double comp = 0.0; // Kahan compensation over the chunk sweep
    while (edge < b) {
        const double next = std::min(b, edge + period);
        const double piece = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
            [&](double w) { return f(w) * std::cos(w * t); }, edge, next, 3, 1e-12);
        const double y = piece - comp;
        const double s = total + y;
        comp = (s - total) - y;
        total = s;
        edge = next;
    }
    return total;
}

// One power-law component a * w^{-p} of a large-frequency expansion.
struct PowerTerm {
    double a;
    double p;
};

// Asymptotic tail int_X^inf (sum_m a_m w^{-p_m}) cos(w t) dw via repeated
// integration by parts. Valid once X t is a few units; terms alternate
// sin/cos with the sign pattern -,-,+,+. p = 1 components are log-divergent
// at t = 0; the caller is expected to band-limit that case instead.
inline double power_tail_cos(const std::vector<PowerTerm>& terms, double X, double t,
                             int n_orders = 8) {
    const double ta = std::abs(t);
    if (ta == 0.0) {
        double v = 0.0;
        for (const auto& m : terms)
            if (m.p > 1.0) v += m.a * std::pow(X, 1.0 - m.p) / (m.p - 1.0);
        return v;
    }
    const double s = std::sin(X * ta), c = std::cos(X * ta);
    double total = 0.0;
    for (const auto& m : terms) {
        double deriv = m.a * std::pow(X, -m.p); // u^{(k)}(X), updated in the loop
        double prev = HUGE_VAL;
        for (int k = 0; k < n_orders; ++k) {
            const double trig = (k % 2 == 0) ? s : c;
            const double sign = (k % 4 < 2) ? -1.0 : 1.0;
            const double term = sign * deriv * trig / std::pow(ta, k + 1);
            if (std::abs(term) > prev) break; // asymptotic series turned
            total += term;
            prev = std::abs(term);
            deriv *= (-m.p - k) / X;
        }
    }
    return total;
}

} // namespace qbm::quad

#endif
