#include "qbm/greens.hpp"

#include "qbm/errors.hpp"
#include "qbm/fft.hpp"

#include <algorithm>
#include <cmath>

namespace qbm {

namespace {

// One damped-oscillator fundamental pair at friction coefficient 2 g0.
struct MarkovPair {
    double h, hdot, g, gdot;
};

MarkovPair markov_at(double mass, double omega, double g0, double t) {
    MarkovPair o;
    const double e = std::exp(-g0 * t);
    if (std::abs(g0 - omega) < 1e-6 * omega) {
        o.h = e * (1.0 + g0 * t);
        o.g = t * e / mass;
        o.gdot = e * (1.0 - g0 * t) / mass;
    } else if (g0 < omega) {
        const double w1 = std::sqrt(omega * omega - g0 * g0);
        const double c = std::cos(w1 * t), s = std::sin(w1 * t);
        o.h = e * (c + g0 / w1 * s);
        o.g = e * s / (mass * w1);
        o.gdot = e * (c - g0 / w1 * s) / mass;
    } else {
        const double k = std::sqrt(g0 * g0 - omega * omega);
        const double c = std::cosh(k * t), s = std::sinh(k * t);
        o.h = e * (c + g0 / k * s);
        o.g = e * s / (mass * k);
        o.gdot = e * (c - g0 / k * s) / mass;
    }
    o.hdot = -mass * omega * omega * o.g;
    return o;
}

// Product-trapezoid memory integral sum_{i} w_i gamma(t_k - t_i) v(t_i) over
// the kernel support window ending at i = k.
class MemoryConvolution {
  public:
    MemoryConvolution(const std::vector<double>& kernel, double dt) : k_(kernel), dt_(dt) {
        double peak = 0.0;
        for (double v : k_) peak = std::max(peak, std::abs(v));
        support_ = k_.size();
        while (support_ > 1 && std::abs(k_[support_ - 1]) < 1e-16 * peak) --support_;
    }

    std::size_t support() const { return support_; }

    // integral up to node k using history[0..k]; the i = k endpoint gets
    // weight dt/2 (time-grid edge), the i = 0 endpoint dt/2 when inside the
    // window, interior nodes dt.
    double at(std::size_t k, const std::vector<double>& history) const {
        if (k == 0) return 0.0;
        const std::size_t lo = k >= support_ ? k - support_ + 1 : 0;
        double acc = 0.0;
        for (std::size_t i = lo; i <= k; ++i) acc += k_[k - i] * history[i];
        acc -= 0.5 * k_[k - lo] * history[lo] * (lo == 0 ? 1.0 : 0.0);
        acc -= 0.5 * k_[0] * history[k];
        return acc * dt_;
    }

  private:
    const std::vector<double>& k_;
    double dt_;
    std::size_t support_ = 0;
};

struct VolterraSolution {
    std::vector<double> v, vdot;
};

// Heun (explicit trapezoid) steps for v'' + 2 (gamma * v') + W^2 v = 0.
VolterraSolution solve_volterra(const KernelTable& kt, double omega, double v0, double w0) {
    const std::size_t n = kt.grid.n;
    const double dt = kt.grid.dt;
    const double W2 = omega * omega;
    VolterraSolution out;
    out.v.resize(n);
    out.vdot.resize(n);
    out.v[0] = v0;
    out.vdot[0] = w0;
    MemoryConvolution conv(kt.gamma, dt);
    for (std::size_t k = 0; k + 1 < n; ++k) {
        const double ak = -W2 * out.v[k] - 2.0 * conv.at(k, out.vdot);
        const double vp = out.v[k] + dt * out.vdot[k];
        const double wp = out.vdot[k] + dt * ak;
        out.vdot[k + 1] = wp; // predicted history entry for the k+1 memory sum
        const double ap = -W2 * vp - 2.0 * conv.at(k + 1, out.vdot);
        out.v[k + 1] = out.v[k] + 0.5 * dt * (out.vdot[k] + wp);
        out.vdot[k + 1] = out.vdot[k] + 0.5 * dt * (ak + ap);
    }
    return out;
}

} // namespace

GreensFunctions markovian_greens(double mass, double omega, double gamma0,
                                 const TimeGrid& grid) {
    GreensFunctions gf;
    gf.grid = grid;
    gf.mass = mass;
    gf.omega = omega;
    gf.h.resize(grid.n);
    gf.hdot.resize(grid.n);
    gf.g.resize(grid.n);
    gf.gdot.resize(grid.n);
    for (std::size_t j = 0; j < grid.n; ++j) {
        const MarkovPair p = markov_at(mass, omega, gamma0, grid.t(j));
        gf.h[j] = p.h;
        gf.hdot[j] = p.hdot;
        gf.g[j] = p.g;
        gf.gdot[j] = p.gdot;
    }
    return gf;
}

GreensFunctions solve_greens(const KernelTable& kt, double omega) {
    if (!(omega > 0.0)) throw ConfigError("greens solve needs omega > 0");
    const double mass = kt.sd.mass;
    if (kt.local) return markovian_greens(mass, omega, 0.5 * kt.gamma_delta, kt.grid);

    GreensFunctions gf;
    gf.grid = kt.grid;
    gf.mass = mass;
    gf.omega = omega;
    VolterraSolution hs = solve_volterra(kt, omega, 1.0, 0.0);
    VolterraSolution gs = solve_volterra(kt, omega, 0.0, 1.0 / mass);
    gf.h = std::move(hs.v);
    gf.hdot = std::move(hs.vdot);
    gf.g = std::move(gs.v);
    gf.gdot = std::move(gs.vdot);
    return gf;
}

std::complex<double> greens_g_laplace(const SpectralDensity& sd, double omega,
                                      std::complex<double> s) {
    const std::complex<double> gh = damping_laplace(sd, s);
    return 1.0 / (sd.mass * (s * s + 2.0 * s * gh + omega * omega));
}

std::complex<double> greens_h_laplace(const SpectralDensity& sd, double omega,
                                      std::complex<double> s) {
    const std::complex<double> gh = damping_laplace(sd, s);
    return (s + 2.0 * gh) / (s * s + 2.0 * s * gh + omega * omega);
}

std::vector<double> bromwich_g(const SpectralDensity& sd, double omega, const TimeGrid& grid) {
    sd.validate();
    const double mass = sd.mass;
    const double T = static_cast<double>(grid.n) * grid.dt;
    const double eps = 4.0 / T;
    const std::size_t refine = 4;
    const double dtf = grid.dt / static_cast<double>(refine);
    const std::size_t N = fft::next_pow2(4 * refine * grid.n);
    const double dw = 2.0 * M_PI / (static_cast<double>(N) * dtf);

    const double gref = damping_laplace(sd, omega);

    std::vector<std::complex<double>> F(N);
    const std::complex<double> W2(omega * omega, 0.0);
    for (std::size_t k = 0; k <= N / 2; ++k) {
        const double w = static_cast<double>(k) * dw;
        const std::complex<double> s(eps, w);
        const std::complex<double> gh = damping_laplace(sd, s);
        const std::complex<double> D = s * s + 2.0 * s * gh + W2;
        const std::complex<double> Dref = s * s + 2.0 * s * gref + W2;
        F[k] = (1.0 / D - 1.0 / Dref) / mass;
        if (k > 0 && k < N / 2) F[N - k] = std::conj(F[k]);
    }
    fft::transform(F, +1); // sum_k F_k e^{+2 pi i k j / N}

    std::vector<double> g(grid.n);
    for (std::size_t j = 0; j < grid.n; ++j) {
        const double t = grid.t(j);
        const double corr = std::exp(eps * t) / (2.0 * M_PI) * dw * F[j * refine].real();
        g[j] = markov_at(mass, omega, gref, t).g + corr;
    }
    return g;
}

GreensResiduals greens_identity_residuals(const GreensFunctions& gf, const KernelTable& kt) {
    GreensResiduals r;
    const double mass = gf.mass;
    const double W2 = gf.omega * gf.omega;
    const std::size_t n = gf.grid.n;
    const double dt = gf.grid.dt;
    for (std::size_t k = 0; k < n; ++k)
        r.hdot_identity =
            std::max(r.hdot_identity, std::abs(gf.hdot[k] + mass * W2 * gf.g[k]));
    r.hdot_identity /= mass * W2;
    if (kt.local) {
        const double g0 = 0.5 * kt.gamma_delta;
        for (std::size_t k = 0; k < n; ++k)
            r.gdot_identity =
                std::max(r.gdot_identity,
                         std::abs(mass * gf.gdot[k] - gf.h[k] + 2.0 * mass * g0 * gf.g[k]));
        return r;
    }
    MemoryConvolution conv(kt.gamma, dt);
    for (std::size_t k = 0; k < n; ++k) {
        const double mem = conv.at(k, gf.g);
        r.gdot_identity = std::max(
            r.gdot_identity, std::abs(mass * gf.gdot[k] - gf.h[k] + 2.0 * mass * mem));
    }
    return r;
}

double greens_dt(const SpectralDensity& sd, double omega, double horizon) {
    if (!(omega > 0.0) || !(horizon > 0.0))
        throw ConfigError("greens_dt needs omega > 0 and horizon > 0");
    double dt = 2.0 * M_PI / omega;
    if (!sd.local_kernel() && sd.cutoff > 0.0) dt = std::min(dt, 1.0 / sd.cutoff);
    dt /= 40.0;
    const double geff = std::max(damping_laplace(sd, omega), 1e-12 * omega);
    const double window = std::min(horizon, 3.0 / geff);
    const double dt_acc =
        std::sqrt(6e-6 / (omega * omega * omega * window)) / 2.0;
    dt = std::min(dt, dt_acc);
    // local kernels go through closed forms, not the O(n^2) Volterra solve,
    // so they can afford a much longer grid
    const double cap = sd.local_kernel() ? 2e6 : 2e5;
    if (horizon / dt > cap)
        throw NumericalError("greens grid would exceed the node cap; shorten the "
                             "horizon or relax the cutoff");
    return dt;
}

} // namespace qbm
