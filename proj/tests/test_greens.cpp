#include "doctest.h"

#include "qbm/errors.hpp"
#include "qbm/greens.hpp"
#include "qbm/kernels.hpp"
#include "qbm/quadrature.hpp"

#include <cmath>
#include <complex>
#include <vector>

using namespace qbm;

namespace {

const double kMass = 1.3, kOmega = 1.0, kGamma0 = 0.3, kCutoff = 5.0;

// RK4 reference for v'' = -W^2 v - 2 g0 v' sampled at t_probe.
struct Rk4Out {
    double h, g;
};
Rk4Out rk4_markov(double mass, double omega, double g0, double t_probe) {
    const double dt = 1e-4;
    const auto n = static_cast<long>(std::round(t_probe / dt));
    double vh = 1.0, wh = 0.0, vg = 0.0, wg = 1.0 / mass;
    auto acc = [&](double v, double w) { return -omega * omega * v - 2.0 * g0 * w; };
    auto step = [&](double& v, double& w) {
        const double k1v = w, k1w = acc(v, w);
        const double k2v = w + 0.5 * dt * k1w, k2w = acc(v + 0.5 * dt * k1v, w + 0.5 * dt * k1w);
        const double k3v = w + 0.5 * dt * k2w, k3w = acc(v + 0.5 * dt * k2v, w + 0.5 * dt * k2w);
        const double k4v = w + dt * k3w, k4w = acc(v + dt * k3v, w + dt * k3w);
        v += dt / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
        w += dt / 6.0 * (k1w + 2.0 * k2w + 2.0 * k3w + k4w);
    };
    for (long k = 0; k < n; ++k) {
        step(vh, wh);
        step(vg, wg);
    }
    return {vh, vg};
}

} // namespace

TEST_CASE("Markovian closed forms agree with an RK4 integration in all regimes") {
    for (double g0 : {0.3, 1.0, 2.5}) { // under-, critically, overdamped
        for (double t : {0.7, 3.0, 9.0}) {
            const Rk4Out ref = rk4_markov(kMass, kOmega, g0, t);
            const GreensFunctions mk =
                markovian_greens(kMass, kOmega, g0, TimeGrid{t, 2});
            CHECK(mk.h[1] == doctest::Approx(ref.h).epsilon(1e-8));
            CHECK(mk.g[1] == doctest::Approx(ref.g).epsilon(1e-8));
        }
    }
}

TEST_CASE("initial conditions of both fundamental solutions") {
    const SpectralDensity sd{BathKind::OhmicDrude, kGamma0, kCutoff, 1.0, kMass};
    const double dt = greens_dt(sd, kOmega, 8.0);
    const KernelTable kt =
        make_kernel_table(sd, 1.0, 0.0, TimeGrid{dt, static_cast<std::size_t>(8.0 / dt)});
    const GreensFunctions gf = solve_greens(kt, kOmega);
    CHECK(gf.h[0] == 1.0);
    CHECK(gf.hdot[0] == 0.0);
    CHECK(gf.g[0] == 0.0);
    CHECK(gf.gdot[0] == doctest::Approx(1.0 / kMass));
    const GreensFunctions mk = markovian_greens(kMass, kOmega, 0.4, TimeGrid{0.01, 8});
    CHECK(mk.h[0] == 1.0);
    CHECK(mk.g[0] == 0.0);
    CHECK(mk.gdot[0] == doctest::Approx(1.0 / kMass));
}

TEST_CASE("Volterra solution transforms back to the closed Laplace picture") {
    const SpectralDensity sd{BathKind::OhmicDrude, kGamma0, kCutoff, 1.0, kMass};
    const double T = 24.0;
    const double dt = greens_dt(sd, kOmega, T);
    const auto n = static_cast<std::size_t>(T / dt) + 1;
    const KernelTable kt = make_kernel_table(sd, 1.0, 0.0, TimeGrid{dt, n});
    const GreensFunctions gf = solve_greens(kt, kOmega);
    for (double s : {0.5, 1.0, 2.0}) {
        double acc = 0.0;
        for (std::size_t k = 0; k < n; ++k)
            acc += trapezoid_weight(k, n, dt) * std::exp(-s * gf.grid.t(k)) * gf.g[k];
        const double closed = greens_g_laplace(sd, kOmega, {s, 0.0}).real();
        CHECK(acc == doctest::Approx(closed).epsilon(1e-7));
    }
    const GreensResiduals r = greens_identity_residuals(gf, kt);
    CHECK(r.hdot_identity < 1e-6);
    CHECK(r.gdot_identity < 1e-6 * kMass * kOmega * kOmega);
}

TEST_CASE("Laplace identity s h^ = 1 - M W^2 g^") {
    const SpectralDensity sd{BathKind::OhmicDrude, kGamma0, kCutoff, 1.0, kMass};
    for (const std::complex<double> s : {std::complex<double>{0.7, 0.0},
                                         std::complex<double>{0.2, 1.5},
                                         std::complex<double>{3.0, -4.0}}) {
        const auto lhs = s * greens_h_laplace(sd, kOmega, s);
        const auto rhs =
            1.0 - kMass * kOmega * kOmega * greens_g_laplace(sd, kOmega, s);
        CHECK(std::abs(lhs - rhs) < 1e-13);
    }
}

TEST_CASE("Bromwich inversion agrees with the Volterra solve: Drude") {
    const SpectralDensity sd{BathKind::OhmicDrude, kGamma0, kCutoff, 1.0, kMass};
    const double T = 24.0;
    const double dt = greens_dt(sd, kOmega, T);
    const auto n = static_cast<std::size_t>(T / dt) + 1;
    const KernelTable kt = make_kernel_table(sd, 1.0, 0.0, TimeGrid{dt, n});
    const GreensFunctions gf = solve_greens(kt, kOmega);
    const std::vector<double> gb = bromwich_g(sd, kOmega, gf.grid);
    double sup = 0.0;
    for (std::size_t k = 0; k < n; ++k) sup = std::max(sup, std::abs(gb[k] - gf.g[k]));
    CHECK(sup < 1e-5);
}

TEST_CASE("Bromwich inversion agrees with the Volterra solve: power-law") {
    const SpectralDensity pl{BathKind::PowerLaw, kGamma0, kCutoff, 0.7, kMass};
    const double T = 16.0;
    const double dt = greens_dt(pl, kOmega, T);
    const auto n = static_cast<std::size_t>(T / dt) + 1;
    const KernelTable kt = make_kernel_table(pl, 1.0, 0.0, TimeGrid{dt, n});
    const GreensFunctions gf = solve_greens(kt, kOmega);
    const std::vector<double> gb = bromwich_g(pl, kOmega, gf.grid);
    double sup = 0.0;
    for (std::size_t k = 0; k < n; ++k) sup = std::max(sup, std::abs(gb[k] - gf.g[k]));
    CHECK(sup < 1e-5);
    const GreensResiduals r = greens_identity_residuals(gf, kt);
    CHECK(r.hdot_identity < 1e-6);
    CHECK(r.gdot_identity < 1e-6 * kMass * kOmega * kOmega);
}

TEST_CASE("local kernel dispatches to the closed Markovian forms") {
    const SpectralDensity ohmic{BathKind::OhmicNoCutoff, kGamma0, 0.0, 1.0, kMass};
    const TimeGrid grid{0.01, 512};
    const KernelTable kt = make_kernel_table(ohmic, 1.0, 0.0, grid);
    const GreensFunctions a = solve_greens(kt, kOmega);
    const GreensFunctions b = markovian_greens(kMass, kOmega, kGamma0, grid);
    for (std::size_t k : {std::size_t(0), std::size_t(100), std::size_t(511)}) {
        CHECK(a.h[k] == b.h[k]);
        CHECK(a.g[k] == b.g[k]);
    }
    const GreensResiduals r = greens_identity_residuals(a, kt);
    CHECK(r.hdot_identity < 1e-14);
    CHECK(r.gdot_identity < 1e-14);
}

TEST_CASE("power-law Laplace closed form against direct quadrature") {
    for (double ex : {0.5, 1.3}) {
        const SpectralDensity pl{BathKind::PowerLaw, kGamma0, kCutoff, ex, kMass};
        for (double s : {0.4, 2.0, 11.0}) {
            auto f = [&](double w) {
                return pl.j_over_omega(w) / kMass * s / (s * s + w * w);
            };
            const double inf = std::numeric_limits<double>::infinity();
            const double ref =
                quad::ts(f, 0.0, kCutoff, 1e-12) + quad::gk(f, kCutoff, inf, 1e-12);
            CHECK(damping_laplace(pl, s) == doctest::Approx(ref).epsilon(1e-9));
        }
        // complex argument: real/imaginary parts against split quadrature
        const std::complex<double> s{0.8, 2.5};
        auto fc = [&](double w) {
            return pl.j_over_omega(w) / kMass * s / (s * s + w * w);
        };
        const double inf = std::numeric_limits<double>::infinity();
        const double re = quad::ts([&](double w) { return fc(w).real(); }, 0.0, kCutoff) +
                          quad::gk([&](double w) { return fc(w).real(); }, kCutoff, inf);
        const double im = quad::ts([&](double w) { return fc(w).imag(); }, 0.0, kCutoff) +
                          quad::gk([&](double w) { return fc(w).imag(); }, kCutoff, inf);
        const auto got = damping_laplace(pl, s);
        CHECK(got.real() == doctest::Approx(re).epsilon(1e-8));
        CHECK(got.imag() == doctest::Approx(im).epsilon(1e-8));
        // removable point s = cutoff is crossed smoothly
        const double a = damping_laplace(pl, kCutoff * (1.0 - 2e-6));
        const double b = damping_laplace(pl, kCutoff);
        const double c = damping_laplace(pl, kCutoff * (1.0 + 2e-6));
        CHECK(b == doctest::Approx(0.5 * (a + c)).epsilon(1e-9));
    }
}

TEST_CASE("step-size policy rejects impossible grids") {
    const SpectralDensity sd{BathKind::OhmicDrude, kGamma0, 400.0, 1.0, kMass};
    CHECK_THROWS_AS(greens_dt(sd, kOmega, 1e4), NumericalError);
    CHECK_THROWS_AS(greens_dt(sd, -1.0, 10.0), ConfigError);
    const SpectralDensity dr{BathKind::OhmicDrude, kGamma0, kCutoff, 1.0, kMass};
    const double dt = greens_dt(dr, kOmega, 20.0);
    CHECK(dt > 0.0);
    CHECK(dt <= 1.0 / (40.0 * kCutoff));
}
