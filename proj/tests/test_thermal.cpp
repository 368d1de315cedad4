#include "doctest.h"

#include "qbm/errors.hpp"
#include "qbm/greens.hpp"
#include "qbm/kernels.hpp"
#include "qbm/thermal.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <complex>

using namespace qbm;
using cplx = std::complex<double>;

namespace {

const double kMass = 1.7, kOmega = 1.1, kGamma0 = 0.3, kCutoff = 5.0;

// digamma and log-gamma for Re z > 0: push into the asymptotic region by
// recurrence, then a Stirling tail
cplx cdigamma(cplx z) {
    cplx acc = 0.0;
    while (z.real() < 12.0) {
        acc -= 1.0 / z;
        z += 1.0;
    }
    static const double B[] = {1.0 / 6,  -1.0 / 30,     1.0 / 42, -1.0 / 30,
                               5.0 / 66, -691.0 / 2730, 7.0 / 6};
    const cplx iz2 = 1.0 / (z * z);
    cplx p = iz2, s = std::log(z) - 0.5 / z;
    for (int n = 1; n <= 7; ++n) {
        s -= B[n - 1] / (2.0 * n) * p;
        p *= iz2;
    }
    return acc + s;
}

cplx clgamma(cplx z) {
    cplx acc = 0.0;
    while (z.real() < 12.0) {
        acc -= std::log(z);
        z += 1.0;
    }
    static const double B[] = {1.0 / 6,  -1.0 / 30,     1.0 / 42, -1.0 / 30,
                               5.0 / 66, -691.0 / 2730, 7.0 / 6};
    cplx s = (z - 0.5) * std::log(z) - z + 0.5 * std::log(2.0 * M_PI);
    cplx izp = 1.0 / z;
    for (int n = 1; n <= 7; ++n) {
        s += B[n - 1] / ((2.0 * n) * (2.0 * n - 1.0)) * izp;
        izp /= z * z;
    }
    return acc + s;
}

struct DrudeThermal {
    double sxx, spp, fe;
};

// Exact Drude reference: the Matsubara denominator times (nu + L) is the
// cubic nu^3 + L nu^2 + (W^2 + 2 g0 L) nu + L W^2, so partial fractions over
// its roots turn the sums into digamma values and the free-energy product
// into log-gamma values.
DrudeThermal drude_closed_form(double mass, double w, double g0, double L,
                               double beta, double hbar) {
    const double c2 = L, c1 = w * w + 2.0 * g0 * L, c0 = L * w * w;
    Eigen::Matrix3d C = Eigen::Matrix3d::Zero();
    C(1, 0) = 1.0;
    C(2, 1) = 1.0;
    C(0, 2) = -c0;
    C(1, 2) = -c1;
    C(2, 2) = -c2;
    const Eigen::EigenSolver<Eigen::Matrix3d> es(C);
    const double dnu = 2.0 * M_PI / (beta * hbar);
    cplx sx = 0.0, sp = 0.0, sf = 0.0;
    for (int i = 0; i < 3; ++i) {
        const cplx z = es.eigenvalues()(i);
        const cplx dP = 3.0 * z * z + 2.0 * c2 * z + c1;
        const cplx A = (z + L) / dP;
        const cplx Bq = (w * w * (z + L) + 2.0 * z * g0 * L) / dP;
        const cplx psi = cdigamma(1.0 - z / dnu);
        sx -= A * psi / dnu;
        sp -= Bq * psi / dnu;
        sf -= clgamma(1.0 - z / dnu);
    }
    sf += clgamma(cplx(1.0 + L / dnu));
    DrudeThermal o;
    o.sxx = (1.0 / (w * w) + 2.0 * sx.real()) / (mass * beta);
    o.spp = mass * (1.0 + 2.0 * sp.real()) / beta;
    o.fe = (std::log(beta * hbar * w) + sf.real()) / beta;
    return o;
}

} // namespace

TEST_CASE("Drude Matsubara sums match the digamma closed form") {
    const SpectralDensity sd{BathKind::OhmicDrude, kGamma0, kCutoff, 1.0, kMass};
    for (auto [beta, hbar] :
         {std::pair{2.0, 1.0}, {0.5, 0.3}, {10.0, 1.0}, {1.0, 1e-3}}) {
        const DrudeThermal o =
            drude_closed_form(kMass, kOmega, kGamma0, kCutoff, beta, hbar);
        CHECK(thermal_sigma_xx(sd, kOmega, beta, hbar) ==
              doctest::Approx(o.sxx).epsilon(1e-9));
        CHECK(thermal_sigma_pp(sd, kOmega, beta, hbar) ==
              doctest::Approx(o.spp).epsilon(1e-9));
        CHECK(dressed_free_energy(sd, kOmega, beta, hbar) ==
              doctest::Approx(o.fe).epsilon(1e-9));
    }
}

TEST_CASE("decoupled limit reproduces the bare oscillator") {
    const SpectralDensity tiny{BathKind::OhmicDrude, 1e-12, kCutoff, 1.0, kMass};
    const double beta = 2.0, hbar = 1.0;
    const double x = 0.5 * beta * hbar * kOmega;
    CHECK(thermal_sigma_xx(tiny, kOmega, beta, hbar) ==
          doctest::Approx(hbar / (2.0 * kMass * kOmega) / std::tanh(x)).epsilon(1e-9));
    CHECK(thermal_sigma_pp(tiny, kOmega, beta, hbar) ==
          doctest::Approx(0.5 * kMass * hbar * kOmega / std::tanh(x)).epsilon(1e-9));
    CHECK(dressed_free_energy(tiny, kOmega, beta, hbar) ==
          doctest::Approx(std::log(2.0 * std::sinh(x)) / beta).epsilon(1e-9));
}

TEST_CASE("classical variances are the equipartition values exactly") {
    const double beta = 1.7;
    for (BathKind kind :
         {BathKind::OhmicDrude, BathKind::PowerLaw, BathKind::OhmicNoCutoff}) {
        const SpectralDensity sd{kind, kGamma0, kCutoff, 0.7, kMass};
        CHECK(thermal_sigma_xx(sd, kOmega, beta, 0.0) ==
              1.0 / (beta * kMass * kOmega * kOmega));
        CHECK(thermal_sigma_pp(sd, kOmega, beta, 0.0) == kMass / beta);
    }
}

TEST_CASE("power-law position variance against a long explicit sum") {
    const SpectralDensity pl{BathKind::PowerLaw, kGamma0, kCutoff, 0.5, kMass};
    const double beta = 3.0, hbar = 0.9;
    const double dnu = 2.0 * M_PI / (beta * hbar);
    double acc = 0.0;
    const long big = 2000000;
    for (long r = big; r >= 1; --r) {
        const double nu = r * dnu;
        acc += 1.0 / (kOmega * kOmega + nu * nu + 2.0 * nu * damping_laplace(pl, nu));
    }
    acc += 1.0 / (dnu * dnu * (big + 0.5)); // leading 1/nu^2 remainder
    const double ref = (1.0 / (kOmega * kOmega) + 2.0 * acc) / (kMass * beta);
    CHECK(thermal_sigma_xx(pl, kOmega, beta, hbar) ==
          doctest::Approx(ref).epsilon(1e-9));
}

TEST_CASE("coupling narrows the quantum position variance linearly") {
    const double beta = 2.0, hbar = 1.0;
    auto sxx = [&](double g0) {
        const SpectralDensity sd{BathKind::OhmicDrude, g0, kCutoff, 1.0, kMass};
        return thermal_sigma_xx(sd, kOmega, beta, hbar);
    };
    const double s0 = sxx(1e-12), s1 = sxx(1e-3), s2 = sxx(2e-3);
    CHECK(s1 < s0);
    CHECK((s2 - s1) / (s1 - s0) == doctest::Approx(1.0).epsilon(1e-2));
}

TEST_CASE("stationary covariance pipeline is consistent with the Matsubara sums") {
    const SpectralDensity sd{BathKind::OhmicDrude, 0.6, 4.0, 1.0, kMass};
    const double beta = 2.0, hbar = 1.0, T = 30.0;
    const double dt = greens_dt(sd, kOmega, T);
    const auto n = static_cast<std::size_t>(T / dt) + 1;
    const KernelTable kt = make_kernel_table(sd, beta, 0.0, TimeGrid{dt, n});
    const GreensFunctions gf = solve_greens(kt, kOmega);

    const StationaryCovariance sc = stationary_covariance(gf, beta, hbar);
    CHECK(sc.sigma0() ==
          doctest::Approx(thermal_sigma_xx(sd, kOmega, beta, hbar)).epsilon(1e-5));

    // second spectral moment gives sigma_pp
    double m2 = 0.0;
    for (std::size_t k = 0; k < sc.omega.size(); ++k)
        m2 += trapezoid_weight(k, sc.omega.size(), sc.domega) * sc.omega[k] *
              sc.omega[k] * sc.sigma_w[k];
    CHECK(2.0 * kMass * kMass * m2 ==
          doctest::Approx(thermal_sigma_pp(sd, kOmega, beta, hbar)).epsilon(1e-3));

    // the spectrum is a nonnegative power spectrum up to truncation noise
    double wmax = 0.0, wmin = 0.0;
    for (double v : sc.sigma_w) {
        wmax = std::max(wmax, v);
        wmin = std::min(wmin, v);
    }
    CHECK(wmin > -1e-12 * wmax);

    // classical lag table is the relaxation function exactly; the spectral
    // round trip at tiny hbar lands on it
    const StationaryCovariance cl = stationary_covariance(gf, beta, 0.0);
    for (std::size_t j : {std::size_t(0), std::size_t(1000), n - 1})
        CHECK(cl.sigma_t[j] == gf.h[j] / (beta * kMass * kOmega * kOmega));
    const StationaryCovariance nearcl = stationary_covariance(gf, beta, 1e-6);
    for (std::size_t j = 0; j < n; j += 997)
        CHECK(std::abs(nearcl.sigma_t[j] - cl.sigma_t[j]) < 1e-9 * cl.sigma0());
}

TEST_CASE("thermal argument validation and UV divergences") {
    const SpectralDensity sd{BathKind::OhmicDrude, kGamma0, kCutoff, 1.0, kMass};
    CHECK_THROWS_AS(thermal_sigma_xx(sd, kOmega, -1.0, 1.0), ConfigError);
    CHECK_THROWS_AS(thermal_sigma_xx(sd, kOmega, 1.0, -1.0), ConfigError);
    CHECK_THROWS_AS(thermal_sigma_xx(sd, 0.0, 1.0, 1.0), ConfigError);
    CHECK_THROWS_AS(dressed_free_energy(sd, kOmega, 1.0, 0.0), ConfigError);
    const SpectralDensity local{BathKind::OhmicNoCutoff, kGamma0, 0.0, 1.0, kMass};
    CHECK_THROWS_AS(thermal_sigma_pp(local, kOmega, 1.0, 1.0), NumericalError);
    CHECK_THROWS_AS(dressed_free_energy(local, kOmega, 1.0, 1.0), NumericalError);
    // sigma_xx itself converges without a cutoff
    CHECK(thermal_sigma_xx(local, kOmega, 2.0, 1.0) > 0.0);
}
