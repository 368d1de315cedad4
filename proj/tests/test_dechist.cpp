#include "doctest.h"

#include "qbm/dechist.hpp"
#include "qbm/errors.hpp"
#include "qbm/greens.hpp"
#include "qbm/kernels.hpp"

#include <cmath>
#include <vector>

using namespace qbm;

namespace {

constexpr double kMass = 1.0;
constexpr double kOmega = 1.0;
constexpr double kBeta = 2.0;

HistoryPair flat_pair(const TimeGrid& grid, double sigma) {
    HistoryPair hp;
    hp.grid = grid;
    hp.mean_history.assign(grid.n, 0.0);
    hp.separation.assign(grid.n, 0.0);
    hp.sigma.assign(grid.n, sigma);
    return hp;
}

} // namespace

TEST_CASE("scalar model matches single-bin arithmetic on a grid of separations") {
    for (double nu0 : {0.3, 4.0, 2500.0}) {
        for (double sg : {0.05, 0.5, 2.0}) {
            const double inv = 1.0 / (1.0 / nu0 + 2.0 * sg * sg);
            for (int i = 0; i <= 20; ++i) {
                const double u = -3.0 + 0.3 * i;
                CHECK(scalar_offdiag_exponent(nu0, sg, u) ==
                      doctest::Approx(-0.5 * u * u * inv).epsilon(1e-15));
            }
        }
    }
    CHECK_THROWS_AS(scalar_offdiag_exponent(-1.0, 0.5, 1.0), ConfigError);
}

TEST_CASE("suppression scale reproduces the stated limits") {
    // nu0 sigma^2 = 1 gives u* = sqrt(3) sigma
    CHECK(std::sqrt(1.0 / 4.0 + 2.0 * 0.25) ==
          doctest::Approx(std::sqrt(3.0) * 0.5).epsilon(1e-15));
    // strong noise leaves only the window width
    const double big = 1e12;
    CHECK(std::sqrt(1.0 / big + 2.0 * 0.25) ==
          doctest::Approx(std::sqrt(2.0) * 0.5).epsilon(1e-6));
    // histories 5 u* apart are suppressed at least to e^{-12.5}
    for (double nu0 : {0.1, 1.0, 50.0}) {
        for (double sg : {0.1, 1.0}) {
            const double us = std::sqrt(1.0 / nu0 + 2.0 * sg * sg);
            CHECK(scalar_offdiag_exponent(nu0, sg, 5.0 * us) ==
                  doctest::Approx(-12.5).epsilon(1e-14));
        }
    }
}

TEST_CASE("local-kernel exponent reduces to the closed diagonal form") {
    const SpectralDensity sd{BathKind::OhmicNoCutoff, 0.4, 0.0, 1.0, kMass};
    const TimeGrid grid{0.05, 256};
    const KernelTable kt = make_kernel_table(sd, kBeta, 0.0, grid);
    HistoryPair hp = flat_pair(grid, 0.3);
    for (std::size_t j = 0; j < grid.n; ++j)
        hp.separation[j] = 0.2 * std::sin(1.3 * grid.t(j));
    const DecoherenceExponents de = decoherence_exponent(hp, kt, kOmega);
    double closed = 0.0;
    for (std::size_t j = 0; j < grid.n; ++j)
        closed += -0.5 * grid.dt * hp.separation[j] * hp.separation[j] /
                  (1.0 / kt.nu_delta + 2.0 * 0.3 * 0.3);
    CHECK(de.offdiag_exponent == doctest::Approx(closed).epsilon(1e-13));
    CHECK(de.diag_exponent == 0.0);
}

TEST_CASE("woodbury evaluation equals a direct operator inverse") {
    const SpectralDensity sd{BathKind::OhmicDrude, 0.5, 5.0, 1.0, kMass};
    const TimeGrid grid{0.1, 64};
    const KernelTable kt = make_kernel_table(sd, kBeta, 1.0, grid);
    HistoryPair hp = flat_pair(grid, 0.4);
    for (std::size_t j = 0; j < grid.n; ++j)
        hp.separation[j] = 0.3 * std::cos(0.7 * grid.t(j));
    const DecoherenceExponents de = decoherence_exponent(hp, kt, kOmega);

    // direct route: assemble nu, invert, add 2 sigma^2, invert again
    const std::size_t n = grid.n;
    std::vector<std::vector<double>> nu(n, std::vector<double>(n));
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k)
            nu[j][k] = kt.nu_at(grid.t(j) - grid.t(k)) * grid.dt;
    // Gauss-Jordan inverse, small n
    auto invert = [n](std::vector<std::vector<double>> a) {
        std::vector<std::vector<double>> inv(n, std::vector<double>(n, 0.0));
        for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1.0;
        for (std::size_t c = 0; c < n; ++c) {
            std::size_t piv = c;
            for (std::size_t rrow = c + 1; rrow < n; ++rrow)
                if (std::abs(a[rrow][c]) > std::abs(a[piv][c])) piv = rrow;
            std::swap(a[c], a[piv]);
            std::swap(inv[c], inv[piv]);
            const double d = a[c][c];
            for (std::size_t k = 0; k < n; ++k) {
                a[c][k] /= d;
                inv[c][k] /= d;
            }
            for (std::size_t rrow = 0; rrow < n; ++rrow) {
                if (rrow == c) continue;
                const double fac = a[rrow][c];
                for (std::size_t k = 0; k < n; ++k) {
                    a[rrow][k] -= fac * a[c][k];
                    inv[rrow][k] -= fac * inv[c][k];
                }
            }
        }
        return inv;
    };
    std::vector<std::vector<double>> b = invert(nu);
    for (std::size_t j = 0; j < n; ++j) b[j][j] += 2.0 * 0.4 * 0.4;
    const std::vector<std::vector<double>> binv = invert(b);
    double direct = 0.0;
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k)
            direct += hp.separation[j] * binv[j][k] * hp.separation[k];
    direct *= -0.5 * grid.dt;
    CHECK(de.offdiag_exponent == doctest::Approx(direct).epsilon(1e-10));
}

TEST_CASE("langevin solutions carry vanishing diagonal exponent") {
    const SpectralDensity sd{BathKind::OhmicDrude, 0.5, 5.0, 1.0, kMass};
    const TimeGrid grid{0.01, 1024};
    const KernelTable kt = make_kernel_table(sd, kBeta, 1.0, grid);
    const GreensFunctions gf = solve_greens(kt, kOmega);
    HistoryPair hp = flat_pair(grid, 0.5);
    hp.mean_history.assign(gf.h.begin(), gf.h.begin() + grid.n);
    const DecoherenceExponents sol = decoherence_exponent(hp, kt, kOmega);
    for (std::size_t j = 0; j < grid.n; ++j)
        hp.mean_history[j] = std::cos(kOmega * grid.t(j));
    const DecoherenceExponents ref = decoherence_exponent(hp, kt, kOmega);
    CHECK(std::abs(sol.diag_exponent) < 1e-6 * std::abs(ref.diag_exponent));
    CHECK(ref.diag_exponent < 0.0);
    CHECK(sol.offdiag_exponent == 0.0);
}

TEST_CASE("offdiagonal exponent is quadratic and componentwise monotone") {
    const SpectralDensity sd{BathKind::OhmicDrude, 0.5, 5.0, 1.0, kMass};
    const TimeGrid grid{0.05, 128};
    const KernelTable kt = make_kernel_table(sd, kBeta, 1.0, grid);
    HistoryPair hp = flat_pair(grid, 0.4);
    for (std::size_t j = 0; j < grid.n; ++j)
        hp.separation[j] = 0.1 + 0.2 * std::sin(0.9 * grid.t(j) + 0.3);
    const double e1 = decoherence_exponent(hp, kt, kOmega).offdiag_exponent;
    HistoryPair hp2 = hp;
    for (double& u : hp2.separation) u *= 2.0;
    const double e2 = decoherence_exponent(hp2, kt, kOmega).offdiag_exponent;
    CHECK(e2 == doctest::Approx(4.0 * e1).epsilon(1e-12));
    CHECK(e1 < 0.0);

    for (std::size_t k : {std::size_t{0}, std::size_t{40}, std::size_t{127}}) {
        HistoryPair bumped = hp;
        bumped.separation[k] *= 1.5;
        const double eb = decoherence_exponent(bumped, kt, kOmega).offdiag_exponent;
        CHECK(eb <= e1);
    }
}

TEST_CASE("history validation and solve caps") {
    const SpectralDensity sd{BathKind::OhmicDrude, 0.5, 5.0, 1.0, kMass};
    const TimeGrid grid{0.05, 64};
    const KernelTable kt = make_kernel_table(sd, kBeta, 0.0, grid);
    HistoryPair hp = flat_pair(grid, 0.4);
    hp.sigma[3] = 0.0;
    CHECK_THROWS_AS(decoherence_exponent(hp, kt, kOmega), ConfigError);
    hp = flat_pair(grid, 0.4);
    hp.separation.pop_back();
    CHECK_THROWS_AS(decoherence_exponent(hp, kt, kOmega), ConfigError);
    const TimeGrid big{0.01, 4000};
    CHECK_THROWS_AS(decoherence_exponent(flat_pair(big, 0.4), kt, kOmega),
                    ConfigError);
}

TEST_CASE("resolvability report tracks the noise strength") {
    const SpectralDensity sd{BathKind::OhmicDrude, 0.5, 5.0, 1.0, kMass};
    const TimeGrid grid{0.01, 4096};
    double prev_ustar = 1e300, prev_nu0 = 0.0;
    for (double b : {5.0, 2.0, 1.0, 0.5, 0.2}) {
        const KernelTable kt = make_kernel_table(sd, b, 1.0, grid);
        const ResolvabilityReport rr = resolvability_report(kt, kOmega, 0.5);
        CHECK(rr.nu0 > prev_nu0);
        CHECK(rr.u_star < prev_ustar);
        CHECK(rr.u_star ==
              doctest::Approx(std::sqrt(1.0 / rr.nu0 + 0.5)).epsilon(1e-14));
        CHECK(rr.recommended_sigma ==
              doctest::Approx(1.0 / std::sqrt(rr.nu0)).epsilon(1e-14));
        prev_nu0 = rr.nu0;
        prev_ustar = rr.u_star;
    }

    // local kernel uses the full delta weight
    const SpectralDensity loc{BathKind::OhmicNoCutoff, 0.4, 0.0, 1.0, kMass};
    const KernelTable klt = make_kernel_table(loc, kBeta, 0.0, TimeGrid{0.05, 256});
    const ResolvabilityReport lr = resolvability_report(klt, kOmega, 0.5);
    CHECK(lr.nu0 == doctest::Approx(klt.nu_delta).epsilon(1e-15));

    // regime flags at the two extremes
    const KernelTable kq = make_kernel_table(sd, kBeta, 1.0, grid);
    CHECK(resolvability_report(kq, kOmega, 10.0).regime == "trajectories-valid");
    CHECK(resolvability_report(kq, kOmega, 1e-3).regime == "quantum-dominated");

    const KernelTable kshort = make_kernel_table(sd, kBeta, 1.0, TimeGrid{0.01, 32});
    CHECK_THROWS_AS(resolvability_report(kshort, kOmega, 0.5), ConfigError);
    CHECK_THROWS_AS(resolvability_report(kq, kOmega, -1.0), ConfigError);
}

TEST_CASE("gaussian partition weights cover the state") {
    for (double variance : {0.25, 1.0}) {
        for (double sg : {0.3, 1.0, 3.0}) {
            const std::vector<double> w = partition_weights(variance, sg, 60);
            double sum = 0.0;
            for (double x : w) {
                CHECK(x >= 0.0);
                sum += x;
            }
            CHECK(sum == doctest::Approx(1.0).epsilon(0.05));
        }
    }
    CHECK_THROWS_AS(partition_weights(-1.0, 0.5, 10), ConfigError);
}
