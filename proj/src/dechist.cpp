#include "qbm/dechist.hpp"

#include "qbm/errors.hpp"

#include <Eigen/Dense>

#include <cmath>

namespace qbm {

void HistoryPair::validate() const {
    if (grid.n < 8) throw ConfigError("history grid needs at least 8 nodes");
    if (mean_history.size() != grid.n || separation.size() != grid.n ||
        sigma.size() != grid.n)
        throw ConfigError("history fields must all match the grid length");
    for (double s : sigma)
        if (!(s > 0.0)) throw ConfigError("resolution width must be positive");
}

namespace {

// Langevin operator applied to U: M U'' + 2M (gamma * U') + M W^2 U - f
std::vector<double> langevin_apply(const HistoryPair& hp, const KernelTable& kt,
                                   double omega, const Protocol* drive) {
    const std::size_t n = hp.grid.n;
    const double dt = hp.grid.dt;
    const double mass = kt.sd.mass;
    const std::vector<double>& u = hp.mean_history;

    std::vector<double> ud(n), udd(n);
    for (std::size_t j = 1; j + 1 < n; ++j) {
        ud[j] = (u[j + 1] - u[j - 1]) / (2.0 * dt);
        udd[j] = (u[j + 1] - 2.0 * u[j] + u[j - 1]) / (dt * dt);
    }
    ud[0] = (-3.0 * u[0] + 4.0 * u[1] - u[2]) / (2.0 * dt);
    ud[n - 1] = (3.0 * u[n - 1] - 4.0 * u[n - 2] + u[n - 3]) / (2.0 * dt);
    udd[0] = (2.0 * u[0] - 5.0 * u[1] + 4.0 * u[2] - u[3]) / (dt * dt);
    udd[n - 1] =
        (2.0 * u[n - 1] - 5.0 * u[n - 2] + 4.0 * u[n - 3] - u[n - 4]) / (dt * dt);

    std::vector<double> lu(n);
    for (std::size_t j = 0; j < n; ++j) {
        double friction;
        if (kt.local) {
            friction = 0.5 * kt.gamma_delta * ud[j];
        } else {
            double acc = 0.5 * kt.gamma_at(hp.grid.t(j)) * ud[0];
            for (std::size_t k = 1; k < j; ++k)
                acc += kt.gamma_at(hp.grid.t(j) - hp.grid.t(k)) * ud[k];
            acc += 0.5 * kt.gamma_at(0.0) * ud[j];
            friction = (j == 0 ? 0.0 : acc * dt);
        }
        lu[j] = mass * udd[j] + 2.0 * mass * friction +
                mass * omega * omega * u[j] -
                (drive ? drive->f(hp.grid.t(j)) : 0.0);
    }
    return lu;
}

} // namespace

DecoherenceExponents decoherence_exponent(const HistoryPair& hp,
                                          const KernelTable& kt, double omega,
                                          const Protocol* drive) {
    hp.validate();
    if (hp.grid.n > 2048)
        throw ConfigError("history grid exceeds the 2048-node solve cap");
    if (omega <= 0.0) throw ConfigError("decoherence_exponent needs omega > 0");

    const std::size_t n = hp.grid.n;
    const double dt = hp.grid.dt;

    // noise operator and its sigma regularization, dt-weighted values
    Eigen::MatrixXd nu(n, n);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k <= j; ++k) {
            const double v = kt.local
                                 ? (j == k ? kt.nu_delta : 0.0)
                                 : kt.nu_at(hp.grid.t(j) - hp.grid.t(k)) * dt;
            nu(j, k) = v;
            nu(k, j) = v;
        }
    Eigen::MatrixXd a = nu;
    for (std::size_t j = 0; j < n; ++j)
        a(j, j) += 1.0 / (2.0 * hp.sigma[j] * hp.sigma[j]);

    const Eigen::LLT<Eigen::MatrixXd> llt(a);
    if (llt.info() != Eigen::Success)
        throw NumericalError("regularized noise matrix is not positive definite; "
                             "the kernel table may be too coarse for this grid");

    const std::vector<double> lu = langevin_apply(hp, kt, omega, drive);
    Eigen::VectorXd luv(n), sep(n);
    for (std::size_t j = 0; j < n; ++j) {
        luv(j) = lu[j];
        sep(j) = hp.separation[j];
    }

    DecoherenceExponents out;
    out.diag_exponent = -0.5 * dt * luv.dot(llt.solve(luv));

    // u^T (nu^-1 + 2 s^2)^-1 u = u^T nu u - (nu u)^T a^-1 (nu u)
    const Eigen::VectorXd nuu = nu * sep;
    out.offdiag_exponent =
        -0.5 * dt * (sep.dot(nuu) - nuu.dot(llt.solve(nuu)));
    return out;
}

double scalar_offdiag_exponent(double nu0, double sigma, double u) {
    if (nu0 <= 0.0 || sigma <= 0.0)
        throw ConfigError("scalar model needs nu0 > 0 and sigma > 0");
    return -0.5 * u * u / (1.0 / nu0 + 2.0 * sigma * sigma);
}

ResolvabilityReport resolvability_report(const KernelTable& kt, double omega,
                                         double sigma) {
    if (omega <= 0.0 || sigma <= 0.0)
        throw ConfigError("resolvability_report needs omega > 0 and sigma > 0");

    ResolvabilityReport r;
    r.sigma = sigma;
    if (kt.local) {
        r.nu0 = kt.nu_delta;
    } else {
        const double half_period = M_PI / omega;
        if (kt.grid.horizon() < half_period)
            throw ConfigError("kernel table horizon is shorter than the system "
                              "period; rebuild it on a longer grid");
        const std::size_t m =
            static_cast<std::size_t>(std::floor(half_period / kt.grid.dt));
        double acc = 0.5 * kt.nu_at(0.0);
        for (std::size_t k = 1; k <= m; ++k) acc += kt.nu_at(k * kt.grid.dt);
        acc += 0.5 * kt.nu_at(half_period);
        r.nu0 = 2.0 * acc * kt.grid.dt;
    }
    if (r.nu0 <= 0.0)
        throw NumericalError("equal-time noise strength came out non-positive");

    r.u_star = std::sqrt(1.0 / r.nu0 + 2.0 * sigma * sigma);
    r.recommended_sigma = 1.0 / std::sqrt(r.nu0);
    const double s2 = sigma * sigma;
    if (s2 >= 1.0 / r.nu0)
        r.regime = "trajectories-valid";
    else if (s2 <= 0.01 / r.nu0)
        r.regime = "quantum-dominated";
    else
        r.regime = "marginal";
    return r;
}

std::vector<double> partition_weights(double variance, double sigma, int n_half) {
    if (variance <= 0.0 || sigma <= 0.0 || n_half < 1)
        throw ConfigError("partition_weights needs positive variance, sigma and "
                          "window count");
    const double v2 = variance + sigma * sigma;
    std::vector<double> w(2 * n_half + 1);
    for (int k = -n_half; k <= n_half; ++k) {
        const double xk = k * sigma;
        w[k + n_half] = sigma / std::sqrt(2.0 * M_PI * v2) *
                        std::exp(-0.5 * xk * xk / v2);
    }
    return w;
}

} // namespace qbm
