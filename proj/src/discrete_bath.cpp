#include "qbm/discrete_bath.hpp"

#include "qbm/errors.hpp"
#include "qbm/rng.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <thread>

namespace qbm {

double DiscreteBath::t_rec() const { return 2.0 * M_PI / domega; }

DiscreteBath discretize_bath(const SpectralDensity& sd, double omega,
                             std::size_t n_modes, double omega_max) {
    sd.validate();
    if (omega <= 0.0 || omega_max <= 0.0)
        throw ConfigError("discretize_bath needs positive frequencies");
    if (n_modes < 2) throw ConfigError("discretize_bath needs at least 2 modes");

    DiscreteBath bath;
    bath.mass = sd.mass;
    bath.omega = omega;
    bath.domega = omega_max / static_cast<double>(n_modes);
    bath.omega_n.resize(n_modes);
    bath.c_n.resize(n_modes);
    bath.m_n.assign(n_modes, 1.0);
    for (std::size_t n = 0; n < n_modes; ++n) {
        const double wn = (n + 0.5) * bath.domega;
        bath.omega_n[n] = wn;
        bath.c_n[n] = std::sqrt(bath.m_n[n] * wn * sd.j(wn) * bath.domega);
    }
    return bath;
}

double discrete_bath_kernel(const DiscreteBath& bath, double t) {
    double s = 0.0, c = 0.0;
    for (std::size_t n = 0; n < bath.omega_n.size(); ++n) {
        const double term = bath.c_n[n] * bath.c_n[n] /
                            (bath.m_n[n] * bath.omega_n[n] * bath.omega_n[n]) *
                            std::cos(bath.omega_n[n] * t);
        const double y = term - c;
        const double u = s + y;
        c = (u - s) - y;
        s = u;
    }
    return s / bath.mass;
}

namespace {

struct BathState {
    double x, p;
    std::vector<double> q, pq;
};

double hamiltonian(const DiscreteBath& b, const BathState& st, double f) {
    const double mw2 = b.mass * b.omega * b.omega;
    double e = st.p * st.p / (2.0 * b.mass) + 0.5 * mw2 * st.x * st.x - f * st.x;
    for (std::size_t n = 0; n < b.omega_n.size(); ++n) {
        const double kn = b.m_n[n] * b.omega_n[n] * b.omega_n[n];
        const double d = st.q[n] - b.c_n[n] / kn * st.x;
        e += st.pq[n] * st.pq[n] / (2.0 * b.m_n[n]) + 0.5 * kn * d * d;
    }
    return e;
}

// force on x plus per-mode forces; the bath enters x only through the
// displacement differences, so no potential renormalization appears
double forces(const DiscreteBath& b, const BathState& st, double f,
              std::vector<double>& fq) {
    double fx = -b.mass * b.omega * b.omega * st.x + f;
    for (std::size_t n = 0; n < b.omega_n.size(); ++n) {
        const double kn = b.m_n[n] * b.omega_n[n] * b.omega_n[n];
        const double d = st.q[n] - b.c_n[n] / kn * st.x;
        fx += b.c_n[n] * d;
        fq[n] = -kn * d;
    }
    return fx;
}

} // namespace

double discrete_bath_work(const DiscreteBath& bath, const Protocol& pr,
                          double beta, double dt, std::uint64_t seed,
                          std::uint64_t index, double* energy_residual) {
    if (beta <= 0.0) throw ConfigError("discrete_bath_work needs beta > 0");
    if (dt <= 0.0) throw ConfigError("discrete_bath_work needs dt > 0");
    const std::size_t steps = static_cast<std::size_t>(std::llround(pr.tau / dt));
    if (std::abs(steps * dt - pr.tau) > 1e-9 * pr.tau)
        throw ConfigError("discrete bath step must divide the protocol length");

    const std::size_t nb = bath.omega_n.size();
    std::mt19937_64 rng = stream_for(seed, index);
    std::normal_distribution<double> nd;

    // Gibbs draw of H(0): x marginal is the bare well shifted by f(0)
    const double mw2 = bath.mass * bath.omega * bath.omega;
    BathState st;
    st.x = pr.f(0.0) / mw2 + std::sqrt(1.0 / (beta * mw2)) * nd(rng);
    st.p = std::sqrt(bath.mass / beta) * nd(rng);
    st.q.resize(nb);
    st.pq.resize(nb);
    for (std::size_t n = 0; n < nb; ++n) {
        const double kn = bath.m_n[n] * bath.omega_n[n] * bath.omega_n[n];
        st.q[n] = bath.c_n[n] / kn * st.x + std::sqrt(1.0 / (beta * kn)) * nd(rng);
        st.pq[n] = std::sqrt(bath.m_n[n] / beta) * nd(rng);
    }
    const double e0 = hamiltonian(bath, st, pr.f(0.0));

    std::vector<double> fq(nb);
    double fx = forces(bath, st, pr.f(0.0), fq);
    double work = 0.0, wc = 0.0;
    double fdot_prev = pr.fdot(0.0);
    for (std::size_t k = 0; k < steps; ++k) {
        const double t1 = (k + 1) * dt;
        const double x_prev = st.x;
        st.p += 0.5 * dt * fx;
        for (std::size_t n = 0; n < nb; ++n) st.pq[n] += 0.5 * dt * fq[n];
        st.x += dt * st.p / bath.mass;
        for (std::size_t n = 0; n < nb; ++n) st.q[n] += dt * st.pq[n] / bath.m_n[n];
        fx = forces(bath, st, pr.f(t1), fq);
        st.p += 0.5 * dt * fx;
        for (std::size_t n = 0; n < nb; ++n) st.pq[n] += 0.5 * dt * fq[n];

        const double fdot_now = pr.fdot(t1);
        const double term = -0.5 * dt * (fdot_prev * x_prev + fdot_now * st.x);
        const double y = term - wc;
        const double u = work + y;
        wc = (u - work) - y;
        work = u;
        fdot_prev = fdot_now;
    }
    if (energy_residual) {
        const double ef = hamiltonian(bath, st, pr.f(pr.tau));
        *energy_residual = std::abs(ef - e0 - work);
    }
    return work;
}

DiscreteBathStats discrete_bath_run(const DiscreteBath& bath, const Protocol& pr,
                                    double beta, std::size_t n_runs,
                                    std::uint64_t seed, double dt, int threads,
                                    std::vector<double>* works) {
    pr.validate();
    if (n_runs < 16) throw ConfigError("discrete_bath_run needs at least 16 runs");
    const double wtop = bath.omega_n.empty() ? bath.omega : bath.omega_n.back();
    if (dt <= 0.0) {
        const std::size_t steps = static_cast<std::size_t>(
            std::ceil(pr.tau * 20.0 * std::max(wtop, bath.omega)));
        dt = pr.tau / static_cast<double>(steps);
    }

    std::vector<double> w(n_runs), er(n_runs);
    const int nt = std::max(1, threads);
    auto span = [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i)
            w[i] = discrete_bath_work(bath, pr, beta, dt, seed, i, &er[i]);
    };
    if (nt == 1) {
        span(0, n_runs);
    } else {
        std::vector<std::thread> pool;
        const std::size_t chunk = (n_runs + nt - 1) / nt;
        for (int t = 0; t < nt; ++t) {
            const std::size_t lo = t * chunk;
            const std::size_t hi = std::min(n_runs, lo + chunk);
            if (lo >= hi) break;
            pool.emplace_back([&span, lo, hi] { span(lo, hi); });
        }
        for (std::thread& th : pool) th.join();
    }

    DiscreteBathStats r;
    r.n_runs = n_runs;
    r.beta = beta;
    r.dt = dt;
    r.t_rec = bath.t_rec();
    const double mw2 = bath.mass * bath.omega * bath.omega;
    r.delta_f = -(pr.f(pr.tau) * pr.f(pr.tau) - pr.f(0.0) * pr.f(0.0)) / (2.0 * mw2);
    r.energy_residual_max = *std::max_element(er.begin(), er.end());

    const double n = static_cast<double>(n_runs);
    double s = 0.0;
    for (double v : w) s += v;
    r.mean = s / n;
    double s2 = 0.0;
    for (double v : w) s2 += (v - r.mean) * (v - r.mean);
    r.variance = s2 / (n - 1.0);
    r.mean_se = std::sqrt(r.variance / n);
    r.variance_se = r.variance * std::sqrt(2.0 / (n - 1.0));

    double shift = -beta * (w[0] - r.delta_f);
    for (double v : w) shift = std::max(shift, -beta * (v - r.delta_f));
    std::vector<double> q(n_runs);
    for (std::size_t i = 0; i < n_runs; ++i)
        q[i] = std::exp(-beta * (w[i] - r.delta_f) - shift);
    double sq = 0.0, sq2 = 0.0;
    for (double v : q) {
        sq += v;
        sq2 += v * v;
    }
    r.jarzynski_ratio = std::exp(shift) * sq / n;
    const double qbar = sq / n;
    double qdev = 0.0;
    for (double v : q) qdev += (v - qbar) * (v - qbar);
    r.jarzynski_se = std::exp(shift) * std::sqrt(qdev / (n - 1.0) / n);
    r.n_eff = sq * sq / sq2;
    r.log_ratio = shift + std::log(qbar);
    r.log_ratio_se = r.jarzynski_se / r.jarzynski_ratio;
    if (works) *works = std::move(w);
    return r;
}

} // namespace qbm
