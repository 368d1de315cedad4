#include "qbm/mc.hpp"

#include "qbm/errors.hpp"
#include "qbm/rng.hpp"
#include "qbm/spectral_density.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <thread>

namespace qbm {

namespace {

using cplx = std::complex<double>;

// fluctuation spectrum from the Laplace response: sigma~(w) with
// h~_e(w) = 2 Re gamma^(-iw) W^2 / (pi |D(-iw)|^2)
double spectrum_value(const SpectralDensity& sd, double omega, double beta,
                      double hbar, double w) {
    const cplx gh = damping_laplace(sd, cplx(0.0, -w));
    const cplx den = cplx(omega * omega - w * w, 0.0) - 2.0 * cplx(0.0, w) * gh;
    const double he = 2.0 * gh.real() * omega * omega / std::norm(den) / M_PI;
    const double weight = (2.0 / beta) * (hbar > 0.0 ? xcoth(0.5 * beta * hbar * w) : 1.0);
    return weight * he / (2.0 * sd.mass * omega * omega);
}

double kahan_sum(const std::vector<double>& v) {
    double s = 0.0, c = 0.0;
    for (double x : v) {
        const double y = x - c;
        const double t = s + y;
        c = (t - s) - y;
        s = t;
    }
    return s;
}

} // namespace

McModel mc_model(const SpectralDensity& sd, const GreensFunctions& gf,
                 const Protocol& pr, double beta, double hbar,
                 const McOptions& opt) {
    sd.validate();
    pr.validate();
    if (beta <= 0.0 || hbar < 0.0)
        throw ConfigError("mc_model needs beta > 0 and hbar >= 0");
    if (opt.n_path < 8)
        throw ConfigError("mc_model path grid is too coarse");

    McModel m;
    m.beta = beta;
    m.hbar = hbar;
    m.mass = gf.mass;
    m.omega = gf.omega;
    m.protocol = pr;

    const WorkStatistics ws = work_statistics(gf, pr, beta, hbar);
    m.delta_f = ws.delta_f;
    m.work_det = ws.mean_response;

    // midpoint frequency comb: period 2(tau + T_mem) pushes periodization
    // images past the kernel decay, midpoints avoid any w = 0 singularity
    const double gamma_eff = damping_laplace(sd, gf.omega);
    const double t_mc = pr.tau + 14.0 / gamma_eff;
    const double dw = M_PI / t_mc;
    const DriveRegime dr = classify_regime(pr, beta, std::max(hbar, 1e-30));
    const double wmax = opt.omega_max > 0.0
                            ? opt.omega_max
                            : std::max(40.0 * gf.omega, 8.0 * dr.omega_high);
    const std::size_t nk = static_cast<std::size_t>(std::ceil(wmax / dw));
    if (nk > 500000)
        throw NumericalError("mc_model mode count is excessive; lower omega_max "
                             "or shorten the memory window");

    m.omega_k.resize(nk);
    m.amp_k.resize(nk);
    m.couple_re.resize(nk);
    m.couple_im.resize(nk);
    std::vector<double> c2(nk);
    for (std::size_t k = 0; k < nk; ++k) {
        const double w = (k + 0.5) * dw;
        const double ck = std::max(0.0, 2.0 * dw * spectrum_value(sd, gf.omega, beta, hbar, w));
        const cplx ft = pr.drive_ft(w);
        m.omega_k[k] = w;
        m.amp_k[k] = std::sqrt(ck);
        m.couple_re[k] = m.amp_k[k] * 2.0 * M_PI * ft.real();
        m.couple_im[k] = m.amp_k[k] * 2.0 * M_PI * ft.imag();
        c2[k] = m.couple_re[k] * m.couple_re[k] + m.couple_im[k] * m.couple_im[k];
    }
    m.var_model = kahan_sum(c2);

    m.path_grid = TimeGrid{pr.tau / static_cast<double>(opt.n_path), opt.n_path + 1};
    const std::vector<double> xf = mean_position(gf, pr);
    m.mean_path.resize(m.path_grid.n);
    for (std::size_t j = 0; j < m.path_grid.n; ++j) {
        const double t = m.path_grid.t(j);
        const double u = std::min(t / gf.grid.dt, static_cast<double>(gf.grid.n - 1));
        const std::size_t j0 = std::min(static_cast<std::size_t>(u), gf.grid.n - 2);
        const double frac = u - static_cast<double>(j0);
        m.mean_path[j] = (1.0 - frac) * xf[j0] + frac * xf[j0 + 1];
    }
    return m;
}

double mc_work(const McModel& model, std::uint64_t seed, std::uint64_t index) {
    std::mt19937_64 rng = stream_for(seed, index);
    std::normal_distribution<double> nd;
    double acc = 0.0;
    for (std::size_t k = 0; k < model.omega_k.size(); ++k) {
        const double a = nd(rng);
        const double b = nd(rng);
        acc += model.couple_re[k] * a + model.couple_im[k] * b;
    }
    return model.work_det - acc;
}

std::vector<double> mc_path(const McModel& model, std::uint64_t seed,
                            std::uint64_t index) {
    std::mt19937_64 rng = stream_for(seed, index);
    std::normal_distribution<double> nd;
    std::vector<double> x = model.mean_path;
    for (std::size_t k = 0; k < model.omega_k.size(); ++k) {
        const double a = model.amp_k[k] * nd(rng);
        const double b = model.amp_k[k] * nd(rng);
        const double w = model.omega_k[k];
        for (std::size_t j = 0; j < x.size(); ++j) {
            const double t = model.path_grid.t(j);
            x[j] += a * std::cos(w * t) + b * std::sin(w * t);
        }
    }
    return x;
}

McResult mc_run(const McModel& model, std::size_t n_traj, std::uint64_t seed,
                int threads, std::vector<double>* works) {
    if (n_traj < 16) throw ConfigError("mc_run needs at least 16 trajectories");
    std::vector<double> w(n_traj);
    const int nt = std::max(1, threads);
    if (nt == 1) {
        for (std::size_t i = 0; i < n_traj; ++i) w[i] = mc_work(model, seed, i);
    } else {
        std::vector<std::thread> pool;
        const std::size_t chunk = (n_traj + nt - 1) / nt;
        for (int t = 0; t < nt; ++t) {
            const std::size_t lo = t * chunk;
            const std::size_t hi = std::min(n_traj, lo + chunk);
            if (lo >= hi) break;
            pool.emplace_back([&, lo, hi] {
                for (std::size_t i = lo; i < hi; ++i) w[i] = mc_work(model, seed, i);
            });
        }
        for (std::thread& th : pool) th.join();
    }

    McResult r;
    r.n_traj = n_traj;
    r.beta = model.beta;
    r.hbar = model.hbar;
    r.delta_f = model.delta_f;

    const double n = static_cast<double>(n_traj);
    r.mean = kahan_sum(w) / n;
    std::vector<double> dev2(n_traj);
    for (std::size_t i = 0; i < n_traj; ++i) {
        const double d = w[i] - r.mean;
        dev2[i] = d * d;
    }
    r.variance = kahan_sum(dev2) / (n - 1.0);
    r.mean_se = std::sqrt(r.variance / n);
    r.variance_se = r.variance * std::sqrt(2.0 / (n - 1.0));

    // exponential reweighting in max-shifted form to dodge overflow
    std::vector<double> q(n_traj);
    double shift = -model.beta * (w[0] - model.delta_f);
    for (std::size_t i = 1; i < n_traj; ++i)
        shift = std::max(shift, -model.beta * (w[i] - model.delta_f));
    for (std::size_t i = 0; i < n_traj; ++i)
        q[i] = std::exp(-model.beta * (w[i] - model.delta_f) - shift);
    const double sq = kahan_sum(q);
    r.jarzynski_ratio = std::exp(shift) * sq / n;
    // delete-1 jackknife of a sample mean reduces to s_q / sqrt(n)
    std::vector<double> qdev2(n_traj);
    for (std::size_t i = 0; i < n_traj; ++i) {
        const double d = q[i] - sq / n;
        qdev2[i] = d * d;
    }
    r.jarzynski_se =
        std::exp(shift) * std::sqrt(kahan_sum(qdev2) / (n - 1.0) / n);
    std::vector<double> q2(n_traj);
    for (std::size_t i = 0; i < n_traj; ++i) q2[i] = q[i] * q[i];
    r.n_eff = sq * sq / kahan_sum(q2);
    r.heavy_tail =
        model.beta * std::sqrt(r.variance) > 3.0 || r.n_eff < 0.01 * n;
    if (works) *works = std::move(w);
    return r;
}

} // namespace qbm
