#include "commands.hpp"

#include "qbm/dechist.hpp"
#include "qbm/discrete_bath.hpp"
#include "qbm/errors.hpp"
#include "qbm/greens.hpp"
#include "qbm/kernels.hpp"
#include "qbm/mc.hpp"
#include "qbm/report.hpp"
#include "qbm/thermal.hpp"
#include "qbm/work.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <iostream>
#include <utility>
#include <vector>

#include <json.hpp>

namespace qbm::cli {

namespace {

using nlohmann::ordered_json;

// Decay window appended past tau so covariances relax before the grid ends:
// 14 e-folds of the slowest response pole (the damping rate when
// underdamped, W^2/2g when overdamped).
double default_extra(const ExperimentConfig& cfg) {
    const double g = damping_laplace(cfg.bath, cfg.omega);
    double rate = std::min(g, cfg.omega * cfg.omega / (2.0 * g));
    rate = std::min(rate, cfg.omega);
    return 14.0 / rate;
}

TimeGrid pipeline_grid(const ExperimentConfig& cfg) {
    const double tau = cfg.protocol.tau;
    const double extra = cfg.horizon > 0.0 ? cfg.horizon : default_extra(cfg);
    if (cfg.dt <= 0.0) return work_grid(cfg.bath, cfg.omega, tau, extra);
    const auto m = std::max<std::size_t>(
        static_cast<std::size_t>(std::ceil(tau / cfg.dt)), 1);
    const double dt = tau / static_cast<double>(m);
    const auto n = static_cast<std::size_t>(std::ceil((tau + extra) / dt)) + 1;
    return TimeGrid{dt, n};
}

struct Pipeline {
    TimeGrid grid;
    KernelTable kt;
    GreensFunctions gf;
    GreensResiduals residuals;
};

// kernels -> greens, with the solver identity residuals gated against the
// configured tolerance so a too-coarse dt fails loudly instead of silently
// degrading every downstream number.
Pipeline build_pipeline(const ExperimentConfig& cfg) {
    Pipeline p;
    p.grid = pipeline_grid(cfg);
    p.kt = make_kernel_table(cfg.bath, cfg.beta, cfg.hbar, p.grid);
    p.gf = solve_greens(p.kt, cfg.omega);
    p.residuals = greens_identity_residuals(p.gf, p.kt);
    const double gate = cfg.tolerance * cfg.mass * cfg.omega * cfg.omega;
    const double worst = std::max(p.residuals.hdot_identity, p.residuals.gdot_identity);
    if (!(worst <= gate))
        throw NumericalError(
            "greens: identity residual " + format_number(worst) +
            " exceeds tolerance * M * Omega^2 = " + format_number(gate) +
            "; refine [numerics] dt or relax [numerics] tolerance");
    return p;
}

double protocol_delta_f(const ExperimentConfig& cfg) {
    const double fa = cfg.protocol.f(0.0);
    const double fb = cfg.protocol.f(cfg.protocol.tau);
    return -(fb * fb - fa * fa) / (2.0 * cfg.mass * cfg.omega * cfg.omega);
}

ordered_json grid_json(const TimeGrid& grid) {
    return ordered_json{{"dt", grid.dt},
                        {"nodes", grid.n},
                        {"horizon", grid.horizon()}};
}

using Tables = std::vector<std::pair<std::string, std::string>>;

// Writes manifest + config + artifacts into <directory>/<sub>/ and prints
// the report on stdout. Progress notes go to stderr so stdout stays a single
// JSON document.
void write_outputs(const ExperimentConfig& cfg, const std::string& sub,
                   const ordered_json& report, const Tables& tables) {
    const std::string dir = make_run_dir(cfg.directory, sub);
    write_manifest(dir, sub, serialize_config(cfg), cfg.seed);
    if (cfg.write_json) write_file(dir + "/report.json", report.dump(2) + "\n");
    if (cfg.write_csv)
        for (const auto& [name, content] : tables) write_file(dir + "/" + name, content);
    std::cout << report.dump(2) << "\n";
    std::cerr << "wrote " << dir << "\n";
}

// Resolvability inputs live on one half system period; the work grid may be
// shorter than that for fast protocols, so give them their own fine grid.
KernelTable period_kernel_table(const ExperimentConfig& cfg) {
    const double half_period = M_PI / cfg.omega;
    const TimeGrid grid{half_period / 512.0, 515};
    return make_kernel_table(cfg.bath, cfg.beta, cfg.hbar, grid);
}

std::vector<double> resample(const std::vector<double>& y, const TimeGrid& src,
                             const TimeGrid& dst) {
    std::vector<double> out(dst.n);
    for (std::size_t j = 0; j < dst.n; ++j) {
        const double s = dst.t(j) / src.dt;
        std::size_t k = static_cast<std::size_t>(s);
        if (k + 2 > src.n) k = src.n - 2;
        const double w = s - static_cast<double>(k);
        out[j] = (1.0 - w) * y[k] + w * y[k + 1];
    }
    return out;
}

// Band and recurrence guard for the explicit finite bath.
DiscreteBath make_discrete_bath(const ExperimentConfig& cfg) {
    const double base =
        std::max({cfg.omega, cfg.bath.cutoff, cfg.bath.gamma0});
    DiscreteBath bath =
        discretize_bath(cfg.bath, cfg.omega, cfg.oracle_modes, 10.0 * base);
    if (cfg.protocol.tau > 0.9 * bath.t_rec())
        throw ConfigError(
            "mc: protocol window tau = " + format_number(cfg.protocol.tau) +
            " reaches the bath recurrence time " + format_number(bath.t_rec()) +
            "; raise [mc] oracle = discrete:N");
    return bath;
}

void quality_gate(const char* sub, double n_eff, std::size_t n) {
    const double floor_eff = 0.01 * static_cast<double>(n);
    if (n_eff < floor_eff)
        throw StatisticalError(
            std::string(sub) + ": effective sample size " + format_number(n_eff) +
            " fell below 1% of N = " + std::to_string(n) +
            "; the exponential estimator is not trustworthy here");
}

} // namespace

void apply_env_overrides(ExperimentConfig& cfg) {
    const char* dir = std::getenv("QBM_OUTPUT_DIR");
    if (dir && *dir) cfg.directory = dir;
}

int threads_from_env() {
    const char* v = std::getenv("QBM_THREADS");
    if (!v || !*v) return 1;
    int n = 0;
    const char* e = v + std::strlen(v);
    auto r = std::from_chars(v, e, n);
    if (r.ec != std::errc{} || r.ptr != e || n < 1 || n > 256)
        throw ConfigError("QBM_THREADS must be an integer in [1, 256]");
    return n;
}

void apply_oracle_flag(ExperimentConfig& cfg, const std::string& value) {
    if (value.empty()) return;
    if (value == "continuum") {
        cfg.oracle = OracleKind::Continuum;
        return;
    }
    if (value.rfind("discrete:", 0) == 0) {
        std::uint64_t n = 0;
        const std::string tail = value.substr(9);
        const char* b = tail.data();
        const char* e = b + tail.size();
        auto r = std::from_chars(b, e, n);
        if (r.ec == std::errc{} && r.ptr == e && n >= 8) {
            cfg.oracle = OracleKind::Discrete;
            cfg.oracle_modes = static_cast<std::size_t>(n);
            return;
        }
    }
    throw ConfigError("--oracle must be continuum or discrete:N with N >= 8");
}

void apply_mode_flag(ExperimentConfig& cfg, const std::string& value) {
    if (value.empty()) return;
    if (value == "classical") {
        cfg.hbar = 0.0;
        return;
    }
    if (value == "quantum") {
        if (!(cfg.hbar > 0.0))
            throw ConfigError("--mode quantum needs hbar > 0 in [bath]");
        return;
    }
    throw ConfigError("--mode must be quantum or classical");
}

int cmd_kernels(const ExperimentConfig& cfg) {
    const TimeGrid grid = pipeline_grid(cfg);
    const KernelTable kt = make_kernel_table(cfg.bath, cfg.beta, cfg.hbar, grid);

    Tables tables;
    if (!kt.local) {
        CsvTable t;
        t.header = {"t", "gamma", "nu"};
        for (std::size_t k = 0; k < grid.n; ++k)
            t.add_row({grid.t(k), kt.gamma[k], kt.nu[k]});
        tables.emplace_back("kernels.csv", t.to_string());
    }
    CsvTable s;
    s.header = {"omega", "gamma_ft", "nu_ft"};
    for (std::size_t k = 0; k < kt.omega.size(); ++k)
        s.add_row({kt.omega[k], kt.gamma_ft[k], kt.nu_ft[k]});
    tables.emplace_back("spectra.csv", s.to_string());

    ordered_json rep;
    rep["kind"] = to_string(kt.sd.kind);
    rep["local"] = kt.local;
    rep["beta"] = kt.beta;
    rep["hbar"] = kt.hbar;
    if (kt.local) {
        rep["gamma_delta"] = kt.gamma_delta;
        rep["nu_delta"] = kt.nu_delta;
    }
    rep["fdr_violation"] = kt.fdr_violation();
    rep["nyquist"] = kt.nyquist();
    rep["grid"] = grid_json(grid);
    write_outputs(cfg, "kernels", rep, tables);
    return 0;
}

int cmd_greens(const ExperimentConfig& cfg) {
    const Pipeline p = build_pipeline(cfg);

    CsvTable t;
    t.header = {"t", "h", "hdot", "g", "gdot"};
    for (std::size_t k = 0; k < p.grid.n; ++k)
        t.add_row({p.grid.t(k), p.gf.h[k], p.gf.hdot[k], p.gf.g[k], p.gf.gdot[k]});

    ordered_json rep;
    rep["mass"] = cfg.mass;
    rep["omega"] = cfg.omega;
    rep["markovian_closed_form"] = p.kt.local;
    rep["hdot_identity_residual"] = p.residuals.hdot_identity;
    rep["gdot_identity_residual"] = p.residuals.gdot_identity;
    rep["residual_gate"] = cfg.tolerance * cfg.mass * cfg.omega * cfg.omega;
    rep["grid"] = grid_json(p.grid);
    write_outputs(cfg, "greens", rep, {{"greens.csv", t.to_string()}});
    return 0;
}

int cmd_thermal(const ExperimentConfig& cfg) {
    ordered_json rep;
    std::vector<std::string> notes;
    rep["sigma_xx0"] = thermal_sigma_xx(cfg.bath, cfg.omega, cfg.beta, cfg.hbar,
                                        cfg.matsubara_terms);
    try {
        rep["sigma_pp0"] = thermal_sigma_pp(cfg.bath, cfg.omega, cfg.beta,
                                            cfg.hbar, cfg.matsubara_terms);
    } catch (const NumericalError& e) {
        rep["sigma_pp0"] = nullptr;
        notes.emplace_back(e.what());
    }
    try {
        rep["f_offset"] = dressed_free_energy(cfg.bath, cfg.omega, cfg.beta,
                                              cfg.hbar, cfg.matsubara_terms);
    } catch (const ConfigError& e) {
        rep["f_offset"] = nullptr;
        notes.emplace_back(e.what());
    } catch (const NumericalError& e) {
        rep["f_offset"] = nullptr;
        notes.emplace_back(e.what());
    }
    rep["delta_f"] = protocol_delta_f(cfg);
    rep["beta"] = cfg.beta;
    rep["hbar"] = cfg.hbar;
    rep["matsubara_terms"] = cfg.matsubara_terms;
    rep["notes"] = notes;
    write_outputs(cfg, "thermal", rep, {});
    return 0;
}

int cmd_work(const ExperimentConfig& cfg) {
    const Pipeline p = build_pipeline(cfg);
    const WorkStatistics ws = work_statistics(p.gf, cfg.protocol, cfg.beta, cfg.hbar);
    const DriveRegime dr = classify_regime(cfg.protocol, cfg.beta, cfg.hbar);

    ordered_json rep;
    rep["meanW"] = ws.mean;
    rep["varW"] = ws.variance;
    rep["deltaF"] = ws.delta_f;
    rep["jarzynski_residual"] = ws.jarzynski_residual;
    rep["crooks_slope"] = ws.crooks_beta_eff;
    rep["regime"] = dr.label;
    rep["dissipated"] = ws.dissipated();
    rep["mean_response_route"] = ws.mean_response;
    rep["variance_spectral_route"] = ws.variance_spectral;
    rep["mean_reverse"] = ws.mean_reverse;
    rep["variance_reverse"] = ws.variance_reverse;
    rep["beta"] = cfg.beta;
    rep["hbar"] = cfg.hbar;
    rep["drive_band"] = ordered_json{{"omega_low", dr.omega_low},
                                     {"omega_high", dr.omega_high}};
    rep["grid"] = grid_json(p.grid);
    write_outputs(cfg, "work", rep, {});
    return 0;
}

int cmd_expand(const ExperimentConfig& cfg) {
    const Pipeline p = build_pipeline(cfg);
    const WorkStatistics ws = work_statistics(p.gf, cfg.protocol, cfg.beta, cfg.hbar);
    const DriveRegime dr = classify_regime(cfg.protocol, cfg.beta, cfg.hbar);
    const std::vector<double> terms =
        hightemp_variance_terms(p.gf, cfg.protocol, cfg.beta, cfg.hbar, 6);

    CsvTable t;
    t.header = {"n", "term", "partial_sum", "exact", "abs_remainder"};
    double partial = 0.0;
    for (std::size_t n = 0; n < terms.size(); ++n) {
        partial += terms[n];
        t.add_row({static_cast<double>(n), terms[n], partial, ws.variance,
                   std::abs(ws.variance - partial)});
    }

    ordered_json rep;
    rep["exact_variance"] = ws.variance;
    rep["classical_term"] = terms.front();
    rep["quantum_correction"] = ws.variance - terms.front();
    rep["partial_sum"] = partial;
    rep["terms"] = terms.size();
    rep["regime"] = dr.label;
    rep["beta_hbar_omega_high"] = cfg.beta * cfg.hbar * dr.omega_high;
    rep["series_convergent"] = cfg.beta * cfg.hbar * dr.omega_high < M_PI;
    write_outputs(cfg, "expand", rep, {{"series.csv", t.to_string()}});
    return 0;
}

int cmd_mc(const ExperimentConfig& cfg, int threads) {
    const Pipeline p = build_pipeline(cfg);
    const WorkStatistics ws = work_statistics(p.gf, cfg.protocol, cfg.beta, cfg.hbar);

    ordered_json rep;
    std::vector<double> works;
    double n_eff = 0.0;
    rep["samples"] = cfg.samples;
    rep["seed"] = cfg.seed;
    rep["mode"] = cfg.hbar > 0.0 ? "quantum" : "classical";

    if (cfg.oracle == OracleKind::Continuum) {
        rep["oracle"] = "continuum";
        const McModel model =
            mc_model(cfg.bath, p.gf, cfg.protocol, cfg.beta, cfg.hbar);
        const McResult r = mc_run(model, cfg.samples, cfg.seed, threads, &works);
        n_eff = r.n_eff;
        rep["mean"] = r.mean;
        rep["mean_se"] = r.mean_se;
        rep["variance"] = r.variance;
        rep["variance_se"] = r.variance_se;
        rep["jarzynski_ratio"] = r.jarzynski_ratio;
        rep["jarzynski_se"] = r.jarzynski_se;
        rep["jarzynski_residual_mc"] = r.residual();
        rep["n_eff"] = r.n_eff;
        rep["heavy_tail"] = r.heavy_tail;
        rep["delta_f"] = r.delta_f;
        rep["modes"] = model.omega_k.size();
        rep["model_variance"] = model.var_model;
    } else {
        if (cfg.hbar > 0.0)
            throw ConfigError("mc: the discrete oracle is classical; set hbar = 0 "
                              "in [bath] or pass --mode classical");
        rep["oracle"] = "discrete:" + std::to_string(cfg.oracle_modes);
        const DiscreteBath bath = make_discrete_bath(cfg);
        const DiscreteBathStats r = discrete_bath_run(
            bath, cfg.protocol, cfg.beta, cfg.samples, cfg.seed, 0.0, threads, &works);
        n_eff = r.n_eff;
        rep["mean"] = r.mean;
        rep["mean_se"] = r.mean_se;
        rep["variance"] = r.variance;
        rep["variance_se"] = r.variance_se;
        rep["jarzynski_ratio"] = r.jarzynski_ratio;
        rep["jarzynski_se"] = r.jarzynski_se;
        rep["jarzynski_residual_mc"] = r.jarzynski_ratio - 1.0;
        rep["log_ratio"] = r.log_ratio;
        rep["log_ratio_se"] = r.log_ratio_se;
        rep["n_eff"] = r.n_eff;
        rep["delta_f"] = r.delta_f;
        rep["energy_residual_max"] = r.energy_residual_max;
        rep["recurrence_time"] = r.t_rec;
        rep["verlet_dt"] = r.dt;
    }

    rep["analytic"] = ordered_json{{"meanW", ws.mean},
                                   {"varW", ws.variance},
                                   {"deltaF", ws.delta_f},
                                   {"jarzynski_residual", ws.jarzynski_residual}};

    CsvTable t;
    t.header = {"index", "work"};
    for (std::size_t i = 0; i < works.size(); ++i)
        t.add_row({static_cast<double>(i), works[i]});
    write_outputs(cfg, "mc", rep, {{"works.csv", t.to_string()}});
    quality_gate("mc", n_eff, cfg.samples);
    return 0;
}

int cmd_dechist(const ExperimentConfig& cfg, double sigma, double separation_scale) {
    if (!(sigma >= 0.0)) throw ConfigError("--sigma must be >= 0 (0 = recommended)");
    if (!(separation_scale > 0.0))
        throw ConfigError("--separation-scale must be > 0");

    const Pipeline p = build_pipeline(cfg);
    const KernelTable ktp = period_kernel_table(cfg);
    const ResolvabilityReport probe = resolvability_report(ktp, cfg.omega, 1.0);
    const double sigma_used = sigma > 0.0 ? sigma : probe.recommended_sigma;
    const ResolvabilityReport rr = resolvability_report(ktp, cfg.omega, sigma_used);
    const double separation = separation_scale * rr.u_star;

    // histories live on the protocol window only, capped at 1025 nodes to
    // keep the dense noise matrix well inside the solver's grid limit
    const double tau = cfg.protocol.tau;
    const auto m = static_cast<std::size_t>(std::llround(tau / p.grid.dt));
    const TimeGrid dg = m + 1 <= 1025 ? TimeGrid{p.grid.dt, m + 1}
                                      : TimeGrid{tau / 1024.0, 1025};
    const KernelTable kd = make_kernel_table(cfg.bath, cfg.beta, cfg.hbar, dg);

    HistoryPair hp;
    hp.grid = dg;
    hp.mean_history = resample(mean_position(p.gf, cfg.protocol), p.grid, dg);
    hp.separation.assign(dg.n, separation);
    hp.sigma.assign(dg.n, sigma_used);
    const DecoherenceExponents de =
        decoherence_exponent(hp, kd, cfg.omega, &cfg.protocol);

    const double var = thermal_sigma_xx(cfg.bath, cfg.omega, cfg.beta, cfg.hbar,
                                        cfg.matsubara_terms);
    const int n_half = std::min(
        2000, std::max(1, static_cast<int>(std::ceil(
                              5.0 * std::sqrt(var + sigma_used * sigma_used) /
                              sigma_used))));
    const std::vector<double> weights = partition_weights(var, sigma_used, n_half);
    double weight_sum = 0.0;
    for (double w : weights) weight_sum += w;

    CsvTable t;
    t.header = {"window", "weight"};
    for (std::size_t i = 0; i < weights.size(); ++i)
        t.add_row({static_cast<double>(i) - n_half, weights[i]});

    ordered_json rep;
    rep["sigma"] = sigma_used;
    rep["sigma_source"] = sigma > 0.0 ? "flag" : "recommended";
    rep["separation_scale"] = separation_scale;
    rep["separation"] = separation;
    rep["nu0"] = rr.nu0;
    rep["u_star"] = rr.u_star;
    rep["recommended_sigma"] = rr.recommended_sigma;
    rep["regime"] = rr.regime;
    rep["scalar_offdiag_exponent"] =
        scalar_offdiag_exponent(rr.nu0, sigma_used, separation);
    rep["diag_exponent"] = de.diag_exponent;
    rep["offdiag_exponent"] = de.offdiag_exponent;
    rep["offdiag_per_node"] = de.offdiag_exponent / static_cast<double>(dg.n);
    rep["nodes"] = dg.n;
    rep["history_dt"] = dg.dt;
    rep["thermal_variance"] = var;
    rep["partition"] = ordered_json{{"windows", weights.size()},
                                    {"weight_sum", weight_sum},
                                    {"center_weight", weights[n_half]}};
    rep["decoherence_flag"] =
        probe.recommended_sigma * probe.recommended_sigma <= var;
    write_outputs(cfg, "dechist", rep, {{"partition.csv", t.to_string()}});
    return 0;
}

int cmd_verify_ft(const ExperimentConfig& cfg, int threads) {
    const Pipeline p = build_pipeline(cfg);
    const double fdr = p.kt.fdr_violation();
    const double sxx = thermal_sigma_xx(cfg.bath, cfg.omega, cfg.beta, cfg.hbar,
                                        cfg.matsubara_terms);
    const WorkStatistics ws = work_statistics(p.gf, cfg.protocol, cfg.beta, cfg.hbar);
    const DriveRegime dr = classify_regime(cfg.protocol, cfg.beta, cfg.hbar);

    double mc_est = 0.0, mc_se = 0.0, mc_neff = 0.0;
    std::string oracle;
    if (cfg.oracle == OracleKind::Continuum) {
        oracle = "continuum";
        const McModel model =
            mc_model(cfg.bath, p.gf, cfg.protocol, cfg.beta, cfg.hbar);
        const McResult r = mc_run(model, cfg.samples, cfg.seed, threads);
        mc_est = r.residual();
        mc_se = r.jarzynski_se;
        mc_neff = r.n_eff;
    } else {
        if (cfg.hbar > 0.0)
            throw ConfigError("verify-ft: the discrete oracle is classical; use "
                              "oracle = continuum for hbar > 0");
        oracle = "discrete:" + std::to_string(cfg.oracle_modes);
        const DiscreteBath bath = make_discrete_bath(cfg);
        const DiscreteBathStats r = discrete_bath_run(
            bath, cfg.protocol, cfg.beta, cfg.samples, cfg.seed, 0.0, threads);
        mc_est = r.jarzynski_ratio - 1.0;
        mc_se = r.jarzynski_se;
        mc_neff = r.n_eff;
    }

    // the noise level resolves the thermal position spread iff partitioning
    // at the recommended accuracy separates thermally distinct branches
    const KernelTable ktp = period_kernel_table(cfg);
    const ResolvabilityReport probe = resolvability_report(ktp, cfg.omega, 1.0);
    const bool decohered = probe.recommended_sigma * probe.recommended_sigma <= sxx;

    ordered_json rep;
    rep["jarzynski_residual_analytic"] = ws.jarzynski_residual;
    rep["jarzynski_estimate_mc"] = mc_est;
    rep["jarzynski_estimate_mc_stderr"] = mc_se;
    rep["crooks_slope"] = ws.crooks_beta_eff;
    rep["regime"] = dr.label;
    rep["decoherence_flag"] = decohered;
    rep["mc_z"] = mc_se > 0.0 ? (mc_est - ws.jarzynski_residual) / mc_se : 0.0;
    rep["meanW"] = ws.mean;
    rep["varW"] = ws.variance;
    rep["deltaF"] = ws.delta_f;
    rep["sigma_xx0"] = sxx;
    rep["fdr_violation"] = fdr;
    rep["nu0"] = probe.nu0;
    rep["recommended_sigma"] = probe.recommended_sigma;
    rep["oracle"] = oracle;
    rep["samples"] = cfg.samples;
    rep["seed"] = cfg.seed;
    rep["n_eff"] = mc_neff;
    rep["beta"] = cfg.beta;
    rep["hbar"] = cfg.hbar;
    rep["greens_residuals"] =
        ordered_json{{"hdot_identity", p.residuals.hdot_identity},
                     {"gdot_identity", p.residuals.gdot_identity}};
    write_outputs(cfg, "verify-ft", rep, {});
    quality_gate("verify-ft", mc_neff, cfg.samples);
    return 0;
}

int cmd_sweep(const ExperimentConfig& cfg, const SweepFlags& fl) {
    if (fl.points < 2 || fl.points > 10000)
        throw ConfigError("--points must lie in [2, 10000]");
    const bool is_hbar = fl.param == "hbar";
    const bool is_beta = fl.param == "beta";
    const bool is_gamma0 = fl.param == "gamma0";
    const bool is_tau = fl.param == "tau";
    if (!is_hbar && !is_beta && !is_gamma0 && !is_tau)
        throw ConfigError("--param must be one of hbar, beta, gamma0, tau");
    if (fl.log_spacing && !(fl.from > 0.0 && fl.to > 0.0))
        throw ConfigError("--log needs positive --from and --to");
    const double lo = is_hbar ? 0.0 : 1e-12;
    if (fl.from < lo || fl.to < lo)
        throw ConfigError("--from/--to out of range for parameter " + fl.param);

    std::vector<double> values(fl.points);
    for (std::size_t i = 0; i < fl.points; ++i) {
        const double s = static_cast<double>(i) / static_cast<double>(fl.points - 1);
        values[i] = fl.log_spacing
                        ? fl.from * std::pow(fl.to / fl.from, s)
                        : fl.from + (fl.to - fl.from) * s;
    }

    // hbar and beta leave the response functions untouched, so those sweeps
    // reuse one solve; gamma0 and tau rebuild the pipeline per point
    Pipeline base;
    const bool shared_pipeline = is_hbar || is_beta;
    if (shared_pipeline) base = build_pipeline(cfg);

    CsvTable t;
    t.header = {fl.param,     "beta_hbar_omega", "meanW",
                "varW",       "deltaF",          "jarzynski_residual",
                "crooks_slope", "dissipated"};
    std::vector<double> residuals;
    residuals.reserve(fl.points);
    for (double v : values) {
        ExperimentConfig c = cfg;
        if (is_hbar) c.hbar = v;
        if (is_beta) c.beta = v;
        if (is_gamma0) c.bath.gamma0 = v;
        if (is_tau) c.protocol.tau = v;
        WorkStatistics ws =
            shared_pipeline
                ? work_statistics(base.gf, c.protocol, c.beta, c.hbar)
                : work_statistics(build_pipeline(c).gf, c.protocol, c.beta, c.hbar);
        residuals.push_back(ws.jarzynski_residual);
        t.add_row({v, c.beta * c.hbar * c.omega, ws.mean, ws.variance, ws.delta_f,
                   ws.jarzynski_residual, ws.crooks_beta_eff, ws.dissipated()});
    }

    // slack absorbs double-rounding noise in residuals that are exactly zero
    bool up = true, down = true;
    for (std::size_t i = 1; i < residuals.size(); ++i) {
        up = up && residuals[i] >= residuals[i - 1] - 1e-14;
        down = down && residuals[i] <= residuals[i - 1] + 1e-14;
    }

    ordered_json rep;
    rep["param"] = fl.param;
    rep["from"] = fl.from;
    rep["to"] = fl.to;
    rep["points"] = fl.points;
    rep["spacing"] = fl.log_spacing ? "log" : "linear";
    rep["residual_monotone"] = up || down;
    rep["residual_direction"] = up && down ? "constant" : (up ? "increasing" : (down ? "decreasing" : "mixed"));
    write_outputs(cfg, "sweep", rep, {{"sweep.csv", t.to_string()}});
    return 0;
}

} // namespace qbm::cli
