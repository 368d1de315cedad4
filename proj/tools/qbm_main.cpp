#include "commands.hpp"

#include "qbm/config.hpp"
#include "qbm/errors.hpp"

#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

// Exit codes: 0 success, 2 config error, 3 numerical failure, 4 statistical
// quality failure. QBM_OUTPUT_DIR overrides the output directory and
// QBM_THREADS the worker count; results are bit-identical either way.
int main(int argc, char** argv) {
    CLI::App app{"driven open harmonic oscillator: memory kernels, Green's "
                 "functions, exact Gaussian work statistics, fluctuation "
                 "theorem checks, and trajectory-ensemble cross-checks"};
    app.require_subcommand(1);
    app.fallthrough();  // accept -c after the subcommand name too

    std::string config_path;
    app.add_option("-c,--config", config_path, "experiment config file")
        ->required();

    CLI::App* sc_kernels =
        app.add_subcommand("kernels", "tabulate friction and noise kernels");
    CLI::App* sc_greens =
        app.add_subcommand("greens", "solve and dump the response functions h, g");
    CLI::App* sc_thermal = app.add_subcommand(
        "thermal", "equilibrium variances and free energies");
    CLI::App* sc_work = app.add_subcommand(
        "work", "exact work statistics and fluctuation theorem residuals");
    CLI::App* sc_expand = app.add_subcommand(
        "expand", "high-temperature series of the work variance");

    CLI::App* sc_mc =
        app.add_subcommand("mc", "sample work trajectories against an oracle");
    std::uint64_t mc_samples = 0, mc_seed = 0;
    std::string mc_mode, mc_oracle;
    CLI::Option* opt_samples =
        sc_mc->add_option("--samples", mc_samples, "trajectory count");
    CLI::Option* opt_seed = sc_mc->add_option("--seed", mc_seed, "ensemble seed");
    sc_mc->add_option("--mode", mc_mode, "quantum or classical")
        ->check(CLI::IsMember({"quantum", "classical"}));
    sc_mc->add_option("--oracle", mc_oracle, "continuum or discrete:N");

    CLI::App* sc_dechist = app.add_subcommand(
        "dechist", "decoherence exponents of coarse-grained histories");
    double dh_sigma = 0.0, dh_scale = 5.0;
    sc_dechist->add_option("--sigma", dh_sigma,
                           "resolution width (0 = recommended)");
    sc_dechist->add_option("--separation-scale", dh_scale,
                           "history separation in units of u*");

    CLI::App* sc_verify = app.add_subcommand(
        "verify-ft", "full pipeline with a Monte Carlo cross-check verdict");

    CLI::App* sc_sweep =
        app.add_subcommand("sweep", "work statistics over a parameter grid");
    qbm::cli::SweepFlags sweep;
    sc_sweep->add_option("--param", sweep.param, "hbar, beta, gamma0, or tau");
    sc_sweep->add_option("--from", sweep.from, "first grid value")->required();
    sc_sweep->add_option("--to", sweep.to, "last grid value")->required();
    sc_sweep->add_option("--points", sweep.points, "grid size");
    sc_sweep->add_flag("--log", sweep.log_spacing, "logarithmic spacing");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        qbm::ExperimentConfig cfg = qbm::load_config(config_path);
        qbm::cli::apply_env_overrides(cfg);
        const int threads = qbm::cli::threads_from_env();

        if (sc_kernels->parsed()) return qbm::cli::cmd_kernels(cfg);
        if (sc_greens->parsed()) return qbm::cli::cmd_greens(cfg);
        if (sc_thermal->parsed()) return qbm::cli::cmd_thermal(cfg);
        if (sc_work->parsed()) return qbm::cli::cmd_work(cfg);
        if (sc_expand->parsed()) return qbm::cli::cmd_expand(cfg);
        if (sc_mc->parsed()) {
            if (opt_samples->count()) cfg.samples = mc_samples;
            if (opt_seed->count()) cfg.seed = mc_seed;
            qbm::cli::apply_mode_flag(cfg, mc_mode);
            qbm::cli::apply_oracle_flag(cfg, mc_oracle);
            if (cfg.samples < 16)
                throw qbm::ConfigError("--samples must be >= 16");
            return qbm::cli::cmd_mc(cfg, threads);
        }
        if (sc_dechist->parsed())
            return qbm::cli::cmd_dechist(cfg, dh_sigma, dh_scale);
        if (sc_verify->parsed()) return qbm::cli::cmd_verify_ft(cfg, threads);
        if (sc_sweep->parsed()) return qbm::cli::cmd_sweep(cfg, sweep);
        std::cerr << "error: no subcommand\n";
        return 2;
    } catch (const qbm::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const qbm::StatisticalError& e) {
        std::cerr << "statistical quality failure: " << e.what() << "\n";
        return 4;
    } catch (const qbm::NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    }
}
