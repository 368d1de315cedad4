#ifndef QBM_TOOLS_COMMANDS_HPP
#define QBM_TOOLS_COMMANDS_HPP

#include "qbm/config.hpp"

#include <cstddef>
#include <string>

namespace qbm::cli {

// QBM_OUTPUT_DIR replaces the configured output directory when set. These
// two variables are the only environment inputs the tool reads.
void apply_env_overrides(ExperimentConfig& cfg);

// QBM_THREADS, default 1. Results are bit-identical for any value.
int threads_from_env();

// Merges an --oracle flag value ("continuum" or "discrete:N") into cfg.
void apply_oracle_flag(ExperimentConfig& cfg, const std::string& value);

// Merges a --mode flag value ("quantum" or "classical") into cfg.
void apply_mode_flag(ExperimentConfig& cfg, const std::string& value);

struct SweepFlags {
    std::string param = "hbar"; // hbar | beta | gamma0 | tau
    double from = 0.0;
    double to = 1.0;
    std::size_t points = 11;
    bool log_spacing = false;
};

// Each command writes its artifacts plus manifest.json/config.txt into
// <output.directory>/<subcommand>/ and prints its JSON report on stdout.
// They return 0; failures leave as ConfigError, NumericalError, or
// StatisticalError, which main maps onto exit codes 2, 3, 4.
int cmd_kernels(const ExperimentConfig& cfg);
int cmd_greens(const ExperimentConfig& cfg);
int cmd_thermal(const ExperimentConfig& cfg);
int cmd_work(const ExperimentConfig& cfg);
int cmd_expand(const ExperimentConfig& cfg);
int cmd_mc(const ExperimentConfig& cfg, int threads);
int cmd_dechist(const ExperimentConfig& cfg, double sigma, double separation_scale);
int cmd_verify_ft(const ExperimentConfig& cfg, int threads);
int cmd_sweep(const ExperimentConfig& cfg, const SweepFlags& fl);

} // namespace qbm::cli

#endif
