#ifndef QBM_CONFIG_HPP
#define QBM_CONFIG_HPP

#include "qbm/protocol.hpp"
#include "qbm/spectral_density.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace qbm {

// Which ensemble-level cross-check the mc machinery runs: the continuum
// spectral sampler, or the finite bath of n_modes explicit oscillators.
enum class OracleKind { Continuum, Discrete };

// One experiment, complete enough to rebuild a run from its serialized form.
// On disk this is plain-text "key = value" lines under [section] headers;
// docs/config.schema.txt documents every key. Unknown sections, unknown
// keys, and keys that the chosen bath or protocol shape does not use are all
// rejected, so typos fail loudly with the offending field named.
struct ExperimentConfig {
    // [bath]
    SpectralDensity bath;
    double beta = 1.0;
    double hbar = 0.0;

    // [system]
    double mass = 1.0;
    double omega = 1.0;

    // [protocol]
    Protocol protocol;

    // [numerics]  (zeros pick solver defaults)
    double dt = 0.0;              // grid step
    double horizon = 0.0;         // table horizon; work grids cover tau + horizon
    double tolerance = 1e-6;      // residual gate for solver identity checks
    std::size_t matsubara_terms = 0; // explicit terms before the integral tail

    // [mc]
    std::size_t samples = 10000;
    std::uint64_t seed = 1;
    OracleKind oracle = OracleKind::Continuum;
    std::size_t oracle_modes = 200; // bath size for the discrete oracle

    // [output]
    std::string directory = "out";
    bool write_csv = true;
    bool write_json = true;
};

// Parses config text; throws ConfigError listing every bad field at once.
ExperimentConfig parse_config(const std::string& text);

// Reads and parses a config file; the filename is prefixed to diagnostics.
ExperimentConfig load_config(const std::string& path);

// Canonical form: fixed section and key order, shortest round-trip floats.
// parse(serialize(parse(text))) == parse(text) for any accepted text, and
// serialize is a fixed point, so configs compare and hash by these bytes.
std::string serialize_config(const ExperimentConfig& cfg);

std::string to_string(OracleKind kind);

} // namespace qbm

#endif
