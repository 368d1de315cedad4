#ifndef QBM_REPORT_HPP
#define QBM_REPORT_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace qbm {

inline constexpr const char* kVersion = "1.0.0";
inline constexpr int kFormatVersion = 1; // bump when file layouts change

// Shortest decimal form that round-trips the double, '.' separator, no
// locale. All numeric file output goes through this one formatter so that
// identical numbers are identical bytes.
std::string format_number(double v);

// Comma-separated table: header row, LF line ends, values through
// format_number. Writers only emit numbers and plain labels, so no quoting
// is ever needed.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;

    void add_row(std::initializer_list<double> vals);
    std::string to_string() const;
};

// FNV-1a 64-bit over the canonical config bytes; the run identity.
std::uint64_t fnv1a(const std::string& bytes);
std::string hash_hex(const std::string& bytes);

// Creates (or reuses) <root>/<name> and returns its path.
std::string make_run_dir(const std::string& root, const std::string& name);

void write_file(const std::string& path, const std::string& content);

// Drops manifest.json and config.txt into dir. The manifest carries the
// subcommand, config hash, seed, and version stamps, and nothing time- or
// host-dependent, so a rerun of the same config and seed is byte-identical.
void write_manifest(const std::string& dir, const std::string& subcommand,
                    const std::string& config_text, std::uint64_t seed);

} // namespace qbm

#endif
