#include "qbm/report.hpp"

#include "qbm/errors.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>

#include <json.hpp>

namespace qbm {

std::string format_number(double v) {
    char buf[32];
    auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

void CsvTable::add_row(std::initializer_list<double> vals) {
    rows.emplace_back(vals);
}

std::string CsvTable::to_string() const {
    std::string out;
    for (std::size_t j = 0; j < header.size(); ++j) {
        if (j) out += ',';
        out += header[j];
    }
    out += '\n';
    for (const auto& row : rows) {
        for (std::size_t j = 0; j < row.size(); ++j) {
            if (j) out += ',';
            out += format_number(row[j]);
        }
        out += '\n';
    }
    return out;
}

std::uint64_t fnv1a(const std::string& bytes) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string hash_hex(const std::string& bytes) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(fnv1a(bytes)));
    return buf;
}

std::string make_run_dir(const std::string& root, const std::string& name) {
    namespace fs = std::filesystem;
    const fs::path dir = fs::path(root) / name;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec)
        throw ConfigError("cannot create output directory '" + dir.string() +
                          "': " + ec.message());
    return dir.string();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot open '" + path + "' for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw ConfigError("write to '" + path + "' failed");
}

void write_manifest(const std::string& dir, const std::string& subcommand,
                    const std::string& config_text, std::uint64_t seed) {
    nlohmann::ordered_json m;
    m["subcommand"] = subcommand;
    m["config_hash"] = hash_hex(config_text);
    m["seed"] = seed;
    m["version"] = kVersion;
    m["format_version"] = kFormatVersion;
    namespace fs = std::filesystem;
    write_file((fs::path(dir) / "manifest.json").string(), m.dump(2) + "\n");
    write_file((fs::path(dir) / "config.txt").string(), config_text);
}

} // namespace qbm
