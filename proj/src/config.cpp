#include "qbm/config.hpp"

#include "qbm/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

namespace qbm {

namespace {

struct Entry {
    std::string section, key, value;
    int line = 0;
    bool used = false;
};

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return {};
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

// Raw scan: section headers, key = value lines, full-line comments (# or ;).
// Duplicate keys and text outside any section are reported, not guessed at.
struct RawConfig {
    std::vector<Entry> entries;
    std::vector<std::string> sections;
    std::vector<std::string> errors;

    bool has_section(const std::string& s) const {
        return std::find(sections.begin(), sections.end(), s) != sections.end();
    }

    Entry* find(const std::string& sec, const std::string& key) {
        for (auto& e : entries)
            if (e.section == sec && e.key == key) return &e;
        return nullptr;
    }
};

RawConfig scan(const std::string& text) {
    RawConfig raw;
    std::istringstream in(text);
    std::string line, section;
    int ln = 0;
    while (std::getline(in, line)) {
        ++ln;
        if (const auto cut = line.find_first_of("#;"); cut != std::string::npos)
            line.erase(cut);
        const std::string s = trim(line);
        if (s.empty()) continue;
        if (s.front() == '[') {
            if (s.back() != ']' || s.size() < 3) {
                raw.errors.push_back("line " + std::to_string(ln) +
                                     ": malformed section header '" + s + "'");
                continue;
            }
            section = trim(s.substr(1, s.size() - 2));
            if (raw.has_section(section))
                raw.errors.push_back("line " + std::to_string(ln) + ": section [" +
                                     section + "] appears twice");
            else
                raw.sections.push_back(section);
            continue;
        }
        const auto eq = s.find('=');
        if (eq == std::string::npos) {
            raw.errors.push_back("line " + std::to_string(ln) +
                                 ": expected 'key = value', got '" + s + "'");
            continue;
        }
        if (section.empty()) {
            raw.errors.push_back("line " + std::to_string(ln) +
                                 ": key before any [section] header");
            continue;
        }
        Entry e;
        e.section = section;
        e.key = trim(s.substr(0, eq));
        e.value = trim(s.substr(eq + 1));
        e.line = ln;
        if (e.key.empty()) {
            raw.errors.push_back("line " + std::to_string(ln) + ": empty key");
            continue;
        }
        if (raw.find(e.section, e.key))
            raw.errors.push_back("line " + std::to_string(ln) + ": [" + e.section +
                                 "] " + e.key + " appears twice");
        else
            raw.entries.push_back(std::move(e));
    }
    return raw;
}

// Typed readers over the raw entries. Every failure lands in raw.errors as
// "[section] key: what is wrong"; extraction always runs to completion so a
// bad config reports all of its problems in one pass.
struct Reader {
    RawConfig& raw;

    void fail(const Entry& e, const std::string& msg) {
        raw.errors.push_back("line " + std::to_string(e.line) + ": [" + e.section +
                             "] " + e.key + ": " + msg + " (got '" + e.value + "')");
    }
    void missing(const std::string& sec, const std::string& key) {
        raw.errors.push_back("[" + sec + "] " + key + ": required key is missing");
    }

    bool parse_double(const std::string& v, double& out) {
        const char* b = v.data();
        const char* e = b + v.size();
        auto r = std::from_chars(b, e, out);
        return r.ec == std::errc{} && r.ptr == e && std::isfinite(out);
    }
    bool parse_u64(const std::string& v, std::uint64_t& out) {
        const char* b = v.data();
        const char* e = b + v.size();
        auto r = std::from_chars(b, e, out);
        return r.ec == std::errc{} && r.ptr == e;
    }

    double number(const std::string& sec, const std::string& key, double dflt,
                  bool required = false) {
        Entry* e = raw.find(sec, key);
        if (!e) {
            if (required) missing(sec, key);
            return dflt;
        }
        e->used = true;
        double out;
        if (!parse_double(e->value, out)) {
            fail(*e, "not a finite number");
            return dflt;
        }
        return out;
    }

    std::uint64_t unsigned_int(const std::string& sec, const std::string& key,
                               std::uint64_t dflt) {
        Entry* e = raw.find(sec, key);
        if (!e) return dflt;
        e->used = true;
        std::uint64_t out;
        if (!parse_u64(e->value, out)) {
            fail(*e, "not a non-negative integer");
            return dflt;
        }
        return out;
    }

    std::string text(const std::string& sec, const std::string& key,
                     const std::string& dflt, bool required = false) {
        Entry* e = raw.find(sec, key);
        if (!e) {
            if (required) missing(sec, key);
            return dflt;
        }
        e->used = true;
        if (e->value.empty()) fail(*e, "empty value");
        return e->value;
    }

    void check(const std::string& sec, const std::string& key, bool ok,
               const std::string& msg) {
        if (ok) return;
        if (Entry* e = raw.find(sec, key))
            fail(*e, msg);
        else
            raw.errors.push_back("[" + sec + "] " + key + ": " + msg);
    }
};

const char* kSections[] = {"bath", "system", "protocol", "numerics", "mc", "output"};

void fmt(std::string& out, double v) {
    char buf[32];
    auto r = std::to_chars(buf, buf + sizeof buf, v);
    out.append(buf, r.ptr);
}

void fmt(std::string& out, std::uint64_t v) {
    char buf[24];
    auto r = std::to_chars(buf, buf + sizeof buf, v);
    out.append(buf, r.ptr);
}

template <typename V>
void kv(std::string& out, const char* key, const V& v) {
    out += key;
    out += " = ";
    fmt(out, v);
    out += '\n';
}

void kv(std::string& out, const char* key, const std::string& v) {
    out += key;
    out += " = ";
    out += v;
    out += '\n';
}

} // namespace

ExperimentConfig parse_config(const std::string& text) {
    RawConfig raw = scan(text);
    Reader rd{raw};
    ExperimentConfig cfg;

    for (const char* s : kSections)
        if (!raw.has_section(s))
            raw.errors.push_back(std::string("section [") + s + "] is missing");

    // [bath]
    const std::string kind = rd.text("bath", "kind", "", true);
    bool kind_ok = true;
    if (kind == "ohmic") cfg.bath.kind = BathKind::OhmicNoCutoff;
    else if (kind == "ohmic-drude") cfg.bath.kind = BathKind::OhmicDrude;
    else if (kind == "power-law") cfg.bath.kind = BathKind::PowerLaw;
    else {
        kind_ok = false;
        if (!kind.empty())
            rd.check("bath", "kind", false,
                     "must be one of ohmic, ohmic-drude, power-law");
    }
    cfg.bath.gamma0 = rd.number("bath", "gamma0", 0.0, true);
    rd.check("bath", "gamma0", cfg.bath.gamma0 > 0.0, "must be > 0");
    const bool needs_cutoff = kind_ok && cfg.bath.kind != BathKind::OhmicNoCutoff;
    if (needs_cutoff) {
        cfg.bath.cutoff = rd.number("bath", "cutoff", 0.0, true);
        rd.check("bath", "cutoff", cfg.bath.cutoff > 0.0, "must be > 0");
    } else if (Entry* e = raw.find("bath", "cutoff")) {
        e->used = true;
        rd.fail(*e, "not used by kind '" + kind + "'");
    }
    if (kind_ok && cfg.bath.kind == BathKind::PowerLaw) {
        cfg.bath.exponent = rd.number("bath", "exponent", 1.0, true);
        rd.check("bath", "exponent",
                 cfg.bath.exponent > 0.0 && cfg.bath.exponent < 2.0,
                 "must lie in (0, 2)");
    } else if (Entry* e = raw.find("bath", "exponent")) {
        e->used = true;
        rd.fail(*e, "not used by kind '" + kind + "'");
    }
    cfg.beta = rd.number("bath", "beta", 1.0, true);
    rd.check("bath", "beta", cfg.beta > 0.0, "must be > 0");
    cfg.hbar = rd.number("bath", "hbar", 0.0);
    rd.check("bath", "hbar", cfg.hbar >= 0.0, "must be >= 0");

    // [system]
    cfg.mass = rd.number("system", "mass", 1.0);
    rd.check("system", "mass", cfg.mass > 0.0, "must be > 0");
    cfg.omega = rd.number("system", "omega", 1.0);
    rd.check("system", "omega", cfg.omega > 0.0, "must be > 0");
    cfg.bath.mass = cfg.mass;

    // [protocol]
    const std::string shape = rd.text("protocol", "shape", "", true);
    bool shape_ok = true;
    if (shape == "ramp") cfg.protocol.kind = ProtocolKind::Ramp;
    else if (shape == "smoothstep") cfg.protocol.kind = ProtocolKind::Smoothstep;
    else if (shape == "gauss") cfg.protocol.kind = ProtocolKind::GaussPulse;
    else if (shape == "sine") cfg.protocol.kind = ProtocolKind::Sine;
    else {
        shape_ok = false;
        if (!shape.empty())
            rd.check("protocol", "shape", false,
                     "must be one of ramp, smoothstep, gauss, sine");
    }
    cfg.protocol.tau = rd.number("protocol", "tau", 1.0, true);
    rd.check("protocol", "tau", cfg.protocol.tau > 0.0, "must be > 0");
    cfg.protocol.f0 = rd.number("protocol", "f0", 0.0);
    auto reject = [&](const char* key) {
        if (Entry* e = raw.find("protocol", key)) {
            e->used = true;
            rd.fail(*e, "not used by shape '" + shape + "'");
        }
    };
    const bool step_like = !shape_ok || cfg.protocol.kind == ProtocolKind::Ramp ||
                           cfg.protocol.kind == ProtocolKind::Smoothstep;
    const bool gauss = shape_ok && cfg.protocol.kind == ProtocolKind::GaussPulse;
    const bool sine = shape_ok && cfg.protocol.kind == ProtocolKind::Sine;
    if (step_like) cfg.protocol.f1 = rd.number("protocol", "f1", 1.0);
    else reject("f1");
    if (gauss || sine) cfg.protocol.amp = rd.number("protocol", "amplitude", 1.0);
    else reject("amplitude");
    if (gauss) {
        cfg.protocol.center = rd.number("protocol", "center", 0.0, true);
        cfg.protocol.width = rd.number("protocol", "width", 0.0, true);
        rd.check("protocol", "width", cfg.protocol.width > 0.0, "must be > 0");
    } else {
        reject("center");
        reject("width");
    }
    if (sine) {
        cfg.protocol.cycles = rd.number("protocol", "cycles", 1.0);
        rd.check("protocol", "cycles", cfg.protocol.cycles > 0.0, "must be > 0");
        cfg.protocol.phase = rd.number("protocol", "phase", 0.0);
    } else {
        reject("cycles");
        reject("phase");
    }

    // [numerics]
    cfg.dt = rd.number("numerics", "dt", 0.0);
    rd.check("numerics", "dt", cfg.dt >= 0.0, "must be >= 0 (0 = automatic)");
    cfg.horizon = rd.number("numerics", "horizon", 0.0);
    rd.check("numerics", "horizon", cfg.horizon >= 0.0,
             "must be >= 0 (0 = automatic)");
    cfg.tolerance = rd.number("numerics", "tolerance", 1e-6);
    rd.check("numerics", "tolerance", cfg.tolerance > 0.0, "must be > 0");
    cfg.matsubara_terms = static_cast<std::size_t>(
        rd.unsigned_int("numerics", "matsubara_terms", 0));

    // [mc]
    cfg.samples =
        static_cast<std::size_t>(rd.unsigned_int("mc", "samples", 10000));
    rd.check("mc", "samples", cfg.samples >= 16, "must be >= 16");
    cfg.seed = rd.unsigned_int("mc", "seed", 1);
    const std::string oracle = rd.text("mc", "oracle", "continuum");
    if (oracle == "continuum") {
        cfg.oracle = OracleKind::Continuum;
    } else if (oracle.rfind("discrete:", 0) == 0) {
        cfg.oracle = OracleKind::Discrete;
        std::uint64_t n = 0;
        if (!rd.parse_u64(oracle.substr(9), n) || n < 8)
            rd.check("mc", "oracle", false, "discrete:N needs integer N >= 8");
        else
            cfg.oracle_modes = static_cast<std::size_t>(n);
    } else {
        rd.check("mc", "oracle", false, "must be continuum or discrete:N");
    }

    // [output]
    cfg.directory = rd.text("output", "directory", "out");
    const std::string formats = rd.text("output", "formats", "csv,json");
    if (formats == "csv,json" || formats == "json,csv") {
        cfg.write_csv = cfg.write_json = true;
    } else if (formats == "csv") {
        cfg.write_csv = true;
        cfg.write_json = false;
    } else if (formats == "json") {
        cfg.write_csv = false;
        cfg.write_json = true;
    } else {
        rd.check("output", "formats", false,
                 "must be a comma list drawn from csv, json");
    }

    for (const auto& e : raw.entries)
        if (!e.used)
            raw.errors.push_back("line " + std::to_string(e.line) + ": [" +
                                 e.section + "] " + e.key + ": unknown key");
    for (const auto& s : raw.sections) {
        bool known = false;
        for (const char* k : kSections) known = known || s == k;
        if (!known) raw.errors.push_back("unknown section [" + s + "]");
    }

    if (raw.errors.empty()) {
        try {
            cfg.bath.validate();
        } catch (const ConfigError& err) {
            raw.errors.push_back(std::string("[bath] ") + err.what());
        }
        try {
            cfg.protocol.validate();
        } catch (const ConfigError& err) {
            raw.errors.push_back(std::string("[protocol] ") + err.what());
        }
    }

    if (!raw.errors.empty()) {
        std::string msg = "invalid config:";
        for (const auto& e : raw.errors) msg += "\n  " + e;
        throw ConfigError(msg);
    }
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return parse_config(buf.str());
    } catch (const ConfigError& err) {
        throw ConfigError(path + ": " + err.what());
    }
}

std::string serialize_config(const ExperimentConfig& cfg) {
    std::string out;
    out += "[bath]\n";
    kv(out, "kind", to_string(cfg.bath.kind));
    kv(out, "gamma0", cfg.bath.gamma0);
    if (cfg.bath.kind != BathKind::OhmicNoCutoff) kv(out, "cutoff", cfg.bath.cutoff);
    if (cfg.bath.kind == BathKind::PowerLaw) kv(out, "exponent", cfg.bath.exponent);
    kv(out, "beta", cfg.beta);
    kv(out, "hbar", cfg.hbar);

    out += "\n[system]\n";
    kv(out, "mass", cfg.mass);
    kv(out, "omega", cfg.omega);

    out += "\n[protocol]\n";
    kv(out, "shape", to_string(cfg.protocol.kind));
    kv(out, "tau", cfg.protocol.tau);
    kv(out, "f0", cfg.protocol.f0);
    switch (cfg.protocol.kind) {
        case ProtocolKind::Ramp:
        case ProtocolKind::Smoothstep:
            kv(out, "f1", cfg.protocol.f1);
            break;
        case ProtocolKind::GaussPulse:
            kv(out, "amplitude", cfg.protocol.amp);
            kv(out, "center", cfg.protocol.center);
            kv(out, "width", cfg.protocol.width);
            break;
        case ProtocolKind::Sine:
            kv(out, "amplitude", cfg.protocol.amp);
            kv(out, "cycles", cfg.protocol.cycles);
            kv(out, "phase", cfg.protocol.phase);
            break;
    }

    out += "\n[numerics]\n";
    kv(out, "dt", cfg.dt);
    kv(out, "horizon", cfg.horizon);
    kv(out, "tolerance", cfg.tolerance);
    kv(out, "matsubara_terms", static_cast<std::uint64_t>(cfg.matsubara_terms));

    out += "\n[mc]\n";
    kv(out, "samples", static_cast<std::uint64_t>(cfg.samples));
    kv(out, "seed", cfg.seed);
    std::string oracle = to_string(cfg.oracle);
    if (cfg.oracle == OracleKind::Discrete)
        oracle += ":" + std::to_string(cfg.oracle_modes);
    kv(out, "oracle", oracle);

    out += "\n[output]\n";
    kv(out, "directory", cfg.directory);
    std::string formats;
    if (cfg.write_csv) formats = "csv";
    if (cfg.write_json) formats += formats.empty() ? "json" : ",json";
    kv(out, "formats", formats);
    return out;
}

std::string to_string(OracleKind kind) {
    return kind == OracleKind::Continuum ? "continuum" : "discrete";
}

} // namespace qbm
