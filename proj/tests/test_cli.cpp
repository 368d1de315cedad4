#include "doctest.h"

#include "qbm/config.hpp"
#include "qbm/errors.hpp"
#include "qbm/report.hpp"

#include "json.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

using namespace qbm;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const char* kCli = QBM_CLI_PATH;

struct RunResult {
    int code = -1;
    std::string out;
};

// Spawn the CLI through the shell; stdout is captured, stderr dropped.
RunResult run_cli(const std::string& args, const std::string& env = "") {
    const std::string cmd = env + (env.empty() ? "" : " ") + kCli + " " + args + " 2>/dev/null";
    FILE* pipe = ::popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    RunResult r;
    char buf[4096];
    std::size_t got;
    while ((got = std::fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, got);
    const int status = ::pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

fs::path fresh_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "qbm_cli_tests" / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE_MESSAGE(in.good(), "missing file " << path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void spit(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
}

// Classical Markovian oscillator; every subcommand finishes in well under a second.
std::string classical_text(const fs::path& outdir, const std::string& extra_mc = "") {
    return "[bath]\nkind = ohmic\ngamma0 = 0.5\nbeta = 2\nhbar = 0\n\n"
           "[system]\nmass = 1\nomega = 1\n\n"
           "[protocol]\nshape = smoothstep\ntau = 6\nf0 = 0\nf1 = 1\n\n"
           "[numerics]\n\n[mc]\nsamples = 2000\nseed = 42\n" + extra_mc +
           "\n[output]\ndirectory = " + outdir.string() + "\n";
}

std::string quantum_text(const fs::path& outdir, const std::string& extra_numerics = "") {
    return "[bath]\nkind = ohmic-drude\ngamma0 = 0.5\ncutoff = 5\nbeta = 2\nhbar = 1\n\n"
           "[system]\nmass = 1\nomega = 1\n\n"
           "[protocol]\nshape = gauss\ntau = 10\nf0 = 0.1\namplitude = 0.8\n"
           "center = 5\nwidth = 0.625\n\n"
           "[numerics]\n" + extra_numerics +
           "\n[mc]\nsamples = 1000\nseed = 11\n\n"
           "[output]\ndirectory = " + outdir.string() + "\n";
}

fs::path write_config(const fs::path& dir, const std::string& text) {
    const fs::path p = dir / "exp.cfg";
    spit(p, text);
    return p;
}

std::vector<std::vector<double>> csv_columns(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::getline(in, line);  // header
    std::vector<std::vector<double>> cols;
    while (std::getline(in, line)) {
        std::istringstream row(line);
        std::string cell;
        std::size_t i = 0;
        while (std::getline(row, cell, ',')) {
            if (cols.size() <= i) cols.emplace_back();
            cols[i].push_back(std::stod(cell));
            ++i;
        }
    }
    return cols;
}

}  // namespace

TEST_CASE("config parse -> serialize -> parse is the identity") {
    const std::string text =
        "# odd spacing and comments must not matter\n"
        "[bath]\n kind =ohmic-drude  ; trailing comment\n"
        "gamma0 = 0.25\ncutoff = 7.5\nbeta = 1.25\nhbar = 0.5\n"
        "[system]\nmass = 2\nomega = 0.75\n"
        "[protocol]\nshape = sine\ntau = 4\nf0 = 0.1\namplitude = 0.3\ncycles = 2\nphase = 0.5\n"
        "[numerics]\ntolerance = 1e-5\nmatsubara_terms = 400\n"
        "[mc]\nsamples = 512\nseed = 7\noracle = discrete:96\n"
        "[output]\ndirectory = scratch\nformats = json\n";
    const ExperimentConfig a = parse_config(text);
    CHECK(a.bath.kind == BathKind::OhmicDrude);
    CHECK(a.bath.cutoff == 7.5);
    CHECK(a.oracle == OracleKind::Discrete);
    CHECK(a.oracle_modes == 96);
    CHECK(a.write_json);
    CHECK_FALSE(a.write_csv);

    const std::string s1 = serialize_config(a);
    const ExperimentConfig b = parse_config(s1);
    const std::string s2 = serialize_config(b);
    CHECK(s1 == s2);  // serialization is a parser fixed point
    CHECK(b.bath.gamma0 == a.bath.gamma0);
    CHECK(b.protocol.phase == a.protocol.phase);
    CHECK(b.matsubara_terms == a.matsubara_terms);
    CHECK(b.seed == a.seed);
}

TEST_CASE("config errors accumulate field-level diagnostics") {
    const std::string text =
        "[bath]\nkind = ohmic\ngamma0 = -1\nbeta = 2\ncutoff = 3\n"
        "[system]\nmass = 1\nomega = 1\n"
        "[protocol]\nshape = ramp\ntau = 5\nwidth = 1\n"
        "[numerics]\n[mc]\nsamples = 4\n[output]\nturbo = on\n";
    std::string msg;
    try {
        parse_config(text);
    } catch (const ConfigError& err) {
        msg = err.what();
    }
    REQUIRE_FALSE(msg.empty());
    CHECK(msg.find("[bath] gamma0: must be > 0") != std::string::npos);
    CHECK(msg.find("[bath] cutoff: not used by kind 'ohmic'") != std::string::npos);
    CHECK(msg.find("[protocol] width: not used by shape 'ramp'") != std::string::npos);
    CHECK(msg.find("[mc] samples: must be >= 16") != std::string::npos);
    CHECK(msg.find("[output] turbo: unknown key") != std::string::npos);
    CHECK(msg.find("line 3") != std::string::npos);  // gamma0 location

    CHECK_THROWS_AS((void)parse_config("[bath]\n[bath]\n"), ConfigError);
    CHECK_THROWS_AS((void)parse_config("stray = 1\n"), ConfigError);
}

TEST_CASE("cli rejects unusable invocations with exit code 2") {
    const fs::path dir = fresh_dir("badinput");
    CHECK(run_cli("work").code == 2);                       // missing --config
    CHECK(run_cli("-c /nonexistent.cfg work").code == 2);   // unreadable file
    CHECK(run_cli("-c /nonexistent.cfg frobnicate").code == 2);
    CHECK(run_cli("--help").code == 0);

    const fs::path bad = dir / "bad.cfg";
    spit(bad, "[bath]\nkind = ohmic\n");
    CHECK(run_cli("-c " + bad.string() + " work").code == 2);

    const fs::path cfg = write_config(dir, classical_text(dir / "out"));
    CHECK(run_cli("-c " + cfg.string() + " mc --samples 8").code == 2);
    CHECK(run_cli("-c " + cfg.string() + " mc --mode quantum").code == 2);  // hbar = 0
    CHECK(run_cli("-c " + cfg.string() + " work", "QBM_THREADS=0").code == 2);
    CHECK(run_cli("-c " + cfg.string() + " work", "QBM_THREADS=lots").code == 2);
    CHECK(run_cli("-c " + cfg.string() + " sweep --param hbar --from 0").code == 2);
}

TEST_CASE("same config and seed give byte-identical artifacts") {
    const fs::path dir = fresh_dir("determinism");
    const fs::path cfg = write_config(dir, classical_text(dir / "out"));

    REQUIRE(run_cli("-c " + cfg.string() + " mc").code == 0);
    const fs::path first = dir / "first";
    fs::rename(dir / "out", first);
    REQUIRE(run_cli("-c " + cfg.string() + " mc").code == 0);

    for (const char* name : {"config.txt", "manifest.json", "report.json", "works.csv"})
        CHECK(slurp(first / "mc" / name) == slurp(dir / "out" / "mc" / name));

    // Worker threads must not perturb the stream assignment.
    fs::remove_all(dir / "out");
    REQUIRE(run_cli("-c " + cfg.string() + " mc", "QBM_THREADS=3").code == 0);
    CHECK(slurp(first / "mc" / "works.csv") == slurp(dir / "out" / "mc" / "works.csv"));
    CHECK(slurp(first / "mc" / "report.json") == slurp(dir / "out" / "mc" / "report.json"));
}

TEST_CASE("output directory override relocates but does not perturb results") {
    const fs::path dir = fresh_dir("envdir");
    const fs::path cfg = write_config(dir, classical_text(dir / "out"));
    REQUIRE(run_cli("-c " + cfg.string() + " work").code == 0);

    const fs::path moved = dir / "elsewhere";
    REQUIRE(run_cli("-c " + cfg.string() + " work",
                    "QBM_OUTPUT_DIR=" + moved.string()).code == 0);
    CHECK(fs::exists(moved / "work" / "report.json"));
    CHECK(slurp(moved / "work" / "report.json") == slurp(dir / "out" / "work" / "report.json"));
    // The override is part of the effective config, so the recorded copy differs.
    CHECK(slurp(moved / "work" / "config.txt") != slurp(dir / "out" / "work" / "config.txt"));
}

TEST_CASE("manifest records the exact config that produced the run") {
    const fs::path dir = fresh_dir("manifest");
    const fs::path cfg = write_config(dir, classical_text(dir / "out"));
    REQUIRE(run_cli("-c " + cfg.string() + " kernels").code == 0);

    const fs::path rundir = dir / "out" / "kernels";
    const std::string recorded = slurp(rundir / "config.txt");
    const json man = json::parse(slurp(rundir / "manifest.json"));
    CHECK(man.at("subcommand") == "kernels");
    CHECK(man.at("version") == "1.0.0");
    CHECK(man.at("format_version") == 1);
    CHECK(man.at("config_hash") == hash_hex(recorded));
    CHECK(man.at("seed") == 42);

    // The recorded effective config reproduces the run bit for bit.
    const json before = json::parse(slurp(rundir / "report.json"));
    REQUIRE(run_cli("-c " + (rundir / "config.txt").string() + " kernels").code == 0);
    CHECK(slurp(rundir / "config.txt") == recorded);
    CHECK(json::parse(slurp(rundir / "report.json")) == before);
}

TEST_CASE("verify-ft on a classical markovian bath certifies both theorems") {
    const fs::path dir = fresh_dir("vf_classical");
    const fs::path cfg = write_config(dir, classical_text(dir / "out"));
    const RunResult r = run_cli("-c " + cfg.string() + " verify-ft");
    REQUIRE(r.code == 0);
    const json rep = json::parse(r.out);
    CHECK(std::abs(rep.at("jarzynski_residual_analytic").get<double>()) < 1e-10);
    CHECK(rep.at("crooks_slope").get<double>() == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(rep.at("regime") == "classical");
    CHECK(std::abs(rep.at("mc_z").get<double>()) < 5.0);
    CHECK(rep.at("n_eff").get<double>() > 0.01 * 2000);
    CHECK(rep.count("decoherence_flag") == 1);
    CHECK(rep.at("greens_residuals").at("hdot_identity").get<double>() < 1e-6);
}

TEST_CASE("sweep over hbar reports a monotone residual column") {
    const fs::path dir = fresh_dir("sweep_hbar");
    const fs::path cfg = write_config(dir, quantum_text(dir / "out"));
    const RunResult r = run_cli("-c " + cfg.string() +
                                " sweep --param hbar --from 0 --to 0.5 --points 6");
    REQUIRE(r.code == 0);
    const json rep = json::parse(r.out);
    CHECK(rep.at("residual_monotone") == true);
    CHECK(rep.at("residual_direction") == "increasing");

    const auto cols = csv_columns(slurp(dir / "out" / "sweep" / "sweep.csv"));
    REQUIRE(cols.size() == 8);
    const auto& residual = cols[5];
    REQUIRE(residual.size() == 6);
    CHECK(residual.front() == 0.0);  // classical endpoint is exact
    for (std::size_t i = 1; i < residual.size(); ++i)
        CHECK(residual[i] >= residual[i - 1]);
    for (double w : cols[2]) CHECK(w == doctest::Approx(cols[2][0]).epsilon(1e-12));
}

TEST_CASE("statistical quality failure exits 4 after artifacts are written") {
    const fs::path dir = fresh_dir("quality");
    // Large dissipated work at small N starves the exponential estimator.
    std::string text = classical_text(dir / "out");
    const auto at = text.find("f1 = 1");
    REQUIRE(at != std::string::npos);
    text.replace(at, 6, "f1 = 8");
    text.replace(text.find("samples = 2000"), 14, "samples = 300");
    const fs::path cfg = write_config(dir, text);

    const RunResult r = run_cli("-c " + cfg.string() + " mc");
    CHECK(r.code == 4);
    CHECK(fs::exists(dir / "out" / "mc" / "works.csv"));
    const json rep = json::parse(r.out);  // report still printed
    CHECK(rep.at("n_eff").get<double>() < 0.01 * 300);
}

TEST_CASE("tolerance violations exit 3 before writing artifacts") {
    const fs::path dir = fresh_dir("coarse");
    const fs::path cfg = write_config(dir, quantum_text(dir / "out", "dt = 0.2\n"));
    const RunResult r = run_cli("-c " + cfg.string() + " work");
    CHECK(r.code == 3);
    CHECK_FALSE(fs::exists(dir / "out" / "work"));
}

TEST_CASE("format selection gates the artifact set") {
    const fs::path dir = fresh_dir("formats");
    const std::string base = classical_text(dir / "out");

    SUBCASE("json only") {
        write_config(dir, base + "formats = json\n");
        REQUIRE(run_cli("-c " + (dir / "exp.cfg").string() + " mc").code == 0);
        CHECK(fs::exists(dir / "out" / "mc" / "report.json"));
        CHECK_FALSE(fs::exists(dir / "out" / "mc" / "works.csv"));
        CHECK(fs::exists(dir / "out" / "mc" / "manifest.json"));
        CHECK(fs::exists(dir / "out" / "mc" / "config.txt"));
    }
    SUBCASE("csv only") {
        write_config(dir, base + "formats = csv\n");
        REQUIRE(run_cli("-c " + (dir / "exp.cfg").string() + " mc").code == 0);
        CHECK_FALSE(fs::exists(dir / "out" / "mc" / "report.json"));
        CHECK(fs::exists(dir / "out" / "mc" / "works.csv"));
        CHECK(fs::exists(dir / "out" / "mc" / "manifest.json"));
    }
}

TEST_CASE("discrete oracle flag routes the sampler") {
    const fs::path dir = fresh_dir("oracle");
    const fs::path cfg = write_config(dir, classical_text(dir / "out"));
    const RunResult r =
        run_cli("-c " + cfg.string() + " mc --oracle discrete:64 --samples 400");
    REQUIRE(r.code == 0);
    const json rep = json::parse(r.out);
    CHECK(rep.at("oracle") == "discrete:64");
    CHECK(rep.at("samples") == 400);

    // The explicit-mode oracle integrates classical trajectories only.
    const fs::path qdir = fresh_dir("oracle_q");
    const fs::path qcfg = write_config(qdir, quantum_text(qdir / "out"));
    CHECK(run_cli("-c " + qcfg.string() + " mc --oracle discrete:64").code == 2);
}
