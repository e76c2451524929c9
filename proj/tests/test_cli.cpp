// Copyright 2026 The weakval authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <catch2/catch_amalgamated.hpp>

#include <unistd.h>

#include <cmath>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "weakval/cli.hpp"

namespace fs = std::filesystem;

namespace {

struct CliResult {
    int rc = -1;
    std::string out;
    std::string err;
};

fs::path test_dir() {
    static const fs::path dir =
        fs::temp_directory_path() / ("weakval_cli_" + std::to_string(::getpid()));
    fs::create_directories(dir);
    return dir;
}

std::string write_text(const std::string& name, const std::string& content) {
    const fs::path path = test_dir() / name;
    std::ofstream out(path, std::ios::binary);
    out << content;
    return path.string();
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> lines;
    std::string current;
    for (char c : text) {
        if (c == '\n') {
            lines.push_back(current);
            current.clear();
        } else {
            current += c;
        }
    }
    if (!current.empty()) {
        lines.push_back(current);
    }
    return lines;
}

std::vector<std::string> fields_of(const std::string& line) {
    std::vector<std::string> fields;
    std::string current;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(current);
            current.clear();
        } else {
            current += c;
        }
    }
    fields.push_back(current);
    return fields;
}

CliResult run_cli(const std::vector<std::string>& args) {
    std::vector<std::string> full;
    full.emplace_back("weakval");
    full.insert(full.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    argv.reserve(full.size());
    for (const std::string& s : full) {
        argv.push_back(s.c_str());
    }

    std::ostringstream captured_out;
    std::ostringstream captured_err;
    std::streambuf* old_out = std::cout.rdbuf(captured_out.rdbuf());
    std::streambuf* old_err = std::cerr.rdbuf(captured_err.rdbuf());
    CliResult result;
    try {
        result.rc = weakval::cli::run(static_cast<int>(argv.size()), argv.data());
    } catch (...) {
        std::cout.rdbuf(old_out);
        std::cerr.rdbuf(old_err);
        throw;
    }
    std::cout.rdbuf(old_out);
    std::cerr.rdbuf(old_err);
    result.out = captured_out.str();
    result.err = captured_err.str();
    return result;
}

}  // namespace

TEST_CASE("help succeeds and argument errors exit with the config code", "[cli]") {
    const CliResult help = run_cli({"--help"});
    REQUIRE(help.rc == 0);
    REQUIRE(help.out.find("oracle-check") != std::string::npos);

    REQUIRE(run_cli({}).rc == 2);
    REQUIRE(run_cli({"distinguishability", "--bogus"}).rc == 2);
    REQUIRE(run_cli({"no-such-subcommand"}).rc == 2);
}

TEST_CASE("subcommands other than oracle-check demand a config file", "[cli]") {
    const CliResult r = run_cli({"distinguishability"});
    REQUIRE(r.rc == 2);
    REQUIRE(r.err.find("needs --config") != std::string::npos);
}

TEST_CASE("config errors carry the file and line", "[cli]") {
    const std::string bad_value = write_text("bad_value.cfg",
                                             "[main]\n"
                                             "family = klingon\n");
    const CliResult r1 = run_cli({"distinguishability", "--config", bad_value});
    REQUIRE(r1.rc == 2);
    REQUIRE(r1.err.find(":2:") != std::string::npos);

    const std::string stray_key = write_text("stray_key.cfg", "family = gaussian\n");
    const CliResult r2 = run_cli({"distinguishability", "--config", stray_key});
    REQUIRE(r2.rc == 2);
    REQUIRE(r2.err.find(":1:") != std::string::npos);

    const CliResult r3 = run_cli(
        {"distinguishability", "--config", (test_dir() / "missing.cfg").string()});
    REQUIRE(r3.rc == 2);
    REQUIRE(r3.err.find(":0:") != std::string::npos);
}

TEST_CASE("distinguishability writes deterministic closed-form rows", "[cli]") {
    const std::string cfg = write_text("dist.cfg",
                                       "[main]\n"
                                       "family = qubit\n"
                                       "eta = 0 0.5 1\n");
    const std::string out_a = (test_dir() / "dist_a.csv").string();
    const std::string out_b = (test_dir() / "dist_b.csv").string();

    REQUIRE(run_cli({"distinguishability", "--config", cfg, "--out", out_a}).rc == 0);
    REQUIRE(run_cli({"distinguishability", "--config", cfg, "--out", out_b}).rc == 0);

    const std::string content = slurp(out_a);
    REQUIRE(content == slurp(out_b));  // byte-identical rerun

    const std::vector<std::string> lines = lines_of(content);
    REQUIRE(lines.size() == 4);
    REQUIRE(lines[0] == "family,eta,D10_re,D10_im,D10_abs");
    REQUIRE(lines[1] == "qubit,0,1,0,1");
    REQUIRE(lines[2] == "qubit,0.5,0.87758256189,0,0.87758256189");
    REQUIRE(lines[3] == "qubit,1,0.540302305868,0,0.540302305868");
}

TEST_CASE("--out is rejected when the config holds several scenarios", "[cli]") {
    const std::string cfg = write_text("multi.cfg",
                                       "[a]\n"
                                       "family = qubit\n"
                                       "eta = 0.5\n"
                                       "[b]\n"
                                       "family = qubit\n"
                                       "eta = 0.5\n");
    const CliResult r = run_cli(
        {"distinguishability", "--config", cfg, "--out", (test_dir() / "multi.csv").string()});
    REQUIRE(r.rc == 2);
    REQUIRE(r.err.find("ambiguous") != std::string::npos);
}

TEST_CASE("shift sweeps fan out one file per coupling", "[cli]") {
    const std::string cfg = write_text("sweep.cfg",
                                       "[sweep]\n"
                                       "family = qubit\n"
                                       "eta = 0.12 0.75\n"
                                       "param_range = 0:1.5:0.5\n");
    const std::string base = (test_dir() / "sweep.csv").string();
    REQUIRE(run_cli({"shift-sweep", "--config", cfg, "--out", base}).rc == 0);

    const std::string path_a = (test_dir() / "sweep_eta0.12.csv").string();
    const std::string path_b = (test_dir() / "sweep_eta0.75.csv").string();
    for (const std::string& path : {path_a, path_b}) {
        const std::vector<std::string> lines = lines_of(slurp(path));
        REQUIRE(lines.size() == 5);  // header + params {0, 0.5, 1, 1.5}
        REQUIRE(lines[0] ==
                "param,prob,chi_shift,mu_shift,norm_chi,norm_mu,ref_re,ref_im,status");
    }
}

TEST_CASE("sweep rows flag singular references instead of dropping them", "[cli]") {
    // theta = 3pi/4 is orthogonal to the post-selection (1,1)/sqrt(2):
    // the readout exists but no weak value does.
    const std::string cfg = write_text("singular.cfg",
                                       "[sr]\n"
                                       "family = gaussian\n"
                                       "eta = 0.12\n"
                                       "param_range = 2.35619449019234:2.35619449019234:1\n"
                                       "f = 1,0 1,0\n");
    const std::string out = (test_dir() / "singular.csv").string();
    REQUIRE(run_cli({"shift-sweep", "--config", cfg, "--out", out}).rc == 0);

    const std::vector<std::string> lines = lines_of(slurp(out));
    REQUIRE(lines.size() == 2);
    const std::vector<std::string> fields = fields_of(lines[1]);
    REQUIRE(fields.size() == 9);
    REQUIRE(fields[8] == "singular_reference");
    REQUIRE(!fields[1].empty());  // probability is still reported
    REQUIRE(fields[6].empty());   // the reference columns are not
    REQUIRE(fields[7].empty());
}

TEST_CASE("echo scans locate the qubit full-period revival", "[cli]") {
    const std::string cfg = write_text("echo.cfg",
                                       "[echo]\n"
                                       "family = qubit\n"
                                       "eta_range = 5:8:0.005\n");
    const std::string out = (test_dir() / "echo.csv").string();
    REQUIRE(run_cli({"echo-scan", "--config", cfg, "--out", out}).rc == 0);

    const std::vector<std::string> lines = lines_of(slurp(out));
    REQUIRE(lines.size() == 2);
    REQUIRE(lines[0] == "eta_star,D_re,D_im,eta_bar,flipped");
    const std::vector<std::string> fields = fields_of(lines[1]);
    REQUIRE(std::abs(std::stod(fields[0]) - 2.0 * weakval::kPi) < 1e-6);
    REQUIRE(std::stod(fields[1]) > 0.999);
    REQUIRE(fields[4] == "0");
}

TEST_CASE("verify-conditions reports small weak-regime residuals for every family",
          "[cli]") {
    const std::string cfg = write_text("verify.cfg",
                                       "[vc]\n"
                                       "family = all\n"
                                       "eta = 0.01\n");
    const std::string out = (test_dir() / "verify.csv").string();
    REQUIRE(run_cli({"verify-conditions", "--config", cfg, "--out", out}).rc == 0);

    const std::vector<std::string> lines = lines_of(slurp(out));
    REQUIRE(lines.size() == 4);
    REQUIRE(lines[0] == "family,eta,r_D,r_chi,r_mu");
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const std::vector<std::string> fields = fields_of(lines[i]);
        REQUIRE(fields.size() == 5);
        REQUIRE(std::stod(fields[2]) <= 1e-3);
        REQUIRE(std::stod(fields[3]) <= 1e-3);
        REQUIRE(std::stod(fields[4]) <= 1e-3);
    }
}

TEST_CASE("aav-convergence reports a quadratic empirical order", "[cli]") {
    const std::string cfg = write_text("aav.cfg",
                                       "[aav]\n"
                                       "family = gaussian\n");
    const std::string out = (test_dir() / "aav.csv").string();
    const CliResult r = run_cli({"aav-convergence", "--config", cfg, "--out", out});
    REQUIRE(r.rc == 0);

    const std::string marker = "aav-convergence: measured order ";
    const std::size_t at = r.out.find(marker);
    REQUIRE(at != std::string::npos);
    const double order = std::stod(r.out.substr(at + marker.size()));
    REQUIRE(order > 1.95);
    REQUIRE(order < 2.05);

    REQUIRE(lines_of(slurp(out)).size() == 5);  // header + four couplings
}

TEST_CASE("oracle-check passes on a scenario suite and on ingested amplitudes", "[cli]") {
    const std::string cfg = write_text("oracle.cfg",
                                       "[oc]\n"
                                       "family = qubit\n"
                                       "eta = 0.12 3.19159265359\n"
                                       "pairs = 2\n");
    const CliResult suite = run_cli({"oracle-check", "--config", cfg});
    REQUIRE(suite.rc == 0);
    REQUIRE(suite.out.find("(ok)") != std::string::npos);

    const std::string gamma = write_text("gamma.csv",
                                         "n,m,re,im\n"
                                         "0,0,0.5,0\n"
                                         "0,1,0,0.5\n"
                                         "1,0,-0.5,0\n"
                                         "1,1,0.3,0.4\n");
    const std::string ing_cfg =
        write_text("ingest.cfg", "[ing]\ngamma_file = " + gamma + "\n");
    const CliResult ingested = run_cli({"oracle-check", "--config", ing_cfg});
    REQUIRE(ingested.rc == 0);
    REQUIRE(ingested.out.find("(ok)") != std::string::npos);
}

TEST_CASE("family 'all' is rejected where a single family is required", "[cli]") {
    const std::string cfg = write_text("allfam.cfg",
                                       "[s]\n"
                                       "family = all\n"
                                       "eta = 0.12\n");
    const CliResult r = run_cli(
        {"shift-sweep", "--config", cfg, "--out", (test_dir() / "allfam.csv").string()});
    REQUIRE(r.rc == 2);
    REQUIRE(r.err.find("one family") != std::string::npos);
}

TEST_CASE("grid overrides propagate and invalid ones exit with the runtime code",
          "[cli]") {
    const std::string cfg = write_text("grid.cfg",
                                       "[g]\n"
                                       "family = gaussian\n"
                                       "eta = 0.5\n");
    const std::string out = (test_dir() / "grid.csv").string();

    REQUIRE(run_cli({"distinguishability", "--config", cfg, "--out", out,
                     "--grid-points", "513"})
                .rc == 0);
    REQUIRE(run_cli({"distinguishability", "--config", cfg, "--out", out,
                     "--grid-points", "512"})
                .rc == 3);

    // A half-width of 2 truncates the displaced packets mid-shoulder.
    const CliResult truncated = run_cli(
        {"distinguishability", "--config", cfg, "--out", out, "--domain-halfwidth", "2"});
    REQUIRE(truncated.rc == 3);
    REQUIRE(truncated.err.find("error:") != std::string::npos);
}

TEST_CASE("cli scratch directory cleanup", "[cli]") {
    std::error_code ec;
    fs::remove_all(test_dir(), ec);
    REQUIRE(!ec);
}
