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

#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "weakval/analysis.hpp"
#include "weakval/csv.hpp"
#include "weakval/entangle.hpp"
#include "weakval/errors.hpp"
#include "weakval/hilbert.hpp"
#include "weakval/pointer.hpp"
#include "weakval/random.hpp"
#include "weakval/readout.hpp"
#include "weakval/scenario.hpp"

namespace weakval {
namespace cli {

/// Command-line overrides; every one of them beats its config-file
/// counterpart when present.
struct Flags {
    std::optional<std::string> config;
    std::optional<std::string> out;
    std::optional<std::size_t> grid_points;
    std::optional<double> domain_halfwidth;
    std::optional<double> echo_threshold;
};

namespace detail {

inline std::string format_g(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

inline GridSpec grid_spec_for(const ScenarioConfig& sc, const Flags& fl) {
    GridSpec g;
    if (sc.grid_points.has_value()) {
        g.n_points = *sc.grid_points;
    }
    if (fl.grid_points.has_value()) {
        g.n_points = *fl.grid_points;
    }
    if (sc.domain_halfwidth.has_value()) {
        g.half_width = *sc.domain_halfwidth;
    }
    if (fl.domain_halfwidth.has_value()) {
        g.half_width = *fl.domain_halfwidth;
    }
    return g;
}

inline PointerFamily single_family_for(const ScenarioConfig& sc, const std::string& name) {
    if (name == "gaussian") {
        return PointerFamily::gaussian(sc.sigma);
    }
    if (name == "pulse") {
        return PointerFamily::optical_pulse(sc.sigma, sc.omega, sc.cep);
    }
    return PointerFamily::qubit();
}

inline std::vector<PointerFamily> families_for(const ScenarioConfig& sc) {
    if (sc.family == "all") {
        return {PointerFamily::gaussian(sc.sigma),
                PointerFamily::optical_pulse(sc.sigma, sc.omega, sc.cep),
                PointerFamily::qubit()};
    }
    return {single_family_for(sc, sc.family)};
}

inline PointerFamily require_single_family(const ScenarioConfig& sc, const char* subcommand) {
    if (sc.family == "all") {
        throw ConfigError("[" + sc.name + "]: " + subcommand + " needs one family, not 'all'");
    }
    return single_family_for(sc, sc.family);
}

inline std::string out_path_for(const ScenarioConfig& sc, const Flags& fl) {
    if (fl.out.has_value()) {
        return *fl.out;
    }
    if (sc.out.has_value()) {
        return *sc.out;
    }
    throw ConfigError("[" + sc.name + "]: no output path (pass --out or set 'out =')");
}

inline std::string with_suffix(const std::string& path, const std::string& suffix) {
    const std::size_t dot = path.find_last_of('.');
    const std::size_t slash = path.find_last_of("/\\");
    if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) {
        return path + suffix;
    }
    return path.substr(0, dot) + suffix + path.substr(dot);
}

inline std::vector<double> require_etas(const ScenarioConfig& sc, const char* subcommand) {
    std::vector<double> etas = sc.eta_values();
    if (etas.empty()) {
        throw ConfigError("[" + sc.name + "]: " + subcommand + " needs 'eta' or 'eta_range'");
    }
    return etas;
}

inline SystemState state_or_default(const std::vector<Complex>& amps,
                                    std::vector<Complex> fallback) {
    return SystemState::normalized(amps.empty() ? std::move(fallback) : amps);
}

inline double reference_threshold_for(const ScenarioConfig& sc, const Flags& fl) {
    if (fl.echo_threshold.has_value()) {
        return *fl.echo_threshold;
    }
    if (sc.threshold.has_value()) {
        return *sc.threshold;
    }
    return 0.5;
}

// ---------------------------------------------------------------- commands

inline void cmd_distinguishability(const ScenarioConfig& sc, const Flags& fl) {
    const std::vector<double> etas = require_etas(sc, "distinguishability");
    const MeasuredObservable A(sc.alphas);
    const GridSpec spec = grid_spec_for(sc, fl);
    const std::string path = out_path_for(sc, fl);

    CsvWriter csv;
    csv.field("family").field("eta").field("D10_re").field("D10_im").field("D10_abs").end_row();
    std::size_t rows = 0;
    for (const PointerFamily& family : families_for(sc)) {
        for (const DistinguishabilityRow& r : distinguishability_sweep(family, A, etas, spec)) {
            csv.field(r.family)
                .field(r.eta)
                .field(r.d10.real())
                .field(r.d10.imag())
                .field(std::abs(r.d10))
                .end_row();
            ++rows;
        }
    }
    csv.write_file(path);
    std::cout << "distinguishability: " << rows << " rows -> " << path << "\n";
}

inline void cmd_shift_sweep(const ScenarioConfig& sc, const Flags& fl) {
    const PointerFamily family = require_single_family(sc, "shift-sweep");
    const std::vector<double> etas = require_etas(sc, "shift-sweep");
    const MeasuredObservable A(sc.alphas);
    const SystemState f = state_or_default(sc.f, {Complex(1.0, 0.0), Complex(1.0, 0.0)});
    const SweepKind kind = sc.sweep == "phi" ? SweepKind::RelativePhase : SweepKind::PolarAngle;

    std::vector<double> params;
    if (sc.param_range.has_value()) {
        params = sc.param_range->values();
    } else if (kind == SweepKind::PolarAngle) {
        params = ConfigRange{0.0, kPi, kPi / 200.0}.values();
    } else {
        params = ConfigRange{0.0, 2.0 * kPi, kPi / 100.0}.values();
    }

    ShiftSweepOptions opts;
    opts.reference_threshold = reference_threshold_for(sc, fl);
    opts.eta_bar_override = sc.eta_bar_override;
    opts.grid = grid_spec_for(sc, fl);

    const std::string base = out_path_for(sc, fl);
    for (double eta : etas) {
        const std::string path =
            etas.size() == 1 ? base : with_suffix(base, "_eta" + format_g(eta));
        CsvWriter csv;
        csv.field("param")
            .field("prob")
            .field("chi_shift")
            .field("mu_shift")
            .field("norm_chi")
            .field("norm_mu")
            .field("ref_re")
            .field("ref_im")
            .field("status")
            .end_row();
        const std::vector<ShiftRow> rows = shift_sweep(family, A, eta, kind, params, f, opts);
        for (const ShiftRow& r : rows) {
            csv.field(r.param);
            auto put = [&csv](const std::optional<double>& v) {
                if (v.has_value()) {
                    csv.field(*v);
                } else {
                    csv.empty_field();
                }
            };
            put(r.prob);
            put(r.chi_val);
            put(r.mu_val);
            put(r.norm_chi);
            put(r.norm_mu);
            if (r.reference.has_value()) {
                csv.field(r.reference->real()).field(r.reference->imag());
            } else {
                csv.empty_field().empty_field();
            }
            csv.field(r.status).end_row();
        }
        csv.write_file(path);
        std::cout << "shift-sweep: eta=" << format_g(eta) << " " << rows.size() << " rows -> "
                  << path << "\n";
    }
}

inline void cmd_echo_scan(const ScenarioConfig& sc, const Flags& fl) {
    const PointerFamily family = require_single_family(sc, "echo-scan");
    if (!sc.eta_range.has_value()) {
        throw ConfigError("[" + sc.name + "]: echo-scan needs 'eta_range' (lo:hi:step)");
    }
    const ConfigRange r = *sc.eta_range;
    const MeasuredObservable A(sc.alphas);

    EchoScanOptions opts;
    opts.threshold = reference_threshold_for(sc, fl);
    opts.grid = grid_spec_for(sc, fl);
    const std::size_t steps = static_cast<std::size_t>(std::floor((r.hi - r.lo) / r.step + 1e-9));
    opts.scan_points = std::max<std::size_t>(steps + 1, 16);

    const std::vector<EchoPoint> points =
        echo_scan(family, A, r.lo, r.hi, sc.exclude_origin_radius, opts);

    const std::string path = out_path_for(sc, fl);
    CsvWriter csv;
    csv.field("eta_star").field("D_re").field("D_im").field("eta_bar").field("flipped").end_row();
    for (const EchoPoint& p : points) {
        csv.field(p.eta_star)
            .field(p.d_value.real())
            .field(p.d_value.imag())
            .field(p.eta_bar)
            .field(p.flipped)
            .end_row();
    }
    csv.write_file(path);
    std::cout << "echo-scan: " << points.size() << " echo points -> " << path << "\n";
}

inline void cmd_verify_conditions(const ScenarioConfig& sc, const Flags& fl) {
    const std::vector<double> etas = require_etas(sc, "verify-conditions");
    const MeasuredObservable A(sc.alphas);
    const GridSpec spec = grid_spec_for(sc, fl);
    const std::string path = out_path_for(sc, fl);

    CsvWriter csv;
    csv.field("family").field("eta").field("r_D").field("r_chi").field("r_mu").end_row();
    std::size_t rows = 0;
    for (const PointerFamily& family : families_for(sc)) {
        for (double eta : etas) {
            const ConditionResiduals res =
                condition_residuals(pointer_matrices(family, eta, A, spec));
            csv.field(family.name())
                .field(eta)
                .field(res.r_d)
                .field(res.r_chi)
                .field(res.r_mu)
                .end_row();
            ++rows;
        }
    }
    csv.write_file(path);
    std::cout << "verify-conditions: " << rows << " rows -> " << path << "\n";
}

inline void cmd_aav_convergence(const ScenarioConfig& sc, const Flags& fl) {
    const PointerFamily family = require_single_family(sc, "aav-convergence");
    const MeasuredObservable A(sc.alphas);
    std::vector<double> etas = sc.eta_values();
    if (etas.empty()) {
        etas = {0.01, 0.005, 0.0025, 0.00125};
    }
    const SystemState psi = state_or_default(sc.psi, {Complex(1.0, 0.0), Complex(1.0, 0.0)});
    const SystemState f = state_or_default(
        sc.f, {Complex(std::cos(-kPi / 8.0), 0.0), Complex(std::sin(-kPi / 8.0), 0.0)});
    const GridSpec spec = grid_spec_for(sc, fl);

    const std::vector<AavRow> rows = aav_convergence(family, A, psi, f, etas, spec);
    const double order = measured_order(rows);

    const std::string path = out_path_for(sc, fl);
    CsvWriter csv;
    csv.field("eta").field("abs_error").field("shift_re").field("shift_im").end_row();
    for (const AavRow& r : rows) {
        csv.field(r.eta)
            .field(r.abs_error)
            .field(r.shift.real())
            .field(r.shift.imag())
            .end_row();
    }
    csv.write_file(path);
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.4f", order);
    std::cout << "aav-convergence: measured order " << buf << " -> " << path << "\n";
}

/// Compares the matrix-formula route against the explicit joint-vector
/// route, either on ingested joint amplitudes or on a seeded random
/// suite. Returns the number of comparisons and the worst relative
/// difference.
inline std::pair<std::size_t, double> run_oracle_comparisons(const ScenarioConfig& sc,
                                                             const Flags& fl, CsvWriter& csv) {
    csv.field("family")
        .field("eta")
        .field("pair")
        .field("readout")
        .field("conditional")
        .field("brute_force")
        .field("abs_diff")
        .end_row();
    std::size_t count = 0;
    double worst = 0.0;

    auto compare = [&](const std::string& fam_name, std::optional<double> eta, std::size_t pair,
                       const EntangledState& state, const SystemState& f) {
        for (Readout which : {Readout::Canonical, Readout::Conjugate}) {
            const double a = conditional_expectation(state, f, which);
            const double b = brute_force_oracle(state, f, which);
            const double diff = std::abs(a - b);
            worst = std::max(worst, diff / std::max({1.0, std::abs(a), std::abs(b)}));
            csv.field(fam_name);
            if (eta.has_value()) {
                csv.field(*eta);
            } else {
                csv.empty_field();
            }
            csv.field(static_cast<double>(pair))
                .field(which == Readout::Canonical ? "canonical" : "conjugate")
                .field(a)
                .field(b)
                .field(diff)
                .end_row();
            ++count;
        }
    };

    if (sc.gamma_file.has_value()) {
        std::ifstream in(*sc.gamma_file, std::ios::binary);
        if (!in) {
            throw ConfigError(*sc.gamma_file + ":0: cannot open joint-amplitude file");
        }
        const ComplexMatrix gamma = load_joint_amplitudes_csv(in, *sc.gamma_file);
        if (gamma.cols() != 2) {
            throw ConfigError("[" + sc.name +
                              "]: ingested pointers must be two-level for readout comparison");
        }
        const EntangledState state = ingest_joint_amplitudes(gamma, gamma.cols());
        std::vector<Complex> ones(gamma.rows(), Complex(1.0, 0.0));
        const SystemState f = state_or_default(sc.f, std::move(ones));
        compare("ingested", std::nullopt, 0, state, f);
        return {count, worst};
    }

    const MeasuredObservable A(sc.alphas);
    const GridSpec spec = grid_spec_for(sc, fl);
    std::vector<double> etas = sc.eta_values();
    if (etas.empty()) {
        etas = {0.01, 0.12, 0.39, 0.75, kPi + 0.05, 2.0 * kPi + 0.05};
    }
    DeterministicRng rng(sc.seed);
    for (const PointerFamily& family : families_for(sc)) {
        for (double eta : etas) {
            for (std::size_t pair = 0; pair < sc.pairs; ++pair) {
                // Redraw (deterministically) until the post-selection is
                // well conditioned; relative agreement is meaningless on
                // the measure-zero singular set.
                SystemState psi = random_state(rng, A.dim());
                SystemState f = random_state(rng, A.dim());
                EntangledState state = von_neumann_entangle(psi, A, family, eta, spec);
                for (int attempt = 0; attempt < 100; ++attempt) {
                    try {
                        if (full_readout(state, f, A, psi).prob >= 1e-6) {
                            break;
                        }
                    } catch (const ZeroPostSelection&) {
                    }
                    psi = random_state(rng, A.dim());
                    f = random_state(rng, A.dim());
                    state = von_neumann_entangle(psi, A, family, eta, spec);
                }
                compare(std::string(family.name()), eta, pair, state, f);
            }
        }
    }
    return {count, worst};
}

inline int cmd_oracle_check(const ScenarioConfig& sc, const Flags& fl) {
    CsvWriter csv;
    const auto [count, worst] = run_oracle_comparisons(sc, fl, csv);
    if (fl.out.has_value() || sc.out.has_value()) {
        const std::string path = out_path_for(sc, fl);
        csv.write_file(path);
        std::cout << "oracle-check: wrote " << count << " comparisons -> " << path << "\n";
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3g", worst);
    const bool ok = worst <= 1e-8;
    std::cout << "oracle-check: " << count << " comparisons, max relative difference " << buf
              << (ok ? " (ok)" : " (MISMATCH)") << "\n";
    if (!ok) {
        std::cerr << "oracle-check: routes disagree beyond 1e-8 relative\n";
        return 3;
    }
    return 0;
}

}  // namespace detail

/// Full command-line entry point. Exit codes: 0 success, 2 configuration
/// error (bad flags, bad config file, missing inputs), 3 numerical
/// contract violation or any other runtime failure.
inline int run(int argc, const char* const* argv) {
    CLI::App app{"Weak-measurement pointer-shift laboratory: exact post-selected readouts,"
                 " weak-value limits, and echo scans for Gaussian, optical-pulse, and qubit"
                 " pointers."};
    app.name("weakval");
    app.require_subcommand(1);

    std::string config_path;
    std::string out_path;
    std::size_t grid_points = 0;
    double halfwidth = 0.0;
    double echo_threshold = 0.0;
    CLI::Option* o_config = app.add_option("--config", config_path, "Scenario configuration file");
    CLI::Option* o_out =
        app.add_option("--out", out_path, "Output CSV path (single-scenario runs)");
    CLI::Option* o_grid =
        app.add_option("--grid-points", grid_points, "Override the grid node count (odd, >= 257)");
    CLI::Option* o_half = app.add_option("--domain-halfwidth", halfwidth,
                                         "Override the automatic grid half-width");
    CLI::Option* o_thr = app.add_option(
        "--echo-threshold", echo_threshold,
        "|D_10| threshold for echo detection and the weak/strong reference switch");

    const char* names[] = {"distinguishability", "shift-sweep",     "echo-scan",
                           "verify-conditions",  "aav-convergence", "oracle-check"};
    const char* briefs[] = {"Branch-overlap magnitude D_10 versus coupling strength",
                            "Conditional pointer shifts across initial-state sweeps",
                            "Locate revivals of |D_10| and their reduced strengths",
                            "Weak-regime residuals of the pointer-overlap matrices",
                            "Convergence of the normalized shift to the weak value",
                            "Matrix formula versus explicit joint-vector readout"};
    for (int i = 0; i < 6; ++i) {
        // Let `weakval <subcommand> --config ...` reach the top-level flags.
        app.add_subcommand(names[i], briefs[i])->fallthrough();
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    Flags fl;
    if (o_config->count() > 0) {
        fl.config = config_path;
    }
    if (o_out->count() > 0) {
        fl.out = out_path;
    }
    if (o_grid->count() > 0) {
        fl.grid_points = grid_points;
    }
    if (o_half->count() > 0) {
        fl.domain_halfwidth = halfwidth;
    }
    if (o_thr->count() > 0) {
        fl.echo_threshold = echo_threshold;
    }

    const std::string sub = app.get_subcommands().front()->get_name();
    try {
        std::vector<ScenarioConfig> scenarios;
        if (fl.config.has_value()) {
            scenarios = parse_config_file(*fl.config);
        } else if (sub == "oracle-check") {
            ScenarioConfig def;
            def.family = "all";  // the built-in self-verification suite
            scenarios.push_back(std::move(def));
        } else {
            std::cerr << "error: " << sub << " needs --config\n";
            return 2;
        }
        if (scenarios.size() > 1 && fl.out.has_value()) {
            throw ConfigError("--out is ambiguous with multiple scenarios; use 'out =' per section");
        }

        int rc = 0;
        for (const ScenarioConfig& sc : scenarios) {
            if (sub == "distinguishability") {
                detail::cmd_distinguishability(sc, fl);
            } else if (sub == "shift-sweep") {
                detail::cmd_shift_sweep(sc, fl);
            } else if (sub == "echo-scan") {
                detail::cmd_echo_scan(sc, fl);
            } else if (sub == "verify-conditions") {
                detail::cmd_verify_conditions(sc, fl);
            } else if (sub == "aav-convergence") {
                detail::cmd_aav_convergence(sc, fl);
            } else {
                rc = std::max(rc, detail::cmd_oracle_check(sc, fl));
            }
        }
        return rc;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}

}  // namespace cli
}  // namespace weakval
