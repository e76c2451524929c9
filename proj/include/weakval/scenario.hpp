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
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <istream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "weakval/common.hpp"
#include "weakval/entangle.hpp"
#include "weakval/errors.hpp"

namespace weakval {

/// Inclusive arithmetic progression written as "lo:hi:step".
struct ConfigRange {
    double lo = 0.0;
    double hi = 0.0;
    double step = 0.0;

    std::vector<double> values() const {
        std::vector<double> v;
        const double span = hi - lo;
        const std::size_t n = static_cast<std::size_t>(std::floor(span / step + 1e-9)) + 1;
        v.reserve(n);
        for (std::size_t i = 0; i < n; ++i) {
            v.push_back(lo + step * static_cast<double>(i));
        }
        return v;
    }
};

/// One scenario section of a configuration file. Only syntactic and
/// local-semantic validation happens at parse time; physics-level
/// validation (normalization, grid contracts) happens where the values
/// are used.
struct ScenarioConfig {
    std::string name = "default";
    std::string family = "gaussian";  // gaussian | pulse | qubit | all
    double sigma = 1.0;
    double omega = 4.0;
    double cep = 0.0;
    std::vector<double> alphas = {0.0, 1.0};
    std::vector<Complex> psi;  // empty: subcommand default
    std::vector<Complex> f;    // empty: subcommand default
    std::vector<double> etas;
    std::optional<ConfigRange> eta_range;
    std::string sweep = "theta";  // theta | phi
    std::optional<ConfigRange> param_range;
    std::optional<double> threshold;
    std::optional<double> eta_bar_override;
    double exclude_origin_radius = 0.05;
    std::optional<std::size_t> grid_points;
    std::optional<double> domain_halfwidth;
    std::optional<std::string> out;
    std::uint64_t seed = 42;
    std::size_t pairs = 20;
    std::optional<std::string> gamma_file;

    /// etas list or expanded range; empty when neither was given.
    std::vector<double> eta_values() const {
        if (!etas.empty()) {
            return etas;
        }
        if (eta_range.has_value()) {
            return eta_range->values();
        }
        return {};
    }
};

namespace detail {

inline std::vector<std::string> split_ws(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream ss(s);
    std::string tok;
    while (ss >> tok) {
        out.push_back(tok);
    }
    return out;
}

inline bool parse_complex_token(const std::string& tok, Complex& out) {
    const std::size_t comma = tok.find(',');
    double re = 0.0;
    double im = 0.0;
    if (comma == std::string::npos) {
        if (!parse_real(tok, re)) {
            return false;
        }
        out = Complex(re, 0.0);
        return true;
    }
    if (!parse_real(tok.substr(0, comma), re) || !parse_real(tok.substr(comma + 1), im)) {
        return false;
    }
    out = Complex(re, im);
    return true;
}

}  // namespace detail

/// Parses scenario configuration text: `[name]` opens a scenario,
/// `key = value` assigns within it, `#` starts a comment. Complex numbers
/// are "re,im" tokens (bare reals allowed), lists are whitespace
/// separated, ranges are "lo:hi:step". Unknown keys, malformed values,
/// and keys outside any section are rejected with `<source>:<line>`
/// messages.
inline std::vector<ScenarioConfig> parse_config(std::istream& in, std::string_view source) {
    std::vector<ScenarioConfig> scenarios;
    std::string line;
    std::size_t lineno = 0;

    auto fail = [&](const std::string& msg) {
        throw ConfigError(std::string(source) + ":" + std::to_string(lineno) + ": " + msg);
    };
    auto need_real = [&](const std::string& v, const char* key) {
        double x = 0.0;
        if (!detail::parse_real(v, x)) {
            fail(std::string("invalid real value for '") + key + "'");
        }
        return x;
    };
    auto need_range = [&](const std::string& v, const char* key) {
        ConfigRange r;
        const std::size_t a = v.find(':');
        const std::size_t b = a == std::string::npos ? std::string::npos : v.find(':', a + 1);
        if (a == std::string::npos || b == std::string::npos ||
            v.find(':', b + 1) != std::string::npos) {
            fail(std::string("expected lo:hi:step for '") + key + "'");
        }
        if (!detail::parse_real(v.substr(0, a), r.lo) ||
            !detail::parse_real(v.substr(a + 1, b - a - 1), r.hi) ||
            !detail::parse_real(v.substr(b + 1), r.step)) {
            fail(std::string("invalid numbers in range for '") + key + "'");
        }
        if (!(r.step > 0.0) || r.hi < r.lo) {
            fail(std::string("range for '") + key + "' needs hi >= lo and step > 0");
        }
        if ((r.hi - r.lo) / r.step > 1e7) {
            fail(std::string("range for '") + key + "' has too many points");
        }
        return r;
    };

    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) {
            line.erase(hash);
        }
        const std::string t = detail::trim_copy(line);
        if (t.empty()) {
            continue;
        }
        if (t.front() == '[') {
            if (t.back() != ']' || t.size() < 3) {
                fail("malformed section header");
            }
            ScenarioConfig sc;
            sc.name = detail::trim_copy(t.substr(1, t.size() - 2));
            if (sc.name.empty()) {
                fail("empty section name");
            }
            scenarios.push_back(std::move(sc));
            continue;
        }
        const std::size_t eq = t.find('=');
        if (eq == std::string::npos) {
            fail("expected 'key = value' or a [section] header");
        }
        if (scenarios.empty()) {
            fail("key outside any [section]");
        }
        const std::string key = detail::trim_copy(t.substr(0, eq));
        const std::string value = detail::trim_copy(t.substr(eq + 1));
        if (key.empty() || value.empty()) {
            fail("empty key or value");
        }
        ScenarioConfig& sc = scenarios.back();

        if (key == "family") {
            if (value != "gaussian" && value != "pulse" && value != "qubit" && value != "all") {
                fail("family must be gaussian, pulse, qubit, or all");
            }
            sc.family = value;
        } else if (key == "sigma") {
            sc.sigma = need_real(value, "sigma");
            if (!(sc.sigma > 0.0)) {
                fail("sigma must be positive");
            }
        } else if (key == "omega") {
            sc.omega = need_real(value, "omega");
            if (!(sc.omega >= 0.0)) {
                fail("omega must be nonnegative");
            }
        } else if (key == "cep") {
            sc.cep = need_real(value, "cep");
        } else if (key == "alpha") {
            sc.alphas.clear();
            for (const std::string& tok : detail::split_ws(value)) {
                double x = 0.0;
                if (!detail::parse_real(tok, x)) {
                    fail("invalid eigenvalue in 'alpha'");
                }
                sc.alphas.push_back(x);
            }
            if (sc.alphas.size() < 2) {
                fail("'alpha' needs at least two eigenvalues");
            }
        } else if (key == "psi" || key == "f") {
            std::vector<Complex> amps;
            for (const std::string& tok : detail::split_ws(value)) {
                Complex c;
                if (!detail::parse_complex_token(tok, c)) {
                    fail(std::string("invalid complex token in '") + key + "' (use re,im)");
                }
                amps.push_back(c);
            }
            if (amps.size() < 2) {
                fail(std::string("'") + key + "' needs at least two amplitudes");
            }
            double n2 = 0.0;
            for (const Complex& c : amps) {
                n2 += std::norm(c);
            }
            if (!(n2 > 0.0)) {
                fail(std::string("'") + key + "' must not be the zero vector");
            }
            (key == "psi" ? sc.psi : sc.f) = std::move(amps);
        } else if (key == "eta") {
            sc.etas.clear();
            for (const std::string& tok : detail::split_ws(value)) {
                double x = 0.0;
                if (!detail::parse_real(tok, x)) {
                    fail("invalid value in 'eta'");
                }
                sc.etas.push_back(x);
            }
            if (sc.etas.empty()) {
                fail("'eta' needs at least one value");
            }
        } else if (key == "eta_range") {
            sc.eta_range = need_range(value, "eta_range");
        } else if (key == "sweep") {
            if (value != "theta" && value != "phi") {
                fail("sweep must be theta or phi");
            }
            sc.sweep = value;
        } else if (key == "param_range") {
            sc.param_range = need_range(value, "param_range");
        } else if (key == "threshold") {
            const double x = need_real(value, "threshold");
            if (!(x > 0.0)) {
                fail("threshold must be positive");
            }
            sc.threshold = x;
        } else if (key == "eta_bar_override") {
            sc.eta_bar_override = need_real(value, "eta_bar_override");
        } else if (key == "exclude_origin_radius") {
            sc.exclude_origin_radius = need_real(value, "exclude_origin_radius");
            if (!(sc.exclude_origin_radius >= 0.0)) {
                fail("exclude_origin_radius must be nonnegative");
            }
        } else if (key == "grid_points") {
            std::size_t n = 0;
            if (!detail::parse_index(value, n) || n < 256 || n % 2 == 0) {
                fail("grid_points must be an odd integer of at least 257");
            }
            sc.grid_points = n;
        } else if (key == "domain_halfwidth") {
            const double x = need_real(value, "domain_halfwidth");
            if (!(x > 0.0)) {
                fail("domain_halfwidth must be positive");
            }
            sc.domain_halfwidth = x;
        } else if (key == "out") {
            sc.out = value;
        } else if (key == "seed") {
            std::size_t s = 0;
            if (!detail::parse_index(value, s)) {
                fail("seed must be a nonnegative integer");
            }
            sc.seed = static_cast<std::uint64_t>(s);
        } else if (key == "pairs") {
            std::size_t p = 0;
            if (!detail::parse_index(value, p) || p == 0) {
                fail("pairs must be a positive integer");
            }
            sc.pairs = p;
        } else if (key == "gamma_file") {
            sc.gamma_file = value;
        } else {
            fail("unknown key '" + key + "'");
        }
    }
    if (scenarios.empty()) {
        ++lineno;
        fail("no [section] found");
    }
    return scenarios;
}

inline std::vector<ScenarioConfig> parse_config_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ConfigError(path + ":0: cannot open configuration file");
    }
    return parse_config(in, path);
}

}  // namespace weakval
