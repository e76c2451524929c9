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
#include <istream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "weakval/common.hpp"
#include "weakval/errors.hpp"
#include "weakval/hilbert.hpp"
#include "weakval/pointer.hpp"

namespace weakval {

/// Post-interaction joint state in branch form:
///   |Psi> = sum_n c_n |a_n> (x) |xi_n>.
/// Branches with c_n = 0 may carry no pointer state (the marker is an
/// empty optional); they can never influence a conditional quantity.
class EntangledState {
  public:
    EntangledState(std::vector<Complex> c, std::vector<std::optional<PointerState>> xi,
                   std::optional<PointerFamily> family, std::optional<double> eta)
        : c_(std::move(c)), xi_(std::move(xi)), family_(std::move(family)), eta_(eta) {
        if (c_.size() < 2 || c_.size() != xi_.size()) {
            throw DimensionMismatch("EntangledState: need >= 2 branches with matching pointers");
        }
        for (std::size_t n = 0; n < c_.size(); ++n) {
            detail::require_finite(c_[n], "EntangledState");
            if (!xi_[n].has_value() && std::abs(c_[n]) > kZeroPostSelectionThreshold) {
                throw DimensionMismatch(
                    "EntangledState: a branch with nonzero weight lacks a pointer state");
            }
        }
    }

    std::size_t dim() const { return c_.size(); }
    const std::vector<Complex>& coefficients() const { return c_; }
    const Complex& coefficient(std::size_t n) const { return c_[n]; }
    const std::optional<PointerState>& pointer(std::size_t n) const { return xi_[n]; }
    bool branch_defined(std::size_t n) const { return xi_[n].has_value(); }

    const std::optional<PointerFamily>& family() const { return family_; }
    std::optional<double> eta() const { return eta_; }

  private:
    std::vector<Complex> c_;
    std::vector<std::optional<PointerState>> xi_;
    std::optional<PointerFamily> family_;
    std::optional<double> eta_;
};

/// Applies the impulsive coupling exp(-i eta A (x) P) to |psi>|G>: every
/// eigenvalue branch keeps its amplitude and acquires a pointer displaced
/// by eta * alpha_n. All continuous branches share one grid so that their
/// overlaps are well defined.
inline EntangledState von_neumann_entangle(const SystemState& psi, const MeasuredObservable& A,
                                           const PointerFamily& family, double eta,
                                           const GridSpec& spec = {}) {
    if (psi.dim() != A.dim()) {
        throw DimensionMismatch("von_neumann_entangle: state and observable dimension differ");
    }
    std::vector<std::optional<PointerState>> xi;
    xi.reserve(psi.dim());
    if (family.is_continuous()) {
        const Grid grid = default_grid(family, eta, A.max_abs_eigenvalue(), spec);
        for (std::size_t n = 0; n < psi.dim(); ++n) {
            xi.emplace_back(make_pointer_state(family, eta, A[n], grid));
        }
    } else {
        for (std::size_t n = 0; n < psi.dim(); ++n) {
            xi.emplace_back(make_pointer_state(family, eta, A[n]));
        }
    }

    double joint_norm = 0.0;
    for (std::size_t n = 0; n < psi.dim(); ++n) {
        joint_norm += std::norm(psi[n]) * state_overlap(*xi[n], *xi[n]).real();
    }
    if (std::abs(joint_norm - 1.0) > 1e-10) {
        throw NumericalContractViolation("von_neumann_entangle: joint state norm drifted");
    }
    return EntangledState(psi.amplitudes(), std::move(xi), family, eta);
}

/// Rebuilds branch form from raw joint amplitudes gamma(n, m) =
/// <a_n, b_m|Psi> over an orthonormal pointer basis b. Each nonzero row
/// is split into a weight c_n and a unit pointer vector, fixing the
/// phase gauge by making the largest pointer component real positive.
/// Zero rows become undefined-pointer markers. Two-level pointer bases
/// are adopted as qubit meters so readouts stay available; the coupling
/// strength is unknown and left unset.
inline EntangledState ingest_joint_amplitudes(const ComplexMatrix& gamma,
                                              std::size_t pointer_basis_dim) {
    if (gamma.rows() < 2 || gamma.cols() < 2) {
        throw DimensionMismatch("ingest_joint_amplitudes: need >= 2 system and pointer levels");
    }
    if (gamma.cols() != pointer_basis_dim) {
        throw DimensionMismatch("ingest_joint_amplitudes: pointer basis dimension disagrees");
    }
    double total = 0.0;
    for (std::size_t n = 0; n < gamma.rows(); ++n) {
        for (std::size_t m = 0; m < gamma.cols(); ++m) {
            detail::require_finite(gamma.at(n, m), "ingest_joint_amplitudes");
            total += std::norm(gamma.at(n, m));
        }
    }
    if (std::abs(total - 1.0) > 1e-8) {
        throw UnnormalizedInput("ingest_joint_amplitudes: joint amplitudes are not normalized");
    }

    std::vector<Complex> c(gamma.rows());
    std::vector<std::optional<PointerState>> xi(gamma.rows());
    for (std::size_t n = 0; n < gamma.rows(); ++n) {
        double row2 = 0.0;
        std::size_t peak = 0;
        for (std::size_t m = 0; m < gamma.cols(); ++m) {
            row2 += std::norm(gamma.at(n, m));
            if (std::abs(gamma.at(n, m)) > std::abs(gamma.at(n, peak))) {
                peak = m;
            }
        }
        const double row_norm = std::sqrt(row2);
        if (row_norm <= kZeroPostSelectionThreshold) {
            c[n] = Complex(0.0, 0.0);
            continue;  // undefined-pointer marker
        }
        const Complex phase = gamma.at(n, peak) / std::abs(gamma.at(n, peak));
        c[n] = row_norm * phase;
        std::vector<Complex> amps(gamma.cols());
        for (std::size_t m = 0; m < gamma.cols(); ++m) {
            amps[m] = gamma.at(n, m) / c[n];
        }
        xi[n] = PointerState(DiscreteState{std::move(amps)});
    }

    std::optional<PointerFamily> family;
    if (pointer_basis_dim == 2) {
        family = PointerFamily::qubit();
    }
    return EntangledState(std::move(c), std::move(xi), std::move(family), std::nullopt);
}

namespace detail {

inline std::string trim_copy(const std::string& s) {
    const std::size_t first = s.find_first_not_of(" \t");
    if (first == std::string::npos) {
        return std::string();
    }
    const std::size_t last = s.find_last_not_of(" \t");
    return s.substr(first, last - first + 1);
}

inline bool parse_index(const std::string& raw, std::size_t& out) {
    const std::string t = trim_copy(raw);
    if (t.empty()) {
        return false;
    }
    try {
        std::size_t pos = 0;
        const unsigned long long v = std::stoull(t, &pos);
        if (pos != t.size()) {
            return false;
        }
        out = static_cast<std::size_t>(v);
        return true;
    } catch (const std::exception&) {
        return false;
    }
}

inline bool parse_real(const std::string& raw, double& out) {
    const std::string t = trim_copy(raw);
    if (t.empty()) {
        return false;
    }
    try {
        std::size_t pos = 0;
        const double v = std::stod(t, &pos);
        if (pos != t.size() || !std::isfinite(v)) {
            return false;
        }
        out = v;
        return true;
    } catch (const std::exception&) {
        return false;
    }
}

}  // namespace detail

/// Reads joint amplitudes from CSV rows `n,m,re,im` (one header row is
/// skipped if present). Dimensions are inferred from the largest indices;
/// unlisted entries are zero; a duplicated entry is an error. Error
/// messages carry `<source>:<line>`.
inline ComplexMatrix load_joint_amplitudes_csv(std::istream& in, std::string_view source) {
    struct Entry {
        std::size_t n, m;
        Complex value;
        std::size_t line;
    };
    std::vector<Entry> entries;
    std::size_t max_n = 0;
    std::size_t max_m = 0;
    std::string line;
    std::size_t lineno = 0;
    bool first_data_line = true;

    auto fail = [&](std::size_t at, const std::string& msg) {
        throw ConfigError(std::string(source) + ":" + std::to_string(at) + ": " + msg);
    };

    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        const std::string trimmed = detail::trim_copy(line);
        if (trimmed.empty() || trimmed[0] == '#') {
            continue;
        }
        std::istringstream ss(trimmed);
        std::string tok[4];
        int found = 0;
        std::string piece;
        while (found < 4 && std::getline(ss, piece, ',')) {
            tok[found++] = piece;
        }
        std::string extra;
        const bool too_many = static_cast<bool>(std::getline(ss, extra, ','));

        Entry e{0, 0, Complex{0.0, 0.0}, lineno};
        double re = 0.0;
        double im = 0.0;
        const bool parsed = found == 4 && !too_many && detail::parse_index(tok[0], e.n) &&
                            detail::parse_index(tok[1], e.m) && detail::parse_real(tok[2], re) &&
                            detail::parse_real(tok[3], im);
        if (!parsed) {
            if (first_data_line) {
                first_data_line = false;  // tolerate a header row
                continue;
            }
            fail(lineno, "expected four comma-separated fields n,m,re,im");
        }
        first_data_line = false;
        e.value = Complex(re, im);
        max_n = std::max(max_n, e.n);
        max_m = std::max(max_m, e.m);
        entries.push_back(e);
    }
    if (entries.empty()) {
        fail(lineno, "no amplitude rows found");
    }

    ComplexMatrix gamma(max_n + 1, max_m + 1);
    ComplexMatrix seen(max_n + 1, max_m + 1);
    for (const Entry& e : entries) {
        if (seen.at(e.n, e.m) != Complex{0.0, 0.0}) {
            fail(e.line, "duplicate entry for indices (" + std::to_string(e.n) + ", " +
                             std::to_string(e.m) + ")");
        }
        seen.at(e.n, e.m) = Complex{1.0, 0.0};
        gamma.at(e.n, e.m) = e.value;
    }
    return gamma;
}

}  // namespace weakval
