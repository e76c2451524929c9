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
#include <optional>
#include <utility>
#include <vector>

#include "weakval/common.hpp"
#include "weakval/entangle.hpp"
#include "weakval/errors.hpp"
#include "weakval/hilbert.hpp"
#include "weakval/pointer.hpp"

namespace weakval {

/// Everything a post-selected run produces: the success probability, the
/// two conditional pointer readouts, their combination as one complex
/// shift normalized by the effective coupling, and (when the overlap is
/// not singular) the weak value this shift should approach.
struct ConditionalReadout {
    double prob = 0.0;
    double chi_val = 0.0;
    double mu_val = 0.0;
    Complex complex_shift{0.0, 0.0};
    std::optional<Complex> reference_weak_value;
    double eta_eff = 0.0;
};

namespace detail {

/// Collapse weights z_n = conj(f_n) c_n restricted to the branches that
/// carry a pointer state.
struct CollapseWeights {
    std::vector<std::size_t> branch;
    std::vector<Complex> z;
};

inline CollapseWeights collapse_weights(const EntangledState& state, const SystemState& f) {
    if (state.dim() != f.dim()) {
        throw DimensionMismatch("conditional readout: post-selection dimension mismatch");
    }
    CollapseWeights w;
    for (std::size_t n = 0; n < state.dim(); ++n) {
        if (!state.branch_defined(n)) {
            continue;  // c_n = 0 there, enforced by EntangledState
        }
        w.branch.push_back(n);
        w.z.push_back(std::conj(f[n]) * state.coefficient(n));
    }
    return w;
}

inline const PointerFamily& family_of(const EntangledState& state) {
    if (!state.family().has_value()) {
        throw UnsupportedFamily("conditional readout: state carries no pointer family");
    }
    return *state.family();
}

/// Numerator and denominator of the conditional expectation
///   <O>_f = sum_{n,m} z_n conj(z_m) O_mn / sum_{n,m} z_n conj(z_m) D_mn
/// evaluated from the branch overlap matrices. The denominator is the
/// post-selection probability.
inline std::pair<Complex, Complex> rayleigh_terms(const EntangledState& state,
                                                  const SystemState& f, Readout which) {
    const PointerFamily& family = family_of(state);
    const CollapseWeights w = collapse_weights(state, f);
    const std::size_t n = w.z.size();

    std::vector<PointerState> applied;
    applied.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
        applied.push_back(
            apply_readout(family, which, *state.pointer(w.branch[k])));
    }

    Complex num{0.0, 0.0};
    Complex den{0.0, 0.0};
    for (std::size_t m = 0; m < n; ++m) {
        const PointerState& xi_m = *state.pointer(w.branch[m]);
        for (std::size_t k = 0; k < n; ++k) {
            const Complex weight = w.z[k] * std::conj(w.z[m]);
            num += weight * state_overlap(xi_m, applied[k]);
            den += weight * state_overlap(xi_m, *state.pointer(w.branch[k]));
        }
    }
    detail::require_finite(num, "conditional readout numerator");
    detail::require_finite(den, "conditional readout denominator");
    return {num, den};
}

inline double real_probability(const Complex& den) {
    if (std::abs(den.imag()) > 1e-10 * std::max(1.0, std::abs(den.real()))) {
        throw NumericalContractViolation("conditional readout: probability grew an imaginary part");
    }
    const double prob = den.real();
    if (prob <= kZeroPostSelectionThreshold) {
        throw ZeroPostSelection("conditional readout: post-selection probability is zero");
    }
    if (prob > 1.0 + 1e-10) {
        throw NumericalContractViolation("conditional readout: probability exceeds one");
    }
    return prob;
}

inline double real_conditional_value(const Complex& num, double prob) {
    const Complex v = num / prob;
    if (std::abs(v.imag()) > 1e-9 * std::max(1.0, std::abs(v))) {
        throw NumericalContractViolation(
            "conditional readout: real observable grew an imaginary part");
    }
    return v.real();
}

}  // namespace detail

/// Exact post-selected pointer expectation value
///   <O>_f = <Psi| (|f><f| (x) O) |Psi> / <Psi| (|f><f| (x) 1) |Psi>,
/// evaluated through the branch double sum over the pointer overlap and
/// readout matrices. Real by construction; throws ZeroPostSelection when
/// the post-selection never succeeds.
inline double conditional_expectation(const EntangledState& state, const SystemState& f,
                                      Readout which) {
    const auto [num, den] = detail::rayleigh_terms(state, f, which);
    const double prob = detail::real_probability(den);
    return detail::real_conditional_value(num, prob);
}

/// Same quantity with no combinatorics: build the explicit joint state,
/// project the system onto |f>, apply the readout operator directly to
/// the collapsed pointer wavefunction, and take the Rayleigh quotient.
/// Shares only the primitive grid operations with
/// `conditional_expectation`, which is what makes the agreement of the
/// two routes a meaningful check.
inline double brute_force_oracle(const EntangledState& state, const SystemState& f,
                                 Readout which) {
    const PointerFamily& family = detail::family_of(state);
    const detail::CollapseWeights w = detail::collapse_weights(state, f);

    // |Psi> = sum_n |a_n> (x) (c_n |xi_n>), kept as the list of scaled
    // pointer branches of the explicit joint vector.
    std::vector<PointerState> joint;
    joint.reserve(w.z.size());
    for (std::size_t k = 0; k < w.z.size(); ++k) {
        PointerState branch = *state.pointer(w.branch[k]);
        const Complex c = state.coefficient(w.branch[k]);
        if (GridFunction* g = std::get_if<GridFunction>(&branch)) {
            g->scale(c);
        } else {
            for (Complex& a : std::get<DiscreteState>(branch).amps) {
                a *= c;
            }
        }
        joint.push_back(std::move(branch));
    }

    // <f| (x) 1 applied to the joint vector: phi = sum_n conj(f_n) c_n xi_n.
    std::optional<PointerState> phi;
    for (std::size_t k = 0; k < joint.size(); ++k) {
        const Complex fn = std::conj(f[w.branch[k]]);
        if (!phi.has_value()) {
            phi = std::move(joint[k]);
            if (GridFunction* g = std::get_if<GridFunction>(&*phi)) {
                g->scale(fn);
            } else {
                for (Complex& a : std::get<DiscreteState>(*phi).amps) {
                    a *= fn;
                }
            }
            continue;
        }
        if (GridFunction* g = std::get_if<GridFunction>(&*phi)) {
            const GridFunction& add = std::get<GridFunction>(joint[k]);
            for (std::size_t i = 0; i < g->size(); ++i) {
                (*g)[i] += fn * add[i];
            }
        } else {
            DiscreteState& d = std::get<DiscreteState>(*phi);
            const DiscreteState& add = std::get<DiscreteState>(joint[k]);
            if (add.amps.size() != d.amps.size()) {
                throw DimensionMismatch("brute_force_oracle: pointer dimensions differ");
            }
            for (std::size_t i = 0; i < d.amps.size(); ++i) {
                d.amps[i] += fn * add.amps[i];
            }
        }
    }
    if (!phi.has_value()) {
        throw ZeroPostSelection("brute_force_oracle: no populated branch survives projection");
    }

    const double prob = detail::real_probability(state_overlap(*phi, *phi));
    const PointerState applied = apply_readout(family, which, *phi);
    return detail::real_conditional_value(state_overlap(*phi, applied), prob);
}

/// Runs both readouts, combines them into the normalized complex pointer
/// shift (chi + i mu) / eta_eff, and attaches the weak value of the
/// (psi, f, A) triple as the reference this shift approximates. The
/// reference stays empty when <f|psi> is numerically zero, in which case
/// the exact conditional shift is still perfectly well defined.
inline ConditionalReadout full_readout(const EntangledState& state, const SystemState& f,
                                       const MeasuredObservable& A, const SystemState& psi) {
    if (psi.dim() != state.dim() || A.dim() != state.dim()) {
        throw DimensionMismatch("full_readout: dimension mismatch");
    }
    if (!state.eta().has_value()) {
        throw UnsupportedFamily("full_readout: state has no coupling strength attached");
    }
    const PointerFamily& family = detail::family_of(state);

    const auto [chi_num, chi_den] = detail::rayleigh_terms(state, f, Readout::Canonical);
    const auto [mu_num, mu_den] = detail::rayleigh_terms(state, f, Readout::Conjugate);
    (void)mu_den;  // identical to chi_den by construction

    ConditionalReadout r;
    r.prob = detail::real_probability(chi_den);
    r.chi_val = detail::real_conditional_value(chi_num, r.prob);
    r.mu_val = detail::real_conditional_value(mu_num, r.prob);

    r.eta_eff = family.eta_eff(*state.eta());
    if (std::abs(r.eta_eff) <= kZeroPostSelectionThreshold) {
        throw NumericalContractViolation(
            "full_readout: effective coupling is zero, normalized shift undefined");
    }
    r.complex_shift = Complex(r.chi_val, r.mu_val) / r.eta_eff;

    const Complex fpsi = inner(f, psi);
    if (std::abs(fpsi) > kZeroPostSelectionThreshold) {
        r.reference_weak_value = weak_value(psi, f, A);
    }
    return r;
}

}  // namespace weakval
