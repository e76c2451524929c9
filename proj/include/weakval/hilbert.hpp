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
#include <utility>
#include <vector>

#include "weakval/common.hpp"
#include "weakval/errors.hpp"

namespace weakval {

/// Pure state of the measured system, expressed in the eigenbasis of the
/// observable that will be coupled to the pointer. Amplitudes must arrive
/// normalized; use `normalized` to rescale raw data first.
class SystemState {
  public:
    explicit SystemState(std::vector<Complex> amplitudes) : amps_(std::move(amplitudes)) {
        if (amps_.size() < 2) {
            throw DimensionMismatch("SystemState: dimension must be at least 2");
        }
        double norm2 = 0.0;
        for (const Complex& a : amps_) {
            detail::require_finite(a, "SystemState");
            norm2 += std::norm(a);
        }
        if (std::abs(norm2 - 1.0) > 1e-12) {
            throw UnnormalizedInput("SystemState: amplitudes are not normalized to one");
        }
    }

    /// Rescales arbitrary (nonzero) amplitudes to unit norm.
    static SystemState normalized(std::vector<Complex> amplitudes) {
        double norm2 = 0.0;
        for (const Complex& a : amplitudes) {
            norm2 += std::norm(a);
        }
        if (!(norm2 > 0.0) || !std::isfinite(norm2)) {
            throw UnnormalizedInput("SystemState: cannot normalize a zero or non-finite vector");
        }
        const double inv = 1.0 / std::sqrt(norm2);
        for (Complex& a : amplitudes) {
            a *= inv;
        }
        return SystemState(std::move(amplitudes));
    }

    std::size_t dim() const { return amps_.size(); }
    const std::vector<Complex>& amplitudes() const { return amps_; }
    const Complex& operator[](std::size_t n) const { return amps_[n]; }

  private:
    std::vector<Complex> amps_;
};

/// Observable that gets coupled to the pointer, diagonal in the chosen
/// basis: A = sum_n alpha_n |a_n><a_n|. Only the (real, finite) spectrum
/// is stored.
class MeasuredObservable {
  public:
    explicit MeasuredObservable(std::vector<double> eigenvalues) : eig_(std::move(eigenvalues)) {
        if (eig_.size() < 2) {
            throw DimensionMismatch("MeasuredObservable: dimension must be at least 2");
        }
        for (double a : eig_) {
            if (!std::isfinite(a)) {
                throw NumericalContractViolation("MeasuredObservable: non-finite eigenvalue");
            }
        }
    }

    std::size_t dim() const { return eig_.size(); }
    const std::vector<double>& eigenvalues() const { return eig_; }
    double operator[](std::size_t n) const { return eig_[n]; }

    double max_abs_eigenvalue() const {
        double m = 0.0;
        for (double a : eig_) {
            m = std::max(m, std::abs(a));
        }
        return m;
    }

  private:
    std::vector<double> eig_;
};

/// Hermitian inner product <u|v> with the convention of conjugating the
/// first argument.
inline Complex inner(const SystemState& u, const SystemState& v) {
    if (u.dim() != v.dim()) {
        throw DimensionMismatch("inner: states have different dimension");
    }
    Complex s{0.0, 0.0};
    for (std::size_t n = 0; n < u.dim(); ++n) {
        s += std::conj(u[n]) * v[n];
    }
    return s;
}

/// Unconditioned expectation value <psi|A|psi>; real by construction.
inline double expectation(const SystemState& psi, const MeasuredObservable& A) {
    if (psi.dim() != A.dim()) {
        throw DimensionMismatch("expectation: state and observable dimension differ");
    }
    double s = 0.0;
    for (std::size_t n = 0; n < psi.dim(); ++n) {
        s += A[n] * std::norm(psi[n]);
    }
    return s;
}

/// Weak value A_w = <f|A|psi> / <f|psi>. Complex in general, and
/// unbounded as the post-selection overlap shrinks; throws
/// ZeroPostSelection when that overlap is numerically zero.
inline Complex weak_value(const SystemState& psi, const SystemState& f,
                          const MeasuredObservable& A) {
    if (psi.dim() != f.dim() || psi.dim() != A.dim()) {
        throw DimensionMismatch("weak_value: dimension mismatch");
    }
    Complex num{0.0, 0.0};
    Complex den{0.0, 0.0};
    for (std::size_t n = 0; n < psi.dim(); ++n) {
        const Complex w = std::conj(f[n]) * psi[n];
        num += A[n] * w;
        den += w;
    }
    if (std::abs(den) <= kZeroPostSelectionThreshold) {
        throw ZeroPostSelection("weak_value: post-selection is orthogonal to the state");
    }
    return num / den;
}

}  // namespace weakval
