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
#include <complex>
#include <cstddef>
#include <vector>

#include "weakval/errors.hpp"

namespace weakval {

using Complex = std::complex<double>;

/// Amplitudes (and probabilities) below this threshold count as a
/// vanishing post-selection.
inline constexpr double kZeroPostSelectionThreshold = 1e-12;

/// Sampled wavefunctions must fall below this fraction of their peak at
/// the first and last grid node.
inline constexpr double kEdgeDecayTolerance = 1e-8;

/// Gram and readout matrices assembled by quadrature must be Hermitian
/// to within this tolerance.
inline constexpr double kHermiticityTolerance = 1e-10;

constexpr double kPi = 3.14159265358979323846;

/// Dense row-major complex matrix; just enough linear algebra for the
/// small (dim x dim) pointer-overlap matrices this library works with.
class ComplexMatrix {
  public:
    ComplexMatrix() = default;

    ComplexMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), a_(rows * cols, Complex{0.0, 0.0}) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Complex& at(std::size_t r, std::size_t c) { return a_[r * cols_ + c]; }
    const Complex& at(std::size_t r, std::size_t c) const { return a_[r * cols_ + c]; }

    /// Largest deviation from conjugate symmetry, max |M(r,c) - conj(M(c,r))|.
    double hermiticity_defect() const {
        double worst = 0.0;
        for (std::size_t r = 0; r < rows_; ++r) {
            for (std::size_t c = r; c < cols_; ++c) {
                worst = std::max(worst, std::abs(at(r, c) - std::conj(at(c, r))));
            }
        }
        return worst;
    }

  private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Complex> a_;
};

namespace detail {

inline void require_finite(const Complex& v, const char* what) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
        throw NumericalContractViolation(std::string(what) + ": non-finite value");
    }
}

}  // namespace detail

}  // namespace weakval
