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
#include <cstdint>
#include <random>
#include <vector>

#include "weakval/common.hpp"
#include "weakval/hilbert.hpp"

namespace weakval {

/// Seeded random numbers with bit-stable output everywhere: raw
/// mt19937_64 draws mapped to doubles by hand (std::*_distribution is
/// implementation-defined and would break frozen fixtures).
class DeterministicRng {
  public:
    explicit DeterministicRng(std::uint64_t seed) : gen_(seed) {}

    /// Uniform in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    /// Standard normal via Box-Muller.
    double normal() {
        if (have_cached_) {
            have_cached_ = false;
            return cached_;
        }
        double u1 = uniform();
        while (u1 <= 0.0) {
            u1 = uniform();
        }
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        cached_ = r * std::sin(2.0 * kPi * u2);
        have_cached_ = true;
        return r * std::cos(2.0 * kPi * u2);
    }

    Complex complex_normal() { return Complex(normal(), normal()); }

  private:
    std::mt19937_64 gen_;
    bool have_cached_ = false;
    double cached_ = 0.0;
};

/// Haar-like random pure state: normalized vector of complex normals.
inline SystemState random_state(DeterministicRng& rng, std::size_t dim) {
    std::vector<Complex> a(dim);
    for (Complex& c : a) {
        c = rng.complex_normal();
    }
    return SystemState::normalized(std::move(a));
}

}  // namespace weakval
