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

#include <cmath>
#include <limits>
#include <vector>

#include "weakval/errors.hpp"
#include "weakval/hilbert.hpp"

using weakval::Complex;
using weakval::MeasuredObservable;
using weakval::SystemState;

namespace {

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

SystemState plus_state() {
    return SystemState({Complex(kInvSqrt2, 0.0), Complex(kInvSqrt2, 0.0)});
}

SystemState polar_state(double theta) {
    return SystemState({Complex(std::cos(theta), 0.0), Complex(std::sin(theta), 0.0)});
}

}  // namespace

TEST_CASE("system states validate their amplitudes", "[hilbert]") {
    REQUIRE_THROWS_AS(SystemState({Complex(1.0, 0.0)}), weakval::DimensionMismatch);
    REQUIRE_THROWS_AS(SystemState({Complex(1.0, 0.0), Complex(1.0, 0.0)}),
                      weakval::UnnormalizedInput);
    REQUIRE_THROWS_AS(
        SystemState({Complex(std::numeric_limits<double>::quiet_NaN(), 0.0), Complex(0.0, 0.0)}),
        weakval::NumericalContractViolation);
    REQUIRE_NOTHROW(SystemState({Complex(0.0, 0.0), Complex(0.0, 1.0)}));
}

TEST_CASE("normalized() rescales and rejects degenerate vectors", "[hilbert]") {
    const SystemState s = SystemState::normalized({Complex(3.0, 0.0), Complex(4.0, 0.0)});
    REQUIRE(std::abs(s[0] - Complex(0.6, 0.0)) < 1e-15);
    REQUIRE(std::abs(s[1] - Complex(0.8, 0.0)) < 1e-15);

    REQUIRE_THROWS_AS(SystemState::normalized({Complex(0.0, 0.0), Complex(0.0, 0.0)}),
                      weakval::UnnormalizedInput);
    REQUIRE_THROWS_AS(SystemState::normalized({Complex(std::numeric_limits<double>::infinity(), 0.0),
                                               Complex(1.0, 0.0)}),
                      weakval::UnnormalizedInput);
}

TEST_CASE("observables validate their spectrum", "[hilbert]") {
    REQUIRE_THROWS_AS(MeasuredObservable({1.0}), weakval::DimensionMismatch);
    REQUIRE_THROWS_AS(MeasuredObservable({0.0, std::numeric_limits<double>::quiet_NaN()}),
                      weakval::NumericalContractViolation);
    const MeasuredObservable A({0.0, 1.0, -3.0});
    REQUIRE(A.dim() == 3);
    REQUIRE(A.max_abs_eigenvalue() == 3.0);
}

TEST_CASE("inner product conjugates the first argument", "[hilbert]") {
    const SystemState u =
        SystemState::normalized({Complex(0.3, 0.4), Complex(-0.2, 0.7), Complex(0.1, -0.1)});
    const SystemState v =
        SystemState::normalized({Complex(-0.5, 0.1), Complex(0.6, 0.2), Complex(0.0, 0.4)});

    const Complex uv = weakval::inner(u, v);
    const Complex vu = weakval::inner(v, u);
    REQUIRE(std::abs(uv - std::conj(vu)) < 1e-15);
    REQUIRE(std::abs(weakval::inner(u, u) - Complex(1.0, 0.0)) < 1e-14);

    const SystemState w = plus_state();
    REQUIRE_THROWS_AS(weakval::inner(u, w), weakval::DimensionMismatch);
}

TEST_CASE("projections onto an orthonormal basis resolve the identity", "[hilbert]") {
    const SystemState e0({Complex(1.0, 0.0), Complex(0.0, 0.0)});
    const SystemState e1({Complex(0.0, 0.0), Complex(1.0, 0.0)});
    const SystemState psi = SystemState::normalized({Complex(0.3, -0.6), Complex(0.5, 0.2)});

    const double total =
        std::norm(weakval::inner(e0, psi)) + std::norm(weakval::inner(e1, psi));
    REQUIRE(std::abs(total - 1.0) < 1e-14);
}

TEST_CASE("expectation values respect the spectral bounds", "[hilbert]") {
    const MeasuredObservable A({-2.0, 3.0});
    const SystemState psi = SystemState::normalized({Complex(0.8, 0.1), Complex(0.2, -0.5)});

    const double val = weakval::expectation(psi, A);
    REQUIRE(val >= -2.0);
    REQUIRE(val <= 3.0);

    const SystemState e1({Complex(0.0, 0.0), Complex(1.0, 0.0)});
    REQUIRE(weakval::expectation(e1, A) == 3.0);

    const MeasuredObservable B({0.0, 1.0, 2.0});
    REQUIRE_THROWS_AS(weakval::expectation(psi, B), weakval::DimensionMismatch);
}

TEST_CASE("weak values reproduce hand-computed cases", "[hilbert]") {
    const MeasuredObservable A({0.0, 1.0});
    const SystemState psi = plus_state();

    SECTION("the classic amplified post-selection gives -1/sqrt(2)") {
        const SystemState f = polar_state(-weakval::kPi / 8.0);
        const Complex wv = weakval::weak_value(psi, f, A);
        REQUIRE(std::abs(wv - Complex(-0.7071067811865476, 0.0)) < 1e-14);
    }

    SECTION("post-selecting on the state itself returns the expectation") {
        const Complex wv = weakval::weak_value(psi, psi, A);
        REQUIRE(std::abs(wv - Complex(0.5, 0.0)) < 1e-15);
    }

    SECTION("post-selecting on an eigenstate returns its eigenvalue") {
        const SystemState e1({Complex(0.0, 0.0), Complex(1.0, 0.0)});
        const Complex wv = weakval::weak_value(psi, e1, A);
        REQUIRE(std::abs(wv - Complex(1.0, 0.0)) < 1e-15);
    }

    SECTION("a complex post-selection makes the weak value complex") {
        const SystemState f({Complex(kInvSqrt2, 0.0), Complex(0.0, kInvSqrt2)});
        const Complex wv = weakval::weak_value(psi, f, A);
        REQUIRE(std::abs(wv - Complex(0.5, -0.5)) < 1e-14);
    }
}

TEST_CASE("weak values are invariant under global phases", "[hilbert]") {
    const MeasuredObservable A({0.0, 1.0});
    const SystemState psi = SystemState::normalized({Complex(0.6, 0.1), Complex(0.4, -0.3)});
    const SystemState f = SystemState::normalized({Complex(0.2, 0.5), Complex(-0.7, 0.1)});
    const Complex base = weakval::weak_value(psi, f, A);

    const Complex phase_psi = std::polar(1.0, 1.234);
    const Complex phase_f = std::polar(1.0, -0.777);
    std::vector<Complex> pa = psi.amplitudes();
    std::vector<Complex> fa = f.amplitudes();
    for (Complex& c : pa) {
        c *= phase_psi;
    }
    for (Complex& c : fa) {
        c *= phase_f;
    }
    const Complex rotated = weakval::weak_value(SystemState(pa), SystemState(fa), A);
    REQUIRE(std::abs(rotated - base) < 1e-14);
}

TEST_CASE("orthogonal post-selection is rejected, near-orthogonal amplifies", "[hilbert]") {
    const MeasuredObservable A({0.0, 1.0});
    const SystemState psi = plus_state();
    const SystemState f_orth({Complex(kInvSqrt2, 0.0), Complex(-kInvSqrt2, 0.0)});
    REQUIRE_THROWS_AS(weakval::weak_value(psi, f_orth, A), weakval::ZeroPostSelection);

    // Just off orthogonality the weak value grows without bound.
    const SystemState f_near = polar_state(3.0 * weakval::kPi / 4.0 + 1e-3);
    REQUIRE(std::abs(weakval::weak_value(psi, f_near, A)) > 100.0);

    const SystemState psi3 = SystemState::normalized(
        {Complex(1.0, 0.0), Complex(1.0, 0.0), Complex(1.0, 0.0)});
    REQUIRE_THROWS_AS(weakval::weak_value(psi3, f_orth, A), weakval::DimensionMismatch);
}
