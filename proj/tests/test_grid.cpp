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
#include <stdexcept>
#include <vector>

#include "weakval/errors.hpp"
#include "weakval/grid.hpp"

using weakval::Complex;
using weakval::Grid;
using weakval::GridFunction;
using weakval::kPi;

namespace {

double max_abs_diff(const GridFunction& a, const GridFunction& b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        worst = std::max(worst, std::abs(a[i] - b[i]));
    }
    return worst;
}

}  // namespace

TEST_CASE("grids enforce an odd node count of at least 257", "[grid]") {
    REQUIRE_THROWS_AS(Grid(0.0, 1.0, 255), std::invalid_argument);
    REQUIRE_THROWS_AS(Grid(0.0, 1.0, 256), std::invalid_argument);
    REQUIRE_THROWS_AS(Grid(0.0, 1.0, 512), std::invalid_argument);
    REQUIRE_NOTHROW(Grid(0.0, 1.0, 257));

    REQUIRE_THROWS_AS(Grid(1.0, 1.0, 257), std::invalid_argument);
    REQUIRE_THROWS_AS(Grid(2.0, 1.0, 257), std::invalid_argument);
    REQUIRE_THROWS_AS(Grid(0.0, std::numeric_limits<double>::infinity(), 257),
                      std::invalid_argument);
}

TEST_CASE("grid nodes span the interval uniformly", "[grid]") {
    const Grid g(-1.0, 1.0, 257);
    REQUIRE(g.spacing() == 2.0 / 256.0);
    REQUIRE(g.node(0) == -1.0);
    REQUIRE(std::abs(g.node(256) - 1.0) < 1e-15);
    REQUIRE(g == Grid(-1.0, 1.0, 257));
    REQUIRE(!(g == Grid(-1.0, 1.0, 259)));
}

TEST_CASE("grid functions validate, sample, scale, and report decay", "[grid]") {
    const Grid g(-6.0, 6.0, 257);
    REQUIRE_THROWS_AS(GridFunction(g, std::vector<Complex>(100)), weakval::DimensionMismatch);

    GridFunction f = GridFunction::sample(g, [](double x) { return std::exp(-x * x); });
    REQUIRE(f.size() == 257);
    REQUIRE(std::abs(f.max_abs() - 1.0) < 1e-15);
    REQUIRE(f.decays_at_edges());

    const Grid narrow(-2.0, 2.0, 257);
    const GridFunction cramped =
        GridFunction::sample(narrow, [](double x) { return std::exp(-x * x); });
    REQUIRE(!cramped.decays_at_edges());

    f.scale(Complex(0.0, 2.0));
    REQUIRE(std::abs(f[128] - Complex(0.0, 2.0)) < 1e-15);
}

TEST_CASE("Simpson quadrature integrates cubics exactly", "[grid]") {
    const Grid g(-1.0, 2.0, 257);
    const GridFunction f = GridFunction::sample(
        g, [](double x) { return x * x * x - 2.0 * x * x + x - 1.0; });
    // Antiderivative x^4/4 - 2x^3/3 + x^2/2 - x evaluated over [-1, 2].
    REQUIRE(std::abs(weakval::integrate(f) - Complex(-3.75, 0.0)) < 1e-12);
}

TEST_CASE("Simpson quadrature handles smooth transcendental integrands", "[grid]") {
    const Grid g(0.0, kPi, 257);
    const GridFunction f = GridFunction::sample(g, [](double x) { return std::sin(x); });
    REQUIRE(std::abs(weakval::integrate(f) - Complex(2.0, 0.0)) < 1e-8);

    const Grid gg(-8.0, 8.0, 641);
    const double pref = 1.0 / std::sqrt(2.0 * kPi);
    const GridFunction gauss = GridFunction::sample(
        gg, [pref](double x) { return pref * std::exp(-x * x / 2.0); });
    REQUIRE(std::abs(weakval::integrate(gauss) - Complex(1.0, 0.0)) < 1e-12);

    const Grid gc(0.0, kPi / 2.0, 257);
    const GridFunction osc =
        GridFunction::sample(gc, [](double x) { return Complex(std::cos(x), std::sin(x)); });
    REQUIRE(std::abs(weakval::integrate(osc) - Complex(1.0, 1.0)) < 1e-10);
}

TEST_CASE("Simpson quadrature converges at fourth order", "[grid]") {
    const double exact = std::atan(4.0);
    auto integrand = [](double x) { return 1.0 / (1.0 + x * x); };

    const GridFunction coarse = GridFunction::sample(Grid(0.0, 4.0, 257), integrand);
    const GridFunction fine = GridFunction::sample(Grid(0.0, 4.0, 513), integrand);
    const double err_coarse = std::abs(weakval::integrate(coarse) - Complex(exact, 0.0));
    const double err_fine = std::abs(weakval::integrate(fine) - Complex(exact, 0.0));

    REQUIRE(err_coarse > 0.0);
    REQUIRE(err_fine > 0.0);
    const double ratio = err_coarse / err_fine;
    REQUIRE(ratio > 12.0);
    REQUIRE(ratio < 20.0);
}

TEST_CASE("overlaps conjugate the first argument and demand one grid", "[grid]") {
    const Grid g(-5.0, 5.0, 257);
    const GridFunction f =
        GridFunction::sample(g, [](double x) { return Complex(std::exp(-x * x), 0.3 * x); });
    const GridFunction h = GridFunction::sample(
        g, [](double x) { return Complex(std::cos(x), std::exp(-x * x / 2.0)); });

    REQUIRE(std::abs(weakval::overlap(f, h) - std::conj(weakval::overlap(h, f))) < 1e-12);

    const GridFunction other =
        GridFunction::sample(Grid(-5.0, 5.0, 259), [](double) { return 1.0; });
    REQUIRE_THROWS_AS(weakval::overlap(f, other), weakval::DimensionMismatch);
}

TEST_CASE("the coordinate operator multiplies pointwise", "[grid]") {
    const Grid g(-3.0, 3.0, 257);
    const GridFunction f = GridFunction::sample(g, [](double x) { return std::exp(-x * x); });
    const GridFunction xf = weakval::apply_multiplication(f);
    for (std::size_t i = 0; i < f.size(); i += 31) {
        REQUIRE(std::abs(xf[i] - g.node(i) * f[i]) < 1e-15);
    }
}

TEST_CASE("the derivative operator is spectrally accurate to its order", "[grid]") {
    // -i d/dx sin(x) = -i cos(x); the one-sided edge stencils share the
    // interior's fourth-order accuracy.
    const Grid g(-kPi, kPi, 1025);
    const GridFunction f = GridFunction::sample(g, [](double x) { return std::sin(x); });
    const GridFunction expected =
        GridFunction::sample(g, [](double x) { return Complex(0.0, -std::cos(x)); });
    REQUIRE(max_abs_diff(weakval::apply_derivative(f), expected) < 1e-9);
}

TEST_CASE("the derivative error falls at fourth order under refinement", "[grid]") {
    auto worst_error = [](std::size_t n) {
        const Grid g(-kPi, kPi, n);
        const GridFunction f = GridFunction::sample(g, [](double x) { return std::sin(x); });
        const GridFunction expected =
            GridFunction::sample(g, [](double x) { return Complex(0.0, -std::cos(x)); });
        return max_abs_diff(weakval::apply_derivative(f), expected);
    };
    const double ratio = worst_error(257) / worst_error(513);
    REQUIRE(ratio > 12.0);
    REQUIRE(ratio < 20.0);
}

TEST_CASE("the derivative operator is linear", "[grid]") {
    const Grid g(-4.0, 4.0, 257);
    const GridFunction f = GridFunction::sample(g, [](double x) { return std::exp(-x * x); });
    const GridFunction h = GridFunction::sample(g, [](double x) { return std::sin(2.0 * x); });

    GridFunction combo = GridFunction::sample(g, [](double x) {
        return Complex(2.0, 1.0) * std::exp(-x * x) + Complex(-0.5, 0.25) * std::sin(2.0 * x);
    });
    GridFunction lhs = weakval::apply_derivative(combo);

    GridFunction df = weakval::apply_derivative(f);
    GridFunction dh = weakval::apply_derivative(h);
    df.scale(Complex(2.0, 1.0));
    dh.scale(Complex(-0.5, 0.25));
    for (std::size_t i = 0; i < g.n_points; ++i) {
        REQUIRE(std::abs(lhs[i] - (df[i] + dh[i])) < 1e-12);
    }
}
