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

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

#include "weakval/common.hpp"
#include "weakval/errors.hpp"

namespace weakval {

/// Uniform one-dimensional grid. The node count must be odd (composite
/// Simpson quadrature needs an even number of panels) and at least 257.
struct Grid {
    double x_min;
    double x_max;
    std::size_t n_points;

    Grid(double x_min_arg, double x_max_arg, std::size_t n_points_arg)
        : x_min(x_min_arg), x_max(x_max_arg), n_points(n_points_arg) {
        if (!std::isfinite(x_min) || !std::isfinite(x_max) || !(x_max > x_min)) {
            throw std::invalid_argument("Grid: domain must be a finite, nonempty interval");
        }
        if (n_points < 256 || n_points % 2 == 0) {
            throw std::invalid_argument("Grid: node count must be odd and at least 257");
        }
    }

    double spacing() const { return (x_max - x_min) / static_cast<double>(n_points - 1); }
    double node(std::size_t i) const { return x_min + spacing() * static_cast<double>(i); }

    friend bool operator==(const Grid&, const Grid&) = default;
};

/// Complex-valued function sampled on a `Grid`.
class GridFunction {
  public:
    GridFunction(Grid grid, std::vector<Complex> values)
        : grid_(grid), values_(std::move(values)) {
        if (values_.size() != grid_.n_points) {
            throw DimensionMismatch("GridFunction: sample count does not match the grid");
        }
    }

    /// Samples `f(x)` at every node.
    template <typename F>
    static GridFunction sample(const Grid& grid, F&& f) {
        std::vector<Complex> v(grid.n_points);
        for (std::size_t i = 0; i < grid.n_points; ++i) {
            v[i] = Complex(f(grid.node(i)));
        }
        return GridFunction(grid, std::move(v));
    }

    const Grid& grid() const { return grid_; }
    const std::vector<Complex>& values() const { return values_; }
    Complex& operator[](std::size_t i) { return values_[i]; }
    const Complex& operator[](std::size_t i) const { return values_[i]; }
    std::size_t size() const { return values_.size(); }

    GridFunction& scale(Complex s) {
        for (Complex& v : values_) {
            v *= s;
        }
        return *this;
    }

    double max_abs() const {
        double m = 0.0;
        for (const Complex& v : values_) {
            m = std::max(m, std::abs(v));
        }
        return m;
    }

    /// True when the samples at both domain edges are below `tol` times
    /// the peak magnitude — i.e. the domain contains the function.
    bool decays_at_edges(double tol = kEdgeDecayTolerance) const {
        const double peak = max_abs();
        const double edge = std::max(std::abs(values_.front()), std::abs(values_.back()));
        return edge <= tol * peak;
    }

  private:
    Grid grid_;
    std::vector<Complex> values_;
};

/// Composite Simpson integral of `f` over its grid.
inline Complex integrate(const GridFunction& f) {
    const std::vector<Complex>& v = f.values();
    const std::size_t n = v.size();
    Complex odd{0.0, 0.0};
    Complex even{0.0, 0.0};
    for (std::size_t i = 1; i + 1 < n; i += 2) {
        odd += v[i];
    }
    for (std::size_t i = 2; i + 1 < n; i += 2) {
        even += v[i];
    }
    return (f.grid().spacing() / 3.0) * (v.front() + v.back() + 4.0 * odd + 2.0 * even);
}

/// L2 inner product <f|g> = integral of conj(f) * g, via composite
/// Simpson weights. Both functions must share the same grid.
inline Complex overlap(const GridFunction& f, const GridFunction& g) {
    if (!(f.grid() == g.grid())) {
        throw DimensionMismatch("overlap: functions live on different grids");
    }
    const std::vector<Complex>& a = f.values();
    const std::vector<Complex>& b = g.values();
    const std::size_t n = a.size();
    Complex odd{0.0, 0.0};
    Complex even{0.0, 0.0};
    for (std::size_t i = 1; i + 1 < n; i += 2) {
        odd += std::conj(a[i]) * b[i];
    }
    for (std::size_t i = 2; i + 1 < n; i += 2) {
        even += std::conj(a[i]) * b[i];
    }
    const Complex ends = std::conj(a.front()) * b.front() + std::conj(a.back()) * b.back();
    return (f.grid().spacing() / 3.0) * (ends + 4.0 * odd + 2.0 * even);
}

/// Position-type operator: (x f)(x_i) = x_i f(x_i).
inline GridFunction apply_multiplication(const GridFunction& f) {
    std::vector<Complex> v(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
        v[i] = f.grid().node(i) * f[i];
    }
    return GridFunction(f.grid(), std::move(v));
}

/// Momentum-type operator -i d/dx (hbar = 1), using the fourth-order
/// central five-point stencil in the interior and one-sided five-point
/// stencils of the same order at the two nodes next to each edge.
inline GridFunction apply_derivative(const GridFunction& f) {
    const std::vector<Complex>& v = f.values();
    const std::size_t n = v.size();
    const double w = 1.0 / (12.0 * f.grid().spacing());
    std::vector<Complex> d(n);

    d[0] = w * (-25.0 * v[0] + 48.0 * v[1] - 36.0 * v[2] + 16.0 * v[3] - 3.0 * v[4]);
    d[1] = w * (-3.0 * v[0] - 10.0 * v[1] + 18.0 * v[2] - 6.0 * v[3] + v[4]);
    for (std::size_t i = 2; i + 2 < n; ++i) {
        d[i] = w * (v[i - 2] - 8.0 * v[i - 1] + 8.0 * v[i + 1] - v[i + 2]);
    }
    d[n - 2] = w * (3.0 * v[n - 1] + 10.0 * v[n - 2] - 18.0 * v[n - 3] + 6.0 * v[n - 4] -
                    v[n - 5]);
    d[n - 1] = w * (25.0 * v[n - 1] - 48.0 * v[n - 2] + 36.0 * v[n - 3] - 16.0 * v[n - 4] +
                    3.0 * v[n - 5]);

    const Complex minus_i{0.0, -1.0};
    for (Complex& y : d) {
        y *= minus_i;
    }
    return GridFunction(f.grid(), std::move(d));
}

}  // namespace weakval
