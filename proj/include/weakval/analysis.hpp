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
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "weakval/common.hpp"
#include "weakval/entangle.hpp"
#include "weakval/errors.hpp"
#include "weakval/hilbert.hpp"
#include "weakval/pointer.hpp"
#include "weakval/readout.hpp"

namespace weakval {

/// One row of a distinguishability sweep: the overlap D_10 between the
/// first two eigenvalue branches at a given coupling strength.
struct DistinguishabilityRow {
    std::string family;
    double eta = 0.0;
    Complex d10{0.0, 0.0};
};

/// A located revival of the branch overlap: a local maximum of |D_10|.
/// `eta_bar` is the signed distance from the maximum to the nearest zero
/// crossing of Re D_10 (the local expansion strength of the echo);
/// `flipped` records whether conditional shifts there track the
/// sign-flipped post-selection.
struct EchoPoint {
    double eta_star = 0.0;
    Complex d_value{0.0, 0.0};
    double eta_bar = 0.0;
    bool flipped = false;
};

/// Which one-parameter family of initial states a shift sweep walks:
/// psi(theta) = cos(theta)|0> + sin(theta)|1>, or
/// psi(phi) = (|0> + e^{i phi}|1>)/sqrt(2).
enum class SweepKind { PolarAngle, RelativePhase };

/// One row of a pointer-shift sweep. Readout fields are empty when the
/// post-selection never succeeds at that parameter; the reference is
/// empty when its own overlap is singular. `status` says which.
struct ShiftRow {
    double param = 0.0;
    std::optional<double> prob;
    std::optional<double> chi_val;
    std::optional<double> mu_val;
    std::optional<double> norm_chi;
    std::optional<double> norm_mu;
    std::optional<Complex> reference;
    std::string status = "ok";
};

/// One row of a weak-limit convergence run: the distance between the
/// normalized complex pointer shift and the weak value at one coupling.
struct AavRow {
    double eta = 0.0;
    double abs_error = 0.0;
    Complex shift{0.0, 0.0};
};

/// D_10(eta) = <xi_1|xi_0> for the first two eigenvalue branches, using
/// the same automatically sized grid as the full matrix assembly.
inline Complex distinguishability(const PointerFamily& family, const MeasuredObservable& A,
                                  double eta, const GridSpec& spec = {}) {
    if (family.is_continuous()) {
        const Grid grid = default_grid(family, eta, A.max_abs_eigenvalue(), spec);
        const PointerState x0 = make_pointer_state(family, eta, A[0], grid);
        const PointerState x1 = make_pointer_state(family, eta, A[1], grid);
        return state_overlap(x1, x0);
    }
    const PointerState x0 = make_pointer_state(family, eta, A[0]);
    const PointerState x1 = make_pointer_state(family, eta, A[1]);
    return state_overlap(x1, x0);
}

inline std::vector<DistinguishabilityRow> distinguishability_sweep(
    const PointerFamily& family, const MeasuredObservable& A, const std::vector<double>& etas,
    const GridSpec& spec = {}) {
    std::vector<DistinguishabilityRow> rows;
    rows.reserve(etas.size());
    for (double eta : etas) {
        rows.push_back({std::string(family.name()), eta, distinguishability(family, A, eta, spec)});
    }
    return rows;
}

/// Weak value of the (possibly) flipped post-selection: with flipped set,
/// |f> is replaced by sigma_z |f> (two-level systems only), i.e.
/// f_n -> (-1)^n f_n.
inline Complex echo_weak_value(const SystemState& psi, const SystemState& f,
                               const MeasuredObservable& A, bool flipped) {
    if (!flipped) {
        return weak_value(psi, f, A);
    }
    if (f.dim() != 2) {
        throw DimensionMismatch(
            "echo_weak_value: flipped post-selection is defined for two-level systems only");
    }
    std::vector<Complex> fbar = f.amplitudes();
    fbar[1] = -fbar[1];
    return weak_value(psi, SystemState(std::move(fbar)), A);
}

struct EchoScanOptions {
    std::size_t scan_points = 601;      // uniform pre-scan resolution
    double threshold = 0.5;             // report maxima with |D| >= this
    GridSpec grid;
};

namespace detail {

/// Golden-section maximization of g on [a, b] to the given width.
template <typename G>
double golden_max(G&& g, double a, double b, double tol) {
    const double invphi = 0.6180339887498949;
    double c = b - invphi * (b - a);
    double d = a + invphi * (b - a);
    double gc = g(c);
    double gd = g(d);
    while (b - a > tol) {
        if (gc > gd) {
            b = d;
            d = c;
            gd = gc;
            c = b - invphi * (b - a);
            gc = g(c);
        } else {
            a = c;
            c = d;
            gc = gd;
            d = a + invphi * (b - a);
            gd = g(d);
        }
    }
    return 0.5 * (a + b);
}

/// Bisection of a sign change of g on [a, b] (g(a) and g(b) of opposite
/// sign) down to an interval of width `tol`.
template <typename G>
double bisect_zero(G&& g, double a, double b, double tol) {
    double ga = g(a);
    for (int it = 0; it < 200 && (b - a) > tol; ++it) {
        const double m = 0.5 * (a + b);
        const double gm = g(m);
        if ((ga < 0.0) == (gm < 0.0)) {
            a = m;
            ga = gm;
        } else {
            b = m;
        }
    }
    return 0.5 * (a + b);
}

/// Nearest zero crossing of `g` to `center`, searched outward in steps of
/// `step` up to distance `span` on both sides. Ties (equidistant left and
/// right crossings) resolve to the lower one; the tie window is wide
/// enough to absorb the ~sqrt(eps) positional noise of a smooth-maximum
/// `center` located by value comparisons. Empty when no crossing exists
/// in the window.
template <typename G>
std::optional<double> nearest_zero_crossing(G&& g, double center, double step, double span) {
    std::optional<double> left;
    std::optional<double> right;
    double prev = g(center);
    for (double x = center + step; x <= center + span + 0.5 * step; x += step) {
        const double cur = g(x);
        if ((prev < 0.0) != (cur < 0.0)) {
            right = bisect_zero(g, x - step, x, 1e-13);
            break;
        }
        prev = cur;
    }
    prev = g(center);
    for (double x = center - step; x >= center - span - 0.5 * step; x -= step) {
        const double cur = g(x);
        if ((prev < 0.0) != (cur < 0.0)) {
            left = bisect_zero(g, x, x + step, 1e-13);
            break;
        }
        prev = cur;
    }
    if (left.has_value() && right.has_value()) {
        const double dl = center - *left;
        const double dr = *right - center;
        if (std::abs(dl - dr) <= 1e-6) {
            return left;  // tie: lower crossing
        }
        return dl < dr ? left : right;
    }
    return left.has_value() ? left : right;
}

}  // namespace detail

/// Scans |D_10(eta)| on [lo, hi] for interior local maxima (grid pre-scan
/// plus golden-section refinement), keeping those with |D| at or above
/// the threshold. The scan range must stay clear of the zero-coupling
/// neighborhood where |D| -> 1 trivially.
inline std::vector<EchoPoint> echo_scan(const PointerFamily& family, const MeasuredObservable& A,
                                        double lo, double hi, double exclude_origin_radius = 0.05,
                                        const EchoScanOptions& opts = {}) {
    if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi)) {
        throw std::invalid_argument("echo_scan: need a finite range with lo < hi");
    }
    if (!(exclude_origin_radius >= 0.0) || lo < exclude_origin_radius || !(lo > 0.0)) {
        throw std::invalid_argument(
            "echo_scan: scan range must exclude a neighborhood of zero coupling");
    }
    if (opts.scan_points < 16) {
        throw std::invalid_argument("echo_scan: need at least 16 scan points");
    }

    auto d10 = [&](double eta) { return distinguishability(family, A, eta, opts.grid); };
    auto abs_d10 = [&](double eta) { return std::abs(d10(eta)); };
    auto re_d10 = [&](double eta) { return d10(eta).real(); };

    const std::size_t n = opts.scan_points;
    const double step = (hi - lo) / static_cast<double>(n - 1);
    std::vector<double> mag(n);
    for (std::size_t i = 0; i < n; ++i) {
        mag[i] = abs_d10(lo + step * static_cast<double>(i));
    }

    std::vector<EchoPoint> points;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const bool is_max = mag[i] >= mag[i - 1] && mag[i] >= mag[i + 1] &&
                            (mag[i] > mag[i - 1] || mag[i] > mag[i + 1]);
        if (!is_max) {
            continue;
        }
        const double a = lo + step * static_cast<double>(i - 1);
        const double b = lo + step * static_cast<double>(i + 1);
        const double eta_star = detail::golden_max(abs_d10, a, b, 1e-10);
        const Complex d_star = d10(eta_star);
        if (std::abs(d_star) < opts.threshold) {
            continue;
        }
        if (!points.empty() && std::abs(points.back().eta_star - eta_star) < 1e-8) {
            continue;
        }
        EchoPoint p;
        p.eta_star = eta_star;
        p.d_value = d_star;
        p.flipped = d_star.real() < 0.0;
        const double span = std::max(hi - lo, std::abs(eta_star));
        const std::optional<double> crossing =
            detail::nearest_zero_crossing(re_d10, eta_star, step * 0.25, span);
        // With no crossing in reach (monotone families) the echo sits on
        // the zero-coupling revival itself and eta is its own distance.
        p.eta_bar = crossing.has_value() ? eta_star - *crossing : eta_star;
        points.push_back(p);
    }
    return points;
}

struct ShiftSweepOptions {
    /// |D_10| at or above this marks the weak / echo regime, whose
    /// reference is a (possibly flipped) weak value; below it the
    /// reference is the unconditioned expectation value.
    double reference_threshold = 0.5;
    /// Replace the family's own reduced strength in the shift
    /// normalization (the qubit divisor stays twice the reduced strength).
    std::optional<double> eta_bar_override;
    GridSpec grid;
};

/// Pointer shifts across a one-parameter family of initial states at
/// fixed coupling, with the regime-matched reference attached to every
/// row. Rows never vanish: failed post-selections and singular references
/// are carried in `status`.
inline std::vector<ShiftRow> shift_sweep(const PointerFamily& family, const MeasuredObservable& A,
                                         double eta, SweepKind kind,
                                         const std::vector<double>& params, const SystemState& f,
                                         const ShiftSweepOptions& opts = {}) {
    if (A.dim() != 2 || f.dim() != 2) {
        throw DimensionMismatch("shift_sweep: the sweep parametrizations are two-level");
    }
    double eta_eff_used;
    if (opts.eta_bar_override.has_value()) {
        const double ov = *opts.eta_bar_override;
        eta_eff_used = family.is_continuous() ? ov : 2.0 * ov;
    } else {
        eta_eff_used = family.eta_eff(eta);
    }
    if (!(std::abs(eta_eff_used) > kZeroPostSelectionThreshold)) {
        throw std::invalid_argument("shift_sweep: effective strength must be nonzero");
    }

    const Complex d10 = distinguishability(family, A, eta, opts.grid);
    const bool weak_like = std::abs(d10) >= opts.reference_threshold;
    const bool flipped = weak_like && d10.real() < 0.0;

    std::vector<ShiftRow> rows;
    rows.reserve(params.size());
    for (double p : params) {
        ShiftRow row;
        row.param = p;
        const SystemState psi =
            kind == SweepKind::PolarAngle
                ? SystemState({Complex(std::cos(p), 0.0), Complex(std::sin(p), 0.0)})
                : SystemState({Complex(1.0 / std::sqrt(2.0), 0.0),
                               Complex(std::cos(p) / std::sqrt(2.0), std::sin(p) / std::sqrt(2.0))});
        try {
            const EntangledState state = von_neumann_entangle(psi, A, family, eta, opts.grid);
            const ConditionalReadout r = full_readout(state, f, A, psi);
            row.prob = r.prob;
            row.chi_val = r.chi_val;
            row.mu_val = r.mu_val;
            row.norm_chi = r.chi_val / eta_eff_used;
            row.norm_mu = r.mu_val / eta_eff_used;
            try {
                row.reference = weak_like
                                    ? echo_weak_value(psi, f, A, flipped)
                                    : Complex(expectation(psi, A), 0.0);
            } catch (const ZeroPostSelection&) {
                row.status = "singular_reference";
            }
        } catch (const ZeroPostSelection&) {
            row.status = "zero_post_selection";
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

/// Distance between the normalized complex pointer shift and the weak
/// value across a sequence of couplings; quantifies the weak-limit
/// statement and yields the empirical convergence order.
inline std::vector<AavRow> aav_convergence(const PointerFamily& family,
                                           const MeasuredObservable& A, const SystemState& psi,
                                           const SystemState& f, const std::vector<double>& etas,
                                           const GridSpec& spec = {}) {
    const Complex wv = weak_value(psi, f, A);
    std::vector<AavRow> rows;
    rows.reserve(etas.size());
    for (double eta : etas) {
        const EntangledState state = von_neumann_entangle(psi, A, family, eta, spec);
        const ConditionalReadout r = full_readout(state, f, A, psi);
        rows.push_back({eta, std::abs(r.complex_shift - wv), r.complex_shift});
    }
    return rows;
}

/// Least-squares slope of ln(error) against ln(eta); the empirical order
/// of the weak-limit residual.
inline double measured_order(const std::vector<AavRow>& rows) {
    std::vector<std::pair<double, double>> pts;
    for (const AavRow& r : rows) {
        if (r.eta > 0.0 && r.abs_error > 0.0) {
            pts.emplace_back(std::log(r.eta), std::log(r.abs_error));
        }
    }
    if (pts.size() < 2) {
        throw std::invalid_argument("measured_order: need at least two usable rows");
    }
    double mx = 0.0;
    double my = 0.0;
    for (const auto& [x, y] : pts) {
        mx += x;
        my += y;
    }
    mx /= static_cast<double>(pts.size());
    my /= static_cast<double>(pts.size());
    double sxx = 0.0;
    double sxy = 0.0;
    for (const auto& [x, y] : pts) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
    }
    if (!(sxx > 0.0)) {
        throw std::invalid_argument("measured_order: couplings must be distinct");
    }
    return sxy / sxx;
}

}  // namespace weakval
