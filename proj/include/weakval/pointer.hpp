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
#include <stdexcept>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "weakval/common.hpp"
#include "weakval/errors.hpp"
#include "weakval/grid.hpp"
#include "weakval/hilbert.hpp"

namespace weakval {

enum class PointerKind { Gaussian, OpticalPulse, Qubit };

/// Which readout observable to apply to the pointer after post-selection:
/// the canonical coordinate (position / arrival time / bit-flip) or its
/// scaled conjugate (momentum / frequency / quadrature-rotation).
enum class Readout { Canonical, Conjugate };

/// Finite-dimensional pointer state. For the qubit family the amplitudes
/// are stored as (component on |1>, component on |0>).
struct DiscreteState {
    std::vector<Complex> amps;
};

/// A pointer state is either a sampled wavefunction or a discrete
/// amplitude vector.
using PointerState = std::variant<GridFunction, DiscreteState>;

/// Optional overrides for the automatically sized grids used by the
/// continuous pointer families.
struct GridSpec {
    std::optional<double> half_width;  // domain becomes [-half_width, +half_width]
    std::size_t n_points = 4097;
};

/// One of the three pointer models: a Gaussian wavepacket (position
/// readout), an optical pulse with a carrier (arrival-time readout), or
/// a qubit meter. Construct through the named factories; the pulse
/// factory calibrates its conjugate-readout scale once at build time.
class PointerFamily {
  public:
    static PointerFamily gaussian(double sigma) {
        if (!(sigma > 0.0) || !std::isfinite(sigma)) {
            throw std::invalid_argument("PointerFamily: sigma must be positive");
        }
        // 2 sigma^2 scales -i d/dx so that the conjugate shift reads out
        // Im A_w on the same footing as the canonical one reads Re A_w.
        return PointerFamily(PointerKind::Gaussian, sigma, 0.0, 0.0, 2.0 * sigma * sigma);
    }

    static PointerFamily optical_pulse(double sigma, double omega, double cep = 0.0);

    static PointerFamily qubit() { return PointerFamily(PointerKind::Qubit, 0.0, 0.0, 0.0, 1.0); }

    PointerKind kind() const { return kind_; }
    double sigma() const { return sigma_; }
    double omega() const { return omega_; }
    double cep() const { return cep_; }
    bool is_continuous() const { return kind_ != PointerKind::Qubit; }

    std::string_view name() const {
        switch (kind_) {
            case PointerKind::Gaussian:
                return "gaussian";
            case PointerKind::OpticalPulse:
                return "pulse";
            default:
                return "qubit";
        }
    }

    /// Scale applied to -i d/dx to form the conjugate readout (ignored by
    /// the qubit family, whose conjugate readout is the Pauli Y).
    double conjugate_scale() const { return conj_scale_; }

    /// Reduced coupling strength. The qubit meter is periodic, so only the
    /// signed distance to the nearest half-period survives: eta - k*pi with
    /// k the nearest integer. Continuous families return eta unchanged.
    double eta_bar(double eta) const {
        if (kind_ != PointerKind::Qubit) {
            return eta;
        }
        return eta - kPi * std::round(eta / kPi);
    }

    /// Normalization constant for pointer shifts: shifts divided by this
    /// approach the weak value as the coupling weakens. The qubit meter's
    /// trigonometric matrix elements make it 2 * eta_bar; continuous
    /// families use eta itself.
    double eta_eff(double eta) const {
        if (kind_ != PointerKind::Qubit) {
            return eta;
        }
        return 2.0 * eta_bar(eta);
    }

    /// True when the qubit meter sits an odd number of half-periods out,
    /// where conditional shifts track the sign-flipped post-selection.
    bool echo_flipped(double eta) const {
        if (kind_ != PointerKind::Qubit) {
            return false;
        }
        const long long k = std::llround(eta / kPi);
        return (k % 2) != 0;
    }

  private:
    PointerFamily(PointerKind kind, double sigma, double omega, double cep, double conj_scale)
        : kind_(kind), sigma_(sigma), omega_(omega), cep_(cep), conj_scale_(conj_scale) {}

    PointerKind kind_;
    double sigma_;
    double omega_;
    double cep_;
    double conj_scale_;
};

/// Automatically sized symmetric domain for a continuous family: eight
/// envelope widths plus the largest branch displacement, with two more
/// widths of margin so every branch decays below the edge tolerance.
inline Grid default_grid(const PointerFamily& family, double eta, double max_abs_alpha,
                         const GridSpec& spec = {}) {
    if (!family.is_continuous()) {
        throw UnsupportedFamily("default_grid: the qubit family has no grid");
    }
    const double half =
        spec.half_width ? *spec.half_width
                        : 10.0 * family.sigma() + std::abs(eta) * max_abs_alpha;
    return Grid(-half, half, spec.n_points);
}

/// Displaced pointer wavefunction for one eigenvalue branch of a
/// continuous family: the normalized envelope (Gaussian) or
/// envelope-times-carrier (pulse), centered at eta * alpha. Throws
/// DomainTooSmall when the grid cannot contain it.
inline PointerState make_pointer_state(const PointerFamily& family, double eta, double alpha,
                                       const Grid& grid) {
    if (!family.is_continuous()) {
        throw UnsupportedFamily("make_pointer_state: qubit states take no grid");
    }
    const double sigma = family.sigma();
    const double center = eta * alpha;
    const double inv4s2 = 1.0 / (4.0 * sigma * sigma);
    std::vector<Complex> v(grid.n_points);

    if (family.kind() == PointerKind::Gaussian) {
        const double pref = std::pow(2.0 * kPi * sigma * sigma, -0.25);
        for (std::size_t i = 0; i < grid.n_points; ++i) {
            const double d = grid.node(i) - center;
            v[i] = Complex(pref * std::exp(-d * d * inv4s2), 0.0);
        }
    } else {
        for (std::size_t i = 0; i < grid.n_points; ++i) {
            const double d = grid.node(i) - center;
            v[i] = Complex(std::exp(-d * d * inv4s2) * std::cos(family.omega() * d + family.cep()),
                           0.0);
        }
    }

    GridFunction f(grid, std::move(v));
    if (family.kind() == PointerKind::OpticalPulse) {
        // No closed-form norm once the carrier is present; normalize by
        // quadrature so every branch has unit norm by construction.
        const double n2 = overlap(f, f).real();
        if (!(n2 > 0.0) || !std::isfinite(n2)) {
            throw NumericalContractViolation("make_pointer_state: degenerate pulse norm");
        }
        f.scale(Complex(1.0 / std::sqrt(n2), 0.0));
    }
    if (!f.decays_at_edges()) {
        throw DomainTooSmall("make_pointer_state: wavefunction does not decay at the grid edges");
    }
    return PointerState(std::move(f));
}

/// Qubit meter state for one eigenvalue branch: cos(eta*alpha)|1> +
/// sin(eta*alpha)|0>, stored as (on|1>, on|0>).
inline PointerState make_pointer_state(const PointerFamily& family, double eta, double alpha) {
    if (family.is_continuous()) {
        throw UnsupportedFamily("make_pointer_state: continuous families need a grid");
    }
    const double t = eta * alpha;
    return PointerState(DiscreteState{{Complex(std::cos(t), 0.0), Complex(std::sin(t), 0.0)}});
}

/// Applies the chosen readout observable to a pointer state. On grids the
/// canonical readout is coordinate multiplication and the conjugate one is
/// the scaled derivative. On the qubit the canonical readout is the Pauli
/// X (a swap of the stored pair) and the conjugate one the Pauli Y.
inline PointerState apply_readout(const PointerFamily& family, Readout which,
                                  const PointerState& state) {
    if (const GridFunction* f = std::get_if<GridFunction>(&state)) {
        if (!family.is_continuous()) {
            throw UnsupportedFamily("apply_readout: qubit family applied to a grid state");
        }
        if (which == Readout::Canonical) {
            return PointerState(apply_multiplication(*f));
        }
        GridFunction d = apply_derivative(*f);
        d.scale(Complex(family.conjugate_scale(), 0.0));
        return PointerState(std::move(d));
    }
    const DiscreteState& q = std::get<DiscreteState>(state);
    if (family.is_continuous()) {
        throw UnsupportedFamily("apply_readout: continuous family applied to a discrete state");
    }
    if (q.amps.size() != 2) {
        throw DimensionMismatch("apply_readout: qubit readout needs a two-level state");
    }
    if (which == Readout::Canonical) {
        return PointerState(DiscreteState{{q.amps[1], q.amps[0]}});
    }
    return PointerState(DiscreteState{{Complex(0.0, -1.0) * q.amps[1],
                                       Complex(0.0, 1.0) * q.amps[0]}});
}

/// Inner product between two pointer states of the same representation.
inline Complex state_overlap(const PointerState& a, const PointerState& b) {
    if (const GridFunction* fa = std::get_if<GridFunction>(&a)) {
        const GridFunction* fb = std::get_if<GridFunction>(&b);
        if (fb == nullptr) {
            throw DimensionMismatch("state_overlap: mixed grid and discrete states");
        }
        return overlap(*fa, *fb);
    }
    const DiscreteState& da = std::get<DiscreteState>(a);
    const DiscreteState* db = std::get_if<DiscreteState>(&b);
    if (db == nullptr) {
        throw DimensionMismatch("state_overlap: mixed grid and discrete states");
    }
    if (da.amps.size() != db->amps.size()) {
        throw DimensionMismatch("state_overlap: discrete states of different dimension");
    }
    Complex s{0.0, 0.0};
    for (std::size_t i = 0; i < da.amps.size(); ++i) {
        s += std::conj(da.amps[i]) * db->amps[i];
    }
    return s;
}

/// The three matrices that drive every conditional quantity, indexed as
/// M(m, n) = <xi_m | Op | xi_n>: D (overlaps), chi (canonical readout),
/// mu (conjugate readout).
struct PointerMatrices {
    ComplexMatrix d;
    ComplexMatrix chi;
    ComplexMatrix mu;
    std::vector<double> alphas;
    double eta = 0.0;
    double eta_eff = 0.0;
};

/// Assembles D, chi, mu from already-built branch states. The states must
/// all share one representation (and one grid). Hermiticity and unit
/// diagonal of D are verified; a violation means the quadrature contract
/// was broken upstream.
inline PointerMatrices matrices_from_states(const std::vector<const PointerState*>& states,
                                            const PointerFamily& family, double eta,
                                            const std::vector<double>& alphas) {
    const std::size_t n = states.size();
    if (n < 2 || alphas.size() != n) {
        throw DimensionMismatch("matrices_from_states: need >= 2 states with matching alphas");
    }
    PointerMatrices M;
    M.d = ComplexMatrix(n, n);
    M.chi = ComplexMatrix(n, n);
    M.mu = ComplexMatrix(n, n);
    M.alphas = alphas;
    M.eta = eta;
    M.eta_eff = family.eta_eff(eta);

    std::vector<PointerState> canonical;
    std::vector<PointerState> conjugate;
    canonical.reserve(n);
    conjugate.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
        canonical.push_back(apply_readout(family, Readout::Canonical, *states[k]));
        conjugate.push_back(apply_readout(family, Readout::Conjugate, *states[k]));
    }
    for (std::size_t m = 0; m < n; ++m) {
        for (std::size_t k = 0; k < n; ++k) {
            M.d.at(m, k) = state_overlap(*states[m], *states[k]);
            M.chi.at(m, k) = state_overlap(*states[m], canonical[k]);
            M.mu.at(m, k) = state_overlap(*states[m], conjugate[k]);
        }
    }

    for (std::size_t k = 0; k < n; ++k) {
        if (std::abs(M.d.at(k, k) - 1.0) > kHermiticityTolerance) {
            throw NumericalContractViolation("matrices_from_states: branch state not normalized");
        }
    }
    if (M.d.hermiticity_defect() > kHermiticityTolerance ||
        M.chi.hermiticity_defect() > kHermiticityTolerance ||
        M.mu.hermiticity_defect() > kHermiticityTolerance) {
        throw NumericalContractViolation("matrices_from_states: Hermiticity defect above tolerance");
    }
    return M;
}

/// Builds the branch states for every eigenvalue of `A` (on one shared,
/// automatically sized grid for continuous families) and assembles the
/// D, chi, mu matrices by quadrature.
inline PointerMatrices pointer_matrices(const PointerFamily& family, double eta,
                                        const MeasuredObservable& A, const GridSpec& spec = {}) {
    const std::vector<double>& alphas = A.eigenvalues();
    std::vector<PointerState> states;
    states.reserve(alphas.size());
    if (family.is_continuous()) {
        const Grid grid = default_grid(family, eta, A.max_abs_eigenvalue(), spec);
        for (double alpha : alphas) {
            states.push_back(make_pointer_state(family, eta, alpha, grid));
        }
    } else {
        for (double alpha : alphas) {
            states.push_back(make_pointer_state(family, eta, alpha));
        }
    }
    std::vector<const PointerState*> ptrs;
    ptrs.reserve(states.size());
    for (const PointerState& s : states) {
        ptrs.push_back(&s);
    }
    return matrices_from_states(ptrs, family, eta, alphas);
}

/// Closed-form D, chi, mu where they exist. Gaussian:
///   D    = exp(-eta^2 (a_m - a_n)^2 / 8 sigma^2),
///   chi  = eta (a_m + a_n)/2 * D,
///   mu   = i eta (a_m - a_n)/2 * D.
/// Qubit:
///   D    = cos(eta (a_m - a_n)),
///   chi  = sin(eta (a_m + a_n)),
///   mu   = i sin(eta (a_m - a_n)).
/// The pulse family has no closed form once the carrier is present and
/// throws UnsupportedFamily.
inline PointerMatrices closed_form_matrices(const PointerFamily& family, double eta,
                                            const MeasuredObservable& A) {
    if (family.kind() == PointerKind::OpticalPulse) {
        throw UnsupportedFamily("closed_form_matrices: no closed form for the pulse family");
    }
    const std::vector<double>& alphas = A.eigenvalues();
    const std::size_t n = alphas.size();
    PointerMatrices M;
    M.d = ComplexMatrix(n, n);
    M.chi = ComplexMatrix(n, n);
    M.mu = ComplexMatrix(n, n);
    M.alphas = alphas;
    M.eta = eta;
    M.eta_eff = family.eta_eff(eta);

    for (std::size_t m = 0; m < n; ++m) {
        for (std::size_t k = 0; k < n; ++k) {
            const double diff = alphas[m] - alphas[k];
            const double sum = alphas[m] + alphas[k];
            if (family.kind() == PointerKind::Gaussian) {
                const double s2 = family.sigma() * family.sigma();
                const double d = std::exp(-eta * eta * diff * diff / (8.0 * s2));
                M.d.at(m, k) = Complex(d, 0.0);
                M.chi.at(m, k) = Complex(eta * sum / 2.0 * d, 0.0);
                M.mu.at(m, k) = Complex(0.0, eta * diff / 2.0 * d);
            } else {
                M.d.at(m, k) = Complex(std::cos(eta * diff), 0.0);
                M.chi.at(m, k) = Complex(std::sin(eta * sum), 0.0);
                M.mu.at(m, k) = Complex(0.0, std::sin(eta * diff));
            }
        }
    }
    return M;
}

/// How far the assembled matrices sit from the weak-regime factorized
/// targets, all weighted by the overlap D_mn itself:
///   r_D   = max |D_mn - 1|
///   r_chi = max |chi_mn - eta_eff (a_m + a_n)/2 * D_mn|
///   r_mu  = max |mu_mn - i eta_eff (a_m - a_n)/2 * D_mn|
/// All three vanish as the coupling weakens; r_chi and r_mu can also
/// vanish at finite coupling for families whose readout matrices
/// factorize exactly.
struct ConditionResiduals {
    double r_d = 0.0;
    double r_chi = 0.0;
    double r_mu = 0.0;
};

inline ConditionResiduals condition_residuals(const PointerMatrices& M) {
    ConditionResiduals r;
    const std::size_t n = M.alphas.size();
    for (std::size_t m = 0; m < n; ++m) {
        for (std::size_t k = 0; k < n; ++k) {
            const double sum = M.alphas[m] + M.alphas[k];
            const double diff = M.alphas[m] - M.alphas[k];
            const Complex d = M.d.at(m, k);
            r.r_d = std::max(r.r_d, std::abs(d - 1.0));
            r.r_chi = std::max(r.r_chi, std::abs(M.chi.at(m, k) - M.eta_eff * sum / 2.0 * d));
            r.r_mu = std::max(r.r_mu,
                              std::abs(M.mu.at(m, k) - Complex(0.0, M.eta_eff * diff / 2.0) * d));
        }
    }
    return r;
}

// The conjugate readout of the pulse family is kappa * (-i d/dtau) with
// kappa chosen so that, deep in the weak regime, the conjugate shift
// normalized by eta recovers Im A_w exactly like the Gaussian's
// 2 sigma^2 scaling does. The envelope alone would give 2 sigma^2; the
// carrier adds a large frequency-dependent contribution to the matrix
// element, so kappa is calibrated once by quadrature at eta = 1e-3
// against the two-branch element itself.
inline PointerFamily PointerFamily::optical_pulse(double sigma, double omega, double cep) {
    if (!(sigma > 0.0) || !std::isfinite(sigma)) {
        throw std::invalid_argument("PointerFamily: sigma must be positive");
    }
    if (!(omega >= 0.0) || !std::isfinite(omega) || !std::isfinite(cep)) {
        throw std::invalid_argument("PointerFamily: omega must be >= 0 and cep finite");
    }
    PointerFamily family(PointerKind::OpticalPulse, sigma, omega, cep, 1.0);

    const double eta_cal = 1e-3;
    const Grid grid = default_grid(family, eta_cal, 1.0);
    const GridFunction e0 =
        std::get<GridFunction>(make_pointer_state(family, eta_cal, 0.0, grid));
    const GridFunction e1 =
        std::get<GridFunction>(make_pointer_state(family, eta_cal, 1.0, grid));
    const double element = std::abs(overlap(e1, apply_derivative(e0)));
    if (!(element > 0.0) || !std::isfinite(element)) {
        throw NumericalContractViolation("optical_pulse: degenerate calibration element");
    }
    family.conj_scale_ = (eta_cal / 2.0) / element;
    return family;
}

}  // namespace weakval
