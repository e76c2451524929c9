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

// The weak-value limit in one screenful: a Gaussian pointer coupled to a
// two-level system, post-selected nearly orthogonal to the initial state,
// read out in both the position and the scaled-momentum basis. As the
// coupling weakens, the normalized complex pointer shift converges to the
// weak value at second order in eta.

#include <cmath>
#include <cstdio>

#include "weakval/weakval.hpp"

int main() {
    using namespace weakval;

    const PointerFamily family = PointerFamily::gaussian(1.0);
    const MeasuredObservable A({0.0, 1.0});
    const SystemState psi = SystemState::normalized({{1.0, 0.0}, {1.0, 0.0}});
    const SystemState f({{std::cos(-kPi / 8.0), 0.0}, {std::sin(-kPi / 8.0), 0.0}});

    const Complex wv = weak_value(psi, f, A);
    std::printf("weak value          : %+.12f %+.12fi\n", wv.real(), wv.imag());
    std::printf("%10s  %22s  %12s\n", "eta", "normalized shift", "abs error");
    for (double eta : {0.08, 0.04, 0.02, 0.01, 0.005, 0.0025}) {
        const EntangledState state = von_neumann_entangle(psi, A, family, eta);
        const ConditionalReadout r = full_readout(state, f, A, psi);
        std::printf("%10.4f  %+.8f %+.8fi  %12.3e\n", eta, r.complex_shift.real(),
                    r.complex_shift.imag(), std::abs(r.complex_shift - wv));
    }
    std::printf("\nEach halving of eta divides the error by ~4: the residual of the\n"
                "weak-value approximation is second order in the coupling.\n");
    return 0;
}
