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

#include <stdexcept>

namespace weakval {

/// Base type for every error thrown by this library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Operands live in spaces of different dimension, or on different grids.
class DimensionMismatch : public Error {
  public:
    using Error::Error;
};

/// The post-selection amplitude (or the conditional probability) is
/// numerically indistinguishable from zero, so a conditional quantity
/// is undefined.
class ZeroPostSelection : public Error {
  public:
    using Error::Error;
};

/// A sampled wavefunction fails to decay below tolerance at the grid
/// edges; the requested domain cannot represent it faithfully.
class DomainTooSmall : public Error {
  public:
    using Error::Error;
};

/// The requested operation has no definition for this pointer family.
class UnsupportedFamily : public Error {
  public:
    using Error::Error;
};

/// Input amplitudes that must be normalized to one are not.
class UnnormalizedInput : public Error {
  public:
    using Error::Error;
};

/// An internal numerical guarantee failed: a Gram matrix lost
/// Hermiticity, a real-by-construction quantity grew an imaginary part,
/// a probability left (0, 1], or a non-finite value appeared.
class NumericalContractViolation : public Error {
  public:
    using Error::Error;
};

/// A scenario configuration is malformed; the message carries file:line.
class ConfigError : public Error {
  public:
    using Error::Error;
};

}  // namespace weakval
