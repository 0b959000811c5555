// Copyright 2026 The echobench Authors
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
#include <string>

namespace echobench {

/// Operand shapes do not line up (e.g. applying a D x D channel to a D' x D' state).
class DimensionError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// A request would exceed the configured dense-size caps (see NumericPolicy).
class SizeLimitError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// Input is numerically degenerate (rank deficient, non-unitary, non-physical state, ...).
class DegenerateInputError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// A computation produced values outside its numeric contract (non-finite entries,
/// imaginary residue above tolerance, probabilities outside [0,1], ...).
class NumericError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Fixed-step integration became unstable; `suggested_dt` is a step size to retry with.
class IntegratorError : public NumericError {
  public:
    IntegratorError(const std::string& what, double suggested_dt)
        : NumericError(what), suggested_dt(suggested_dt) {}
    double suggested_dt;
};

/// A decay curve does not contain enough usable points above the noise floor to fit.
class InsufficientSignalError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent experiment/channel configuration.
class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

} // namespace echobench
