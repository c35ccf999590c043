// Copyright 2026 The wstark Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace wstark {

/// Argument outside the mathematical domain of an operation (negative time,
/// index out of range, negative Bessel argument, ...).
class DomainError : public std::domain_error {
  public:
    using std::domain_error::domain_error;
};

/// Malformed user input: non-finite drive samples, bad grids, bad sigma.
class InputError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

class DimensionMismatch : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// Raised when the triangular closed form is requested outside the phase
/// regime where it is valid.
class ConstraintViolation : public std::runtime_error {
  public:
    ConstraintViolation(const std::string &what, double deviation)
        : std::runtime_error(what), deviation_(deviation) {}

    [[nodiscard]] double deviation() const noexcept { return deviation_; }

  private:
    double deviation_;
};

/// Invariant broken inside the library (e.g. assembled Hamiltonian not
/// Hermitian). Indicates a bug, not bad input.
class InternalError : public std::logic_error {
  public:
    using std::logic_error::logic_error;
};

} // namespace wstark
