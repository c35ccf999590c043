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

/**
 * @file
 * Lattice topology: dimension d, coordination c and the integer table
 * sigma(j, i) with [N_j, T_i] = sigma(j, i) T_i. Hopping direction i moves a
 * site by the column sigma(., i).
 */

#pragma once

#include "wstark/errors.hpp"

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace wstark {

class LatticeSpec {
  public:
    LatticeSpec() = default;

    /// @p sigma is row-major d x c. The first d columns must form the
    /// identity (primitive directions).
    LatticeSpec(int dimension, int coordination, std::vector<int> sigma,
                std::vector<std::string> names = {})
        : d_(dimension), c_(coordination), sigma_(std::move(sigma)),
          names_(std::move(names)) {
        validate();
    }

    [[nodiscard]] int dimension() const noexcept { return d_; }
    [[nodiscard]] int coordination() const noexcept { return c_; }

    [[nodiscard]] int sigma(int j, int i) const {
        return sigma_[static_cast<std::size_t>(j * c_ + i)];
    }
    [[nodiscard]] const std::vector<int> &sigma_data() const noexcept {
        return sigma_;
    }
    /// Displacement of direction @p i as a d-vector.
    [[nodiscard]] std::vector<int> shift(int i) const {
        std::vector<int> out(static_cast<std::size_t>(d_));
        for (int j = 0; j < d_; ++j) {
            out[static_cast<std::size_t>(j)] = sigma(j, i);
        }
        return out;
    }
    [[nodiscard]] const std::vector<std::string> &names() const noexcept {
        return names_;
    }

    bool operator==(const LatticeSpec &other) const {
        return d_ == other.d_ && c_ == other.c_ && sigma_ == other.sigma_;
    }

  private:
    void validate() const {
        if (d_ < 1) {
            throw InputError("lattice dimension must be >= 1");
        }
        if (c_ < d_) {
            throw InputError("lattice coordination must be >= dimension");
        }
        if (sigma_.size() != static_cast<std::size_t>(d_ * c_)) {
            throw InputError("sigma must have d*c entries");
        }
        for (int j = 0; j < d_; ++j) {
            for (int i = 0; i < d_; ++i) {
                if (sigma(j, i) != (i == j ? 1 : 0)) {
                    throw InputError(
                        "first d columns of sigma must be the identity");
                }
            }
        }
        for (int i = d_; i < c_; ++i) {
            bool nonzero = false;
            for (int j = 0; j < d_; ++j) {
                nonzero = nonzero || sigma(j, i) != 0;
            }
            if (!nonzero) {
                throw InputError("sigma column " + std::to_string(i) +
                                 " is zero");
            }
        }
        if (!names_.empty() && names_.size() != static_cast<std::size_t>(c_)) {
            throw InputError("direction names must have c entries");
        }
    }

    int d_ = 1;
    int c_ = 1;
    std::vector<int> sigma_{1};
    std::vector<std::string> names_;
};

inline LatticeSpec chain_lattice() { return LatticeSpec(1, 1, {1}, {"x"}); }

inline LatticeSpec square_lattice() {
    return LatticeSpec(2, 2, {1, 0, 0, 1}, {"a1", "a2"});
}

/// T_3 = T_1^dagger T_2^dagger, so its column is (-1, -1).
inline LatticeSpec triangular_lattice() {
    return LatticeSpec(2, 3, {1, 0, -1, 0, 1, -1}, {"a1", "a2", "a3"});
}

struct BuiltinLattices {
    LatticeSpec chain;
    LatticeSpec square;
    LatticeSpec triangular;
};

inline BuiltinLattices builtin_lattices() {
    return {chain_lattice(), square_lattice(), triangular_lattice()};
}

/// Looks up "chain", "square" or "triangular".
inline LatticeSpec builtin_lattice(const std::string &name) {
    if (name == "chain") {
        return chain_lattice();
    }
    if (name == "square") {
        return square_lattice();
    }
    if (name == "triangular") {
        return triangular_lattice();
    }
    throw InputError("unknown builtin lattice '" + name + "'");
}

} // namespace wstark
