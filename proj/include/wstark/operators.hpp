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
 * Truncated matrices of the lattice operators on sites n in [-W/2, W/2):
 *
 *   xi |n>  = a sum_{m>=0} (-1)^m [2(n-m) - 1] |n+2m+1>
 *   pi |n>  = (|n-1> - |n+1>) / (2ia)
 *   N  |n>  = n |n>,   T |n> = |n+1>
 *
 * and an interior check of [xi, pi] = i, [N, T] = T, T^dagger T = 1.
 */

#pragma once

#include "wstark/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <complex>

namespace wstark {

struct OperatorMatrices {
    int first_site = 0; ///< site label of row/column 0
    double spacing = 1.0;
    Eigen::MatrixXcd xi;
    Eigen::MatrixXcd pi;
    Eigen::MatrixXcd N;
    Eigen::MatrixXcd T;

    [[nodiscard]] int size() const noexcept { return static_cast<int>(N.rows()); }
};

inline OperatorMatrices build_operator_matrices(int size, double spacing = 1.0) {
    if (size < 8) {
        throw DomainError("operator window must hold at least 8 sites");
    }
    if (!(spacing > 0.0)) {
        throw DomainError("lattice constant must be positive");
    }
    OperatorMatrices ops;
    ops.first_site = -size / 2;
    ops.spacing = spacing;
    ops.xi = Eigen::MatrixXcd::Zero(size, size);
    ops.pi = Eigen::MatrixXcd::Zero(size, size);
    ops.N = Eigen::MatrixXcd::Zero(size, size);
    ops.T = Eigen::MatrixXcd::Zero(size, size);
    const std::complex<double> hop = 1.0 / std::complex<double>(0.0, 2.0 * spacing);
    for (int col = 0; col < size; ++col) {
        const int n = ops.first_site + col;
        ops.N(col, col) = n;
        if (col + 1 < size) {
            ops.T(col + 1, col) = 1.0;
            ops.pi(col + 1, col) = -hop;
        }
        if (col > 0) {
            ops.pi(col - 1, col) = hop;
        }
        for (int m = 0; col + 2 * m + 1 < size; ++m) {
            const double sign = (m % 2 == 0) ? 1.0 : -1.0;
            ops.xi(col + 2 * m + 1, col) = spacing * sign * (2.0 * (n - m) - 1.0);
        }
    }
    return ops;
}

struct CommutatorReport {
    double xi_pi_interior_error = 0.0;     ///< max |[xi,pi] - i 1| on the interior
    double N_T_error = 0.0;                ///< max |[N,T] - T|
    double T_unitarity_interior_error = 0.0; ///< max |T^dagger T - 1| off the last column
    double xi_hermiticity_defect = 0.0;    ///< max |xi - xi^dagger|, reported only
};

/// Interior of [xi, pi] = all (j, k) whose neighbours j +- 1, k +- 1 lie in
/// the window, i.e. no truncated product term is referenced.
inline CommutatorReport commutator_report(const OperatorMatrices &ops) {
    const int size = ops.size();
    if (size < 16) {
        throw DomainError("commutator report needs at least 16 sites");
    }
    CommutatorReport report;
    const Eigen::MatrixXcd xp = ops.xi * ops.pi - ops.pi * ops.xi;
    const std::complex<double> i(0.0, 1.0);
    for (int j = 1; j + 1 < size; ++j) {
        for (int k = 1; k + 1 < size; ++k) {
            const auto expected = j == k ? i : std::complex<double>{};
            report.xi_pi_interior_error =
                std::max(report.xi_pi_interior_error, std::abs(xp(j, k) - expected));
        }
    }
    report.N_T_error = (ops.N * ops.T - ops.T * ops.N - ops.T).cwiseAbs().maxCoeff();
    const Eigen::MatrixXcd tt = ops.T.adjoint() * ops.T;
    for (int j = 0; j + 1 < size; ++j) {
        for (int k = 0; k + 1 < size; ++k) {
            const double expected = j == k ? 1.0 : 0.0;
            report.T_unitarity_interior_error =
                std::max(report.T_unitarity_interior_error, std::abs(tt(j, k) - expected));
        }
    }
    report.xi_hermiticity_defect = (ops.xi - ops.xi.adjoint()).cwiseAbs().maxCoeff();
    return report;
}

} // namespace wstark
