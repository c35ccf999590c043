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
 * Numerical ground truth: the truncated lattice Hamiltonian
 *
 *   H(t) = sum_i alpha_i(t) T_i + h.c. + sum_j beta_j(t) N_j
 *
 * on a finite window (open boundaries), and direct integration of
 * i dU/dt = H(t) U, U(0) = 1.
 */

#pragma once

#include "wstark/drive.hpp"
#include "wstark/errors.hpp"
#include "wstark/kernel_table.hpp"
#include "wstark/lattice.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace wstark {

using SparseMatrixC = Eigen::SparseMatrix<cplx, Eigen::RowMajor>;

class TruncatedHamiltonian {
  public:
    TruncatedHamiltonian(LatticeSpec lattice, Window window, DriveProtocol drive)
        : lattice_(std::move(lattice)), window_(std::move(window)),
          drive_(std::move(drive)) {
        drive_.require_compatible(lattice_);
        if (window_.dimension() != lattice_.dimension()) {
            throw DimensionMismatch("window dimension does not match lattice");
        }
        for (int i = 0; i < lattice_.coordination(); ++i) {
            const auto s = lattice_.shift(i);
            for (std::size_t from = 0; from < window_.sites(); ++from) {
                if (const auto to = window_.shifted(from, s)) {
                    bonds_.push_back({from, *to, i});
                }
            }
        }
        positions_.resize(window_.sites());
        for (std::size_t site = 0; site < window_.sites(); ++site) {
            positions_[site] = window_.coords(site);
        }
    }

    [[nodiscard]] const LatticeSpec &lattice() const noexcept { return lattice_; }
    [[nodiscard]] const Window &window() const noexcept { return window_; }
    [[nodiscard]] const DriveProtocol &drive() const noexcept { return drive_; }

    /// Hopping part: <s + s_i|K|s> = alpha_i, <s|K|s + s_i> = conj(alpha_i).
    [[nodiscard]] SparseMatrixC hopping_at(double t) const {
        std::vector<cplx> alpha;
        for (std::size_t i = 0; i < drive_.coordination(); ++i) {
            alpha.push_back(drive_.alpha(i, t));
        }
        std::vector<Eigen::Triplet<cplx>> entries;
        entries.reserve(2 * bonds_.size());
        for (const auto &b : bonds_) {
            const auto a = alpha[static_cast<std::size_t>(b.direction)];
            entries.emplace_back(static_cast<int>(b.to), static_cast<int>(b.from), a);
            entries.emplace_back(static_cast<int>(b.from), static_cast<int>(b.to),
                                 std::conj(a));
        }
        const auto n = static_cast<Eigen::Index>(window_.sites());
        SparseMatrixC K(n, n);
        K.setFromTriplets(entries.begin(), entries.end());
        return K;
    }

    /// Diagonal field energies sum_j beta_j(t) n_j.
    [[nodiscard]] Eigen::VectorXd field_at(double t) const {
        Eigen::VectorXd diag(static_cast<Eigen::Index>(window_.sites()));
        std::vector<double> beta;
        for (std::size_t j = 0; j < drive_.dimension(); ++j) {
            beta.push_back(drive_.beta(j, t));
        }
        for (std::size_t site = 0; site < window_.sites(); ++site) {
            double e = 0.0;
            for (std::size_t j = 0; j < beta.size(); ++j) {
                e += beta[j] * positions_[site][j];
            }
            diag(static_cast<Eigen::Index>(site)) = e;
        }
        return diag;
    }

    [[nodiscard]] SparseMatrixC matrix_at(double t) const {
        SparseMatrixC H = hopping_at(t);
        const auto diag = field_at(t);
        for (Eigen::Index k = 0; k < diag.size(); ++k) {
            H.coeffRef(k, k) += diag(k);
        }
        H.makeCompressed();
        return H;
    }

    /// True when no drive component depends on time.
    [[nodiscard]] bool is_static() const {
        auto constant = [](const Signal &s) { return std::holds_alternative<Constant>(s); };
        return std::all_of(drive_.alphas().begin(), drive_.alphas().end(), constant) &&
               std::all_of(drive_.betas().begin(), drive_.betas().end(), constant);
    }

  private:
    struct Bond {
        std::size_t from;
        std::size_t to;
        int direction;
    };

    LatticeSpec lattice_;
    Window window_;
    DriveProtocol drive_;
    std::vector<Bond> bonds_;
    std::vector<std::vector<int>> positions_;
};

namespace detail {

inline double sparse_norm1(const SparseMatrixC &A) {
    Eigen::VectorXd col = Eigen::VectorXd::Zero(A.cols());
    for (Eigen::Index r = 0; r < A.outerSize(); ++r) {
        for (SparseMatrixC::InnerIterator it(A, r); it; ++it) {
            col(it.col()) += std::abs(it.value());
        }
    }
    return col.size() ? col.maxCoeff() : 0.0;
}

inline double hermiticity_defect(const SparseMatrixC &A) {
    const SparseMatrixC diff = A - SparseMatrixC(A.adjoint());
    double worst = 0.0;
    for (Eigen::Index r = 0; r < diff.outerSize(); ++r) {
        for (SparseMatrixC::InnerIterator it(diff, r); it; ++it) {
            worst = std::max(worst, std::abs(it.value()));
        }
    }
    return worst;
}

/// X <- exp(-i h K) X by scaled Taylor series; the term count is fixed a
/// priori from ||hK||_1 so that the truncation stays below 1e-17.
inline void apply_exponential(const SparseMatrixC &K, double h, Eigen::MatrixXcd &X) {
    const double norm = sparse_norm1(K) * std::abs(h);
    if (norm == 0.0) {
        return;
    }
    const int substeps = std::max(1, static_cast<int>(std::ceil(norm / 0.5)));
    const double sub_norm = norm / substeps;
    int terms = 1;
    double bound = sub_norm;
    while (bound > 1e-17 && terms < 60) {
        ++terms;
        bound *= sub_norm / terms;
    }
    const cplx scale(0.0, -h / substeps);
    Eigen::MatrixXcd term(X.rows(), X.cols());
    for (int s = 0; s < substeps; ++s) {
        term = X;
        for (int k = 1; k <= terms; ++k) {
            term = (scale / static_cast<double>(k)) * (K * term);
            X += term;
        }
    }
}

} // namespace detail

/// Propagates U(0) = 1 to @p t_final with exponential-midpoint steps. Each
/// step exp(-i H(t + h/2) h) is applied as
///   exp(-i D h/2) exp(-i K h) exp(-i D h/2)
/// with D the diagonal field part and K the hopping part: both factors are
/// unitary to round-off and the global error is O(h^2). The step is
/// t_final / ceil(t_final / step).
///
/// Only source columns at boundary distance >= @p source_margin are evolved;
/// the others are filled with NaN so a careless comparison cannot pass.
inline KernelTable integrate_unitary(const TruncatedHamiltonian &H, double t_final,
                                     double step, int source_margin = 0) {
    if (!(step > 0.0) || !std::isfinite(step)) {
        throw DomainError("oracle step must be positive");
    }
    if (!(t_final >= 0.0) || !std::isfinite(t_final)) {
        throw DomainError("oracle final time must be finite and non-negative");
    }
    const auto n = static_cast<Eigen::Index>(H.window().sites());
    KernelTable table;
    table.window = H.window();
    table.time = t_final;
    table.convention = Convention::ForwardSchrodinger;
    table.drive_summary = "oracle;" + H.drive().summary();
    std::vector<Eigen::Index> columns;
    for (Eigen::Index k = 0; k < n; ++k) {
        if (table.window.boundary_distance(static_cast<std::size_t>(k)) >= source_margin) {
            columns.push_back(k);
        }
    }
    if (columns.empty()) {
        throw DomainError("source margin leaves no columns to evolve");
    }
    if (static_cast<Eigen::Index>(columns.size()) < n) {
        table.warnings.push_back("only sources with boundary distance >= " +
                                 std::to_string(source_margin) + " evolved");
    }
    const auto cols = static_cast<Eigen::Index>(columns.size());
    Eigen::MatrixXcd X = Eigen::MatrixXcd::Zero(n, cols);
    for (Eigen::Index c = 0; c < cols; ++c) {
        X(columns[static_cast<std::size_t>(c)], c) = 1.0;
    }
    auto scatter = [&] {
        const double nan = std::numeric_limits<double>::quiet_NaN();
        table.entries = Eigen::MatrixXcd::Constant(n, n, cplx(nan, nan));
        for (Eigen::Index c = 0; c < cols; ++c) {
            table.entries.col(columns[static_cast<std::size_t>(c)]) = X.col(c);
        }
    };
    if (t_final == 0.0) {
        scatter();
        return table;
    }
    const long steps = std::max(1L, static_cast<long>(std::ceil(t_final / step - 1e-9)));
    const double h = t_final / static_cast<double>(steps);

    const bool fixed = H.is_static();
    SparseMatrixC K = H.hopping_at(0.5 * h);
    if (detail::hermiticity_defect(K) > 1e-14 * (1.0 + detail::sparse_norm1(K))) {
        throw InternalError("assembled hopping matrix is not Hermitian");
    }
    Eigen::VectorXd D = H.field_at(0.5 * h);
    Eigen::VectorXcd half_phase(n);
    auto set_phase = [&] {
        for (Eigen::Index k = 0; k < n; ++k) {
            half_phase(k) = std::polar(1.0, -0.5 * h * D(k));
        }
    };
    set_phase();
    for (long s = 0; s < steps; ++s) {
        if (!fixed && s > 0) {
            const double mid = (static_cast<double>(s) + 0.5) * h;
            K = H.hopping_at(mid);
            D = H.field_at(mid);
            set_phase();
        }
        X = half_phase.asDiagonal() * X;
        detail::apply_exponential(K, h, X);
        X = half_phase.asDiagonal() * X;
    }
    scatter();
    return table;
}

/// Largest |analytic - numeric| over entries whose target and source are
/// both at least @p margin sites from every window edge. Tables are compared
/// in the forward convention (PaperMM tables are converted by adjoint).
/// Max |a - b| over entries whose target and source both sit at boundary
/// distance >= @p margin. Entries are compared as stored, conventions ignored.
inline double compare_entries(const KernelTable &a, const KernelTable &b, int margin) {
    if (!(a.window == b.window)) {
        throw DimensionMismatch("kernel windows differ");
    }
    if (std::abs(a.time - b.time) > 1e-12 * std::max(1.0, a.time)) {
        throw DimensionMismatch("kernel times differ");
    }
    std::vector<Eigen::Index> interior;
    for (std::size_t s = 0; s < a.window.sites(); ++s) {
        if (a.window.boundary_distance(s) >= margin) {
            interior.push_back(static_cast<Eigen::Index>(s));
        }
    }
    if (interior.empty()) {
        throw DomainError("margin leaves no interior sites");
    }
    double worst = 0.0;
    for (auto col : interior) {
        for (auto row : interior) {
            const double gap = std::abs(a.entries(row, col) - b.entries(row, col));
            if (std::isnan(gap)) {
                return std::numeric_limits<double>::infinity();
            }
            worst = std::max(worst, gap);
        }
    }
    return worst;
}

/// Interior gap between an analytic table and an oracle table, both taken
/// in the forward convention.
inline double compare_kernels(const KernelTable &analytic, const KernelTable &numeric,
                              int margin) {
    return compare_entries(analytic.converted(Convention::ForwardSchrodinger),
                           numeric.converted(Convention::ForwardSchrodinger), margin);
}

} // namespace wstark
