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
 * Closed-form propagators for the driven chain, square and triangular
 * lattices.
 *
 * PaperMM kernels:
 *   chain       U_{n,m} = e^{i m f} e^{i(n-m) theta} J_{m-n}(2|F|),  theta = arg F
 *   square      product of two chain kernels, one per axis
 *   triangular  U = exp(i[(n1+m1) f1 + (n2+m2) f2]/2)
 *                   exp(i[(m1-n1) Phi1 + (m2-n2) Phi2])
 *                   J_{m1-n1, m2-n2}(2|F1|, 2|F2|, 2|F3|),  Phi_j = f_j/2 - arg F_j
 *
 * The PaperMM kernel is the adjoint of the forward propagator, so the
 * ForwardSchrodinger entry (n, m) is conj(U_paper(m, n)). For zero field
 * this reduces to multiplying by (-1)^{n-m}.
 */

#pragma once

#include "wstark/drive.hpp"
#include "wstark/errors.hpp"
#include "wstark/kernel_table.hpp"
#include "wstark/lattice.hpp"
#include "wstark/specfun.hpp"

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <complex>
#include <cstdio>
#include <numbers>
#include <string>
#include <vector>

namespace wstark {

/// Magnitudes below this are treated as zero when taking phases.
inline constexpr double zero_amplitude = 1e-14;

/// Extra sites beyond 2 max|F| that a window should hold around a column.
inline constexpr double support_padding = 25.0;

namespace detail {

inline double safe_arg(cplx z) { return std::abs(z) < zero_amplitude ? 0.0 : std::arg(z); }

inline double wrap_angle(double a) {
    a = std::remainder(a, 2.0 * std::numbers::pi);
    return a;
}

inline void check_support(KernelTable &table, double max_amplitude) {
    const double radius = 2.0 * max_amplitude + support_padding;
    for (int k = 0; k < table.window.dimension(); ++k) {
        const auto &ax = table.window.axis(k);
        const double half = 0.5 * (ax.hi - ax.lo);
        if (half < radius) {
            char buf[160];
            std::snprintf(buf, sizeof buf,
                          "truncation: axis %d half-width %.1f below support radius "
                          "%.3f (2 max|F| + %.0f)",
                          k, half, radius, support_padding);
            table.warnings.emplace_back(buf);
        }
    }
}

// One-axis kernel entries for the given phase data.
inline Eigen::MatrixXcd chain_entries(const AxisRange &axis, double f, cplx F,
                                      Convention convention) {
    const int size = axis.size();
    const double theta = safe_arg(F);
    const BesselSequence bessel(2.0 * std::abs(F), size);
    auto paper = [&](int n, int m) {
        return std::polar(1.0, m * f + (n - m) * theta) * bessel(m - n);
    };
    Eigen::MatrixXcd out(size, size);
    for (int r = 0; r < size; ++r) {
        for (int col = 0; col < size; ++col) {
            const int n = axis.lo + r;
            const int m = axis.lo + col;
            out(r, col) = convention == Convention::PaperMM ? paper(n, m)
                                                            : std::conj(paper(m, n));
        }
    }
    return out;
}

} // namespace detail

struct PhaseConstraint {
    bool satisfied = true;
    double deviation = 0.0; ///< |arg F1 + arg F2 + arg F3| wrapped to [0, pi]
};

/// Phase condition under which the triangular kernel reduces to J_{n,m}
/// with non-negative arguments: arg F1 + arg F2 + arg F3 = 0 (mod 2 pi),
/// where F3 is the reversed-sign amplitude of the third direction. A
/// vanishing amplitude leaves its phase free, so the condition is then met.
inline PhaseConstraint validate_phase_constraint(cplx F1, cplx F2, cplx F3,
                                                 double tol = 1e-8) {
    if (std::abs(F1) < zero_amplitude || std::abs(F2) < zero_amplitude ||
        std::abs(F3) < zero_amplitude) {
        return {true, 0.0};
    }
    const double dev =
        std::abs(detail::wrap_angle(std::arg(F1) + std::arg(F2) + std::arg(F3)));
    return {dev <= tol, dev};
}

/// Chain kernel from precomputed phase data.
inline KernelTable kernel_1d(double f, cplx F, double t, const Window &window,
                             Convention convention) {
    if (window.dimension() != 1) {
        throw DimensionMismatch("chain kernel needs a one-axis window");
    }
    KernelTable table;
    table.window = window;
    table.time = t;
    table.convention = convention;
    table.entries = detail::chain_entries(window.axis(0), f, F, convention);
    detail::check_support(table, std::abs(F));
    return table;
}

inline KernelTable kernel_1d(const DriveProtocol &drive, double t, const Window &window,
                             Convention convention) {
    const auto lattice = chain_lattice();
    const auto phases = phase_integrals(drive, lattice, t);
    auto table = kernel_1d(phases.f[0], phases.F(0, 0), t, window, convention);
    table.drive_summary = "chain;" + drive.summary();
    return table;
}

inline KernelTable kernel_square(const PhaseIntegrals &phases, const Window &window,
                                 Convention convention) {
    if (window.dimension() != 2 || !(phases.lattice == square_lattice())) {
        throw DimensionMismatch("square kernel needs a two-axis window and square phases");
    }
    KernelTable table;
    table.window = window;
    table.time = phases.time;
    table.convention = convention;
    const auto first =
        detail::chain_entries(window.axis(0), phases.f[0], phases.F(0, 0), convention);
    const auto second =
        detail::chain_entries(window.axis(1), phases.f[1], phases.F(1, 1), convention);
    const Eigen::Index n1 = first.rows();
    const Eigen::Index n2 = second.rows();
    table.entries.resize(n1 * n2, n1 * n2);
    for (Eigen::Index a = 0; a < n1; ++a) {
        for (Eigen::Index b = 0; b < n1; ++b) {
            table.entries.block(a * n2, b * n2, n2, n2) = first(a, b) * second;
        }
    }
    detail::check_support(table,
                          std::max(std::abs(phases.F(0, 0)), std::abs(phases.F(1, 1))));
    return table;
}

inline KernelTable kernel_square(const DriveProtocol &drive, double t,
                                 const Window &window, Convention convention) {
    auto table = kernel_square(phase_integrals(drive, square_lattice(), t), window,
                               convention);
    table.drive_summary = "square;" + drive.summary();
    return table;
}

struct TriangularOptions {
    double constraint_tolerance = 1e-8;
    /// When false, a violated constraint is recorded as a warning instead of
    /// throwing (the resulting table is then not a propagator).
    bool enforce_constraint = true;
};

inline KernelTable kernel_triangular(const PhaseIntegrals &phases, const Window &window,
                                     Convention convention,
                                     const TriangularOptions &options = {}) {
    if (window.dimension() != 2 || !(phases.lattice == triangular_lattice())) {
        throw DimensionMismatch(
            "triangular kernel needs a two-axis window and triangular phases");
    }
    const cplx F1 = phases.F(0, 0);
    const cplx F2 = phases.F(1, 1);
    const cplx F3 = phases.F(0, 2);
    const auto check = validate_phase_constraint(F1, F2, F3, options.constraint_tolerance);

    KernelTable table;
    table.window = window;
    table.time = phases.time;
    table.convention = convention;
    if (!check.satisfied) {
        char buf[200];
        std::snprintf(buf, sizeof buf,
                      "phase constraint violated at t = %.17g: |arg F1 + arg F2 + arg "
                      "F3| = %.6g > %.3g",
                      phases.time, check.deviation, options.constraint_tolerance);
        if (options.enforce_constraint) {
            throw ConstraintViolation(buf, check.deviation);
        }
        table.warnings.emplace_back(buf);
    }

    // Phases of vanishing amplitudes are free; when F3 is live, the first
    // free one among F1, F2 absorbs the constraint so that the sum is zero.
    std::array<double, 3> theta{detail::safe_arg(F1), detail::safe_arg(F2),
                                detail::safe_arg(F3)};
    const bool zero1 = std::abs(F1) < zero_amplitude;
    const bool zero2 = std::abs(F2) < zero_amplitude;
    if (std::abs(F3) >= zero_amplitude) {
        if (zero1) {
            theta[0] = -theta[1] - theta[2];
        } else if (zero2) {
            theta[1] = -theta[0] - theta[2];
        }
    }
    const double f1 = phases.f[0];
    const double f2 = phases.f[1];
    const double phi1 = 0.5 * f1 - theta[0];
    const double phi2 = 0.5 * f2 - theta[1];

    const auto &ax1 = window.axis(0);
    const auto &ax2 = window.axis(1);
    const int reach = std::max(ax1.size(), ax2.size()) - 1;
    const TwoIndexBessel bessel(2.0 * std::abs(F1), 2.0 * std::abs(F2),
                                2.0 * std::abs(F3), reach);
    const int span1 = 2 * (ax1.size() - 1) + 1;
    const int span2 = 2 * (ax2.size() - 1) + 1;
    std::vector<double> reduced(static_cast<std::size_t>(span1 * span2));
    for (int a = 0; a < span1; ++a) {
        for (int b = 0; b < span2; ++b) {
            reduced[static_cast<std::size_t>(a * span2 + b)] =
                bessel.value(a - (ax1.size() - 1), b - (ax2.size() - 1));
        }
    }
    auto paper = [&](int n1, int n2, int m1, int m2) {
        const int d1 = m1 - n1;
        const int d2 = m2 - n2;
        const double g = reduced[static_cast<std::size_t>(
            (d1 + ax1.size() - 1) * span2 + (d2 + ax2.size() - 1))];
        const double phase =
            0.5 * ((n1 + m1) * f1 + (n2 + m2) * f2) + d1 * phi1 + d2 * phi2;
        return std::polar(1.0, phase) * g;
    };

    const auto sites = static_cast<Eigen::Index>(window.sites());
    table.entries.resize(sites, sites);
    for (int n1 = ax1.lo; n1 <= ax1.hi; ++n1) {
        for (int n2 = ax2.lo; n2 <= ax2.hi; ++n2) {
            const auto row = (n1 - ax1.lo) * ax2.size() + (n2 - ax2.lo);
            for (int m1 = ax1.lo; m1 <= ax1.hi; ++m1) {
                for (int m2 = ax2.lo; m2 <= ax2.hi; ++m2) {
                    const auto col = (m1 - ax1.lo) * ax2.size() + (m2 - ax2.lo);
                    table.entries(row, col) = convention == Convention::PaperMM
                                                  ? paper(n1, n2, m1, m2)
                                                  : std::conj(paper(m1, m2, n1, n2));
                }
            }
        }
    }
    detail::check_support(table,
                          std::max({std::abs(F1), std::abs(F2), std::abs(F3)}));
    return table;
}

inline KernelTable kernel_triangular(const DriveProtocol &drive, double t,
                                     const Window &window, Convention convention,
                                     const TriangularOptions &options = {}) {
    auto table = kernel_triangular(phase_integrals(drive, triangular_lattice(), t),
                                   window, convention, options);
    table.drive_summary = "triangular;" + drive.summary();
    return table;
}

/// True for the lattices that have a closed-form kernel.
inline bool has_closed_form(const LatticeSpec &lattice) {
    return lattice == chain_lattice() || lattice == square_lattice() ||
           lattice == triangular_lattice();
}

/// Dispatches to the closed-form builder for a builtin lattice.
inline KernelTable closed_form_kernel(const LatticeSpec &lattice,
                                      const DriveProtocol &drive, double t,
                                      const Window &window, Convention convention,
                                      const TriangularOptions &options = {}) {
    if (lattice == chain_lattice()) {
        return kernel_1d(drive, t, window, convention);
    }
    if (lattice == square_lattice()) {
        return kernel_square(drive, t, window, convention);
    }
    if (lattice == triangular_lattice()) {
        return kernel_triangular(drive, t, window, convention, options);
    }
    throw InputError("no closed-form kernel for this lattice; use the oracle");
}

/// Matrix-vector product of a kernel with a state on the same window.
inline Eigen::VectorXcd apply_kernel(const KernelTable &table,
                                     const Eigen::VectorXcd &state) {
    if (state.size() != table.entries.cols()) {
        throw DimensionMismatch("state size " + std::to_string(state.size()) +
                                " does not match window of " +
                                std::to_string(table.entries.cols()) + " sites");
    }
    return table.entries * state;
}

} // namespace wstark
