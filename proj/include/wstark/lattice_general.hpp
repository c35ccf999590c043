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
 * Lattice-general machinery: the Heisenberg map generated by
 *
 *   H = sum_i alpha_i(t) T_i + h.c. + sum_j beta_j(t) N_j,
 *
 * residual checkers for the recurrences it imposes on U_{n;m},
 *
 *   shift (one per direction i):
 *     U_{n; m + s_i} = e^{i f_i} U_{n - s_i; m}
 *   difference (one per axis j):
 *     (m_j - n_j) U_{n;m} = sum_i F_{ji} U_{n - s_i; m} + conj(F_{ji}) U_{n + s_i; m}
 *
 * (s_i is column i of sigma), the separable reduction
 * U = exp(i/2 sum_j (n_j + m_j) f_j) K_{m - n}, and the constraint check for
 * the one-parameter map N' = aT + conj(a)/T + bN, T' = gT + g'/T + dN.
 */

#pragma once

#include "wstark/drive.hpp"
#include "wstark/errors.hpp"
#include "wstark/kernel_table.hpp"
#include "wstark/lattice.hpp"
#include "wstark/operators.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace wstark {

/// Parameters of the dynamical map at one time:
///   T_i(t) = phases[i] T_i(0),
///   N_j(t) = N_j(0) + sum_i shift(j,i) T_i(0) + h.c.
struct DynamicalMap {
    double time = 0.0;
    LatticeSpec lattice;
    std::vector<double> f;
    std::vector<cplx> phases;
    std::vector<cplx> shifts; ///< d x c row-major, F_{ji}

    [[nodiscard]] cplx shift(int j, int i) const {
        return shifts[static_cast<std::size_t>(j * lattice.coordination() + i)];
    }
};

inline DynamicalMap heisenberg_map(const PhaseIntegrals &phases) {
    DynamicalMap map;
    map.time = phases.time;
    map.lattice = phases.lattice;
    map.f = phases.f;
    for (double fi : phases.f) {
        map.phases.push_back(std::polar(1.0, fi));
    }
    for (int j = 0; j < phases.lattice.dimension(); ++j) {
        for (int i = 0; i < phases.lattice.coordination(); ++i) {
            map.shifts.push_back(phases.F(j, i));
        }
    }
    return map;
}

inline DynamicalMap heisenberg_map(const LatticeSpec &lattice, const DriveProtocol &drive,
                                   double t) {
    return heisenberg_map(phase_integrals(drive, lattice, t));
}

struct EquationResidual {
    std::string name;
    int index = 0;
    bool redundant = false; ///< shift equation of a non-primitive direction
    double max_abs = 0.0;
    std::size_t points = 0;
};

struct ResidualReport {
    std::vector<EquationResidual> shift;
    std::vector<EquationResidual> difference;
    double max_retained = 0.0; ///< over primitive shift and all difference equations
    double max_all = 0.0;      ///< including the redundant shift equations
};

namespace detail {

// Flat neighbour tables: step[i][s] = index of s + sign * s_i, or -1.
inline std::vector<std::vector<long>> neighbour_table(const Window &window,
                                                      const LatticeSpec &lattice,
                                                      int sign) {
    std::vector<std::vector<long>> out(static_cast<std::size_t>(lattice.coordination()));
    for (int i = 0; i < lattice.coordination(); ++i) {
        auto s = lattice.shift(i);
        for (auto &v : s) {
            v *= sign;
        }
        auto &row = out[static_cast<std::size_t>(i)];
        row.resize(window.sites());
        for (std::size_t site = 0; site < window.sites(); ++site) {
            const auto nb = window.shifted(site, s);
            row[site] = nb ? static_cast<long>(*nb) : -1;
        }
    }
    return out;
}

} // namespace detail

/// Residuals of the shift and difference recurrences, evaluated only where
/// every referenced index lies inside the window.
inline ResidualReport mm_residual_general(const LatticeSpec &lattice,
                                          const KernelTable &table,
                                          const DynamicalMap &map) {
    if (table.window.dimension() != lattice.dimension() || !(map.lattice == lattice)) {
        throw DimensionMismatch("table, map and lattice disagree on dimension/topology");
    }
    const int d = lattice.dimension();
    const int c = lattice.coordination();
    const auto &U = table.entries;
    const auto sites = table.window.sites();
    const auto plus = detail::neighbour_table(table.window, lattice, +1);
    const auto minus = detail::neighbour_table(table.window, lattice, -1);
    std::vector<std::vector<int>> coords(sites);
    for (std::size_t s = 0; s < sites; ++s) {
        coords[s] = table.window.coords(s);
    }

    ResidualReport report;
    for (int i = 0; i < c; ++i) {
        EquationResidual eq{"shift", i, i >= d, 0.0, 0};
        const cplx phase = map.phases[static_cast<std::size_t>(i)];
        const auto &up = plus[static_cast<std::size_t>(i)];
        const auto &down = minus[static_cast<std::size_t>(i)];
        for (std::size_t m = 0; m < sites; ++m) {
            if (up[m] < 0) {
                continue;
            }
            for (std::size_t n = 0; n < sites; ++n) {
                if (down[n] < 0) {
                    continue;
                }
                const cplx r = U(static_cast<Eigen::Index>(n), up[m]) -
                               phase * U(down[n], static_cast<Eigen::Index>(m));
                eq.max_abs = std::max(eq.max_abs, std::abs(r));
                ++eq.points;
            }
        }
        report.shift.push_back(eq);
    }
    for (int j = 0; j < d; ++j) {
        EquationResidual eq{"difference", j, false, 0.0, 0};
        std::vector<int> involved;
        for (int i = 0; i < c; ++i) {
            if (lattice.sigma(j, i) != 0) {
                involved.push_back(i);
            }
        }
        for (std::size_t n = 0; n < sites; ++n) {
            bool inside = true;
            for (int i : involved) {
                inside = inside && plus[static_cast<std::size_t>(i)][n] >= 0 &&
                         minus[static_cast<std::size_t>(i)][n] >= 0;
            }
            if (!inside) {
                continue;
            }
            const auto nj = coords[n][static_cast<std::size_t>(j)];
            for (std::size_t m = 0; m < sites; ++m) {
                const auto col = static_cast<Eigen::Index>(m);
                const auto mj = coords[m][static_cast<std::size_t>(j)];
                cplx r = static_cast<double>(mj - nj) * U(static_cast<Eigen::Index>(n), col);
                for (int i : involved) {
                    const cplx F = map.shift(j, i);
                    r -= F * U(minus[static_cast<std::size_t>(i)][n], col) +
                         std::conj(F) * U(plus[static_cast<std::size_t>(i)][n], col);
                }
                eq.max_abs = std::max(eq.max_abs, std::abs(r));
                ++eq.points;
            }
        }
        report.difference.push_back(eq);
    }
    bool any = false;
    for (const auto &eq : report.shift) {
        report.max_all = std::max(report.max_all, eq.max_abs);
        if (!eq.redundant) {
            report.max_retained = std::max(report.max_retained, eq.max_abs);
            any = any || eq.points > 0;
        }
    }
    for (const auto &eq : report.difference) {
        report.max_all = std::max(report.max_all, eq.max_abs);
        report.max_retained = std::max(report.max_retained, eq.max_abs);
        any = any || eq.points > 0;
    }
    if (!any) {
        throw DomainError("window interior is empty; no recurrence can be evaluated");
    }
    return report;
}

/// Reduced kernel K indexed by the difference m - n, one axis range
/// [-(size-1), size-1] per window axis.
struct SeparableReduction {
    std::vector<AxisRange> difference_axes;
    std::vector<cplx> K;
    std::vector<bool> present;
    double defect = 0.0; ///< max |K from any entry - K from the first entry| per difference

    [[nodiscard]] cplx at(std::span<const int> difference) const {
        return K[Window(difference_axes).index(difference)];
    }
};

inline SeparableReduction separable_reduce(const KernelTable &table,
                                           const DynamicalMap &map) {
    const int d = table.window.dimension();
    if (map.lattice.dimension() != d) {
        throw DimensionMismatch("map dimension does not match table");
    }
    SeparableReduction out;
    for (const auto &ax : table.window.axes()) {
        out.difference_axes.push_back({-(ax.size() - 1), ax.size() - 1});
    }
    const Window diffs(out.difference_axes);
    out.K.assign(diffs.sites(), {});
    out.present.assign(diffs.sites(), false);
    const auto sites = table.window.sites();
    std::vector<std::vector<int>> coords(sites);
    for (std::size_t s = 0; s < sites; ++s) {
        coords[s] = table.window.coords(s);
    }
    std::vector<int> delta(static_cast<std::size_t>(d));
    for (std::size_t n = 0; n < sites; ++n) {
        for (std::size_t m = 0; m < sites; ++m) {
            double phase = 0.0;
            for (int j = 0; j < d; ++j) {
                const auto jj = static_cast<std::size_t>(j);
                phase += 0.5 * (coords[n][jj] + coords[m][jj]) * map.f[jj];
                delta[jj] = coords[m][jj] - coords[n][jj];
            }
            const cplx k = table.entries(static_cast<Eigen::Index>(n),
                                         static_cast<Eigen::Index>(m)) *
                           std::polar(1.0, -phase);
            const auto slot = diffs.index(delta);
            if (!out.present[slot]) {
                out.present[slot] = true;
                out.K[slot] = k;
            } else {
                out.defect = std::max(out.defect, std::abs(k - out.K[slot]));
            }
        }
    }
    return out;
}

/// Coefficients of N' = alpha T + conj(alpha) T^dagger + beta N,
/// T' = gamma T + gamma_bar T^dagger + delta N.
struct MapCoefficients {
    cplx alpha;
    double beta = 1.0;
    cplx gamma{1.0, 0.0};
    cplx gamma_bar;
    cplx delta;
};

struct MapConstraintReport {
    cplx determinant;       ///< gamma beta - alpha delta (1 for the identity map)
    cplx alpha_delta;       ///< conj(alpha) delta - gamma_bar beta
    cplx delta_gamma;       ///< delta conj(gamma) - conj(delta) gamma
    cplx delta_gamma_bar;   ///< delta conj(gamma_bar) - conj(delta) gamma_bar
    double unitarity_residual = 0.0;  ///< interior max |T' T'^dagger - 1|
    double commutator_residual = 0.0; ///< interior max |[N', T'] - T'|
};

/// Evaluates the algebraic constraint expressions and, independently, the
/// operator identities on truncated matrices. Neither is assumed to imply
/// the other.
inline MapConstraintReport check_map_constraints(const MapCoefficients &k,
                                                 int truncation) {
    if (truncation < 8) {
        throw DomainError("truncation must be at least 8 sites");
    }
    MapConstraintReport report;
    report.determinant = k.gamma * k.beta - k.alpha * k.delta;
    report.alpha_delta = std::conj(k.alpha) * k.delta - k.gamma_bar * k.beta;
    report.delta_gamma = k.delta * std::conj(k.gamma) - std::conj(k.delta) * k.gamma;
    report.delta_gamma_bar =
        k.delta * std::conj(k.gamma_bar) - std::conj(k.delta) * k.gamma_bar;

    const auto ops = build_operator_matrices(truncation);
    const Eigen::MatrixXcd &T = ops.T;
    const Eigen::MatrixXcd Td = T.adjoint();
    const Eigen::MatrixXcd Np = k.alpha * T + std::conj(k.alpha) * Td + k.beta * ops.N;
    const Eigen::MatrixXcd Tp = k.gamma * T + k.gamma_bar * Td + k.delta * ops.N;
    const Eigen::MatrixXcd unit = Tp * Tp.adjoint();
    const Eigen::MatrixXcd comm = Np * Tp - Tp * Np - Tp;
    constexpr int margin = 2;
    for (int a = margin; a < truncation - margin; ++a) {
        for (int b = margin; b < truncation - margin; ++b) {
            const double expected = a == b ? 1.0 : 0.0;
            report.unitarity_residual =
                std::max(report.unitarity_residual, std::abs(unit(a, b) - expected));
            report.commutator_residual =
                std::max(report.commutator_residual, std::abs(comm(a, b)));
        }
    }
    return report;
}

} // namespace wstark
