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

#include "support/oracles.hpp"

#include "wstark/errors.hpp"
#include "wstark/propagators.hpp"

#include <gtest/gtest.h>

#include <numbers>

using namespace wstark;
using std::numbers::pi;

namespace {

constexpr Convention both[] = {Convention::PaperMM, Convention::ForwardSchrodinger};

DriveProtocol constant_drive(std::vector<cplx> a, std::vector<double> b) {
    return DriveProtocol::constant(a, b);
}

const cplx tri_alpha = std::polar(1.0, pi / 6);

DriveProtocol triangular_drive() {
    return constant_drive({tri_alpha, tri_alpha, tri_alpha}, {0.3, 0.3});
}

double max_abs(const Eigen::MatrixXcd &m) { return m.cwiseAbs().maxCoeff(); }

} // namespace

TEST(Kernels, IdentityAtZeroTime) {
    const Window w1(std::vector<AxisRange>{{-7, 4}});
    const Window w2(std::vector<AxisRange>{{-3, 5}, {2, 9}});
    for (auto conv : both) {
        const auto a = kernel_1d(constant_drive({1.0}, {0.4}), 0.0, w1, conv);
        EXPECT_EQ(max_abs(a.entries - Eigen::MatrixXcd::Identity(12, 12)), 0.0);
        const auto b = kernel_square(constant_drive({1.0, 0.5}, {0.2, 0.1}), 0.0, w2, conv);
        EXPECT_EQ(max_abs(b.entries - Eigen::MatrixXcd::Identity(72, 72)), 0.0);
        const auto c = kernel_triangular(triangular_drive(), 0.0, w2, conv);
        EXPECT_EQ(max_abs(c.entries - Eigen::MatrixXcd::Identity(72, 72)), 0.0);
    }
}

TEST(Kernel1d, FreeChainMagnitudes) {
    const auto w = Window::symmetric(1, 30);
    const auto table =
        kernel_1d(constant_drive({1.0}, {0.0}), 1.0, w, Convention::ForwardSchrodinger);
    const std::vector<int> origin{0};
    EXPECT_NEAR(std::abs(table(origin, origin)), 0.2238907791412357, 1e-15);
    for (int k = -10; k <= 10; ++k) {
        const std::vector<int> n{k};
        EXPECT_NEAR(std::abs(table(n, origin)), std::abs(oracle::bessel_series(k, 2.0)),
                    1e-15);
    }
}

TEST(Kernel1d, ForwardMatchesMatrixExponential) {
    const auto w = Window::symmetric(1, 40);
    const auto lat = chain_lattice();
    for (auto [alpha, beta, t] :
         {std::tuple{cplx(1.0), 0.3, 2.0}, std::tuple{std::polar(0.8, 1.1), -0.7, 3.5},
          std::tuple{cplx(1.0), 0.0, 1.0}}) {
        const auto table =
            kernel_1d(constant_drive({alpha}, {beta}), t, w, Convention::ForwardSchrodinger);
        const auto H = oracle::dense_hamiltonian(lat, w, {alpha}, {beta});
        const auto U = oracle::static_propagator(H, t);
        EXPECT_LT(oracle::interior_gap(w, table.entries, U, 15), 1e-11);
    }
}

TEST(Kernel1d, HarmonicDriveMatchesTimeOrderedProduct) {
    const auto w = Window::symmetric(1, 30);
    const auto lat = chain_lattice();
    const Harmonic alpha{std::polar(1.0, 0.2), 1.5, 0.0};
    const Harmonic beta{0.6, 0.9, 0.3};
    const DriveProtocol drive({alpha}, {beta});
    const double t = 2.0;
    const auto table = kernel_1d(drive, t, w, Convention::ForwardSchrodinger);
    const auto U = oracle::driven_propagator(
        [&](double s) {
            return oracle::dense_hamiltonian(lat, w, {drive.alpha(0, s)}, {drive.beta(0, s)});
        },
        t, 400);
    EXPECT_LT(oracle::interior_gap(w, table.entries, U, 12), 1e-9);
}

TEST(Kernel1d, ConventionsAreAdjoints) {
    const auto w = Window::symmetric(1, 20);
    const auto drive = constant_drive({std::polar(1.2, 0.5)}, {0.45});
    const double t = 1.7;
    const auto paper = kernel_1d(drive, t, w, Convention::PaperMM);
    const auto fwd = kernel_1d(drive, t, w, Convention::ForwardSchrodinger);
    EXPECT_LT(max_abs(fwd.entries - paper.entries.adjoint()), 1e-15);
    // forward(n, m) = (-1)^{n-m} e^{-i(n+m) f} paper(n, m)
    const double f = 0.45 * t;
    for (int n = -20; n <= 20; ++n) {
        for (int m = -20; m <= 20; ++m) {
            const std::vector<int> a{n};
            const std::vector<int> b{m};
            const double sign = (n - m) % 2 ? -1.0 : 1.0;
            EXPECT_NEAR(std::abs(fwd(a, b) - sign * std::polar(1.0, -(n + m) * f) * paper(a, b)),
                        0.0, 1e-14);
        }
    }
    EXPECT_LT(max_abs(paper.converted(Convention::ForwardSchrodinger).entries - fwd.entries),
              1e-15);
}

TEST(Kernel1d, BlochRevival) {
    const auto w = Window::symmetric(1, 30);
    const auto table = kernel_1d(constant_drive({1.0}, {0.5}), 2 * pi / 0.5, w,
                                 Convention::ForwardSchrodinger);
    const Eigen::MatrixXd mag = table.entries.cwiseAbs();
    EXPECT_LT((mag - Eigen::MatrixXd::Identity(61, 61)).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(Kernel1d, UnitaryOnAdequateWindow) {
    const auto drive = constant_drive({1.0}, {0.2});
    const double t = 3.0;
    const auto F = std::abs(closed_form_constant(1.0, 0.2, t).F);
    const int radius = static_cast<int>(std::ceil(2 * F + 25));
    const auto w = Window::symmetric(1, radius);
    const auto table = kernel_1d(drive, t, w, Convention::PaperMM);
    EXPECT_TRUE(table.warnings.empty());
    // interior rows and columns carry the full weight
    for (int k = -radius + 15; k <= radius - 15; ++k) {
        const auto idx = static_cast<Eigen::Index>(k + radius);
        EXPECT_NEAR(table.entries.row(idx).squaredNorm(), 1.0, 1e-12);
        EXPECT_NEAR(table.entries.col(idx).squaredNorm(), 1.0, 1e-12);
    }
}

TEST(Kernel1d, NarrowWindowWarns) {
    const auto table = kernel_1d(constant_drive({1.0}, {0.0}), 5.0, Window::symmetric(1, 8),
                                 Convention::PaperMM);
    ASSERT_EQ(table.warnings.size(), 1u);
    EXPECT_NE(table.warnings[0].find("truncation"), std::string::npos);
}

TEST(Kernel1d, ApplyKernel) {
    const auto w = Window::symmetric(1, 30);
    const auto table =
        kernel_1d(constant_drive({1.0}, {0.0}), 1.0, w, Convention::ForwardSchrodinger);
    Eigen::VectorXcd delta = Eigen::VectorXcd::Zero(61);
    delta(30) = 1.0;
    const auto psi = apply_kernel(table, delta);
    for (int k = -8; k <= 8; ++k) {
        EXPECT_NEAR(std::abs(psi(30 + k)), std::abs(oracle::bessel_series(k, 2.0)), 1e-15);
    }
    EXPECT_NEAR(psi.norm(), 1.0, 1e-12);
    EXPECT_THROW(apply_kernel(table, Eigen::VectorXcd::Zero(60)), DimensionMismatch);
}

TEST(KernelSquare, FactorizesIntoChainKernels) {
    const Window w(std::vector<AxisRange>{{-6, 6}, {-4, 7}});
    const cplx a1 = 1.0;
    const cplx a2 = std::polar(0.7, -0.3);
    const auto drive = constant_drive({a1, a2}, {0.3, -0.2});
    const double t = 1.0;
    for (auto conv : both) {
        const auto sq = kernel_square(drive, t, w, conv);
        const auto k1 = kernel_1d(constant_drive({a1}, {0.3}), t,
                                  Window(std::vector<AxisRange>{{-6, 6}}), conv);
        const auto k2 = kernel_1d(constant_drive({a2}, {-0.2}), t,
                                  Window(std::vector<AxisRange>{{-4, 7}}), conv);
        double worst = 0.0;
        for (int n1 = -6; n1 <= 6; ++n1) {
            for (int n2 = -4; n2 <= 7; ++n2) {
                for (int m1 = -6; m1 <= 6; ++m1) {
                    for (int m2 = -4; m2 <= 7; ++m2) {
                        const std::vector<int> n{n1, n2};
                        const std::vector<int> m{m1, m2};
                        const std::vector<int> a{n1}, b{m1}, c{n2}, d{m2};
                        worst = std::max(worst, std::abs(sq(n, m) - k1(a, b) * k2(c, d)));
                    }
                }
            }
        }
        EXPECT_LT(worst, 1e-15);
    }
}

TEST(KernelSquare, IdleAxisIsDiagonal) {
    const auto w = Window::symmetric(2, 5);
    const auto sq = kernel_square(constant_drive({1.0, 0.0}, {0.3, 0.0}), 1.2, w,
                                  Convention::PaperMM);
    for (std::size_t r = 0; r < w.sites(); ++r) {
        for (std::size_t c = 0; c < w.sites(); ++c) {
            if (w.coords(r)[1] != w.coords(c)[1]) {
                EXPECT_EQ(sq.entries(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)),
                          cplx(0.0, 0.0));
            }
        }
    }
}

// The truncated matrix exponential leaks through the window edge; margin 8
// keeps that below 1e-11.
TEST(KernelTriangular, MatchesMatrixExponential) {
    const auto w = Window::symmetric(2, 11);
    const auto lat = triangular_lattice();
    const double t = 1.0;
    const auto table = kernel_triangular(triangular_drive(), t, w, Convention::ForwardSchrodinger);
    const auto H = oracle::dense_hamiltonian(lat, w, {tri_alpha, tri_alpha, tri_alpha}, {0.3, 0.3});
    EXPECT_LT(oracle::interior_gap(w, table.entries, oracle::static_propagator(H, t), 8), 1e-9);
}

TEST(KernelTriangular, AlternativeAdmissibleCouplings) {
    // alpha = [1, e^{i pi/4}, e^{i pi/4}] also meets the phase condition
    const auto w = Window::symmetric(2, 11);
    const std::vector<cplx> a{1.0, std::polar(1.0, pi / 4), std::polar(1.0, pi / 4)};
    const double t = 0.8;
    const auto table = kernel_triangular(constant_drive(a, {0.3, 0.3}), t, w,
                                         Convention::ForwardSchrodinger);
    const auto H = oracle::dense_hamiltonian(triangular_lattice(), w, a, {0.3, 0.3});
    EXPECT_LT(oracle::interior_gap(w, table.entries, oracle::static_propagator(H, t), 8), 1e-9);
}

TEST(KernelTriangular, ViolationThrowsWithDeviation) {
    const auto w = Window::symmetric(2, 4);
    const auto drive = constant_drive({1.0, 1.0, 1.0}, {0.3, 0.3});
    try {
        (void)kernel_triangular(drive, 1.0, w, Convention::PaperMM);
        FAIL() << "expected a constraint violation";
    } catch (const ConstraintViolation &e) {
        EXPECT_GT(e.deviation(), 0.1);
    }
    TriangularOptions lax;
    lax.enforce_constraint = false;
    const auto table = kernel_triangular(drive, 1.0, w, Convention::PaperMM, lax);
    EXPECT_FALSE(table.warnings.empty());
}

TEST(KernelTriangular, UnconstrainedFormDisagreesWithDynamics) {
    // with the check disabled the closed form is not the propagator
    const auto w = Window::symmetric(2, 10);
    const auto drive = constant_drive({1.0, 1.0, 1.0}, {0.3, 0.3});
    TriangularOptions lax;
    lax.enforce_constraint = false;
    const auto table = kernel_triangular(drive, 1.0, w, Convention::ForwardSchrodinger, lax);
    const auto H = oracle::dense_hamiltonian(triangular_lattice(), w, {1.0, 1.0, 1.0}, {0.3, 0.3});
    EXPECT_GT(oracle::interior_gap(w, table.entries, oracle::static_propagator(H, 1.0), 5), 1e-2);
}

TEST(KernelTriangular, NoThirdHoppingFactorizes) {
    const auto w = Window::symmetric(2, 6);
    const cplx a1 = std::polar(1.0, 0.4);
    const cplx a2 = std::polar(0.6, -1.2);
    const double t = 1.3;
    for (auto conv : both) {
        const auto tri = kernel_triangular(constant_drive({a1, a2, 0.0}, {0.3, -0.1}), t, w, conv);
        const auto sq = kernel_square(constant_drive({a1, a2}, {0.3, -0.1}), t, w, conv);
        EXPECT_LT(max_abs(tri.entries - sq.entries), 1e-14);
    }
}

TEST(PhaseConstraint, Examples) {
    const cplx i(0.0, 1.0);
    auto a = validate_phase_constraint(i, i, -1.0);
    EXPECT_TRUE(a.satisfied);
    EXPECT_NEAR(a.deviation, 0.0, 1e-15);
    auto b = validate_phase_constraint(1.0, 1.0, i);
    EXPECT_FALSE(b.satisfied);
    EXPECT_NEAR(b.deviation, pi / 2, 1e-15);
    EXPECT_TRUE(validate_phase_constraint(1.0, i, 0.0).satisfied);
}

TEST(ClosedFormKernel, Dispatch) {
    EXPECT_TRUE(has_closed_form(chain_lattice()));
    const LatticeSpec cubic(3, 3, {1, 0, 0, 0, 1, 0, 0, 0, 1});
    EXPECT_FALSE(has_closed_form(cubic));
    const auto drive = constant_drive({1.0, 1.0, 1.0}, {0.0, 0.0, 0.0});
    EXPECT_THROW(closed_form_kernel(cubic, drive, 1.0, Window::symmetric(3, 2),
                                    Convention::PaperMM),
                 InputError);
}
