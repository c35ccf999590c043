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
#include "wstark/oracle.hpp"
#include "wstark/propagators.hpp"

#include <gtest/gtest.h>

using namespace wstark;

namespace {

DriveProtocol constant_drive(std::vector<cplx> a, std::vector<double> b) {
    return DriveProtocol::constant(a, b);
}

} // namespace

TEST(TruncatedHamiltonian, MatchesHandAssembledMatrix) {
    const auto w = Window::symmetric(2, 3);
    const std::vector<cplx> a{std::polar(1.0, 0.2), std::polar(0.5, -1.0), cplx(0.3, 0.1)};
    const std::vector<double> b{0.4, -0.7};
    const TruncatedHamiltonian H(triangular_lattice(), w, constant_drive(a, b));
    const Eigen::MatrixXcd dense = Eigen::MatrixXcd(H.matrix_at(0.0));
    const auto ref = oracle::dense_hamiltonian(triangular_lattice(), w, a, b);
    EXPECT_LT((dense - ref).cwiseAbs().maxCoeff(), 1e-15);
    EXPECT_LT((dense - dense.adjoint()).cwiseAbs().maxCoeff(), 1e-15);
    EXPECT_TRUE(H.is_static());
}

TEST(IntegrateUnitary, ZeroHamiltonianIsIdentity) {
    const auto w = Window::symmetric(1, 5);
    const TruncatedHamiltonian H(chain_lattice(), w, constant_drive({0.0}, {0.0}));
    const auto U = integrate_unitary(H, 3.0, 0.1);
    EXPECT_EQ((U.entries - Eigen::MatrixXcd::Identity(11, 11)).cwiseAbs().maxCoeff(), 0.0);
    EXPECT_EQ(U.convention, Convention::ForwardSchrodinger);
}

TEST(IntegrateUnitary, TwoSiteRabi) {
    const Window w(std::vector<AxisRange>{{0, 1}});
    const TruncatedHamiltonian H(chain_lattice(), w, constant_drive({1.0}, {0.0}));
    const double t = 0.9;
    const auto U = integrate_unitary(H, t, 0.01);
    Eigen::Matrix2cd ref;
    ref << std::cos(t), cplx(0.0, -std::sin(t)), cplx(0.0, -std::sin(t)), std::cos(t);
    EXPECT_LT((U.entries - ref).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(IntegrateUnitary, SingleSiteAtOriginIsTrivial) {
    const Window w(std::vector<AxisRange>{{0, 0}});
    const TruncatedHamiltonian H(chain_lattice(), w, constant_drive({1.0}, {1.0}));
    const auto U = integrate_unitary(H, 2.0, 0.1);
    EXPECT_EQ(U.entries(0, 0), cplx(1.0, 0.0));
}

TEST(IntegrateUnitary, StaticChainMatchesExpm) {
    const auto w = Window::symmetric(1, 25);
    const std::vector<cplx> a{std::polar(1.0, 0.3)};
    const TruncatedHamiltonian H(chain_lattice(), w, constant_drive(a, {0.3}));
    const auto U = integrate_unitary(H, 2.0, 1e-3);
    const auto ref = oracle::static_propagator(oracle::dense_hamiltonian(chain_lattice(), w, a, {0.3}), 2.0);
    EXPECT_LT((U.entries - ref).cwiseAbs().maxCoeff(), 1e-6);
}

TEST(IntegrateUnitary, SecondOrderConvergence) {
    const auto w = Window::symmetric(1, 20);
    const std::vector<cplx> a{1.0};
    const TruncatedHamiltonian H(chain_lattice(), w, constant_drive(a, {0.3}));
    const auto ref = oracle::static_propagator(oracle::dense_hamiltonian(chain_lattice(), w, a, {0.3}), 2.0);
    const double e1 = (integrate_unitary(H, 2.0, 4e-3).entries - ref).cwiseAbs().maxCoeff();
    const double e2 = (integrate_unitary(H, 2.0, 2e-3).entries - ref).cwiseAbs().maxCoeff();
    EXPECT_NEAR(e1 / e2, 4.0, 0.1);
}

TEST(IntegrateUnitary, StaysUnitaryOverManySteps) {
    const auto w = Window::symmetric(1, 10);
    const DriveProtocol drive({Harmonic{1.0, 1.3, 0.0}}, {Harmonic{0.8, 0.7, 0.2}});
    const TruncatedHamiltonian H(chain_lattice(), w, drive);
    EXPECT_FALSE(H.is_static());
    const auto U = integrate_unitary(H, 10.0, 1e-3);
    const Eigen::MatrixXcd gram = U.entries.adjoint() * U.entries;
    EXPECT_LT((gram - Eigen::MatrixXcd::Identity(21, 21)).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(IntegrateUnitary, DrivenChainMatchesTimeOrderedProduct) {
    const auto w = Window::symmetric(1, 12);
    const DriveProtocol drive({Harmonic{std::polar(1.0, 0.5), 2.0, 0.0}}, {Harmonic{0.5, 1.0, 0.3}});
    const TruncatedHamiltonian H(chain_lattice(), w, drive);
    const auto U = integrate_unitary(H, 1.5, 5e-4);
    const auto ref = oracle::driven_propagator(
        [&](double s) { return Eigen::MatrixXcd(H.matrix_at(s)); }, 1.5, 300);
    EXPECT_LT((U.entries - ref).cwiseAbs().maxCoeff(), 1e-6);
}

TEST(IntegrateUnitary, RejectsBadArguments) {
    const TruncatedHamiltonian H(chain_lattice(), Window::symmetric(1, 3),
                                 constant_drive({1.0}, {0.0}));
    EXPECT_THROW(integrate_unitary(H, 1.0, 0.0), DomainError);
    EXPECT_THROW(integrate_unitary(H, 1.0, -1e-3), DomainError);
    EXPECT_THROW(integrate_unitary(H, -1.0, 1e-3), DomainError);
    EXPECT_THROW(integrate_unitary(H, 1.0, 1e-3, 10), DomainError);
}

TEST(IntegrateUnitary, SourceMarginLeavesOuterColumnsUnset) {
    const auto w = Window::symmetric(1, 10);
    const TruncatedHamiltonian H(chain_lattice(), w, constant_drive({1.0}, {0.2}));
    const auto partial = integrate_unitary(H, 1.0, 1e-2, 4);
    const auto full = integrate_unitary(H, 1.0, 1e-2);
    EXPECT_FALSE(partial.warnings.empty());
    EXPECT_EQ(compare_entries(partial, full, 4), 0.0);
    EXPECT_EQ(compare_entries(partial, full, 3), std::numeric_limits<double>::infinity());
}

TEST(CompareKernels, AgainstClosedForm) {
    const auto w = Window::symmetric(1, 40);
    const auto drive = constant_drive({1.0}, {0.3});
    const auto analytic = kernel_1d(drive, 2.0, w, Convention::ForwardSchrodinger);
    const auto numeric = integrate_unitary(TruncatedHamiltonian(chain_lattice(), w, drive), 2.0, 1e-3);
    EXPECT_LT(compare_kernels(analytic, numeric, 20), 1e-6);
    EXPECT_EQ(compare_kernels(analytic, analytic, 20), 0.0);
    // the PaperMM table is converted before comparing
    const auto paper = kernel_1d(drive, 2.0, w, Convention::PaperMM);
    EXPECT_LT(compare_kernels(paper, numeric, 20), 1e-6);
    EXPECT_GT(compare_entries(paper, numeric, 20), 0.1);
}

TEST(CompareKernels, Mismatches) {
    const auto drive = constant_drive({1.0}, {0.3});
    const auto a = kernel_1d(drive, 1.0, Window::symmetric(1, 10), Convention::PaperMM);
    const auto b = kernel_1d(drive, 1.0, Window::symmetric(1, 11), Convention::PaperMM);
    const auto c = kernel_1d(drive, 1.5, Window::symmetric(1, 10), Convention::PaperMM);
    EXPECT_THROW(compare_kernels(a, b, 2), DimensionMismatch);
    EXPECT_THROW(compare_kernels(a, c, 2), DimensionMismatch);
    EXPECT_THROW(compare_kernels(a, a, 11), DomainError);
}
