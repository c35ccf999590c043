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

#include "wstark/drive.hpp"
#include "wstark/errors.hpp"
#include "wstark/lattice.hpp"

#include <gtest/gtest.h>

#include <numbers>

using namespace wstark;
using std::numbers::pi;

namespace {

DriveProtocol chain_drive(Signal alpha, Signal beta) {
    return DriveProtocol({std::move(alpha)}, {std::move(beta)});
}

} // namespace

TEST(PhaseF, ConstantField) {
    const auto drive = chain_drive(Constant{1.0}, Constant{0.5});
    EXPECT_NEAR(phase_f(drive, chain_lattice(), 0, 2.0), 1.0, 1e-14);
}

TEST(PhaseF, ZeroFieldStaysZero) {
    const auto drive = chain_drive(Constant{1.0}, Constant{0.0});
    for (double t : {0.0, 0.3, 7.0}) {
        EXPECT_EQ(phase_f(drive, chain_lattice(), 0, t), 0.0);
    }
}

TEST(PhaseF, HarmonicFieldIntegratesToSine) {
    const auto drive = chain_drive(Constant{1.0}, Harmonic{1.0, 1.0, 0.0});
    EXPECT_NEAR(phase_f(drive, chain_lattice(), 0, pi / 2), 1.0, 1e-12);
}

TEST(AmplitudeF, NoFieldIsLinearInTime) {
    const auto drive = chain_drive(Constant{0.7}, Constant{0.0});
    const auto F = amplitude_F(drive, chain_lattice(), 0, 0, 2.5);
    EXPECT_NEAR(std::abs(F - cplx(0.0, -0.7 * 2.5)), 0.0, 1e-13);
}

TEST(AmplitudeF, ConstantDriveAntiderivative) {
    const cplx alpha = std::polar(1.3, 0.4);
    const double beta = 0.7;
    const auto drive = chain_drive(Constant{alpha}, Constant{beta});
    for (double t : {0.1, 1.0, 3.7, 9.0}) {
        const cplx expected = -(alpha / beta) * (std::exp(cplx(0.0, beta * t)) - 1.0);
        EXPECT_NEAR(std::abs(amplitude_F(drive, chain_lattice(), 0, 0, t) - expected), 0.0,
                    1e-12)
            << "t = " << t;
        const auto closed = closed_form_constant(alpha, beta, t);
        EXPECT_NEAR(std::abs(closed.F - expected), 0.0, 1e-13);
        EXPECT_NEAR(closed.f, beta * t, 1e-15);
    }
}

TEST(AmplitudeF, VanishesAtZeroTime) {
    const auto drive = chain_drive(Harmonic{1.0, 2.0, 0.3}, Harmonic{0.4, 1.0, 0.0});
    const auto phases = phase_integrals(drive, chain_lattice(), 0.0);
    EXPECT_EQ(phases.f[0], 0.0);
    EXPECT_EQ(phases.amplitude[0], cplx(0.0, 0.0));
}

TEST(ClosedFormConstant, Examples) {
    auto a = closed_form_constant(1.0, 0.0, 3.0);
    EXPECT_EQ(a.f, 0.0);
    EXPECT_NEAR(std::abs(a.F - cplx(0.0, -3.0)), 0.0, 1e-15);

    auto b = closed_form_constant(1.0, 0.5, 4 * pi);
    EXPECT_NEAR(b.f, 2 * pi, 1e-15);
    EXPECT_NEAR(std::abs(b.F), 0.0, 1e-15);

    auto c = closed_form_constant(0.0, 1.0, 1.0);
    EXPECT_NEAR(c.f, 1.0, 1e-15);
    EXPECT_EQ(std::abs(c.F), 0.0);
}

TEST(ClosedFormConstant, SmallFieldIsContinuous) {
    // the series branch and the direct formula must agree across the switch
    const cplx alpha = std::polar(0.9, -1.1);
    for (double beta : {1e-9, 1e-6, 1e-4, 2e-4, 1e-3}) {
        const double t = 3.0;
        const auto got = closed_form_constant(alpha, beta, t);
        const long double bt = static_cast<long double>(beta) * t;
        // -(alpha/beta)(e^{i b t} - 1) = -i alpha t * (e^{ibt}-1)/(ibt)
        const std::complex<long double> ratio =
            (std::exp(std::complex<long double>(0.0L, bt)) - 1.0L) /
            std::complex<long double>(0.0L, bt);
        const cplx expected = cplx(0.0, -t) * alpha *
                              cplx(static_cast<double>(ratio.real()),
                                   static_cast<double>(ratio.imag()));
        EXPECT_NEAR(std::abs(got.F - expected), 0.0, 1e-12) << "beta = " << beta;
    }
}

TEST(PhaseIntegrals, HarmonicDriveMatchesQuadrature) {
    const cplx a0 = std::polar(1.1, 0.3);
    const Harmonic alpha{a0, 2.0, 0.5};
    const Harmonic beta{0.8, 1.3, -0.4};
    const auto drive = chain_drive(alpha, beta);
    // f has a closed form; G is integrated by adaptive Simpson
    auto f = [&](double s) {
        return 0.8 * (std::sin(1.3 * s - 0.4) - std::sin(-0.4)) / 1.3;
    };
    for (double t : {0.5, 1.0, 5.0}) {
        const auto G = oracle::simpson(
            [&](double s) {
                return cplx(0.0, -1.0) * a0 * std::cos(2.0 * s + 0.5) *
                       std::exp(cplx(0.0, f(s)));
            },
            0.0, t, 1e-14);
        const auto phases = phase_integrals(drive, chain_lattice(), t);
        EXPECT_NEAR(phases.f[0], f(t), 1e-12);
        EXPECT_NEAR(std::abs(phases.amplitude[0] - G), 0.0, 1e-11) << "t = " << t;
        EXPECT_LT(phases.error_estimate, 1e-10);
    }
}

TEST(PhaseIntegrals, TriangularSignsFollowSigma) {
    const cplx a = std::polar(1.0, pi / 6);
    const auto drive = DriveProtocol::constant(std::vector<cplx>{a, a, a},
                                               std::vector<double>{0.3, 0.3});
    const auto lat = triangular_lattice();
    const double t = 1.0;
    const auto phases = phase_integrals(drive, lat, t);
    // beta_3 = -beta_1 - beta_2
    EXPECT_NEAR(phases.f[2], -2 * 0.3 * t, 1e-14);
    EXPECT_EQ(phases.F(0, 1), cplx(0.0, 0.0));
    EXPECT_EQ(phases.F(1, 0), cplx(0.0, 0.0));
    EXPECT_EQ(phases.F(0, 2), -phases.amplitude[2]);
    EXPECT_EQ(phases.F(1, 2), -phases.amplitude[2]);
    const auto third = closed_form_constant(a, -0.6, t);
    EXPECT_NEAR(std::abs(phases.amplitude[2] - third.F), 0.0, 1e-13);
}

TEST(PhaseIntegrals, SampledCubicTracksSmoothDrive) {
    // cos(t) sampled every 0.05; a four-point cubic is accurate to ~dt^4
    std::vector<cplx> values;
    for (int k = 0; k <= 120; ++k) {
        values.push_back(std::cos(0.05 * k));
    }
    const auto drive = chain_drive(Constant{1.0}, Sampled{0.0, 0.05, values, 3});
    EXPECT_NEAR(drive.t_max(), 6.0, 1e-12);
    EXPECT_NEAR(phase_f(drive, chain_lattice(), 0, pi / 2), 1.0, 1e-6);
    EXPECT_THROW((void)phase_f(drive, chain_lattice(), 0, 6.5), DomainError);
}

TEST(PhaseIntegrals, SampledLinearIsExactForLinearData) {
    std::vector<cplx> values{0.0, 0.5, 1.0, 1.5};
    const auto drive = chain_drive(Constant{1.0}, Sampled{0.0, 0.5, values, 1});
    // beta(t) = t, f(t) = t^2 / 2
    EXPECT_NEAR(phase_f(drive, chain_lattice(), 0, 1.2), 0.72, 1e-12);
}

TEST(Sampled, FromPointsRejectsNonUniformGrid) {
    const std::vector<double> t{0.0, 0.1, 0.25};
    const std::vector<cplx> v{1.0, 1.0, 1.0};
    EXPECT_THROW(Sampled::from_points(t, v), InputError);
    const std::vector<double> back{0.0, -0.1, -0.2};
    EXPECT_THROW(Sampled::from_points(back, v), InputError);
    const std::vector<double> ok{0.0, 0.1, 0.2};
    EXPECT_NO_THROW(Sampled::from_points(ok, v));
}

TEST(DriveProtocol, Validation) {
    EXPECT_THROW(DriveProtocol({Constant{1.0}}, {}), InputError);
    EXPECT_THROW(DriveProtocol({Constant{1.0}}, {Constant{0.1}, Constant{0.1}}), InputError);
    EXPECT_THROW(DriveProtocol({Constant{1.0}}, {Constant{cplx(0.1, 0.2)}}), InputError);
    EXPECT_THROW(DriveProtocol({Constant{std::nan("")}}, {Constant{0.1}}), InputError);
    const auto drive = chain_drive(Constant{1.0}, Constant{0.1});
    EXPECT_THROW(drive.require_compatible(square_lattice()), DimensionMismatch);
    EXPECT_THROW((void)phase_f(drive, chain_lattice(), 0, -1.0), DomainError);
}

TEST(Lattice, Builtins) {
    EXPECT_EQ(chain_lattice().sigma(0, 0), 1);
    const auto sq = square_lattice();
    EXPECT_EQ(sq.sigma(0, 0), 1);
    EXPECT_EQ(sq.sigma(0, 1), 0);
    EXPECT_EQ(sq.sigma(1, 1), 1);
    const auto tri = triangular_lattice();
    EXPECT_EQ(tri.shift(2), (std::vector<int>{-1, -1}));
    EXPECT_THROW(builtin_lattice("honeycomb"), InputError);
}

TEST(Lattice, RejectsNonPrimitiveBlock) {
    EXPECT_THROW(LatticeSpec(2, 2, {1, 1, 0, 1}), InputError);
    EXPECT_THROW(LatticeSpec(2, 1, {1, 0}), InputError);
    EXPECT_THROW(LatticeSpec(1, 2, {1, 0}), InputError);
}
