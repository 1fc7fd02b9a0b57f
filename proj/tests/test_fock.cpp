// Copyright 2026 The homsync Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>

#include <gtest/gtest.h>

#include "homsync/error.hpp"
#include "homsync/fock.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace homsync;
using homsync::fixtures::max_abs_diff;

namespace {

const FockCutoff kCut(5);

TwoModeState hom_density() {
    CMatrix rho = CMatrix::Zero(kCut.two_mode_dim(), kCut.two_mode_dim());
    const int a = kCut.index(2, 0), b = kCut.index(0, 2);
    rho(a, a) = rho(b, b) = 0.5;
    rho(a, b) = rho(b, a) = -0.5;
    return TwoModeState(kCut, rho);
}

double coincidence(const TwoModeState& s) {
    double c = 0.0;
    for (int a = 1; a < s.cutoff().dim(); ++a) {
        for (int b = 1; b < s.cutoff().dim(); ++b) c += s.population(a, b);
    }
    return c;
}

}  // namespace

TEST(FockCutoff, RejectsSmallCutoff) {
    EXPECT_THROW(FockCutoff(1), ConfigError);
    EXPECT_EQ(FockCutoff(2).dim(), 3);
    EXPECT_EQ(kCut.two_mode_dim(), 36);
    EXPECT_EQ(kCut.index(2, 3), 15);
}

TEST(TwoModeState, ValidatesInvariants) {
    EXPECT_NO_THROW(hom_density().validate());
    CMatrix bad = CMatrix::Identity(36, 36);
    EXPECT_THROW(TwoModeState(kCut, bad).validate(), NumericalError);
    CMatrix nonherm = CMatrix::Zero(36, 36);
    nonherm(0, 0) = 1.0;
    nonherm(0, 1) = 0.1;
    EXPECT_THROW(TwoModeState(kCut, nonherm), NumericalError);
    EXPECT_THROW(TwoModeState(kCut, CMatrix::Identity(9, 9)), ConfigError);
}

TEST(SourceModel, Validation) {
    EXPECT_NO_THROW((SourceModel{0.3, 0.6, 0.1}.validate()));
    EXPECT_THROW((SourceModel{0.3, 0.6, 0.2}.validate()), ConfigError);
    EXPECT_THROW((SourceModel{-0.1, 1.1, 0.0}.validate()), ConfigError);
    const auto s = SourceModel::from_p1_p2(0.6, 0.03).state(kCut);
    EXPECT_NEAR(s.population(0), 0.37, 1e-15);
    EXPECT_NEAR(s.population(1), 0.6, 1e-15);
    EXPECT_NEAR(s.population(2), 0.03, 1e-15);
}

TEST(BeamSplitter, HomIdentity) {
    const auto out = beam_splitter_apply(TwoModeState::fock(kCut, 1, 1), 0.5);
    EXPECT_LT(max_abs_diff(out.rho(), hom_density().rho()), 1e-12);
    EXPECT_EQ(out.population(1, 1), 0.0);
    EXPECT_LT(max_abs_diff(hom_state(kCut).rho(), hom_density().rho()), 1e-15);
}

TEST(BeamSplitter, IdentityTransmittance) {
    const auto rho = fixtures::random_two_mode(kCut, 4, 11);
    EXPECT_LT(max_abs_diff(beam_splitter_apply(rho, 1.0).rho(), rho.rho()), 1e-14);
}

TEST(BeamSplitter, RejectsBadTransmittance) {
    EXPECT_THROW(beam_splitter_apply(hom_density(), 1.5), ConfigError);
    EXPECT_THROW(beam_splitter_apply(hom_density(), -0.1), ConfigError);
}

TEST(BeamSplitter, LeakageRaises) {
    EXPECT_THROW(beam_splitter_apply(TwoModeState::fock(kCut, 5, 5), 0.5), NumericalError);
}

TEST(BeamSplitter, UnitarityOnRandomStates) {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const auto rho = fixtures::random_two_mode(kCut, kCut.n_max() - 2, seed);
        for (double t : {0.1, 0.5, 0.83}) {
            const auto out = beam_splitter_apply(rho, t);
            EXPECT_NEAR(out.trace(), 1.0, 1e-12);
            EXPECT_NEAR(out.purity(), rho.purity(), 1e-10);
            const auto back = beam_splitter_inverse_apply(out, t);
            EXPECT_LT(max_abs_diff(back.rho(), rho.rho()), 1e-10);
        }
    }
}

TEST(BeamSplitter, RoundTripFidelity) {
    const CVector psi = hom_vector(kCut, 0.3);
    const auto back = beam_splitter_inverse_apply(beam_splitter_apply(TwoModeState::pure(kCut, psi), 0.5), 0.5);
    EXPECT_NEAR(back.fidelity(psi), 1.0, 1e-10);
}

TEST(BeamSplitter, AmplitudesMatchFourModeOracle) {
    // With full overlap the oracle is the plain two-mode splitter.
    for (int n1 = 0; n1 <= 3; ++n1) {
        for (int n2 = 0; n2 + n1 <= 5; ++n2) {
            const auto counts = oracle::four_mode_counts(n1, n2, 1.0);
            const auto amps = beam_splitter_output(n1, n2, 0.5);
            for (int m1 = 0; m1 <= n1 + n2; ++m1) {
                EXPECT_NEAR(amps[m1] * amps[m1], counts[m1][n1 + n2 - m1], 1e-12) << n1 << n2 << m1;
            }
        }
    }
}

TEST(PhaseShift, HomRotation) {
    EXPECT_LT(max_abs_diff(phase_shift_apply(hom_density(), Mode::kSecond, 0.0).rho(), hom_density().rho()), 1e-15);
    for (double theta : {0.2, 1.0, 2.5}) {
        const auto rotated = phase_shift_apply(hom_density(), Mode::kSecond, theta);
        EXPECT_LT(max_abs_diff(rotated.rho(), hom_state(kCut, theta).rho()), 1e-12);
        EXPECT_NEAR(rotated.trace(), 1.0, 1e-15);
    }
}

TEST(PhaseShift, NumberDiagonalInvariant) {
    const auto rho = TwoModeState::product(SourceModel{0.2, 0.5, 0.3}.state(kCut), SourceModel{0.4, 0.6, 0.0}.state(kCut));
    EXPECT_LT(max_abs_diff(phase_shift_apply(rho, Mode::kFirst, 0.7).rho(), rho.rho()), 1e-15);
}

TEST(LossChannel, SinglePhoton) {
    const auto out = loss_channel(SingleModeState::fock(kCut, 1), 0.3);
    EXPECT_NEAR(out.population(1), 0.3, 1e-15);
    EXPECT_NEAR(out.population(0), 0.7, 1e-15);
    EXPECT_LT(max_abs_diff(loss_channel(SingleModeState::fock(kCut, 0), 0.4).rho(), SingleModeState::fock(kCut, 0).rho()),
              1e-15);
    EXPECT_THROW(loss_channel(SingleModeState::fock(kCut, 0), 1.2), ConfigError);
}

TEST(LossChannel, TwoPhotonMatchesDilation) {
    const double eta = 0.37;
    const auto direct = loss_channel(SingleModeState::fock(kCut, 2), eta);
    // Dilation: the photon mode meets a vacuum ancilla on a splitter of transmittance eta.
    const auto dilated = partial_trace(beam_splitter_apply(TwoModeState::fock(kCut, 2, 0), eta), Mode::kFirst);
    EXPECT_LT(max_abs_diff(direct.rho(), dilated.rho()), 1e-12);
    EXPECT_NEAR(direct.population(2), eta * eta, 1e-12);
    EXPECT_NEAR(direct.population(1), 2 * eta * (1 - eta), 1e-12);
    EXPECT_NEAR(direct.population(0), (1 - eta) * (1 - eta), 1e-12);
}

TEST(LossChannel, Semigroup) {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const auto rho = fixtures::random_single_mode(kCut, 5, seed);
        const auto twice = loss_channel(loss_channel(rho, 0.8), 0.6);
        const auto once = loss_channel(rho, 0.48);
        EXPECT_LT(max_abs_diff(twice.rho(), once.rho()), 1e-10);
        EXPECT_NEAR(once.trace(), 1.0, 1e-12);
    }
}

TEST(LossChannel, PurityDecayLaw) {
    const double p = 0.602, tau = 500.0, life = 2300.0;
    const auto out = loss_channel(SourceModel::from_p1_p2(p, 0.0).state(kCut), std::exp(-tau / life));
    EXPECT_NEAR(out.population(1), p * std::exp(-tau / life), 1e-15);
}

TEST(PartialTrace, Examples) {
    EXPECT_NEAR(partial_trace(TwoModeState::fock(kCut, 1, 0), Mode::kFirst).population(1), 1.0, 1e-15);
    const auto reduced = partial_trace(hom_density(), Mode::kFirst);
    EXPECT_NEAR(reduced.population(0), 0.5, 1e-15);
    EXPECT_NEAR(reduced.population(2), 0.5, 1e-15);
    EXPECT_TRUE(reduced.is_number_diagonal());
    const auto a = fixtures::random_single_mode(kCut, 3, 4), b = fixtures::random_single_mode(kCut, 4, 5);
    EXPECT_LT(max_abs_diff(partial_trace(TwoModeState::product(a, b), Mode::kSecond).rho(), b.rho()), 1e-14);
}

TEST(HomWithOverlap, CoincidenceLaw) {
    const auto one = SingleModeState::fock(kCut, 1);
    for (double c : {0.0, 0.1, 0.25, 0.5, 0.76, 0.992, 1.0}) {
        const auto out = hom_with_overlap(one, one, c);
        EXPECT_NEAR(out.population(1, 1), (1 - c) / 2, 1e-12);
        const auto counts = oracle::four_mode_counts(1, 1, c);
        EXPECT_NEAR(out.population(1, 1), counts[1][1], 1e-12);
    }
}

TEST(HomWithOverlap, NumberDistributionMatchesOracle) {
    const std::vector<double> p1{0.35, 0.6, 0.05}, p2{0.3, 0.64, 0.06};
    const auto in1 = SingleModeState::diagonal(kCut, p1), in2 = SingleModeState::diagonal(kCut, p2);
    for (double c : {0.0, 0.4, 0.992}) {
        const auto out = hom_with_overlap(in1, in2, c);
        const auto counts = oracle::four_mode_counts(p1, p2, c);
        for (int a = 0; a <= 4; ++a) {
            for (int b = 0; a + b <= 4; ++b) EXPECT_NEAR(out.population(a, b), counts[a][b], 1e-12) << a << b << c;
        }
        out.validate();
    }
}

TEST(HomWithOverlap, FullOverlapIsBeamSplitter) {
    const auto in1 = SourceModel{0.3, 0.6, 0.1}.state(kCut), in2 = SourceModel{0.4, 0.55, 0.05}.state(kCut);
    const auto expected = beam_splitter_apply(TwoModeState::product(in1, in2), 0.5);
    EXPECT_LT(max_abs_diff(hom_with_overlap(in1, in2, 1.0).rho(), expected.rho()), 1e-10);
}

TEST(HomWithOverlap, RejectsBadInputs) {
    const auto one = SingleModeState::fock(kCut, 1);
    EXPECT_THROW(hom_with_overlap(one, one, 1.2), ConfigError);
    EXPECT_THROW(hom_with_overlap(fixtures::random_single_mode(kCut, 2, 3), one, 0.5), ConfigError);
}

TEST(Coincidence, HelperAgrees) {
    EXPECT_NEAR(coincidence(hom_with_overlap(SingleModeState::fock(kCut, 1), SingleModeState::fock(kCut, 1), 0.0)), 0.5,
                1e-12);
}
