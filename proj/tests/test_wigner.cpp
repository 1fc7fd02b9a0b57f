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
#include <random>

#include <gtest/gtest.h>

#include "homsync/error.hpp"
#include "homsync/quadrature.hpp"
#include "homsync/wigner.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace homsync;

namespace {
const FockCutoff kCut(5);
}

TEST(FockWigner, Anchors) {
    EXPECT_NEAR(fock_wigner_element(0, 0, 0, 0).real(), 1.0 / M_PI, 1e-15);
    EXPECT_NEAR(fock_wigner_element(1, 1, 0, 0).real(), -1.0 / M_PI, 1e-15);
    EXPECT_NEAR(oracle::wigner_integral(1, 1, 0, 0).real(), -1.0 / M_PI, 1e-9);
    EXPECT_THROW(fock_wigner_element(6, 0, 0, 0, kCut), ConfigError);
    EXPECT_THROW(fock_wigner_element(-1, 0, 0, 0), ConfigError);
}

TEST(FockWigner, MatchesIntegralOracle) {
    std::mt19937_64 rng(2026);
    std::uniform_int_distribution<int> idx(0, 5);
    std::uniform_real_distribution<double> coord(-2.5, 2.5);
    for (int k = 0; k < 20; ++k) {
        const int m = idx(rng), n = idx(rng);
        const double x = coord(rng), p = coord(rng);
        const Complex closed = fock_wigner_element(m, n, x, p);
        const Complex integral = oracle::wigner_integral(m, n, x, p);
        EXPECT_NEAR(closed.real(), integral.real(), 1e-6) << m << n << " " << x << " " << p;
        EXPECT_NEAR(closed.imag(), integral.imag(), 1e-6) << m << n << " " << x << " " << p;
    }
}

TEST(FockWigner, Hermiticity) {
    for (int m = 0; m <= 5; ++m) {
        for (int n = 0; n <= 5; ++n) {
            const Complex a = fock_wigner_element(m, n, 0.7, -1.3), b = fock_wigner_element(n, m, 0.7, -1.3);
            EXPECT_NEAR(std::abs(a - std::conj(b)), 0.0, 1e-15);
        }
    }
}

TEST(TwoModeWigner, VacuumAndHom) {
    EXPECT_NEAR(two_mode_wigner(TwoModeState::fock(kCut, 0, 0), 0, 0, 0, 0), 1.0 / (M_PI * M_PI), 1e-15);
    const auto hom = hom_state(kCut);
    EXPECT_GT(two_mode_wigner(hom, 0, 0, 0, 0), 0.0);
    for (double sx : {-1.0, 1.0}) {
        for (double sy : {-1.0, 1.0}) EXPECT_LT(two_mode_wigner(hom, sx * 0.8, 0, sy * 0.8, 0), 0.0);
    }
}

TEST(TwoModeWigner, SinglePhotonNegativityBound) {
    for (double p : {0.0, 0.3, 0.5, 0.7, 1.0}) {
        const auto rho = TwoModeState::product(SourceModel{1 - p, p, 0}.state(kCut), SingleModeState::fock(kCut, 0));
        EXPECT_NEAR(two_mode_wigner(rho, 0, 0, 0, 0), (1 - 2 * p) / (M_PI * M_PI), 1e-14);
    }
}

TEST(TwoModeWigner, RealForHermitianStates) {
    // two_mode_wigner returns the real part; the imaginary part must vanish.
    const auto rho = fixtures::random_two_mode(kCut, 5, 19);
    const auto& c = rho.cutoff();
    Complex sum = 0.0;
    for (int m1 = 0; m1 < c.dim(); ++m1)
        for (int m2 = 0; m2 < c.dim(); ++m2)
            for (int n1 = 0; n1 < c.dim(); ++n1)
                for (int n2 = 0; n2 < c.dim(); ++n2)
                    sum += rho.element(m1, m2, n1, n2) * fock_wigner_element(m1, n1, 0.3, -0.4) *
                           fock_wigner_element(m2, n2, 1.1, 0.2);
    EXPECT_NEAR(sum.imag(), 0.0, 1e-12);
    EXPECT_NEAR(sum.real(), two_mode_wigner(rho, 0.3, -0.4, 1.1, 0.2), 1e-12);
}

TEST(TwoModeWigner, Normalization) {
    const FockCutoff small(3);
    const auto rho = fixtures::random_two_mode(small, 3, 4);
    const double h = 1.0 / 3.0;
    double sum = 0.0;
    for (double x1 = -5; x1 <= 5 + 1e-9; x1 += h)
        for (double p1 = -5; p1 <= 5 + 1e-9; p1 += h)
            for (double x2 = -5; x2 <= 5 + 1e-9; x2 += h)
                for (double p2 = -5; p2 <= 5 + 1e-9; p2 += h) sum += two_mode_wigner(rho, x1, p1, x2, p2);
    EXPECT_NEAR(sum * std::pow(h, 4), 1.0, 1e-3);
}

TEST(TwoModeWigner, MarginalMatchesJointDensity) {
    const auto rho = fixtures::random_two_mode(kCut, 4, 6);
    const double h = 0.1;
    for (auto [x1, x2] : {std::pair{0.0, 0.0}, std::pair{0.7, -1.2}, std::pair{-1.5, 0.4}}) {
        double sum = 0.0;
        for (double p1 = -7; p1 <= 7; p1 += h)
            for (double p2 = -7; p2 <= 7; p2 += h) sum += two_mode_wigner(rho, x1, p1, x2, p2);
        EXPECT_NEAR(sum * h * h, joint_density(rho, 0, 0, x1, x2), 1e-4);
    }
}

TEST(WignerSlice, VacuumPeak) {
    const auto s = wigner_slice(TwoModeState::fock(kCut, 0, 0), SlicePlane{}, AxisGrid{-2, 2, 0.1}, AxisGrid{-2, 2, 0.1});
    EXPECT_GT(s.values.minCoeff(), 0.0);
    EXPECT_NEAR(s.max_row, 0.0, 1e-12);
    EXPECT_NEAR(s.max_col, 0.0, 1e-12);
    EXPECT_NEAR(s.max_value, 1.0 / (M_PI * M_PI), 1e-15);
}

TEST(WignerSlice, HomCloverSymmetry) {
    const AxisGrid g{-3, 3, 0.1};
    const auto s = wigner_slice(hom_state(kCut), SlicePlane{}, g, g);
    const int n = g.size();
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            EXPECT_NEAR(s.values(i, j), s.values(n - 1 - i, n - 1 - j), 1e-14);
            EXPECT_NEAR(s.values(i, j), s.values(j, i), 1e-14);
        }
    }
    EXPECT_LT(s.min_value, 0.0);
    EXPECT_GT(s.values(n / 2, n / 2), 0.0);
    const double bound = 36.0 / (M_PI * M_PI);
    EXPECT_LT(s.values.cwiseAbs().maxCoeff(), bound);
}

TEST(WignerSlice, PlaneAndAxisValidation) {
    EXPECT_EQ(parse_axis("p2"), PhaseAxis::kP2);
    EXPECT_THROW(parse_axis("q1"), ConfigError);
    EXPECT_THROW(wigner_slice(hom_state(kCut), SlicePlane{PhaseAxis::kX1, PhaseAxis::kX1}), ConfigError);
    EXPECT_THROW(wigner_slice(hom_state(kCut), SlicePlane{}, AxisGrid{1, 0, 0.1}), ConfigError);
    const SlicePlane plane{PhaseAxis::kP1, PhaseAxis::kX2, {0.0, 0.0, 0.0, 0.5}};
    const auto s = wigner_slice(hom_state(kCut), plane, AxisGrid{-1, 1, 0.5}, AxisGrid{-1, 1, 0.5});
    EXPECT_NEAR(s.values(1, 3), two_mode_wigner(hom_state(kCut), 0.0, -0.5, 0.5, 0.5), 1e-15);
}
