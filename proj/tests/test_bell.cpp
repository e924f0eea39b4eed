// Copyright 2026 The seqcert Authors
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

#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "seqcert/bell.hpp"

using namespace seqcert;

namespace {

const double kSqrt2 = std::sqrt(2.0);

CorrelatorSet ideal(double theta, double xi = 0.0) {
    return correlators_of(make_state(theta), optimal_alice_pair(theta), BlochObservable::sigma_z(), KrausPair(xi));
}

}  // namespace

TEST(Beta, ReferenceValues) {
    EXPECT_NEAR(beta_of_theta(kPi / 8), 2.0 / std::sqrt(3.0), 1e-15);
    EXPECT_NEAR(beta_of_theta(kPi / 16), 1.725712418922034, 1e-14);
    EXPECT_NEAR(beta_of_theta(kPi / 4), 0.0, 1e-15);
    EXPECT_THROW(beta_of_theta(0.0), DomainError);
    EXPECT_THROW(beta_of_theta(kPi / 2), DomainError);
}

TEST(Beta, StableGapMatchesDirectDifference) {
    for (double theta : {0.1, 0.3, kPi / 8, kPi / 4}) {
        EXPECT_NEAR(two_minus_beta_of_theta(theta), 2.0 - beta_of_theta(theta), 1e-15);
    }
    // Small angles: 2 - beta ~ 8 theta^2 keeps its relative precision.
    EXPECT_NEAR(two_minus_beta_of_theta(1e-10) / 8e-20, 1.0, 1e-9);
}

TEST(BellParams, Validation) {
    EXPECT_THROW(BellParams(0.5, 0.0), DomainError);
    EXPECT_THROW(BellParams(1.0, -0.1), DomainError);
    EXPECT_THROW(BellParams(1.0, 2.0), DomainError);
    EXPECT_THROW(BellParams(1.5, 1.4), DomainError);
    EXPECT_NO_THROW(BellParams(1.5, 1.0));
    EXPECT_THROW(BellParams::for_angle(0.0), DomainError);
    EXPECT_THROW(BellParams::for_angle(1.0), DomainError);
}

TEST(BellParams, Bounds) {
    EXPECT_NEAR(max_quantum_value(BellParams(1.0, 0.0)), 2 * kSqrt2, 1e-15);
    EXPECT_NEAR(max_quantum_value(BellParams::for_angle(kPi / 8)), std::sqrt(32.0 / 3.0), 1e-14);
    EXPECT_EQ(classical_bound(BellParams(1.0, 0.0)), 2.0);
    EXPECT_EQ(classical_bound(BellParams(1.5, 1.0)), 4.0);
}

TEST(BellValue, IdealSettingsReachTheMaximum) {
    for (double theta : {kPi / 4, kPi / 8, kPi / 16, 0.01}) {
        const BellParams p = BellParams::for_angle(theta);
        const double beta = beta_of_theta(theta);
        EXPECT_NEAR(bell_value(ideal(theta), p), 2 * kSqrt2 * std::sqrt(1 + beta * beta / 4), 1e-14);
    }
}

TEST(BellValue, ClassicalDeterministicStrategy) {
    // All outcomes +1: value beta + 2 alpha.
    const CorrelatorSet det{1, 1, 1, 1, 1, 1, 1, 1};
    const BellParams p(1.0, 0.5);
    EXPECT_EQ(bell_value(det, p), classical_bound(p));
}

TEST(BellValue, WeakMeasurementReference) {
    // theta = pi/4: I = sqrt2 (1 + cos 2 xi)
    const BellParams p = BellParams::for_angle(kPi / 4);
    EXPECT_NEAR(bell_value(ideal(kPi / 4, 0.01), p), 2.82814429146168, 1e-13);
    for (double xi : {0.0, 0.1, 0.5}) {
        EXPECT_NEAR(bell_value(ideal(kPi / 4, xi), p), kSqrt2 * (1 + std::cos(2 * xi)), 1e-14);
    }
}

TEST(CorrelatorSet, CellPositivity) {
    EXPECT_TRUE(ideal(kPi / 4).is_valid());
    EXPECT_TRUE(ideal(0.2, 0.3).is_valid());
    const CorrelatorSet bad{0, 0, 0, 0, 1.5, 0, 0, 0};
    EXPECT_FALSE(bad.is_valid());
    const CorrelatorSet negative_cell{0.9, 0, 0.9, 0, -0.9, 0, 0, 0};
    EXPECT_FALSE(negative_cell.is_valid());
}

TEST(GuessingBound, Endpoints) {
    for (double theta : {kPi / 4, kPi / 8, kPi / 16}) {
        const BellParams p = BellParams::for_angle(theta);
        const auto top = guessing_bound(max_quantum_value(p), p);
        EXPECT_EQ(top.g_upper, 0.5);
        EXPECT_EQ(top.min_entropy_bits, 1.0);
        const auto bottom = guessing_bound(classical_bound(p), p);
        EXPECT_EQ(bottom.g_upper, 1.0);
        EXPECT_EQ(bottom.min_entropy_bits, 0.0);
    }
}

TEST(GuessingBound, ReferenceValues) {
    const BellParams chsh(1.0, 0.0);
    EXPECT_NEAR(guessing_bound(2.8001, chsh).g_upper, 0.599824843475960, 1e-13);
    const BellParams p = BellParams::for_angle(kPi / 4);
    const auto r = guessing_bound(2.82814429146168, p);
    EXPECT_NEAR(r.g_upper, 0.509999583343542, 1e-12);
    EXPECT_NEAR(r.min_entropy_bits, 0.971432026447252, 1e-11);
}

TEST(GuessingBound, InfeasibleAndClamped) {
    const BellParams p(1.0, 0.0);
    EXPECT_THROW(guessing_bound(2 * kSqrt2 + 1e-6, p), InfeasibleError);
    EXPECT_NO_THROW(guessing_bound(2 * kSqrt2 + 1e-10, p));
    EXPECT_EQ(guessing_bound(2 * kSqrt2 + 1e-10, p).g_upper, 0.5);
    // Below the classical bound nothing is certified.
    EXPECT_EQ(guessing_bound(1.0, p).g_upper, 1.0);
    EXPECT_EQ(guessing_bound(0.0, p).min_entropy_bits, 0.0);
    EXPECT_THROW(guessing_bound(std::nan(""), p), InfeasibleError);
}

TEST(GuessingBound, DeficitFormAgrees) {
    for (double theta : {kPi / 4, kPi / 8, 0.05}) {
        const BellParams p = BellParams::for_angle(theta);
        const double imax = max_quantum_value(p);
        for (double d : {1e-3, 0.1, 0.5}) {
            EXPECT_NEAR(guessing_bound_from_deficit(d, p).g_upper, guessing_bound(imax - d, p).g_upper, 1e-12);
        }
    }
    EXPECT_THROW(guessing_bound_from_deficit(-1e-6, BellParams(1.0, 0.0)), InfeasibleError);
}

TEST(GuessingBound, ConcaveAndMonotone) {
    for (double theta : {kPi / 4, kPi / 8, kPi / 16}) {
        const BellParams p = BellParams::for_angle(theta);
        const double lo = classical_bound(p);
        const double hi = max_quantum_value(p);
        const int n = 100;
        std::vector<double> g;
        for (int k = 0; k <= n; ++k) g.push_back(guessing_bound(lo + (hi - lo) * k / n, p).g_upper);
        for (int k = 1; k < n; ++k) {
            EXPECT_LE(g[k], g[k - 1] + 1e-15);
            EXPECT_GE(g[k] - 0.5 * (g[k - 1] + g[k + 1]), -1e-12);
        }
    }
}

TEST(GuessingBound, MatchesHighPrecisionFormula) {
    using oracle::Big;
    const BellParams p = BellParams::for_angle(kPi / 8);
    const Big beta = Big(2) / boost::multiprecision::sqrt(Big(3));
    const Big imax = boost::multiprecision::sqrt(2 * (4 + beta * beta));
    for (double i : {3.2, 3.25, 3.26, 3.265}) {
        const Big g = Big(0.5) + boost::multiprecision::sqrt(imax * imax - Big(i) * Big(i)) / (2 * (2 - beta));
        EXPECT_NEAR(guessing_bound(i, p).g_upper, static_cast<double>(g), 1e-14);
    }
}

TEST(OptimalSettings, Mu) {
    EXPECT_NEAR(optimal_mu(kPi / 8), 0.6154797086703873, 1e-15);
    EXPECT_NEAR(optimal_mu(kPi / 4), kPi / 4, 1e-15);
    const auto pair = optimal_alice_pair(kPi / 4);
    EXPECT_NEAR(pair.a0.direction().x, std::sqrt(0.5), 1e-15);
    EXPECT_NEAR(pair.a1.direction().x, -std::sqrt(0.5), 1e-15);
}

TEST(Correlators, WeakB1IsDampedSigmaX) {
    const auto c0 = ideal(kPi / 8, 0.0);
    const auto c = ideal(kPi / 8, 0.2);
    EXPECT_NEAR(c.a0b1, std::cos(0.4) * c0.a0b1, 1e-15);
    EXPECT_NEAR(c.a1b1, std::cos(0.4) * c0.a1b1, 1e-15);
    EXPECT_EQ(c.a0b0, c0.a0b0);
    EXPECT_NEAR(c.b1, 0.0, 1e-15);
}

TEST(BellParams, UnderflowingGapIsReported) {
    EXPECT_NO_THROW(BellParams::for_angle(1e-150));
    EXPECT_THROW(BellParams::for_angle(1e-160), UnderflowExhaustedError);
}
