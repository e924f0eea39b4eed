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
#include <random>

#include "oracles.hpp"
#include "seqcert/qstate.hpp"

using namespace seqcert;

namespace {

double matrix_distance(const Mat2& a, const Mat2& b) {
    double worst = 0.0;
    for (int k = 0; k < 4; ++k) worst = std::max(worst, std::abs(a.m[k] - b.m[k]));
    return worst;
}

TwoQubitState random_state(std::mt19937_64& gen) {
    std::normal_distribution<double> n;
    return TwoQubitState::normalized({Complex{n(gen), n(gen)}, Complex{n(gen), n(gen)}, Complex{n(gen), n(gen)},
                                      Complex{n(gen), n(gen)}});
}

}  // namespace

TEST(TwoQubitState, RejectsUnnormalizedAmplitudes) {
    EXPECT_THROW(TwoQubitState::from_amplitudes({Complex{1}, Complex{1}, Complex{0}, Complex{0}}), DomainError);
    EXPECT_NO_THROW(TwoQubitState::from_amplitudes({Complex{1}, Complex{0}, Complex{0}, Complex{0}}));
    EXPECT_THROW(TwoQubitState::normalized({}), DomainError);
}

TEST(TwoQubitState, MakeStateRange) {
    EXPECT_THROW(make_state(-0.1), DomainError);
    EXPECT_THROW(make_state(2.0), DomainError);
    const auto psi = make_state(kPi / 4);
    EXPECT_NEAR(psi[0].real(), std::sqrt(0.5), 1e-15);
    EXPECT_NEAR(psi[3].real(), std::sqrt(0.5), 1e-15);
    EXPECT_EQ(psi[1], Complex{0.0});
}

TEST(BlochObservable, MatrixAndConjugation) {
    EXPECT_THROW(BlochObservable(Vec3{1, 1, 0}), DomainError);
    EXPECT_LT(matrix_distance(BlochObservable::sigma_x().matrix(), pauli::X), 1e-15);
    EXPECT_LT(matrix_distance(BlochObservable::sigma_y().matrix(), pauli::Y), 1e-15);
    EXPECT_LT(matrix_distance(BlochObservable::sigma_z().matrix(), pauli::Z), 1e-15);
    // H Z H = X
    const Mat2 h = Complex{1.0 / std::sqrt(2.0)} * (pauli::X + pauli::Z);
    const auto x = BlochObservable::sigma_z().conjugated(h);
    EXPECT_NEAR(x.direction().x, 1.0, 1e-15);
    EXPECT_NEAR(x.direction().z, 0.0, 1e-15);
}

TEST(Expectation, BellStateCorrelators) {
    const auto phi = make_state(kPi / 4);
    const auto id = LocalObservable::identity();
    EXPECT_NEAR(expectation(phi, BlochObservable::sigma_z(), BlochObservable::sigma_z()), 1.0, 1e-15);
    EXPECT_NEAR(expectation(phi, BlochObservable::sigma_x(), BlochObservable::sigma_x()), 1.0, 1e-15);
    EXPECT_NEAR(expectation(phi, BlochObservable::sigma_y(), BlochObservable::sigma_y()), -1.0, 1e-15);
    EXPECT_NEAR(expectation(phi, BlochObservable::sigma_z(), id), 0.0, 1e-15);
    // A0 = (Z + X)/sqrt2 with B1 = X gives sqrt2/2
    const auto a0 = BlochObservable::in_xz_plane(kPi / 4);
    EXPECT_NEAR(expectation(phi, a0, BlochObservable::sigma_x()), std::sqrt(0.5), 1e-15);
}

TEST(Expectation, ProductStateFactorizes) {
    const auto psi = make_state(0.0);
    EXPECT_NEAR(expectation(psi, BlochObservable::sigma_z(), LocalObservable::identity()), 1.0, 1e-15);
    EXPECT_NEAR(expectation(psi, BlochObservable::sigma_x(), BlochObservable::sigma_z()), 0.0, 1e-15);
}

TEST(KrausPair, CompletenessAndEffects) {
    for (double xi : {0.0, 0.01, 0.3, kPi / 8, kPi / 4}) {
        const KrausPair k(xi);
        const Mat2 mp = k.kraus(Outcome::plus);
        const Mat2 mm = k.kraus(Outcome::minus);
        EXPECT_LT(matrix_distance(mp.adjoint() * mp + mm.adjoint() * mm, Mat2::identity()), 1e-15);
        EXPECT_LT(matrix_distance(mp.adjoint() * mp, k.effect(Outcome::plus)), 1e-15);
        EXPECT_LT(matrix_distance(k.effect(Outcome::plus) - k.effect(Outcome::minus),
                                  Complex{std::cos(2 * xi)} * pauli::X),
                  1e-15);
    }
    EXPECT_THROW(KrausPair(-0.01), DomainError);
    EXPECT_THROW(KrausPair(1.0), DomainError);
}

TEST(KrausPair, ProjectiveAndTrivialLimits) {
    // xi = 0: projectors onto |+>, |->. xi = pi/4: 1/sqrt2 identity.
    const Mat2 p = KrausPair(0.0).kraus(Outcome::plus);
    EXPECT_LT(matrix_distance(p, Complex{0.5} * (Mat2::identity() + pauli::X)), 1e-15);
    const Mat2 t = KrausPair(kPi / 4).kraus(Outcome::minus);
    EXPECT_LT(matrix_distance(t, Complex{std::sqrt(0.5)} * Mat2::identity()), 1e-15);
}

TEST(ApplyKraus, UnbiasedOutcomesOnCanonicalStates) {
    for (double theta : {0.0, 0.1, kPi / 8, kPi / 4}) {
        for (double xi : {0.0, 0.05, 0.5}) {
            const KrausPair k(xi);
            const double pp = apply_kraus_bob(make_state(theta), k, Outcome::plus).probability;
            const double pm = apply_kraus_bob(make_state(theta), k, Outcome::minus).probability;
            EXPECT_NEAR(pp, 0.5, 1e-15);
            EXPECT_NEAR(pm, 0.5, 1e-15);
        }
    }
}

TEST(ApplyKraus, ZeroProbabilityBranchIsDegenerate) {
    // Bob in |+>: the projective '-' outcome never occurs.
    const double r = std::sqrt(0.5);
    const auto psi = TwoQubitState::from_amplitudes({Complex{r}, Complex{r}, Complex{0}, Complex{0}});
    EXPECT_THROW(apply_kraus_bob(psi, KrausPair(0.0), Outcome::minus), DegenerateBranchError);
    EXPECT_NEAR(apply_kraus_bob(psi, KrausPair(0.0), Outcome::plus).probability, 1.0, 1e-15);
}

TEST(Schmidt, CanonicalStatesAreFixedPoints) {
    for (double theta : {0.0, 1e-9, 0.2, kPi / 8, 0.7}) {
        const SchmidtForm f = schmidt(make_state(theta));
        EXPECT_NEAR(f.theta, theta, 1e-15);
        EXPECT_LT(matrix_distance(f.uA, Mat2::identity()), 1e-15);
        EXPECT_LT(matrix_distance(f.uB, Mat2::identity()), 1e-15);
    }
}

TEST(Schmidt, MaximallyEntangledUsesIdentityFrame) {
    const SchmidtForm f = schmidt(make_state(kPi / 4));
    EXPECT_NEAR(f.theta, kPi / 4, 1e-15);
    EXPECT_LT(matrix_distance(f.uA, Mat2::identity()), 1e-15);
    EXPECT_GT(fidelity(f.reconstruct(), make_state(kPi / 4)), 1.0 - 1e-14);
}

TEST(Schmidt, RandomStatesMatchSvdAndReconstruct) {
    std::mt19937_64 gen(2024);
    for (int trial = 0; trial < 2000; ++trial) {
        const auto psi = random_state(gen);
        const SchmidtForm f = schmidt(psi);
        EXPECT_GE(f.theta, 0.0);
        EXPECT_LE(f.theta, kPi / 4 + 1e-15);
        EXPECT_NEAR(f.theta, oracle::svd_schmidt_angle(psi), 1e-12);
        EXPECT_LT(unitarity_error(f.uA), 1e-13);
        EXPECT_LT(unitarity_error(f.uB), 1e-13);
        const auto back = f.reconstruct();
        for (int k = 0; k < 4; ++k) EXPECT_LT(std::abs(back[k] - psi[k]), 1e-12) << "trial " << trial;
    }
}

TEST(Schmidt, PhaseConventionOnAliceColumns) {
    std::mt19937_64 gen(99);
    for (int trial = 0; trial < 200; ++trial) {
        const SchmidtForm f = schmidt(random_state(gen));
        for (int col = 0; col < 2; ++col) {
            const Complex v0 = f.uA(0, col);
            const Complex v1 = f.uA(1, col);
            const Complex pivot = std::abs(v0) >= std::abs(v1) * (1.0 - 1e-12) ? v0 : v1;
            EXPECT_NEAR(pivot.imag(), 0.0, 1e-14);
            EXPECT_GT(pivot.real(), 0.0);
        }
    }
}

TEST(Schmidt, ProductStateHasZeroAngle) {
    const double r = std::sqrt(0.5);
    const auto psi = TwoQubitState::from_amplitudes({Complex{0.5}, Complex{0.5}, Complex{0.5}, Complex{0.5}});
    EXPECT_NEAR(schmidt(psi).theta, 0.0, 1e-15);
    const auto psi2 = TwoQubitState::from_amplitudes({Complex{0}, Complex{r}, Complex{0}, Complex{0, r}});
    EXPECT_NEAR(schmidt(psi2).theta, 0.0, 1e-15);
}

TEST(BranchAngle, ReferenceValues) {
    EXPECT_NEAR(branch_angle_stable(kPi / 4, kPi / 8), kPi / 8, 1e-15);
    EXPECT_NEAR(branch_angle_stable(kPi / 4, kPi / 4), kPi / 4, 1e-15);
    EXPECT_EQ(branch_angle_stable(kPi / 4, 0.0), 0.0);
    EXPECT_EQ(branch_angle_stable(0.0, 0.3), 0.0);
    // Tiny regime keeps full relative precision: theta' ~ theta * sin(2 xi) ~ 2e-14.
    EXPECT_NEAR(branch_angle_stable(1e-6, 1e-8) / 1.999999999998677e-14, 1.0, 1e-13);
    EXPECT_THROW(branch_angle_stable(1.0, 0.1), DomainError);
    EXPECT_THROW(branch_angle_stable(0.3, -0.1), DomainError);
}

TEST(BranchAngle, AgreesWithExplicitEvolution) {
    for (int a = 1; a <= 20; ++a) {
        for (int b = 1; b <= 20; ++b) {
            const double theta = kPi / 4 * a / 20.0;
            const double xi = kPi / 4 * b / 20.0;
            const double stable = branch_angle_stable(theta, xi);
            EXPECT_NEAR(stable, oracle::evolved_branch_angle(theta, xi, +1), 1e-12);
            EXPECT_NEAR(stable, oracle::evolved_branch_angle(theta, xi, -1), 1e-12);
            EXPECT_NEAR(stable, schmidt(apply_kraus_bob(make_state(theta), KrausPair(xi), Outcome::minus).state).theta,
                        1e-12);
        }
    }
}

TEST(BranchAngle, MonotoneInXi) {
    double prev = 0.0;
    for (int b = 1; b <= 100; ++b) {
        const double next = branch_angle_stable(0.5, kPi / 4 * b / 100.0);
        EXPECT_GT(next, prev);
        prev = next;
    }
}
