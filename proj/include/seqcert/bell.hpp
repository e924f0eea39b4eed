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

// The Bell family
//   I_{alpha,beta} = beta <B0> + alpha (<A0 B0> + <A1 B0>) + <A0 B1> - <A1 B1>
// (alpha >= 1, beta >= 0, alpha*beta < 2), its classical and quantum maxima, and
// the concave upper bound on Bob's guessing probability for input y = 1:
//   G <= 1/2 + sqrt(Imax^2 - I^2) / (2 (2 - alpha beta)).

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "seqcert/errors.hpp"
#include "seqcert/qstate.hpp"

namespace seqcert {

inline constexpr double kBellOvershootTolerance = 1e-9;
inline constexpr double kCellPositivitySlack = 1e-10;

struct CorrelatorSet {
    double a0 = 0.0;
    double a1 = 0.0;
    double b0 = 0.0;
    double b1 = 0.0;
    double a0b0 = 0.0;
    double a1b0 = 0.0;
    double a0b1 = 0.0;
    double a1b1 = 0.0;

    /// Marginal of Alice's input x.
    double alice(int x) const { return x == 0 ? a0 : a1; }
    /// Marginal of Bob's input y.
    double bob(int y) const { return y == 0 ? b0 : b1; }
    /// Joint correlator <A_x B_y>.
    double joint(int x, int y) const {
        if (y == 0) return x == 0 ? a0b0 : a1b0;
        return x == 0 ? a0b1 : a1b1;
    }

    bool in_range() const {
        for (double v : {a0, a1, b0, b1, a0b0, a1b0, a0b1, a1b1}) {
            if (!(v >= -1.0 && v <= 1.0)) return false;
        }
        return true;
    }

    /// Smallest unnormalized cell weight 1 + s A + t B + s t AB over input
    /// pairs and sign choices; each p(a, b | x, y) is this divided by 4.
    double min_cell_weight() const {
        double worst = 4.0;
        for (int x = 0; x < 2; ++x) {
            for (int y = 0; y < 2; ++y) {
                for (int s : {-1, 1}) {
                    for (int t : {-1, 1}) {
                        worst = std::min(worst, 1.0 + s * alice(x) + t * bob(y) + s * t * joint(x, y));
                    }
                }
            }
        }
        return worst;
    }

    bool is_valid() const { return in_range() && min_cell_weight() >= -kCellPositivitySlack; }

    /// Every entry multiplied by v (white noise of visibility v).
    CorrelatorSet scaled(double v) const { return {v * a0, v * a1, v * b0, v * b1, v * a0b0, v * a1b0, v * a0b1, v * a1b1}; }
};

/// beta(theta) = 2 cos(2 theta) / sqrt(1 + sin^2(2 theta)), theta in (0, pi/2).
inline double beta_of_theta(double theta) {
    if (!(theta > 0.0 && theta < kPi / 2)) throw DomainError("beta_of_theta: theta must lie in (0, pi/2)");
    const double s = std::sin(2.0 * theta);
    return 2.0 * std::cos(2.0 * theta) / std::sqrt(1.0 + s * s);
}

/// 2 - beta(theta) without cancellation:
///   4 sin^2(2 theta) / (r (r + cos 2 theta)),  r = sqrt(1 + sin^2(2 theta)).
inline double two_minus_beta_of_theta(double theta) {
    if (!(theta > 0.0 && theta < kPi / 2)) throw DomainError("two_minus_beta_of_theta: theta must lie in (0, pi/2)");
    const double s = std::sin(2.0 * theta);
    const double r = std::sqrt(1.0 + s * s);
    return 4.0 * (s / r) * (s / (r + std::cos(2.0 * theta)));
}

class BellParams {
  public:
    BellParams(double alpha, double beta) : BellParams(alpha, beta, 2.0 - alpha * beta) {}

    /// alpha = 1, beta = beta(theta), with the gap 2 - beta evaluated stably.
    static BellParams for_angle(double theta) {
        if (!(theta > 0.0 && theta <= kPi / 4)) throw DomainError("BellParams::for_angle: theta must lie in (0, pi/4]");
        const double gap = two_minus_beta_of_theta(theta);
        if (!(gap >= std::numeric_limits<double>::min())) {
            throw UnderflowExhaustedError("BellParams::for_angle: 2 - beta underflows at theta = " + to_text(theta));
        }
        return BellParams(1.0, beta_of_theta(theta), gap);
    }

    double alpha() const { return alpha_; }
    double beta() const { return beta_; }
    /// 2 - alpha * beta
    double gap() const { return gap_; }

  private:
    BellParams(double alpha, double beta, double gap) : alpha_(alpha), beta_(beta), gap_(gap) {
        if (!(alpha >= 1.0)) throw DomainError("BellParams: alpha must be >= 1");
        if (!(beta >= 0.0)) throw DomainError("BellParams: beta must be >= 0");
        if (!(gap > 0.0)) throw DomainError("BellParams: alpha * beta must be < 2");
    }

    double alpha_;
    double beta_;
    double gap_;
};

inline double bell_value(const CorrelatorSet& c, const BellParams& p) {
    return p.beta() * c.b0 + p.alpha() * (c.a0b0 + c.a1b0) + c.a0b1 - c.a1b1;
}

/// beta + 2 alpha
inline double classical_bound(const BellParams& p) { return p.beta() + 2.0 * p.alpha(); }

/// sqrt((1 + alpha^2)(4 + beta^2))
inline double max_quantum_value(const BellParams& p) {
    return std::sqrt((1.0 + p.alpha() * p.alpha()) * (4.0 + p.beta() * p.beta()));
}

struct RandomnessBound {
    double bell_value = 0.0;
    double g_upper = 1.0;
    double min_entropy_bits = 0.0;
    /// g_upper - 1/2, kept separately since it can be far below double resolution of g_upper.
    double excess = 0.5;
};

/// Bound expressed through g - 1/2 directly. Excess at or above 1/2 clamps to g = 1.
inline RandomnessBound randomness_from_excess(double bell_value, double excess) {
    RandomnessBound r;
    r.bell_value = bell_value;
    if (!(excess < 0.5)) {
        r.g_upper = 1.0;
        r.excess = 0.5;
        r.min_entropy_bits = 0.0;
        return r;
    }
    r.excess = std::max(0.0, excess);
    r.g_upper = 0.5 + r.excess;
    // -log2(1/2 + e) = 1 - log2(1 + 2e)
    r.min_entropy_bits = 1.0 - std::log1p(2.0 * r.excess) / std::numbers::ln2;
    return r;
}

namespace detail {

// Bound from the radicand Imax^2 - I^2 (already evaluated stably).
inline RandomnessBound bound_from_radicand(double i, double radicand, const BellParams& p) {
    return randomness_from_excess(i, std::sqrt(std::max(0.0, radicand)) / (2.0 * p.gap()));
}

}  // namespace detail

/// Guessing-probability bound for an observed Bell value i. g_upper is
/// clamped to 1; values above Imax by more than 1e-9 are infeasible.
inline RandomnessBound guessing_bound(double i, const BellParams& p) {
    const double imax = max_quantum_value(p);
    const double ai = std::abs(i);
    if (!std::isfinite(i) || ai > imax + kBellOvershootTolerance) {
        throw InfeasibleError("guessing_bound: Bell value " + to_text(i) + " exceeds the quantum maximum " +
                              to_text(imax));
    }
    if (ai >= imax) return detail::bound_from_radicand(i, 0.0, p);

    // Imax^2 - I^2 in two algebraically equal forms, chosen by proximity:
    //   (Imax - I)(Imax + I)                 near the quantum maximum
    //   (2 - alpha beta)^2 - e (2C + e)      near the classical bound C, e = I - C
    const double cl = classical_bound(p);
    const double to_max = imax - ai;
    const double e = ai - cl;
    const double radicand =
        std::abs(e) < to_max ? p.gap() * p.gap() - e * (2.0 * cl + e) : to_max * (imax + ai);
    return detail::bound_from_radicand(i, radicand, p);
}

/// Same bound parameterized by the deficit Imax - I, which stays accurate when
/// the violation is closer to maximal than double resolution of I.
inline RandomnessBound guessing_bound_from_deficit(double deficit, const BellParams& p) {
    const double imax = max_quantum_value(p);
    if (!std::isfinite(deficit) || deficit < -kBellOvershootTolerance) {
        throw InfeasibleError("guessing_bound_from_deficit: negative deficit " + to_text(deficit));
    }
    const double d = std::clamp(deficit, 0.0, 2.0 * imax);
    return detail::bound_from_radicand(imax - d, d * (2.0 * imax - d), p);
}

/// Alice's pair of observables in the x-z plane, cos(mu) sigma_z +- sin(mu) sigma_x.
struct AlicePair {
    BlochObservable a0;
    BlochObservable a1;
};

/// tan(mu) = sin(2 theta)
inline double optimal_mu(double theta) { return std::atan(std::sin(2.0 * theta)); }

/// The settings that maximally violate I_theta on cos(theta)|00> + sin(theta)|11>
/// (with B0 = sigma_z, B1 = sigma_x).
inline AlicePair optimal_alice_pair(double theta) {
    const double mu = optimal_mu(theta);
    return {BlochObservable::in_xz_plane(mu), BlochObservable::in_xz_plane(-mu)};
}

/// Exact correlators for Alice's pair, B0 = bob_z, and B1 the weak sigma_x
/// measurement, whose +-1 observable is E+ - E- = cos(2 xi) sigma_x.
inline CorrelatorSet correlators_of(const TwoQubitState& psi, const AlicePair& alice, const BlochObservable& bob_z,
                                    const KrausPair& bob_weak) {
    const auto id = LocalObservable::identity();
    const auto x = BlochObservable::sigma_x();
    const double damp = bob_weak.damping();
    CorrelatorSet c;
    c.a0 = expectation(psi, alice.a0, id);
    c.a1 = expectation(psi, alice.a1, id);
    c.b0 = expectation(psi, id, bob_z);
    c.b1 = damp * expectation(psi, id, x);
    c.a0b0 = expectation(psi, alice.a0, bob_z);
    c.a1b0 = expectation(psi, alice.a1, bob_z);
    c.a0b1 = damp * expectation(psi, alice.a0, x);
    c.a1b1 = damp * expectation(psi, alice.a1, x);
    return c;
}

}  // namespace seqcert
