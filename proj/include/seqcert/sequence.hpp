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

// The sequential protocol: Bob measures sigma_z or the weak sigma_x(xi_i) n
// times on his qubit, undoing his Schmidt frame after each weak outcome, while
// Alice measures once from a bank that grows by two observables per branch.
//
// A branch at level i is U_A (x) 1 [cos(theta)|00> + sin(theta)|11>]. Both
// outcomes of the weak step give the same child angle, so theta is uniform
// across a level and only U_A depends on the outcome history.

#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "seqcert/bell.hpp"
#include "seqcert/errors.hpp"
#include "seqcert/qstate.hpp"

namespace seqcert {

inline constexpr double kMinBranchAngle = 1e-300;
inline constexpr std::size_t kDefaultMaxBranches = std::size_t{1} << 20;

class ProtocolConfig {
  public:
    ProtocolConfig(double theta1, std::vector<double> xis) : theta1_(theta1), xis_(std::move(xis)) {
        if (!(theta1_ > 0.0 && theta1_ <= kPi / 4)) throw DomainError("theta1: must lie in (0, pi/4]");
        if (xis_.empty()) throw DomainError("xis: the sequence needs at least one measurement");
        for (std::size_t k = 0; k < xis_.size(); ++k) {
            if (!(xis_[k] > 0.0 && xis_[k] <= kPi / 4)) {
                throw DomainError("xis[" + std::to_string(k) + "]: must lie in (0, pi/4]");
            }
        }
    }

    double theta1() const { return theta1_; }
    const std::vector<double>& xis() const { return xis_; }
    std::size_t n() const { return xis_.size(); }

  private:
    double theta1_;
    std::vector<double> xis_;
};

struct BranchRecord {
    std::string history;  // '+' / '-' per previous weak outcome
    double theta = 0.0;
    Mat2 uA = Mat2::identity();
    double reach_prob = 1.0;

    std::size_t level() const { return history.size() + 1; }

    /// U_A (x) 1 [cos(theta)|00> + sin(theta)|11>]
    TwoQubitState state() const {
        const Mat2 d{{Complex{std::cos(theta)}, Complex{0.0}, Complex{0.0}, Complex{std::sin(theta)}}};
        return TwoQubitState::normalized(apply_local(d, uA, Mat2::identity()).m);
    }
};

inline BranchRecord root_branch(const ProtocolConfig& cfg) { return BranchRecord{"", cfg.theta1(), Mat2::identity(), 1.0}; }

/// Schmidt frame of the canonical state at angle theta after one weak outcome:
/// uA is Alice's frame change, uB the unitary Bob undoes.
inline SchmidtForm weak_step_frame(double theta, double xi, Outcome outcome) {
    return schmidt(apply_kraus_bob(make_state(theta), KrausPair(xi), outcome).state);
}

/// Child branch after Bob's weak outcome and his corrective unitary.
inline BranchRecord step(const BranchRecord& branch, double xi, Outcome outcome) {
    if (!(xi > 0.0 && xi <= kPi / 4)) throw DomainError("step: xi must lie in (0, pi/4]");
    const double child_theta = branch_angle_stable(branch.theta, xi);
    if (!(child_theta >= kMinBranchAngle)) {
        throw UnderflowExhaustedError("step: branch angle fell below 1e-300 after history '" + branch.history +
                                      symbol(outcome) + "'");
    }
    const SchmidtForm frame = weak_step_frame(branch.theta, xi, outcome);
    BranchRecord child;
    child.history = branch.history + symbol(outcome);
    child.theta = child_theta;
    child.uA = branch.uA * frame.uA;
    child.reach_prob = 0.5 * branch.reach_prob;
    return child;
}

/// U_A [cos(mu) sigma_z +- sin(mu) sigma_x] U_A^dagger with tan(mu) = sin(2 theta).
inline AlicePair alice_bank(const BranchRecord& branch) {
    if (!(branch.theta > 0.0 && branch.theta <= kPi / 4)) {
        throw DomainError("alice_bank: branch angle must lie in (0, pi/4]; a product state admits no violation");
    }
    const AlicePair local = optimal_alice_pair(branch.theta);
    return {local.a0.conjugated(branch.uA), local.a1.conjugated(branch.uA)};
}

/// The first `count` levels of the outcome tree; level i holds 2^(i-1)
/// branches ordered by history with '+' before '-'.
inline std::vector<std::vector<BranchRecord>> build_levels(const ProtocolConfig& cfg, std::size_t count,
                                                           std::size_t max_branches = kDefaultMaxBranches) {
    if (count == 0 || count > cfg.n() + 1) throw DomainError("build_levels: count must lie in [1, n + 1]");
    if (count >= 8 * sizeof(std::size_t) - 1 || ((std::size_t{1} << count) - 1) > max_branches) {
        throw ResourceError("build_levels: " + std::to_string(count) + " levels need 2^" + std::to_string(count) +
                            " - 1 branches, above the budget of " + std::to_string(max_branches));
    }
    std::vector<std::vector<BranchRecord>> levels;
    levels.push_back({root_branch(cfg)});
    for (std::size_t i = 0; i + 1 < count; ++i) {
        std::vector<BranchRecord> next;
        next.reserve(2 * levels.back().size());
        for (const auto& b : levels.back()) {
            next.push_back(step(b, cfg.xis()[i], Outcome::plus));
            next.push_back(step(b, cfg.xis()[i], Outcome::minus));
        }
        levels.push_back(std::move(next));
    }
    return levels;
}

/// Levels 1..n+1 of the outcome tree; level n+1 is the state left after B_n.
inline std::vector<std::vector<BranchRecord>> build_tree(const ProtocolConfig& cfg,
                                                         std::size_t max_branches = kDefaultMaxBranches) {
    return build_levels(cfg, cfg.n() + 1, max_branches);
}

/// Imax - I for the ideal settings on a level at angle theta measured with
/// weak parameter xi: 2 sin(mu) sin(2 theta)(1 - cos 2 xi) = 4 s^2 sin^2(xi) / r,
/// s = sin(2 theta), r = sqrt(1 + s^2).
inline double ideal_deficit(double theta, double xi) {
    const double s = std::sin(2.0 * theta);
    const double r = std::sqrt(1.0 + s * s);
    const double sx = std::sin(xi);
    return 4.0 * (s * sx) * (s * sx) / r;
}

/// g - 1/2 of the guessing bound for the ideal settings, written so that no
/// intermediate quantity scales like theta^2:
///   sin(xi) sqrt((2 Imax - D) / r) r (r + cos 2 theta) / (4 s).
inline double ideal_excess(double theta, double xi) {
    const double s = std::sin(2.0 * theta);
    const double r = std::sqrt(1.0 + s * s);
    const double imax = max_quantum_value(BellParams::for_angle(theta));
    const double d = ideal_deficit(theta, xi);
    return std::sin(xi) * std::sqrt((2.0 * imax - d) / r) * (r * (r + std::cos(2.0 * theta)) / (4.0 * s));
}

/// Weak parameter that makes the ideal guessing bound at angle theta equal
/// g_target (inverse of ideal_excess); saturates at pi/4.
inline double xi_for_target(double theta, double g_target) {
    if (!(g_target > 0.5 && g_target < 1.0)) throw DomainError("g_target: must lie in (1/2, 1)");
    if (!(theta > 0.0 && theta <= kPi / 4)) throw DomainError("xi_for_target: theta must lie in (0, pi/4]");
    const BellParams p = BellParams::for_angle(theta);
    const double eps = g_target - 0.5;
    const double imax = max_quantum_value(p);
    const double rad = 2.0 * p.gap() * eps;
    const double s = std::sin(2.0 * theta);
    const double r = std::sqrt(1.0 + s * s);
    const double s_gamma = 4.0 * s / (r * (r + std::cos(2.0 * theta)));  // gap / s
    const double sin_xi = s_gamma * eps * std::sqrt(r / (imax + std::sqrt((imax - rad) * (imax + rad))));
    if (sin_xi >= std::sin(kPi / 4)) return kPi / 4;
    return std::asin(sin_xi);
}

/// Weak parameters for n steps that put every step's guessing bound at g_target.
inline std::vector<double> schedule_for_target(double theta1, double g_target, std::size_t n) {
    if (n == 0) throw DomainError("n: must be >= 1");
    std::vector<double> xis;
    xis.reserve(n);
    double theta = theta1;
    for (std::size_t i = 0; i < n; ++i) {
        const double xi = xi_for_target(theta, g_target);
        xis.push_back(xi);
        if (i + 1 < n) {
            theta = branch_angle_stable(theta, xi);
            if (!(theta >= kMinBranchAngle)) {
                throw UnderflowExhaustedError("schedule_for_target: branch angle underflows before step " +
                                              std::to_string(i + 2));
            }
        }
    }
    return xis;
}

struct StepCertificate {
    std::size_t i = 0;
    double theta = 0.0;
    double xi = 0.0;
    double bell_value = 0.0;  // from the exact correlators of the branch state
    double bell_max = 0.0;
    double bell_deficit = 0.0;  // Imax - I in closed form
    double g_upper = 1.0;
    double excess = 0.5;
    double min_entropy_bits = 0.0;
};

inline constexpr const char* kProductLabel = "per-step product (asymptotic target), not a proven finite-n bound";

struct CertificationReport {
    std::vector<StepCertificate> per_step;
    double total_bits = 0.0;
    double sequence_guess_product = 1.0;
    std::vector<std::string> warnings;
};

/// Per-step certificate for a branch measured with weak parameter xi.
inline StepCertificate certify_step(const BranchRecord& branch, double xi) {
    const BellParams p = BellParams::for_angle(branch.theta);
    const CorrelatorSet corr =
        correlators_of(branch.state(), alice_bank(branch), BlochObservable::sigma_z(), KrausPair(xi));
    StepCertificate s;
    s.i = branch.level();
    s.theta = branch.theta;
    s.xi = xi;
    s.bell_value = bell_value(corr, p);
    s.bell_max = max_quantum_value(p);
    s.bell_deficit = ideal_deficit(branch.theta, xi);
    const RandomnessBound b = randomness_from_excess(s.bell_value, ideal_excess(branch.theta, xi));
    s.g_upper = b.g_upper;
    s.excess = b.excess;
    s.min_entropy_bits = b.min_entropy_bits;
    return s;
}

inline void aggregate(CertificationReport& report) {
    report.total_bits = 0.0;
    report.sequence_guess_product = 1.0;
    for (const auto& s : report.per_step) {
        report.total_bits += s.min_entropy_bits;
        report.sequence_guess_product *= s.g_upper;
    }
}

/// Runs the protocol along one representative path ('+' outcomes). Levels of
/// up to `verify_limit` branches are also checked for uniform Bell values.
inline CertificationReport certify(const ProtocolConfig& cfg, std::size_t verify_limit = 4096) {
    CertificationReport report;
    report.warnings.push_back(std::string("guess_product: ") + kProductLabel);
    BranchRecord branch = root_branch(cfg);
    for (std::size_t k = 0; k < cfg.n(); ++k) {
        const double xi = cfg.xis()[k];
        StepCertificate s = certify_step(branch, xi);
        const double closed = s.bell_max - s.bell_deficit;
        if (std::abs(s.bell_value - closed) > 1e-9) {
            report.warnings.push_back("step " + std::to_string(s.i) + ": correlator Bell value deviates from closed form by " +
                                      to_text(s.bell_value - closed));
        }
        report.per_step.push_back(s);
        if (k + 1 < cfg.n()) branch = step(branch, xi, Outcome::plus);
    }
    aggregate(report);

    if ((std::size_t{1} << std::min<std::size_t>(cfg.n(), 62)) <= verify_limit) {
        // Rebuild the first n levels and compare every branch against the representative.
        std::vector<BranchRecord> level{root_branch(cfg)};
        for (std::size_t k = 0; k < cfg.n(); ++k) {
            for (const auto& b : level) {
                const StepCertificate s = certify_step(b, cfg.xis()[k]);
                if (std::abs(s.bell_value - report.per_step[k].bell_value) > 1e-12 ||
                    std::abs(s.theta - report.per_step[k].theta) > 1e-12) {
                    report.warnings.push_back("level " + std::to_string(k + 1) + ": branch '" + b.history +
                                              "' differs from the representative");
                }
            }
            if (k + 1 < cfg.n()) {
                std::vector<BranchRecord> next;
                for (const auto& b : level) {
                    next.push_back(step(b, cfg.xis()[k], Outcome::plus));
                    next.push_back(step(b, cfg.xis()[k], Outcome::minus));
                }
                level = std::move(next);
            }
        }
    }
    return report;
}

}  // namespace seqcert
