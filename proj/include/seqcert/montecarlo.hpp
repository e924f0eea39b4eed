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

// Finite statistics: Born-rule sampling of protocol rounds, plug-in correlator
// estimates with standard errors, and a white-noise robustness sweep.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <thread>
#include <vector>

#include "seqcert/bell.hpp"
#include "seqcert/errors.hpp"
#include "seqcert/qstate.hpp"
#include "seqcert/rng.hpp"
#include "seqcert/sequence.hpp"

namespace seqcert {

inline constexpr std::size_t kMinCellCount = 100;
inline constexpr std::size_t kMaxSampledLevels = 16;

/// Index of Alice's observable k for the branch with history index h at level i:
/// (2^i - 2) + 2h + k, where h reads the history as binary with '+' = 0, first outcome most significant.
inline std::size_t bank_index(std::size_t level, std::size_t history, int k) {
    return ((std::size_t{1} << level) - 2) + 2 * history + static_cast<std::size_t>(k);
}

/// 2 (2^n - 1)
inline std::size_t bank_size(std::size_t n) { return (std::size_t{1} << (n + 1)) - 2; }

struct RunSample {
    std::uint64_t round = 0;
    std::size_t x = 0;        // flat bank index
    std::size_t level = 0;    // level of Alice's observable
    std::size_t history = 0;  // history index of Alice's observable
    int k = 0;
    int a = 1;
    std::vector<int> y;  // Bob's inputs, 0 = sigma_z, 1 = weak sigma_x
    std::vector<int> b;  // Bob's outcomes +-1
    std::string path;    // weak outcomes while every earlier input was 1
};

struct SamplingPlan {
    std::vector<double> gammas;        // probability of sigma_z at each step
    std::vector<double> alice_weights; // over the bank; empty = uniform
    std::size_t rounds = 0;
    std::uint64_t seed = 0;
    unsigned workers = 1;
};

namespace detail {

struct SamplerTables {
    std::vector<Mat2> bank;                        // Alice's observables
    std::vector<double> alice_cdf;                 // empty = uniform
    std::vector<std::array<Mat2, 2>> weak;         // Kraus operators per step (plus, minus)
    std::vector<std::array<Mat2, 2>> correction;   // uB^dagger per step (plus, minus)
};

inline SamplerTables make_tables(const ProtocolConfig& cfg, const SamplingPlan& plan) {
    const std::size_t n = cfg.n();
    if (n > kMaxSampledLevels) {
        throw ResourceError("sample_runs: Alice's bank for n = " + std::to_string(n) + " exceeds 2^" +
                            std::to_string(kMaxSampledLevels + 1) + " observables");
    }
    if (plan.gammas.size() != n) throw DomainError("gammas: need one value per step");
    for (std::size_t i = 0; i < n; ++i) {
        if (!(plan.gammas[i] >= 0.0 && plan.gammas[i] <= 1.0)) {
            throw DomainError("gammas[" + std::to_string(i) + "]: must lie in [0, 1]");
        }
    }
    if (plan.rounds == 0) throw DomainError("rounds: must be >= 1");

    SamplerTables t;
    const auto levels = build_levels(cfg, n);
    t.bank.resize(bank_size(n));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t h = 0; h < levels[i].size(); ++h) {
            const AlicePair pair = alice_bank(levels[i][h]);
            t.bank[bank_index(i + 1, h, 0)] = pair.a0.matrix();
            t.bank[bank_index(i + 1, h, 1)] = pair.a1.matrix();
        }
    }
    if (!plan.alice_weights.empty()) {
        if (plan.alice_weights.size() != t.bank.size()) throw DomainError("alice_weights: need one weight per bank entry");
        double acc = 0.0;
        for (double w : plan.alice_weights) {
            if (!(w >= 0.0)) throw DomainError("alice_weights: weights must be nonnegative");
            acc += w;
            t.alice_cdf.push_back(acc);
        }
        if (!(acc > 0.0)) throw DomainError("alice_weights: weights sum to zero");
        for (double& c : t.alice_cdf) c /= acc;
    }
    for (std::size_t i = 0; i < n; ++i) {
        const KrausPair k(cfg.xis()[i]);
        t.weak.push_back({k.kraus(Outcome::plus), k.kraus(Outcome::minus)});
        const double theta = levels[i].front().theta;
        t.correction.push_back({weak_step_frame(theta, cfg.xis()[i], Outcome::plus).uB.adjoint(),
                                weak_step_frame(theta, cfg.xis()[i], Outcome::minus).uB.adjoint()});
    }
    return t;
}

// Samples outcome +1 with operator `plus`, else `minus`, on the given side.
inline int measure(Mat2& c, const Mat2& plus, const Mat2& minus, bool bob_side, CounterRng& rng) {
    const Mat2 cp = bob_side ? apply_local(c, Mat2::identity(), plus) : apply_local(c, plus, Mat2::identity());
    const double pp = TwoQubitState::squared_norm(cp.m) / TwoQubitState::squared_norm(c.m);
    if (rng.uniform() < pp) {
        c = cp;
        return +1;
    }
    c = bob_side ? apply_local(c, Mat2::identity(), minus) : apply_local(c, minus, Mat2::identity());
    return -1;
}

inline RunSample sample_round(const ProtocolConfig& cfg, const SamplingPlan& plan, const SamplerTables& t,
                              std::uint64_t round) {
    CounterRng rng(plan.seed, round);
    RunSample s;
    s.round = round;

    const double u = rng.uniform();
    if (t.alice_cdf.empty()) {
        s.x = std::min(t.bank.size() - 1, static_cast<std::size_t>(u * static_cast<double>(t.bank.size())));
    } else {
        s.x = static_cast<std::size_t>(std::upper_bound(t.alice_cdf.begin(), t.alice_cdf.end(), u) - t.alice_cdf.begin());
        s.x = std::min(s.x, t.bank.size() - 1);
    }
    s.k = static_cast<int>(s.x % 2);
    std::size_t level = 1;
    while (((std::size_t{1} << (level + 1)) - 2) <= s.x) ++level;
    s.level = level;
    s.history = (s.x - ((std::size_t{1} << level) - 2)) / 2;

    Mat2 c = make_state(cfg.theta1()).matrix();
    // Alice's measurement commutes with all of Bob's operations; sample it first.
    const Mat2& obs = t.bank[s.x];
    const Mat2 proj_plus = Complex{0.5} * (Mat2::identity() + obs);
    const Mat2 proj_minus = Complex{0.5} * (Mat2::identity() - obs);
    s.a = measure(c, proj_plus, proj_minus, false, rng);

    static const Mat2 z_plus{{Complex{1}, Complex{0}, Complex{0}, Complex{0}}};
    static const Mat2 z_minus{{Complex{0}, Complex{0}, Complex{0}, Complex{1}}};
    bool chain = true;
    for (std::size_t i = 0; i < cfg.n(); ++i) {
        const int y = rng.bernoulli(plan.gammas[i]) ? 0 : 1;
        s.y.push_back(y);
        int b;
        if (y == 0) {
            b = measure(c, z_plus, z_minus, true, rng);
            chain = false;
        } else {
            b = measure(c, t.weak[i][0], t.weak[i][1], true, rng);
            if (chain) {
                c = apply_local(c, Mat2::identity(), t.correction[i][b > 0 ? 0 : 1]);
                s.path.push_back(b > 0 ? '+' : '-');
            }
        }
        s.b.push_back(b);
        // Keep amplitudes O(1) along long chains of small-probability outcomes.
        const double norm = std::sqrt(TwoQubitState::squared_norm(c.m));
        c = Complex{1.0 / norm} * c;
    }
    return s;
}

}  // namespace detail

/// Exact Born-rule sampling of protocol rounds. Round r draws from stream r of
/// the counter generator, so the output does not depend on `workers`.
inline std::vector<RunSample> sample_runs(const ProtocolConfig& cfg, const SamplingPlan& plan) {
    const detail::SamplerTables tables = detail::make_tables(cfg, plan);
    std::vector<RunSample> out(plan.rounds);
    const unsigned workers = std::max(1u, std::min<unsigned>(plan.workers, 64));
    if (workers == 1) {
        for (std::size_t r = 0; r < plan.rounds; ++r) out[r] = detail::sample_round(cfg, plan, tables, r);
        return out;
    }
    std::vector<std::thread> pool;
    const std::size_t chunk = (plan.rounds + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
        const std::size_t lo = w * chunk;
        const std::size_t hi = std::min(plan.rounds, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([&, lo, hi] {
            for (std::size_t r = lo; r < hi; ++r) out[r] = detail::sample_round(cfg, plan, tables, r);
        });
    }
    for (auto& th : pool) th.join();
    return out;
}

struct EstimateSet {
    std::size_t step = 0;
    std::size_t rounds = 0;  // total samples inspected
    CorrelatorSet values;    // NaN where a cell is empty
    CorrelatorSet std_errors;
    // Sample counts per entry, in CorrelatorSet order: a0 a1 b0 b1 a0b0 a1b0 a0b1 a1b1.
    std::array<std::size_t, 8> counts{};
    bool low_stats = false;
    std::vector<std::string> missing;
};

inline constexpr std::array<const char*, 8> kCorrelatorNames{"a0", "a1", "b0", "b1", "a0b0", "a1b0", "a0b1", "a1b1"};

/// Plug-in estimates of the step-i correlators (i is 1-based). A round counts
/// for step i when all earlier inputs were the weak measurement; joint and
/// Alice entries additionally need Alice's observable to belong to the
/// realized branch. Bob marginals use every eligible round.
inline EstimateSet estimate(const std::vector<RunSample>& samples, std::size_t step) {
    if (step == 0) throw DomainError("estimate: steps are numbered from 1");
    std::array<double, 8> sum{};
    std::array<std::size_t, 8> cnt{};
    for (const auto& s : samples) {
        if (s.y.size() < step) throw DomainError("estimate: sample shorter than the requested step");
        bool chain = true;
        std::size_t hist = 0;
        for (std::size_t j = 0; j + 1 < step; ++j) {
            if (s.y[j] != 1) {
                chain = false;
                break;
            }
            hist = 2 * hist + (s.b[j] > 0 ? 0 : 1);
        }
        if (!chain) continue;
        const int y = s.y[step - 1];
        const int b = s.b[step - 1];
        sum[2 + y] += b;
        ++cnt[2 + y];
        if (s.level == step && s.history == hist) {
            sum[s.k] += s.a;
            ++cnt[s.k];
            const std::size_t j = 4 + 2 * static_cast<std::size_t>(y) + static_cast<std::size_t>(s.k);
            sum[j] += s.a * b;
            ++cnt[j];
        }
    }
    EstimateSet e;
    e.step = step;
    e.rounds = samples.size();
    e.counts = cnt;
    std::array<double, 8> val{};
    std::array<double, 8> err{};
    for (std::size_t j = 0; j < 8; ++j) {
        if (cnt[j] == 0) {
            val[j] = std::numeric_limits<double>::quiet_NaN();
            err[j] = std::numeric_limits<double>::quiet_NaN();
            e.missing.emplace_back(kCorrelatorNames[j]);
            e.low_stats = true;
            continue;
        }
        const double n = static_cast<double>(cnt[j]);
        val[j] = sum[j] / n;
        err[j] = std::sqrt(std::max(0.0, 1.0 - val[j] * val[j]) / n);
        if (cnt[j] < kMinCellCount && j >= 4) e.low_stats = true;
    }
    e.values = {val[0], val[1], val[2], val[3], val[4], val[5], val[6], val[7]};
    e.std_errors = {err[0], err[1], err[2], err[3], err[4], err[5], err[6], err[7]};
    return e;
}

/// Exact step-i correlators for comparison with estimate(); every branch of a
/// level shares them.
inline CorrelatorSet exact_step_correlators(const ProtocolConfig& cfg, std::size_t step) {
    if (step == 0 || step > cfg.n()) throw DomainError("exact_step_correlators: step out of range");
    double theta = cfg.theta1();
    for (std::size_t j = 0; j + 1 < step; ++j) theta = branch_angle_stable(theta, cfg.xis()[j]);
    return correlators_of(make_state(theta), optimal_alice_pair(theta), BlochObservable::sigma_z(),
                          KrausPair(cfg.xis()[step - 1]));
}

struct NoiseStep {
    double bell_value = 0.0;
    double g_upper = 1.0;
    double min_entropy_bits = 0.0;
};

struct NoiseRow {
    double visibility = 1.0;
    std::vector<NoiseStep> steps;
    double total_bits = 0.0;
};

/// Bounds under white noise of visibility v: every correlator of each step is
/// scaled by v, so I(v) = v I and Imax - I(v) = (1 - v) Imax + v (Imax - I).
inline std::vector<NoiseRow> noise_sweep(const ProtocolConfig& cfg, const std::vector<double>& visibilities) {
    const CertificationReport base = certify(cfg);
    std::vector<NoiseRow> rows;
    for (double v : visibilities) {
        if (!(v >= 0.0 && v <= 1.0)) throw DomainError("visibility: must lie in [0, 1]");
        NoiseRow row;
        row.visibility = v;
        for (const auto& s : base.per_step) {
            NoiseStep ns;
            if (v == 1.0) {
                ns = {s.bell_value, s.g_upper, s.min_entropy_bits};
            } else {
                const BellParams p = BellParams::for_angle(s.theta);
                const RandomnessBound b = guessing_bound_from_deficit((1.0 - v) * s.bell_max + v * s.bell_deficit, p);
                ns = {v * s.bell_value, b.g_upper, b.min_entropy_bits};
            }
            row.total_bits += ns.min_entropy_bits;
            row.steps.push_back(ns);
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace seqcert
