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

// Derivative-free search over qubit strategies (state angle t and four Bloch
// directions) for the maximum of a Bell expression or of
//   I^2 + (2 - alpha beta)^2 <B1>^2,
// whose conjectured upper bound is (1 + alpha^2)(4 + beta^2).
//
// The search is a coarse grid over the x-z plane, compass refinement of the
// best grid points, and a full-sphere refinement pass from the planar optimum
// plus seeded random starts. Everything runs in a fixed order, so identical
// (params, budget, seed) give bit-identical reports.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "seqcert/bell.hpp"
#include "seqcert/errors.hpp"
#include "seqcert/qstate.hpp"
#include "seqcert/rng.hpp"

namespace seqcert {

inline constexpr double kConjectureSlack = 1e-6;
inline constexpr std::size_t kMinSearchBudget = 10000;

struct Strategy {
    double t = kPi / 4;  // cos t |00> + sin t |11>
    Vec3 mA0{0, 0, 1};
    Vec3 mA1{0, 0, 1};
    Vec3 mB0{0, 0, 1};
    Vec3 mB1{0, 0, 1};

    bool is_valid() const {
        for (const Vec3* v : {&mA0, &mA1, &mB0, &mB1}) {
            if (!(std::abs(v->norm() - 1.0) <= kNormTolerance)) return false;
        }
        return t >= 0.0 && t <= kPi / 2;
    }

    TwoQubitState state() const { return make_state(t); }
};

/// Exact correlators of a strategy, with B1 read out through the weak
/// measurement (effective observable cos(2 xi) mB1 . sigma):
///   <m.s (x) n.s> = mz nz + sin 2t (mx nx - my ny),  <m.s (x) 1> = cos 2t mz.
inline CorrelatorSet strategy_correlators(const Strategy& s, double xi = 0.0) {
    const double c2 = std::cos(2.0 * s.t);
    const double s2 = std::sin(2.0 * s.t);
    const double damp = std::cos(2.0 * xi);
    const auto joint = [&](const Vec3& m, const Vec3& n) { return m.z * n.z + s2 * (m.x * n.x - m.y * n.y); };
    CorrelatorSet c;
    c.a0 = c2 * s.mA0.z;
    c.a1 = c2 * s.mA1.z;
    c.b0 = c2 * s.mB0.z;
    c.b1 = damp * c2 * s.mB1.z;
    c.a0b0 = joint(s.mA0, s.mB0);
    c.a1b0 = joint(s.mA1, s.mB0);
    c.a0b1 = damp * joint(s.mA0, s.mB1);
    c.a1b1 = damp * joint(s.mA1, s.mB1);
    return c;
}

/// I^2 + (2 - alpha beta)^2 <B1>^2; xi = 0 is the projective case.
inline double lhs_conjecture(const Strategy& s, const BellParams& p, double xi = 0.0) {
    const CorrelatorSet c = strategy_correlators(s, xi);
    const double i = bell_value(c, p);
    return i * i + p.gap() * p.gap() * c.b1 * c.b1;
}

/// (1 + alpha^2)(4 + beta^2)
inline double rhs_conjecture(const BellParams& p) {
    return (1.0 + p.alpha() * p.alpha()) * (4.0 + p.beta() * p.beta());
}

enum class Objective { conjecture_lhs, bell_value };

inline double evaluate(Objective obj, const Strategy& s, const BellParams& p, double xi = 0.0) {
    return obj == Objective::conjecture_lhs ? lhs_conjecture(s, p, xi) : bell_value(strategy_correlators(s, xi), p);
}

struct SearchReport {
    double best_value = 0.0;
    Strategy best_strategy;
    double rhs = 0.0;
    double margin = 0.0;  // rhs - best_value
    std::size_t evaluations = 0;
    bool converged = false;
    double final_step = 0.0;

    /// A margin below -1e-6 falsifies the bound being tested.
    bool counterexample() const { return margin < -kConjectureSlack; }
};

struct SearchOptions {
    std::size_t grid_points = 24;  // per angle, upper limit
    std::size_t refine_starts = 8;
    std::size_t sphere_random_starts = 4;
    double tolerance = 1e-10;   // stop when the compass step falls below this
    double converged_step = 1e-8;
};

namespace detail {

// Planar parameters: (t, phiA0, phiA1, phiB0, phiB1); spherical parameters:
// (t, polar, azimuth) x 4.
inline Vec3 xz_direction(double phi) { return {std::sin(phi), 0.0, std::cos(phi)}; }
inline Vec3 sphere_direction(double polar, double azimuth) {
    return {std::sin(polar) * std::cos(azimuth), std::sin(polar) * std::sin(azimuth), std::cos(polar)};
}

inline double clamp_t(double t) { return std::clamp(t, 0.0, kPi / 2); }

inline Strategy planar_strategy(std::span<const double> x) {
    return Strategy{clamp_t(x[0]), xz_direction(x[1]), xz_direction(x[2]), xz_direction(x[3]), xz_direction(x[4])};
}

inline Strategy sphere_strategy(std::span<const double> x) {
    return Strategy{clamp_t(x[0]), sphere_direction(x[1], x[2]), sphere_direction(x[3], x[4]),
                    sphere_direction(x[5], x[6]), sphere_direction(x[7], x[8])};
}

inline std::vector<double> to_sphere_params(const Strategy& s) {
    std::vector<double> x{s.t};
    for (const Vec3* v : {&s.mA0, &s.mA1, &s.mB0, &s.mB1}) {
        x.push_back(std::acos(std::clamp(v->z, -1.0, 1.0)));
        x.push_back(std::atan2(v->y, v->x));
    }
    return x;
}

struct Budget {
    std::size_t limit;
    std::size_t used = 0;
    bool exhausted() const { return used >= limit; }
    std::size_t remaining() const { return exhausted() ? 0 : limit - used; }
};

struct LocalResult {
    std::vector<double> x;
    double value;
    double step;
};

// Compass search: try +-step along each coordinate, move to the best
// improvement, halve the step when none improves.
inline LocalResult compass(const std::function<double(std::span<const double>)>& f, std::vector<double> x,
                           double value, double step, double tol, Budget& budget, std::size_t local_limit) {
    const std::size_t stop_at = budget.used + std::min(local_limit, budget.remaining());
    std::vector<double> trial = x;
    while (step >= tol && budget.used + 2 * x.size() <= stop_at) {
        double best = value;
        std::size_t best_k = x.size();
        double best_dir = 0.0;
        for (std::size_t k = 0; k < x.size(); ++k) {
            for (double dir : {1.0, -1.0}) {
                trial[k] = x[k] + dir * step;
                const double v = f(trial);
                ++budget.used;
                if (v > best) {
                    best = v;
                    best_k = k;
                    best_dir = dir;
                }
            }
            trial[k] = x[k];
        }
        if (best_k < x.size()) {
            x[best_k] += best_dir * step;
            trial[best_k] = x[best_k];
            value = best;
        } else {
            step *= 0.5;
        }
    }
    return {std::move(x), value, step};
}

inline SearchReport search(Objective obj, const BellParams& p, double xi, std::size_t budget_limit, std::uint64_t seed,
                           double rhs, const SearchOptions& opt) {
    if (budget_limit < kMinSearchBudget) throw DomainError("budget: must be >= 10000 evaluations");
    Budget budget{budget_limit};

    const auto planar_f = [&](std::span<const double> x) { return evaluate(obj, planar_strategy(x), p, xi); };
    const auto sphere_f = [&](std::span<const double> x) { return evaluate(obj, sphere_strategy(x), p, xi); };

    // Coarse planar grid, sized to use at most ~40% of the budget.
    std::size_t r = opt.grid_points;
    while (r > 4 && static_cast<double>(r) * r * r * r * r > 0.4 * static_cast<double>(budget_limit)) --r;
    const double dt = (kPi / 2) / static_cast<double>(r - 1);
    const double dphi = 2.0 * kPi / static_cast<double>(r);

    struct Candidate {
        double value;
        std::array<double, 5> x;
    };
    std::vector<Candidate> top;  // sorted descending, at most refine_starts
    std::array<double, 5> x{};
    std::array<std::size_t, 5> idx{};
    const std::size_t total = r * r * r * r * r;
    for (std::size_t flat = 0; flat < total; ++flat) {
        std::size_t rem = flat;
        for (int k = 4; k >= 0; --k) {
            idx[k] = rem % r;
            rem /= r;
        }
        x[0] = dt * static_cast<double>(idx[0]);
        for (int k = 1; k < 5; ++k) x[k] = dphi * static_cast<double>(idx[k]);
        const double v = planar_f(x);
        ++budget.used;
        if (top.size() < opt.refine_starts || v > top.back().value) {
            Candidate c{v, x};
            auto pos = std::upper_bound(top.begin(), top.end(), c,
                                        [](const Candidate& a, const Candidate& b) { return a.value > b.value; });
            top.insert(pos, c);
            if (top.size() > opt.refine_starts) top.pop_back();
        }
    }

    LocalResult best{{}, -std::numeric_limits<double>::infinity(), 0.0};
    bool best_is_planar = true;
    const std::size_t per_planar = static_cast<std::size_t>(0.3 * static_cast<double>(budget_limit)) / top.size();
    for (const auto& c : top) {
        LocalResult res = compass(planar_f, std::vector<double>(c.x.begin(), c.x.end()), c.value, dphi / 2,
                                  opt.tolerance, budget, per_planar);
        if (res.value > best.value) best = std::move(res);
    }

    // Full-sphere pass: the planar optimum plus seeded random starts.
    const Strategy planar_best = planar_strategy(best.x);
    std::vector<std::vector<double>> starts{to_sphere_params(planar_best)};
    CounterRng rng(seed, 0);
    for (std::size_t k = 0; k < opt.sphere_random_starts; ++k) {
        std::vector<double> s0{rng.uniform() * kPi / 2};
        for (int m = 0; m < 4; ++m) {
            s0.push_back(std::acos(2.0 * rng.uniform() - 1.0));
            s0.push_back(2.0 * kPi * rng.uniform());
        }
        starts.push_back(std::move(s0));
    }
    const std::size_t per_sphere = budget.remaining() / starts.size();
    for (std::size_t k = 0; k < starts.size(); ++k) {
        const double v0 = sphere_f(starts[k]);
        ++budget.used;
        LocalResult res = compass(sphere_f, starts[k], v0, k == 0 ? 1e-3 : 0.25, opt.tolerance, budget, per_sphere);
        if (res.value > best.value) {
            best = std::move(res);
            best_is_planar = false;
        }
    }

    SearchReport rep;
    rep.best_strategy = best_is_planar ? planar_strategy(best.x) : sphere_strategy(best.x);
    rep.best_value = evaluate(obj, rep.best_strategy, p, xi);
    rep.rhs = rhs;
    rep.margin = rhs - rep.best_value;
    rep.evaluations = budget.used;
    rep.final_step = best.step;
    rep.converged = best.step < opt.converged_step;
    return rep;
}

}  // namespace detail

/// Maximizes I^2 + (2 - alpha beta)^2 <B1>^2 over qubit strategies.
inline SearchReport maximize_lhs(const BellParams& p, std::size_t budget, std::uint64_t seed, double xi = 0.0,
                                 const SearchOptions& opt = {}) {
    return detail::search(Objective::conjecture_lhs, p, xi, budget, seed, rhs_conjecture(p), opt);
}

/// Maximizes I_{alpha,beta} over qubit strategies; rhs is the closed-form quantum maximum.
inline SearchReport find_max_violation(const BellParams& p, std::size_t budget, std::uint64_t seed,
                                       const SearchOptions& opt = {}) {
    return detail::search(Objective::bell_value, p, 0.0, budget, seed, max_quantum_value(p), opt);
}

/// Compass refinement (full sphere) from a given strategy.
inline SearchReport refine_strategy(const Strategy& start, Objective obj, const BellParams& p, std::size_t budget,
                                    double xi = 0.0, double initial_step = 1e-3, const SearchOptions& opt = {}) {
    detail::Budget b{budget};
    const auto f = [&](std::span<const double> x) { return evaluate(obj, detail::sphere_strategy(x), p, xi); };
    const std::vector<double> x0 = detail::to_sphere_params(start);
    const double v0 = f(x0);
    ++b.used;
    const detail::LocalResult res = detail::compass(f, x0, v0, initial_step, opt.tolerance, b, budget);
    SearchReport rep;
    rep.best_strategy = detail::sphere_strategy(res.x);
    rep.best_value = evaluate(obj, rep.best_strategy, p, xi);
    rep.rhs = obj == Objective::conjecture_lhs ? rhs_conjecture(p) : max_quantum_value(p);
    rep.margin = rep.rhs - rep.best_value;
    rep.evaluations = b.used;
    rep.final_step = res.step;
    rep.converged = res.step < opt.converged_step;
    return rep;
}

}  // namespace seqcert
