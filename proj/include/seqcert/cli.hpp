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

// Subcommands of the seqcert tool. Each returns the process exit code:
//   0 success, 2 invalid input, 3 numeric infeasibility, 4 counterexample.

#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "seqcert/io.hpp"

namespace seqcert::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 2;
inline constexpr int kExitInfeasible = 3;
inline constexpr int kExitCounterexample = 4;

struct CertifyArgs {
    std::string config;
    std::optional<std::string> out;
};

struct BoundCurveArgs {
    double theta = kPi / 4;
    std::size_t samples = 101;
    std::optional<std::string> out;  // stdout when absent
};

struct GridPoint {
    double alpha = 1.0;
    double beta = 0.0;
};

struct VerifyArgs {
    std::vector<GridPoint> grid;
    std::size_t budget = 1000000;
    std::uint64_t seed = 7;
    double xi = 0.0;
    std::optional<std::string> out;  // stdout when absent
};

struct SampleArgs {
    std::string config;
    std::optional<std::size_t> samples;
    std::optional<std::uint64_t> seed;
    std::optional<unsigned> workers;
    std::optional<std::string> out;
};

/// alpha = 1 with beta in {0, beta(pi/8), beta(pi/16)}, plus (1.5, 1).
inline std::vector<GridPoint> default_grid() {
    return {{1.0, 0.0}, {1.0, beta_of_theta(kPi / 8)}, {1.0, beta_of_theta(kPi / 16)}, {1.5, 1.0}};
}

/// Parses "a:b,a:b,...". Throws DomainError on malformed entries or alpha * beta >= 2.
inline std::vector<GridPoint> parse_grid(const std::string& text) {
    std::vector<GridPoint> grid;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto colon = item.find(':');
        if (colon == std::string::npos) throw DomainError("grid: entry '" + item + "' is not alpha:beta");
        GridPoint g;
        try {
            std::size_t used = 0;
            const std::string a = item.substr(0, colon);
            const std::string b = item.substr(colon + 1);
            g.alpha = std::stod(a, &used);
            if (used != a.size()) throw std::invalid_argument(a);
            g.beta = std::stod(b, &used);
            if (used != b.size()) throw std::invalid_argument(b);
        } catch (const std::logic_error&) {
            throw DomainError("grid: entry '" + item + "' is not alpha:beta");
        }
        BellParams(g.alpha, g.beta);  // validates alpha >= 1, beta >= 0, alpha * beta < 2
        grid.push_back(g);
    }
    if (grid.empty()) throw DomainError("grid: no entries");
    return grid;
}

inline std::string reference_line(double total_bits) {
    return "reference: standard-scenario cap 4 log2(d) = 4 bits for d = 2; certified total_bits = " +
           fmt17(total_bits) + (total_bits > 4.0 ? " (exceeds the cap)" : " (within the cap)");
}

inline int certify(const CertifyArgs& args, std::ostream& out, std::ostream& err) {
    RunConfig rc;
    try {
        rc = load_run_config(args.config);
    } catch (const DomainError& e) {
        err << "config error: " << e.what() << '\n';
        return kExitInvalid;
    }
    try {
        const ProtocolConfig cfg = resolve_protocol(rc);
        CertificationReport report = seqcert::certify(cfg);
        if (rc.target_bits && !(report.total_bits > *rc.target_bits)) {
            report.warnings.push_back("target_bits: " + fmt17(*rc.target_bits) + " not exceeded");
        }
        const std::filesystem::path path = args.out ? *args.out : rc.out.value_or("report.json");
        write_atomic(path, report_to_json(report, config_echo(rc, cfg)).dump(2) + "\n");
        write_atomic(sibling(path, ".csv"), steps_csv(report));
        if (!rc.noise_grid.empty()) write_atomic(sibling(path, ".noise.csv"), noise_csv(noise_sweep(cfg, rc.noise_grid)));
        out << "wrote " << path.string() << " (" << cfg.n() << " steps)\n";
        out << reference_line(report.total_bits) << '\n';
        return kExitOk;
    } catch (const DomainError& e) {
        err << "invalid input: " << e.what() << '\n';
        return kExitInvalid;
    } catch (const std::exception& e) {
        err << "numeric failure: " << e.what() << '\n';
        return kExitInfeasible;
    }
}

inline constexpr const char* kCurveCsvHeader = "I,g_upper,min_entropy_bits";

/// guessing_bound over I in [classical, Imax] for alpha = 1, beta(theta);
/// the endpoints are exact grid points.
inline std::string bound_curve_csv(double theta, std::size_t samples) {
    if (!(theta > 0.0 && theta <= kPi / 4)) throw DomainError("theta: must lie in (0, pi/4]");
    if (samples < 2) throw DomainError("samples: need at least 2 points");
    const BellParams p = BellParams::for_angle(theta);
    const double lo = classical_bound(p);
    const double hi = max_quantum_value(p);
    std::ostringstream os;
    os << kCurveCsvHeader << '\n';
    for (std::size_t k = 0; k < samples; ++k) {
        const double i = k + 1 == samples ? hi : lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(samples - 1);
        const RandomnessBound b = guessing_bound(i, p);
        os << fmt17(i) << ',' << fmt17(b.g_upper) << ',' << fmt17(b.min_entropy_bits) << '\n';
    }
    return os.str();
}

inline int bound_curve(const BoundCurveArgs& args, std::ostream& out, std::ostream& err) {
    std::string csv;
    try {
        csv = bound_curve_csv(args.theta, args.samples);
    } catch (const DomainError& e) {
        err << "invalid input: " << e.what() << '\n';
        return kExitInvalid;
    } catch (const std::exception& e) {
        err << "numeric failure: " << e.what() << '\n';
        return kExitInfeasible;
    }
    if (args.out) {
        write_atomic(*args.out, csv);
    } else {
        out << csv;
    }
    return kExitOk;
}

inline int verify_conjecture(const VerifyArgs& args, std::ostream& out, std::ostream& err) {
    if (args.grid.empty()) {
        err << "invalid input: grid: no entries\n";
        return kExitInvalid;
    }
    Json reports = Json::array();
    bool counterexample = false;
    try {
        for (const auto& g : args.grid) {
            const BellParams p(g.alpha, g.beta);
            const SearchReport r = maximize_lhs(p, args.budget, args.seed, args.xi);
            Json j = to_json(r);
            j["alpha"] = g.alpha;
            j["beta"] = g.beta;
            reports.push_back(j);
            counterexample = counterexample || r.counterexample();
        }
    } catch (const DomainError& e) {
        err << "invalid input: " << e.what() << '\n';
        return kExitInvalid;
    } catch (const std::exception& e) {
        err << "numeric failure: " << e.what() << '\n';
        return kExitInfeasible;
    }
    const Json doc{{"budget", args.budget}, {"seed", args.seed},   {"xi", args.xi},
                   {"reports", reports},    {"counterexample", counterexample}};
    if (args.out) {
        write_atomic(*args.out, doc.dump(2) + "\n");
    } else {
        out << doc.dump(2) << '\n';
    }
    if (counterexample) {
        err << "counterexample: a margin fell below -" << fmt17(kConjectureSlack) << '\n';
        return kExitCounterexample;
    }
    return kExitOk;
}

inline int sample(const SampleArgs& args, std::ostream& out, std::ostream& err) {
    RunConfig rc;
    SamplingPlan plan;
    ProtocolConfig cfg(kPi / 4, {kPi / 4});
    try {
        rc = load_run_config(args.config);
        cfg = resolve_protocol(rc);
        plan.rounds = args.samples.value_or(rc.samples.value_or(0));
        if (plan.rounds == 0) throw DomainError("samples: need at least 1 round");
        plan.seed = args.seed.value_or(rc.seed.value_or(0));
        plan.workers = args.workers.value_or(rc.workers);
        plan.gammas = rc.gammas.empty() ? std::vector<double>(cfg.n(), 0.5) : rc.gammas;
        plan.alice_weights = rc.alice_weights;
    } catch (const DomainError& e) {
        err << "invalid input: " << e.what() << '\n';
        return kExitInvalid;
    } catch (const std::exception& e) {
        err << "numeric failure: " << e.what() << '\n';
        return kExitInfeasible;
    }
    try {
        const std::vector<RunSample> runs = sample_runs(cfg, plan);
        std::string ndjson;
        for (const auto& s : runs) ndjson += to_json(s).dump() + "\n";
        std::string estimates;
        for (std::size_t i = 1; i <= cfg.n(); ++i) {
            estimates += to_json(estimate(runs, i), exact_step_correlators(cfg, i)).dump() + "\n";
        }
        const std::filesystem::path path = args.out ? *args.out : rc.out.value_or("samples.ndjson");
        write_atomic(path, ndjson);
        write_atomic(sibling(path, ".estimates.ndjson"), estimates);
        out << "wrote " << path.string() << " (" << runs.size() << " rounds)\n";
        return kExitOk;
    } catch (const DomainError& e) {
        err << "invalid input: " << e.what() << '\n';
        return kExitInvalid;
    } catch (const std::exception& e) {
        err << "numeric failure: " << e.what() << '\n';
        return kExitInfeasible;
    }
}

}  // namespace seqcert::cli
