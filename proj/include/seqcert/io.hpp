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

// Run configuration files, JSON/CSV/NDJSON serialization and atomic output.
// Needs nlohmann/json ("json.hpp") on the include path.

#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "seqcert/errors.hpp"
#include "seqcert/montecarlo.hpp"
#include "seqcert/optimize.hpp"
#include "seqcert/sequence.hpp"

namespace seqcert {

using Json = nlohmann::json;

/// Schema violation in a run configuration; `pointer` is a JSON pointer to
/// the offending field.
class ConfigError : public DomainError {
  public:
    ConfigError(std::string pointer, const std::string& what)
        : DomainError(pointer.empty() ? what : pointer + ": " + what), pointer_(std::move(pointer)) {}
    const std::string& pointer() const { return pointer_; }

  private:
    std::string pointer_;
};

struct RunConfig {
    double theta1 = 0.0;
    std::optional<std::vector<double>> xis;
    std::optional<double> target_g;
    std::optional<std::size_t> n;
    std::optional<double> target_bits;
    std::vector<double> gammas;
    std::vector<double> alice_weights;
    std::vector<double> noise_grid;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> samples;
    std::optional<std::string> out;
    unsigned workers = 1;
};

inline constexpr std::size_t kMaxAutoSteps = 4096;

namespace detail {

inline double number_at(const Json& j, const std::string& ptr) {
    if (!j.is_number()) throw ConfigError(ptr, "expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) throw ConfigError(ptr, "expected a finite number");
    return v;
}

inline std::uint64_t count_at(const Json& j, const std::string& ptr) {
    if (!j.is_number_integer() || (!j.is_number_unsigned() && j.get<std::int64_t>() < 0)) {
        throw ConfigError(ptr, "expected a nonnegative integer");
    }
    return j.get<std::uint64_t>();
}

inline std::vector<double> numbers_at(const Json& j, const std::string& ptr) {
    if (!j.is_array()) throw ConfigError(ptr, "expected an array of numbers");
    std::vector<double> v;
    for (std::size_t k = 0; k < j.size(); ++k) v.push_back(number_at(j[k], ptr + "/" + std::to_string(k)));
    return v;
}

}  // namespace detail

/// Validates the schema of a run configuration object.
inline RunConfig parse_run_config(const Json& j) {
    using detail::count_at;
    using detail::number_at;
    using detail::numbers_at;
    if (!j.is_object()) throw ConfigError("", "configuration must be a JSON object");
    static const std::set<std::string> known{"theta1", "xis",          "target_g", "n",          "target_bits", "gammas",
                                             "alice_weights", "noise_grid", "seed",     "samples", "out",         "workers"};
    for (const auto& [key, value] : j.items()) {
        if (!known.contains(key)) throw ConfigError("/" + key, "unknown key");
    }
    RunConfig c;
    if (!j.contains("theta1")) throw ConfigError("/theta1", "required");
    c.theta1 = number_at(j["theta1"], "/theta1");
    if (!(c.theta1 > 0.0 && c.theta1 <= kPi / 4)) throw ConfigError("/theta1", "must lie in (0, pi/4]");

    if (j.contains("xis") == j.contains("target_g")) {
        throw ConfigError(j.contains("xis") ? "/target_g" : "/xis", "exactly one of xis and target_g must be given");
    }
    if (j.contains("xis")) {
        c.xis = numbers_at(j["xis"], "/xis");
        if (c.xis->empty()) throw ConfigError("/xis", "needs at least one value");
        for (std::size_t k = 0; k < c.xis->size(); ++k) {
            const double xi = (*c.xis)[k];
            if (!(xi > 0.0 && xi <= kPi / 4)) throw ConfigError("/xis/" + std::to_string(k), "must lie in (0, pi/4]");
        }
    } else {
        c.target_g = number_at(j["target_g"], "/target_g");
        if (!(*c.target_g > 0.5 && *c.target_g < 1.0)) throw ConfigError("/target_g", "must lie in (1/2, 1)");
    }
    if (j.contains("n")) {
        c.n = count_at(j["n"], "/n");
        if (*c.n == 0) throw ConfigError("/n", "must be >= 1");
        if (c.xis && c.xis->size() != *c.n) throw ConfigError("/n", "does not match the length of xis");
    }
    if (j.contains("target_bits")) {
        c.target_bits = number_at(j["target_bits"], "/target_bits");
        if (!(*c.target_bits >= 0.0)) throw ConfigError("/target_bits", "must be >= 0");
    }
    if (c.target_g && !c.n && !c.target_bits) throw ConfigError("/n", "required with target_g unless target_bits is given");

    if (j.contains("gammas")) {
        c.gammas = numbers_at(j["gammas"], "/gammas");
        for (std::size_t k = 0; k < c.gammas.size(); ++k) {
            if (!(c.gammas[k] >= 0.0 && c.gammas[k] <= 1.0)) {
                throw ConfigError("/gammas/" + std::to_string(k), "must lie in [0, 1]");
            }
        }
    }
    if (j.contains("alice_weights")) {
        c.alice_weights = numbers_at(j["alice_weights"], "/alice_weights");
        for (std::size_t k = 0; k < c.alice_weights.size(); ++k) {
            if (!(c.alice_weights[k] >= 0.0)) throw ConfigError("/alice_weights/" + std::to_string(k), "must be >= 0");
        }
    }
    if (j.contains("noise_grid")) {
        c.noise_grid = numbers_at(j["noise_grid"], "/noise_grid");
        for (std::size_t k = 0; k < c.noise_grid.size(); ++k) {
            if (!(c.noise_grid[k] >= 0.0 && c.noise_grid[k] <= 1.0)) {
                throw ConfigError("/noise_grid/" + std::to_string(k), "must lie in [0, 1]");
            }
        }
    }
    if (j.contains("seed")) c.seed = count_at(j["seed"], "/seed");
    if (j.contains("samples")) c.samples = count_at(j["samples"], "/samples");
    if (j.contains("out")) {
        if (!j["out"].is_string() || j["out"].get<std::string>().empty()) throw ConfigError("/out", "expected a path");
        c.out = j["out"].get<std::string>();
    }
    if (j.contains("workers")) {
        const auto w = count_at(j["workers"], "/workers");
        if (w == 0 || w > 64) throw ConfigError("/workers", "must lie in [1, 64]");
        c.workers = static_cast<unsigned>(w);
    }
    return c;
}

inline RunConfig load_run_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("", "cannot open " + path.string());
    Json j;
    try {
        j = Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw ConfigError("", std::string("invalid JSON: ") + e.what());
    }
    return parse_run_config(j);
}

/// Explicit weak parameters for a configuration. With target_g and no n, n
/// grows until total_bits exceeds target_bits.
inline ProtocolConfig resolve_protocol(const RunConfig& c) {
    if (c.xis) return ProtocolConfig(c.theta1, *c.xis);
    if (c.n) return ProtocolConfig(c.theta1, schedule_for_target(c.theta1, *c.target_g, *c.n));
    std::vector<double> xis;
    double theta = c.theta1;
    double bits = 0.0;
    while (!(bits > *c.target_bits)) {
        if (xis.size() >= kMaxAutoSteps) {
            throw ResourceError("target_bits: not reached within " + std::to_string(kMaxAutoSteps) + " steps");
        }
        if (!xis.empty()) {
            theta = branch_angle_stable(theta, xis.back());
            if (!(theta >= kMinBranchAngle)) {
                throw UnderflowExhaustedError("target_bits: branch angle underflows after " + std::to_string(xis.size()) +
                                              " steps with " + to_text(bits) + " bits certified");
            }
        }
        const double xi = xi_for_target(theta, *c.target_g);
        xis.push_back(xi);
        bits += randomness_from_excess(0.0, ideal_excess(theta, xi)).min_entropy_bits;
    }
    return ProtocolConfig(c.theta1, std::move(xis));
}

// ---------------------------------------------------------------------------
// Reports

inline Json config_echo(const RunConfig& c, const ProtocolConfig& p) {
    Json j;
    j["theta1"] = p.theta1();
    j["xis"] = p.xis();
    j["n"] = p.n();
    if (c.target_g) j["target_g"] = *c.target_g;
    if (c.target_bits) j["target_bits"] = *c.target_bits;
    return j;
}

inline Json to_json(const StepCertificate& s) {
    return Json{{"i", s.i},
                {"theta", s.theta},
                {"xi", s.xi},
                {"bell_value", s.bell_value},
                {"bell_max", s.bell_max},
                {"bell_deficit", s.bell_deficit},
                {"g_upper", s.g_upper},
                {"min_entropy_bits", s.min_entropy_bits}};
}

inline Json report_to_json(const CertificationReport& r, const Json& echo) {
    Json steps = Json::array();
    for (const auto& s : r.per_step) steps.push_back(to_json(s));
    return Json{{"config_echo", echo},
                {"steps", steps},
                {"total_bits", r.total_bits},
                {"guess_product", r.sequence_guess_product},
                {"warnings", r.warnings}};
}

/// Inverse of report_to_json. The excess of each step is rebuilt as g_upper - 1/2.
inline CertificationReport report_from_json(const Json& j) {
    CertificationReport r;
    for (const auto& s : j.at("steps")) {
        StepCertificate c;
        c.i = s.at("i").get<std::size_t>();
        c.theta = s.at("theta").get<double>();
        c.xi = s.at("xi").get<double>();
        c.bell_value = s.at("bell_value").get<double>();
        c.bell_max = s.at("bell_max").get<double>();
        c.bell_deficit = s.at("bell_deficit").get<double>();
        c.g_upper = s.at("g_upper").get<double>();
        c.excess = c.g_upper - 0.5;
        c.min_entropy_bits = s.at("min_entropy_bits").get<double>();
        r.per_step.push_back(c);
    }
    r.total_bits = j.at("total_bits").get<double>();
    r.sequence_guess_product = j.at("guess_product").get<double>();
    r.warnings = j.at("warnings").get<std::vector<std::string>>();
    return r;
}

// ---------------------------------------------------------------------------
// Text formats

/// Full double precision: 17 significant digits.
inline std::string fmt17(double v) {
    if (std::isnan(v)) return "nan";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline constexpr const char* kStepCsvHeader = "i,theta,xi,bell_value,bell_max,bell_deficit,g_upper,min_entropy_bits";

inline std::string steps_csv(const CertificationReport& r) {
    std::ostringstream os;
    os << kStepCsvHeader << '\n';
    for (const auto& s : r.per_step) {
        os << s.i << ',' << fmt17(s.theta) << ',' << fmt17(s.xi) << ',' << fmt17(s.bell_value) << ','
           << fmt17(s.bell_max) << ',' << fmt17(s.bell_deficit) << ',' << fmt17(s.g_upper) << ','
           << fmt17(s.min_entropy_bits) << '\n';
    }
    return os.str();
}

inline constexpr const char* kNoiseCsvHeader = "visibility,i,bell_value,g_upper,min_entropy_bits,total_bits";

inline std::string noise_csv(const std::vector<NoiseRow>& rows) {
    std::ostringstream os;
    os << kNoiseCsvHeader << '\n';
    for (const auto& row : rows) {
        for (std::size_t k = 0; k < row.steps.size(); ++k) {
            const auto& s = row.steps[k];
            os << fmt17(row.visibility) << ',' << k + 1 << ',' << fmt17(s.bell_value) << ',' << fmt17(s.g_upper) << ','
               << fmt17(s.min_entropy_bits) << ',' << fmt17(row.total_bits) << '\n';
        }
    }
    return os.str();
}

inline Json to_json(const Vec3& v) { return Json::array({v.x, v.y, v.z}); }

inline Json to_json(const Strategy& s) {
    return Json{{"t", s.t}, {"mA0", to_json(s.mA0)}, {"mA1", to_json(s.mA1)}, {"mB0", to_json(s.mB0)}, {"mB1", to_json(s.mB1)}};
}

inline Json to_json(const SearchReport& r) {
    return Json{{"best_value", r.best_value}, {"best_strategy", to_json(r.best_strategy)},
                {"rhs", r.rhs},               {"margin", r.margin},
                {"evaluations", r.evaluations}, {"converged", r.converged},
                {"final_step", r.final_step}, {"counterexample", r.counterexample()}};
}

inline Json to_json(const RunSample& s) {
    return Json{{"round", s.round}, {"x", s.x}, {"level", s.level}, {"history", s.history}, {"k", s.k},
                {"a", s.a},         {"y", s.y}, {"b", s.b},         {"path", s.path}};
}

inline Json to_json(const CorrelatorSet& c) {
    return Json{{"a0", c.a0},     {"a1", c.a1},     {"b0", c.b0},     {"b1", c.b1},
                {"a0b0", c.a0b0}, {"a1b0", c.a1b0}, {"a0b1", c.a0b1}, {"a1b1", c.a1b1}};
}

inline Json to_json(const EstimateSet& e, const CorrelatorSet& exact) {
    Json counts;
    for (std::size_t k = 0; k < e.counts.size(); ++k) counts[kCorrelatorNames[k]] = e.counts[k];
    return Json{{"step", e.step},           {"rounds", e.rounds},
                {"low_stats", e.low_stats}, {"missing", e.missing},
                {"estimates", to_json(e.values)}, {"std_errors", to_json(e.std_errors)},
                {"counts", counts},         {"exact", to_json(exact)}};
}

// ---------------------------------------------------------------------------
// Output

/// Writes `content` to a sibling temporary file and renames it over `path`.
inline void write_atomic(const std::filesystem::path& path, const std::string& content) {
    namespace fs = std::filesystem;
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os) throw std::runtime_error("cannot write " + tmp.string());
        os << content;
        os.flush();
        if (!os) throw std::runtime_error("write failed for " + tmp.string());
    }
    fs::rename(tmp, path);
}

/// Same path with the extension replaced, e.g. report.json -> report.csv.
inline std::filesystem::path sibling(const std::filesystem::path& path, const std::string& suffix) {
    std::filesystem::path p = path;
    p.replace_extension();
    p += suffix;
    return p;
}

}  // namespace seqcert
