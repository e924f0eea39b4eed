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

#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "seqcert/cli.hpp"

int main(int argc, char** argv) {
    using namespace seqcert::cli;

    CLI::App app{"Sequential randomness certification: reports, bound curves, conjecture checks, sampling"};
    app.require_subcommand(1);

    CertifyArgs certify_args;
    std::string certify_out;
    auto* certify_cmd = app.add_subcommand("certify", "Certify a measurement sequence from a JSON config");
    certify_cmd->add_option("--config", certify_args.config, "Run configuration (JSON)")->required();
    certify_cmd->add_option("--out", certify_out, "Report path; the step CSV goes next to it");

    BoundCurveArgs curve_args;
    std::string curve_out;
    auto* curve_cmd = app.add_subcommand("bound-curve", "Tabulate the guessing-probability bound against I");
    curve_cmd->add_option("--theta", curve_args.theta, "State angle in (0, pi/4]")->required();
    curve_cmd->add_option("--samples", curve_args.samples, "Number of grid points (>= 2)");
    curve_cmd->add_option("--out", curve_out, "CSV path (stdout if omitted)");

    VerifyArgs verify_args;
    std::string grid_text;
    std::string verify_out;
    auto* verify_cmd = app.add_subcommand("verify-conjecture", "Maximize the conjectured-inequality LHS on a grid");
    verify_cmd->add_option("--grid", grid_text, "alpha:beta,alpha:beta,... (default: the reference grid)");
    verify_cmd->add_option("--budget", verify_args.budget, "Evaluations per grid point (>= 10000)");
    verify_cmd->add_option("--seed", verify_args.seed, "Seed of the random restarts");
    verify_cmd->add_option("--xi", verify_args.xi, "Weak parameter of B1 (0 = projective)");
    verify_cmd->add_option("--out", verify_out, "JSON path (stdout if omitted)");

    SampleArgs sample_args;
    std::size_t sample_n = 0;
    std::uint64_t sample_seed = 0;
    unsigned sample_workers = 1;
    std::string sample_out;
    auto* sample_cmd = app.add_subcommand("sample", "Sample protocol rounds and estimate correlators");
    sample_cmd->add_option("--config", sample_args.config, "Run configuration (JSON)")->required();
    auto* n_opt = sample_cmd->add_option("--samples", sample_n, "Number of rounds");
    auto* seed_opt = sample_cmd->add_option("--seed", sample_seed, "Seed");
    auto* workers_opt = sample_cmd->add_option("--workers", sample_workers, "Worker threads");
    sample_cmd->add_option("--out", sample_out, "NDJSON path; estimates go next to it");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInvalid;
    }

    if (*certify_cmd) {
        if (!certify_out.empty()) certify_args.out = certify_out;
        return certify(certify_args, std::cout, std::cerr);
    }
    if (*curve_cmd) {
        if (!curve_out.empty()) curve_args.out = curve_out;
        return bound_curve(curve_args, std::cout, std::cerr);
    }
    if (*verify_cmd) {
        try {
            verify_args.grid = grid_text.empty() ? default_grid() : parse_grid(grid_text);
        } catch (const seqcert::DomainError& e) {
            std::cerr << "invalid input: " << e.what() << '\n';
            return kExitInvalid;
        }
        if (!verify_out.empty()) verify_args.out = verify_out;
        return verify_conjecture(verify_args, std::cout, std::cerr);
    }
    if (*n_opt) sample_args.samples = sample_n;
    if (*seed_opt) sample_args.seed = sample_seed;
    if (*workers_opt) sample_args.workers = sample_workers;
    if (!sample_out.empty()) sample_args.out = sample_out;
    return sample(sample_args, std::cout, std::cerr);
}
