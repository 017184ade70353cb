// SPDX-License-Identifier: Apache-2.0
//
// pass-aircomp: pinching-antenna aided over-the-air computation
// Copyright (C) 2026 The pass-aircomp authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

// Command-line experiment runner.
//
//   pass_aircomp run <config.json> [--seed N] [--workers N] [--out results.csv]
//   pass_aircomp validate <config.json>
//   pass_aircomp trace <config.json> [--scheme Proposed] [--realization 0] [--value V]
//                      [--substeps] [--out trace.csv]
//
// Exit codes: 0 success, 1 config violation, 2 runtime failure.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "pass_aircomp/harness.hpp"

namespace {

using namespace pass_aircomp;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitRuntime = 2;

void print_violations(const std::vector<Violation>& violations)
{
    for (const auto& v : violations) {
        std::cerr << "config violation: " << (v.path.empty() ? "$" : v.path) << ": " << v.message
                  << '\n';
    }
}

int cmd_run(const std::string& path, std::optional<std::uint64_t> seed,
            std::optional<int> workers, std::optional<std::string> out)
{
    LoadedConfig loaded = load_config(path);
    if (seed) loaded.config.seed = *seed;
    if (workers) loaded.config.workers = *workers;
    if (out) loaded.config.output_path = *out;
    if (seed || workers || out) loaded.violations = validate_config(loaded.config);
    if (!loaded.violations.empty()) {
        print_violations(loaded.violations);
        return kExitConfig;
    }
    const ExperimentConfig& config = loaded.config;

    const ExperimentResult result = run_experiment(config);
    const auto parent = std::filesystem::path(config.output_path).parent_path();
    if (!parent.empty()) {
        std::error_code ec;
        std::filesystem::create_directories(parent, ec);
    }
    std::ofstream csv(config.output_path, std::ios::binary);
    if (!csv) {
        std::cerr << "cannot write " << config.output_path << '\n';
        return kExitRuntime;
    }
    write_csv(csv, result.rows, config.record_timing);

    const std::string summary_file = summary_path(config.output_path);
    std::ofstream summary(summary_file, std::ios::binary);
    if (!summary) {
        std::cerr << "cannot write " << summary_file << '\n';
        return kExitRuntime;
    }
    write_summary_csv(summary, result.summary);

    int errors = 0;
    for (const auto& row : result.rows) {
        if (!row.error.empty()) {
            ++errors;
            std::cerr << "error: " << row.scheme << " realization " << row.realization << ": "
                      << row.error << '\n';
        }
    }
    std::cout << "wrote " << result.rows.size() << " rows to " << config.output_path << " ("
              << errors << " errors), summary in " << summary_file << '\n';
    for (const auto& s : result.summary) {
        if (s.sweep_param == "iteration") continue;
        std::printf("  %-17s %s=%-8g mean_mse=%.6g\n", s.scheme.c_str(), s.sweep_param.c_str(),
                    s.sweep_value, s.mean_mse);
    }
    return kExitOk;
}

int cmd_validate(const std::string& path)
{
    const LoadedConfig loaded = load_config(path);
    if (!loaded.violations.empty()) {
        print_violations(loaded.violations);
        return kExitConfig;
    }
    std::cout << "ok\n";
    return kExitOk;
}

int cmd_trace(const std::string& path, const std::string& scheme_text, int realization,
              std::optional<double> value, bool substeps, std::optional<std::string> out)
{
    const LoadedConfig loaded = load_config(path);
    if (!loaded.violations.empty()) {
        print_violations(loaded.violations);
        return kExitConfig;
    }
    const auto scheme = parse_scheme(scheme_text);
    if (!scheme) {
        std::cerr << "config violation: --scheme: unknown scheme '" << scheme_text << "'\n";
        return kExitConfig;
    }
    if (realization < 0) {
        std::cerr << "config violation: --realization: must be nonnegative\n";
        return kExitConfig;
    }
    const ExperimentConfig& config = loaded.config;
    double sweep_value = 0.0;
    if (config.sweep != SweepKind::ConvergenceTrace) {
        sweep_value = value.value_or(config.sweep_values.front());
    }

    const SystemGeometry geometry = geometry_for(config, sweep_value);
    const std::uint64_t seed =
        realization_seed(config.seed, static_cast<std::uint64_t>(realization));
    const UserSet users = sample_users(geometry, seed);
    const AoReport report = solve_scheme(*scheme, geometry, users,
                                         budgets_for(config, geometry.num_users), config.ao,
                                         config.baselines);

    std::ofstream file;
    if (out) {
        file.open(*out, std::ios::binary);
        if (!file) {
            std::cerr << "cannot write " << *out << '\n';
            return kExitRuntime;
        }
    }
    std::ostream& sink = out ? static_cast<std::ostream&>(file) : std::cout;
    const auto& trace = substeps ? report.substep_trace : report.objective_trace;
    sink << (substeps ? "substep,objective\n" : "iteration,objective\n");
    char buf[64];
    for (std::size_t i = 0; i < trace.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.12g", trace[i]);
        sink << (substeps ? i : i + 1) << ',' << buf << '\n';
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Pinching-antenna AirComp experiments"};
    app.require_subcommand(1);

    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<int> workers;
    std::optional<std::string> out;
    auto* run = app.add_subcommand("run", "Run a Monte-Carlo sweep and write CSV results");
    run->add_option("config", config_path, "Experiment config (JSON)")->required();
    run->add_option("--seed", seed, "Override the master seed");
    run->add_option("--workers", workers, "Override the worker count");
    run->add_option("--out", out, "Override the output CSV path");

    auto* validate = app.add_subcommand("validate", "Check a config file");
    validate->add_option("config", config_path, "Experiment config (JSON)")->required();

    std::string scheme = "Proposed";
    int realization = 0;
    std::optional<double> value;
    bool substeps = false;
    auto* trace = app.add_subcommand("trace", "Dump the convergence trace of one instance");
    trace->add_option("config", config_path, "Experiment config (JSON)")->required();
    trace->add_option("--scheme", scheme, "Scheme to trace");
    trace->add_option("--realization", realization, "Realization index");
    trace->add_option("--value", value, "Sweep value (defaults to the first)");
    trace->add_flag("--substeps", substeps, "Emit the MSE after every sub-step");
    trace->add_option("--out", out, "Write the trace here instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (*run) return cmd_run(config_path, seed, workers, out);
        if (*validate) return cmd_validate(config_path);
        if (*trace) return cmd_trace(config_path, scheme, realization, value, substeps, out);
    } catch (const std::exception& e) {
        std::cerr << "runtime failure: " << e.what() << '\n';
        return kExitRuntime;
    }
    return kExitRuntime;
}
