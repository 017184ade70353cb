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

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pass_aircomp/baselines.hpp"

namespace pass_aircomp {

enum class Scheme { Proposed, FixedPa, ConventionalMimo, DiscretePass, PgdPositions };

std::string_view scheme_name(Scheme scheme);
std::optional<Scheme> parse_scheme(std::string_view name);
std::vector<Scheme> all_schemes();

enum class SweepKind { ConvergenceTrace, WaveguideLength, NumPas, NumUsers };

std::string_view sweep_name(SweepKind kind);
std::optional<SweepKind> parse_sweep(std::string_view name);
/// CSV column value for sweep_param, e.g. "L_x" or "iteration".
std::string_view sweep_param(SweepKind kind);

struct ExperimentConfig {
    SystemGeometry geometry = SystemGeometry::reference();
    /// Recompute a = L_y / (M - 1) for every swept geometry.
    bool derive_waveguide_spacing = true;
    /// Tie L_0 to half a wavelength instead of geometry.min_pa_spacing.
    bool half_wavelength_min_spacing = true;

    SweepKind sweep = SweepKind::ConvergenceTrace;
    std::vector<double> sweep_values;
    int num_realizations = 300;
    std::uint64_t seed = 1;
    std::vector<Scheme> schemes = all_schemes();
    /// One entry applies to every user; otherwise exactly one per user.
    std::vector<double> budgets_w = {1e-3};
    std::string output_path = "results.csv";
    int workers = 1;
    /// When false the wall_ms column is written as 0 so output bytes depend
    /// only on the config.
    bool record_timing = false;

    AoConfig ao;
    BaselineParams baselines;
};

struct Violation {
    std::string path;
    std::string message;
};

/// Every invariant violation of `config`, each with a path into the config.
std::vector<Violation> validate_config(const ExperimentConfig& config);

struct LoadedConfig {
    ExperimentConfig config;
    /// Parse problems (unknown keys, wrong types) followed by validate_config.
    std::vector<Violation> violations;
};

/// Parses the JSON config format. Never throws on bad input; problems are
/// reported as violations.
LoadedConfig parse_config(std::string_view text);
LoadedConfig load_config(const std::string& path);

/// Child seed of realization `index`; independent of execution order.
std::uint64_t realization_seed(std::uint64_t master_seed, std::uint64_t index);

/// K users uniform on [0, L_x] x [0, L_y] x {0}. User k consumes the k-th
/// pair of draws, so growing K keeps the earlier users in place.
UserSet sample_users(const SystemGeometry& geometry, std::uint64_t seed);

/// The base geometry with the swept parameter set to `value`.
SystemGeometry geometry_for(const ExperimentConfig& config, double value);

Eigen::VectorXd budgets_for(const ExperimentConfig& config, int num_users);

AoReport solve_scheme(Scheme scheme, const SystemGeometry& geometry, const UserSet& users,
                      const Eigen::VectorXd& budgets, const AoConfig& ao,
                      const BaselineParams& params);

struct ResultRow {
    std::string scheme;
    std::string sweep_param;
    double sweep_value = 0.0;
    int realization = 0;
    double mse = 0.0;
    int iterations = 0;
    double wall_ms = 0.0;
    std::uint64_t seed = 0;
    /// Empty on success; the solver message for error rows (mse is NaN).
    std::string error;
};

struct SummaryRow {
    std::string scheme;
    std::string sweep_param;
    double sweep_value = 0.0;
    double mean_mse = 0.0;
    int realizations = 0;
    int errors = 0;
};

struct ExperimentResult {
    std::vector<ResultRow> rows;
    std::vector<SummaryRow> summary;
};

ExperimentResult run_experiment(const ExperimentConfig& config);

std::vector<SummaryRow> summarize(const std::vector<ResultRow>& rows);

void write_csv(std::ostream& out, const std::vector<ResultRow>& rows, bool record_timing);
void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows);

/// Path of the summary written next to `output_path`.
std::string summary_path(const std::string& output_path);

}  // namespace pass_aircomp
