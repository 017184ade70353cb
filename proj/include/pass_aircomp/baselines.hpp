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

#include <optional>
#include <string>
#include <vector>

#include "pass_aircomp/optimizer.hpp"

namespace pass_aircomp {

enum class BaselineKind { FixedPa, ConventionalMimo, DiscretePass, PgdPositions };

struct BaselineParams {
    int discrete_candidates = 300;
    double pgd_initial_step = 1e-2;
    double pgd_backtrack = 0.5;
    double pgd_armijo = 1e-4;
    int pgd_max_iterations = 200;
    /// Center of the conventional array; defaults to the middle of the area.
    std::optional<double> mimo_center_x;
    std::optional<double> mimo_center_y;

    std::vector<std::string> violations() const;
};

/// Layout frozen at initial_layout; only decoder and power alternate.
AoReport fixed_pa_baseline(const SystemGeometry& geometry, const UserSet& users,
                           const Eigen::VectorXd& budgets, const AoConfig& config);

/// Antenna m of the conventional array: lambda/2-spaced line along y,
/// centered at (mimo_center_x, mimo_center_y, d).
std::vector<Point3> mimo_antenna_positions(const SystemGeometry& geometry,
                                           const BaselineParams& params);

/// Free-space M x K channel of the conventional array, no waveguide phase.
ChannelMatrix mimo_channel(const SystemGeometry& geometry, const UserSet& users,
                           const BaselineParams& params);

/// Conventional M-antenna receiver with per-antenna noise sigma^2. The
/// reported layout is empty.
AoReport conventional_mimo_baseline(const SystemGeometry& geometry, const UserSet& users,
                                    const Eigen::VectorXd& budgets, const AoConfig& config,
                                    const BaselineParams& params = {});

/// The proposed AO restricted to a lattice of `discrete_candidates` points
/// per waveguide.
AoReport discrete_pass_baseline(const SystemGeometry& geometry, const UserSet& users,
                                const Eigen::VectorXd& budgets, const AoConfig& config,
                                const BaselineParams& params = {});

/// ||w^H G(V) P - 1^T||^2 as a function of the layout.
double position_objective(const SystemGeometry& geometry, const UserSet& users,
                          const PaLayout& layout, const Decoder& decoder,
                          const PowerAllocation& power);

/// Analytic gradient of position_objective with respect to every v_{m,n}.
Eigen::MatrixXd position_gradient(const SystemGeometry& geometry, const UserSet& users,
                                  const PaLayout& layout, const Decoder& decoder,
                                  const PowerAllocation& power);

struct ProjectionResult {
    Eigen::RowVectorXd row;
    int cycles = 0;
    double residual = 0.0;  // worst constraint violation at exit
};

/// Euclidean projection of one waveguide row onto
/// {0 <= v <= length, v_{n} - v_{n-1} >= spacing} by Dykstra's alternating
/// projections over the box and each pairwise half-space.
ProjectionResult project_row(const Eigen::RowVectorXd& row, double length, double spacing,
                             double tolerance = 1e-9, int max_cycles = 100000);

PaLayout project_layout(const PaLayout& layout, const SystemGeometry& geometry);

/// The AO with the Gauss-Seidel sweep replaced by projected gradient descent
/// with Armijo backtracking on all positions jointly.
AoReport pgd_positions_baseline(const SystemGeometry& geometry, const UserSet& users,
                                const Eigen::VectorXd& budgets, const AoConfig& config,
                                const BaselineParams& params = {});

AoReport run_baseline(BaselineKind kind, const SystemGeometry& geometry, const UserSet& users,
                      const Eigen::VectorXd& budgets, const AoConfig& config,
                      const BaselineParams& params = {});

}  // namespace pass_aircomp
