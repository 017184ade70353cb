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

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "pass_aircomp/model.hpp"

namespace pass_aircomp {

struct AoConfig {
    int grid_points = 2000;               // L, uniform candidates over [0, L_x]
    double convergence_threshold = 1e-6;  // absolute objective decrease
    int max_iterations = 100;
    bool include_current_position = true;
    /// Zoom passes around the best candidate after the uniform scan; each pass
    /// evaluates refine_points over +-1 step of the previous resolution.
    int refine_levels = 4;
    int refine_points = 17;
    /// Gauss-Seidel passes per outer iteration; stops early once a pass
    /// leaves every position unchanged.
    int sweeps_per_iteration = 3;

    std::vector<std::string> violations() const;
};

/// Coefficients of the scalar objective for one PA:
///   f(v) = sum_k A_k |alpha_{m,k}(v)|^2 + 2 Re(B_k alpha_{m,k}(v)).
struct SubproblemCoefficients {
    Eigen::VectorXd a_coeffs;   // |w_m|^2 p_k
    Eigen::VectorXcd b_coeffs;  // |w_m|^2 p_k conj(beta_k) + conj(w_m) sqrt(p_k) conj(q_k)
    Eigen::VectorXcd beta;      // contribution of the other PAs on waveguide m
    Eigen::VectorXcd q;         // c P - 1 with c = sum_{m' != m} conj(w_m') g_m'
};

struct AoReport {
    /// MSE after each outer iteration.
    std::vector<double> objective_trace;
    /// MSE after every sub-step (decoder, power, each position change). The
    /// first entry is the w = 0 reference, which equals K.
    std::vector<double> substep_trace;
    Decoder final_decoder;
    PowerAllocation final_power;
    PaLayout final_layout;
    int iterations_used = 0;
    bool converged = false;
    /// Set by position steps that could not make progress (PGD line search).
    bool stalled = false;

    double final_mse() const { return objective_trace.empty() ? 0.0 : objective_trace.back(); }
};

/// Raised when the AO cannot be started (infeasible geometry, bad config).
class ConfigurationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Throws ConfigurationError when the instance cannot be optimized.
void check_problem(const SystemGeometry& geometry, const UserSet& users,
                   const Eigen::VectorXd& budgets, const AoConfig& config);

/// Minimizer of the MSE over w for fixed G and P:
///   w* = (G P P^T G^H + noise I)^{-1} G P 1.
Decoder optimal_decoder(const ChannelMatrix& channel, const PowerAllocation& power,
                        double noise_variance);
Decoder optimal_decoder(const ChannelMatrix& channel, const PowerAllocation& power,
                        const SystemGeometry& geometry);

/// Lagrange multipliers of the per-user power constraints,
/// lambda_k = max(0, Re(r_k) / sqrt(P^max_k) - |r_k|^2) with r = G^H w.
Eigen::VectorXd power_multipliers(const ChannelMatrix& channel, const Decoder& decoder,
                                  const Eigen::VectorXd& budgets);

/// KKT solution of the power subproblem. Amplitudes are
/// Re(r_k) / (|r_k|^2 + lambda_k) clamped into [0, sqrt(P^max_k)]; a user with
/// r_k = 0 gets zero amplitude.
PowerAllocation optimal_power(const ChannelMatrix& channel, const Decoder& decoder,
                              const Eigen::VectorXd& budgets);

SubproblemCoefficients subproblem_coefficients(const SystemGeometry& geometry,
                                               const UserSet& users,
                                               const ChannelMatrix& channel,
                                               const Decoder& decoder,
                                               const PowerAllocation& power,
                                               const PaLayout& layout, int m, int n);

double subproblem_objective(const SubproblemCoefficients& coeffs,
                            const SystemGeometry& geometry, const UserSet& users, int m,
                            double v);

/// Positions of the adjacent PAs on the same waveguide; absent at the ends.
struct NeighborPositions {
    std::optional<double> left;
    std::optional<double> right;
};

/// Closed feasible window [left + L_0, right - L_0] clipped to [0, L_x].
std::pair<double, double> feasible_window(const SystemGeometry& geometry,
                                          const NeighborPositions& neighbors);

/// Candidate set of one grid search in ascending order: the uniform grid
/// points inside the feasible window plus, when requested, the incumbent.
std::vector<double> grid_candidates(const SystemGeometry& geometry,
                                    const NeighborPositions& neighbors, const AoConfig& config,
                                    std::optional<double> incumbent);

/// Argmin of subproblem_objective over grid_candidates, smallest position on
/// ties, followed by refine_levels zoom passes inside the feasible window.
/// Returns nullopt when no candidate is feasible.
std::optional<double> grid_search_position(const SubproblemCoefficients& coeffs,
                                           const SystemGeometry& geometry,
                                           const UserSet& users, int m,
                                           const NeighborPositions& neighbors,
                                           const AoConfig& config,
                                           std::optional<double> incumbent);

/// Invoked after each single-PA update with (m, n, full MSE).
using SweepObserver = std::function<void(int, int, double)>;

/// One Gauss-Seidel pass over all PAs in row-major order. `channel` is kept in
/// sync with the returned layout. With include_current_position set, an
/// update that would raise the MSE is rejected so the MSE never increases.
PaLayout gauss_seidel_sweep(const SystemGeometry& geometry, const UserSet& users,
                            const Decoder& decoder, const PowerAllocation& power,
                            const PaLayout& layout, ChannelMatrix& channel,
                            const AoConfig& config, const SweepObserver& observer = {});

/// Uniform initialization v_{m,n} = L_x n / (N + 1). If that spacing is
/// below L_0, the PAs are packed at exactly L_0 around the waveguide center.
PaLayout initial_layout(const SystemGeometry& geometry);

/// State handed to a position step of the generic AO loop.
struct AoProblem {
    ChannelMatrix channel;
    PaLayout layout;
    Eigen::VectorXd budgets;
    double noise_variance = 0.0;
};

/// Updates `layout` and `channel` in place for the current decoder and power
/// and calls `record` with the MSE after every accepted change.
using PositionStep =
    std::function<void(PaLayout& layout, ChannelMatrix& channel, const Decoder& decoder,
                       const PowerAllocation& power, const std::function<void(double)>& record)>;

/// Decoder -> power -> positions, repeated until the objective decrease falls
/// below the threshold. An empty `position_step` freezes the layout.
AoReport run_alternating(AoProblem problem, const AoConfig& config,
                         const PositionStep& position_step);

/// Joint design of PA positions, power and decoder starting from
/// initial_layout and full power.
AoReport alternating_optimize(const SystemGeometry& geometry, const UserSet& users,
                              const Eigen::VectorXd& budgets, const AoConfig& config);

}  // namespace pass_aircomp
