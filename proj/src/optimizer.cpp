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

#include "pass_aircomp/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace pass_aircomp {

namespace {

constexpr double kWindowSlack = 1e-9;

}  // namespace

void check_problem(const SystemGeometry& geometry, const UserSet& users,
                   const Eigen::VectorXd& budgets, const AoConfig& config)
{
    std::vector<std::string> problems = geometry.violations();
    const auto cfg = config.violations();
    problems.insert(problems.end(), cfg.begin(), cfg.end());
    if (users.size() != geometry.num_users) {
        problems.emplace_back("user count does not match num_users");
    }
    if (budgets.size() != geometry.num_users) {
        problems.emplace_back("budget count does not match num_users");
    }
    if ((budgets.array() < 0.0).any()) problems.emplace_back("budgets must be nonnegative");
    if (problems.empty()) return;
    std::ostringstream msg;
    msg << "cannot run alternating optimization:";
    for (const auto& p : problems) msg << " " << p << ";";
    throw ConfigurationError(msg.str());
}

std::vector<std::string> AoConfig::violations() const
{
    std::vector<std::string> out;
    if (grid_points < 2) out.emplace_back("grid_points must be at least 2");
    if (!(convergence_threshold > 0.0)) out.emplace_back("convergence_threshold must be positive");
    if (max_iterations < 1) out.emplace_back("max_iterations must be at least 1");
    if (refine_levels < 0) out.emplace_back("refine_levels must be nonnegative");
    if (refine_levels > 0 && refine_points < 3) out.emplace_back("refine_points must be at least 3");
    if (sweeps_per_iteration < 1) out.emplace_back("sweeps_per_iteration must be at least 1");
    return out;
}

Decoder optimal_decoder(const ChannelMatrix& channel, const PowerAllocation& power,
                        double noise_variance)
{
    const ChannelMatrix scaled = channel * power.amplitudes.cast<cplx>().asDiagonal();
    const Eigen::VectorXcd rhs = scaled.rowwise().sum();
    Eigen::MatrixXcd gram = scaled * scaled.adjoint();
    gram.diagonal().array() += noise_variance;

    const Eigen::LDLT<Eigen::MatrixXcd> ldlt(gram);
    Decoder w = ldlt.solve(rhs);
    // One step of iterative refinement; the Gram matrix spans many decades
    // when the noise floor is far below the signal.
    w += ldlt.solve(rhs - gram * w);
    return w;
}

Decoder optimal_decoder(const ChannelMatrix& channel, const PowerAllocation& power,
                        const SystemGeometry& geometry)
{
    return optimal_decoder(channel, power, feed_noise_variance(geometry));
}

Eigen::VectorXd power_multipliers(const ChannelMatrix& channel, const Decoder& decoder,
                                  const Eigen::VectorXd& budgets)
{
    const Eigen::VectorXcd r = channel.adjoint() * decoder;
    Eigen::VectorXd lambda(r.size());
    for (Eigen::Index k = 0; k < r.size(); ++k) {
        const double cap = std::sqrt(budgets(k));
        lambda(k) = cap > 0.0 ? std::max(0.0, r(k).real() / cap - std::norm(r(k))) : 0.0;
    }
    return lambda;
}

PowerAllocation optimal_power(const ChannelMatrix& channel, const Decoder& decoder,
                              const Eigen::VectorXd& budgets)
{
    const Eigen::VectorXcd r = channel.adjoint() * decoder;
    const Eigen::VectorXd lambda = power_multipliers(channel, decoder, budgets);
    PowerAllocation out = PowerAllocation::zero(budgets);
    for (Eigen::Index k = 0; k < r.size(); ++k) {
        const double cap = std::sqrt(budgets(k));
        const double denom = std::norm(r(k)) + lambda(k);
        if (!(denom > 0.0) || cap <= 0.0) continue;
        out.amplitudes(k) = std::clamp(r(k).real() / denom, 0.0, cap);
    }
    return out;
}

SubproblemCoefficients subproblem_coefficients(const SystemGeometry& geometry,
                                               const UserSet& users,
                                               const ChannelMatrix& channel,
                                               const Decoder& decoder,
                                               const PowerAllocation& power,
                                               const PaLayout& layout, int m, int n)
{
    const int num_users = users.size();
    SubproblemCoefficients out;
    out.a_coeffs.resize(num_users);
    out.b_coeffs.resize(num_users);
    out.beta.resize(num_users);
    out.q.resize(num_users);

    const cplx wm = decoder(m);
    const double wm2 = std::norm(wm);
    for (int k = 0; k < num_users; ++k) {
        cplx others{0.0, 0.0};
        for (Eigen::Index mm = 0; mm < channel.rows(); ++mm) {
            if (mm != m) others += std::conj(decoder(mm)) * channel(mm, k);
        }
        cplx beta{0.0, 0.0};
        for (int nn = 0; nn < layout.num_pas(); ++nn) {
            if (nn != n) beta += pa_response(geometry, users.positions[k], m, layout.positions(m, nn));
        }
        const double amp = power.amplitudes(k);
        const cplx q = others * amp - 1.0;
        out.beta(k) = beta;
        out.q(k) = q;
        out.a_coeffs(k) = wm2 * amp * amp;
        out.b_coeffs(k) = wm2 * amp * amp * std::conj(beta) + std::conj(wm) * amp * std::conj(q);
    }
    return out;
}

double subproblem_objective(const SubproblemCoefficients& coeffs,
                            const SystemGeometry& geometry, const UserSet& users, int m,
                            double v)
{
    double total = 0.0;
    for (int k = 0; k < users.size(); ++k) {
        const cplx alpha = pa_response(geometry, users.positions[k], m, v);
        total += coeffs.a_coeffs(k) * std::norm(alpha) + 2.0 * (coeffs.b_coeffs(k) * alpha).real();
    }
    return total;
}

std::pair<double, double> feasible_window(const SystemGeometry& geometry,
                                          const NeighborPositions& neighbors)
{
    double lo = 0.0;
    double hi = geometry.area_length_x;
    if (neighbors.left) lo = std::max(lo, *neighbors.left + geometry.min_pa_spacing);
    if (neighbors.right) hi = std::min(hi, *neighbors.right - geometry.min_pa_spacing);
    return {lo, hi};
}

std::vector<double> grid_candidates(const SystemGeometry& geometry,
                                    const NeighborPositions& neighbors, const AoConfig& config,
                                    std::optional<double> incumbent)
{
    const auto [lo, hi] = feasible_window(geometry, neighbors);
    std::vector<double> out;
    const int last = config.grid_points - 1;
    const double length = geometry.area_length_x;
    auto point = [&](int i) { return i == last ? length : length * i / last; };

    if (lo <= hi) {
        const int first = std::max(0, static_cast<int>(std::floor(lo / length * last)) - 1);
        const int stop = std::min(last, static_cast<int>(std::ceil(hi / length * last)) + 1);
        for (int i = first; i <= stop; ++i) {
            const double c = point(i);
            if (c >= lo && c <= hi) out.push_back(c);
        }
    }
    if (incumbent && *incumbent >= lo - kWindowSlack && *incumbent <= hi + kWindowSlack) {
        const auto at = std::lower_bound(out.begin(), out.end(), *incumbent);
        if (at == out.end() || *at != *incumbent) out.insert(at, *incumbent);
    }
    return out;
}

std::optional<double> grid_search_position(const SubproblemCoefficients& coeffs,
                                           const SystemGeometry& geometry,
                                           const UserSet& users, int m,
                                           const NeighborPositions& neighbors,
                                           const AoConfig& config,
                                           std::optional<double> incumbent)
{
    const auto candidates = grid_candidates(
        geometry, neighbors, config,
        config.include_current_position ? incumbent : std::nullopt);
    if (candidates.empty()) return std::nullopt;

    double best_v = candidates.front();
    double best_f = subproblem_objective(coeffs, geometry, users, m, best_v);
    auto consider = [&](double v) {
        const double f = subproblem_objective(coeffs, geometry, users, m, v);
        if (f < best_f || (f == best_f && v < best_v)) {
            best_f = f;
            best_v = v;
        }
    };
    for (std::size_t i = 1; i < candidates.size(); ++i) consider(candidates[i]);

    // The uniform grid is about one wavelength coarse at the default
    // resolution, too coarse to align carrier phases; zoom in around the winner.
    const auto [lo, hi] = feasible_window(geometry, neighbors);
    double half_width = geometry.area_length_x / (config.grid_points - 1);
    for (int level = 0; level < config.refine_levels && lo <= hi; ++level) {
        const double left = std::max(lo, best_v - half_width);
        const double right = std::min(hi, best_v + half_width);
        const int points = config.refine_points;
        for (int i = 0; i < points; ++i) {
            consider(i == points - 1 ? right : left + (right - left) * i / (points - 1));
        }
        half_width = (right - left) / (points - 1);
    }
    return best_v;
}

PaLayout gauss_seidel_sweep(const SystemGeometry& geometry, const UserSet& users,
                            const Decoder& decoder, const PowerAllocation& power,
                            const PaLayout& layout, ChannelMatrix& channel,
                            const AoConfig& config, const SweepObserver& observer)
{
    PaLayout out = layout;
    const double noise = feed_noise_variance(geometry);
    double current = mse(decoder, channel, power, noise);
    const int num_pas = out.num_pas();

    auto refresh_row = [&](int m) {
        for (int k = 0; k < users.size(); ++k) {
            channel(m, k) = effective_channel(geometry, users.positions[k], m, out.positions.row(m));
        }
    };

    for (int m = 0; m < out.num_waveguides(); ++m) {
        for (int n = 0; n < num_pas; ++n) {
            NeighborPositions neighbors;
            if (n > 0) neighbors.left = out.positions(m, n - 1);
            if (n + 1 < num_pas) neighbors.right = out.positions(m, n + 1);

            const double old_v = out.positions(m, n);
            const auto coeffs =
                subproblem_coefficients(geometry, users, channel, decoder, power, out, m, n);
            const auto best = grid_search_position(coeffs, geometry, users, m, neighbors, config, old_v);

            if (best && *best != old_v) {
                out.positions(m, n) = *best;
                refresh_row(m);
                const double updated = mse(decoder, channel, power, noise);
                if (config.include_current_position && updated > current) {
                    // Rounding can put the grid winner a few ulps above the incumbent.
                    out.positions(m, n) = old_v;
                    refresh_row(m);
                } else {
                    current = updated;
                }
            }
            if (observer) observer(m, n, current);
        }
    }
    return out;
}

PaLayout initial_layout(const SystemGeometry& geometry)
{
    const int rows = geometry.num_waveguides;
    const int cols = geometry.num_pas_per_waveguide;
    PaLayout layout{Eigen::MatrixXd(rows, cols)};
    const double step = geometry.area_length_x / (cols + 1);
    if (step >= geometry.min_pa_spacing) {
        for (int n = 0; n < cols; ++n) layout.positions.col(n).setConstant(step * (n + 1));
    } else {
        const double start = 0.5 * (geometry.area_length_x - (cols - 1) * geometry.min_pa_spacing);
        for (int n = 0; n < cols; ++n) {
            layout.positions.col(n).setConstant(
                std::clamp(start + n * geometry.min_pa_spacing, 0.0, geometry.area_length_x));
        }
    }
    return layout;
}

AoReport run_alternating(AoProblem problem, const AoConfig& config,
                         const PositionStep& position_step)
{
    const Eigen::Index num_feeds = problem.channel.rows();
    Decoder decoder = Decoder::Zero(num_feeds);
    PowerAllocation power = PowerAllocation::full(problem.budgets);
    const double noise = problem.noise_variance;

    AoReport report;
    double current = mse(decoder, problem.channel, power, noise);
    report.substep_trace.push_back(current);
    auto record = [&](double value) { report.substep_trace.push_back(value); };

    for (int iteration = 1; iteration <= config.max_iterations; ++iteration) {
        const double before = current;

        Decoder next_decoder = optimal_decoder(problem.channel, power, noise);
        const double with_decoder = mse(next_decoder, problem.channel, power, noise);
        if (with_decoder <= current) {
            decoder = std::move(next_decoder);
            current = with_decoder;
        }
        record(current);

        PowerAllocation next_power = optimal_power(problem.channel, decoder, problem.budgets);
        const double with_power = mse(decoder, problem.channel, next_power, noise);
        if (with_power <= current) {
            power = std::move(next_power);
            current = with_power;
        }
        record(current);

        if (position_step) {
            position_step(problem.layout, problem.channel, decoder, power, record);
            current = mse(decoder, problem.channel, power, noise);
        }

        report.objective_trace.push_back(current);
        report.iterations_used = iteration;
        if (before - current < config.convergence_threshold) {
            report.converged = true;
            break;
        }
    }

    report.final_decoder = std::move(decoder);
    report.final_power = std::move(power);
    report.final_layout = std::move(problem.layout);
    return report;
}

AoReport alternating_optimize(const SystemGeometry& geometry, const UserSet& users,
                              const Eigen::VectorXd& budgets, const AoConfig& config)
{
    check_problem(geometry, users, budgets, config);

    AoProblem problem;
    problem.layout = initial_layout(geometry);
    problem.channel = channel_matrix(geometry, users, problem.layout);
    problem.budgets = budgets;
    problem.noise_variance = feed_noise_variance(geometry);

    auto sweep = [&](PaLayout& layout, ChannelMatrix& channel, const Decoder& decoder,
                     const PowerAllocation& power, const std::function<void(double)>& record) {
        for (int pass = 0; pass < config.sweeps_per_iteration; ++pass) {
            PaLayout next = gauss_seidel_sweep(geometry, users, decoder, power, layout, channel,
                                               config, [&](int, int, double value) { record(value); });
            const bool moved = next.positions != layout.positions;
            layout = std::move(next);
            if (!moved) break;
        }
    };
    return run_alternating(std::move(problem), config, sweep);
}

}  // namespace pass_aircomp
