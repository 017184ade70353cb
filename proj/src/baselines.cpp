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

#include "pass_aircomp/baselines.hpp"

#include <algorithm>
#include <cmath>

namespace pass_aircomp {

namespace {

// Trial moves below this many meters count as a line-search underflow.
constexpr double kMinMove = 1e-13;

AoProblem pass_problem(const SystemGeometry& geometry, const UserSet& users,
                       const Eigen::VectorXd& budgets)
{
    AoProblem problem;
    problem.layout = initial_layout(geometry);
    problem.channel = channel_matrix(geometry, users, problem.layout);
    problem.budgets = budgets;
    problem.noise_variance = feed_noise_variance(geometry);
    return problem;
}

}  // namespace

std::vector<std::string> BaselineParams::violations() const
{
    std::vector<std::string> out;
    if (discrete_candidates < 2) out.emplace_back("discrete_candidates must be at least 2");
    if (!(pgd_initial_step > 0.0)) out.emplace_back("pgd_initial_step must be positive");
    if (!(pgd_backtrack > 0.0 && pgd_backtrack < 1.0)) {
        out.emplace_back("pgd_backtrack must lie in (0, 1)");
    }
    if (!(pgd_armijo > 0.0 && pgd_armijo < 1.0)) out.emplace_back("pgd_armijo must lie in (0, 1)");
    if (pgd_max_iterations < 1) out.emplace_back("pgd_max_iterations must be at least 1");
    return out;
}

AoReport fixed_pa_baseline(const SystemGeometry& geometry, const UserSet& users,
                           const Eigen::VectorXd& budgets, const AoConfig& config)
{
    check_problem(geometry, users, budgets, config);
    return run_alternating(pass_problem(geometry, users, budgets), config, {});
}

std::vector<Point3> mimo_antenna_positions(const SystemGeometry& geometry,
                                           const BaselineParams& params)
{
    const double cx = params.mimo_center_x.value_or(geometry.area_length_x / 2.0);
    const double cy = params.mimo_center_y.value_or(geometry.area_length_y / 2.0);
    const double pitch = wavelength(geometry) / 2.0;
    const int count = geometry.num_waveguides;
    std::vector<Point3> out;
    out.reserve(count);
    for (int m = 0; m < count; ++m) {
        out.push_back({cx, cy + (m - 0.5 * (count - 1)) * pitch, geometry.height});
    }
    return out;
}

ChannelMatrix mimo_channel(const SystemGeometry& geometry, const UserSet& users,
                           const BaselineParams& params)
{
    const auto antennas = mimo_antenna_positions(geometry, params);
    const double lambda = wavelength(geometry);
    ChannelMatrix g(static_cast<Eigen::Index>(antennas.size()), users.size());
    for (std::size_t m = 0; m < antennas.size(); ++m) {
        for (int k = 0; k < users.size(); ++k) {
            g(static_cast<Eigen::Index>(m), k) = freespace_channel(users.positions[k], antennas[m], lambda);
        }
    }
    return g;
}

AoReport conventional_mimo_baseline(const SystemGeometry& geometry, const UserSet& users,
                                    const Eigen::VectorXd& budgets, const AoConfig& config,
                                    const BaselineParams& params)
{
    check_problem(geometry, users, budgets, config);
    AoProblem problem;
    problem.channel = mimo_channel(geometry, users, params);
    problem.layout.positions = Eigen::MatrixXd(geometry.num_waveguides, 0);
    problem.budgets = budgets;
    problem.noise_variance = geometry.noise_power;
    return run_alternating(std::move(problem), config, {});
}

AoReport discrete_pass_baseline(const SystemGeometry& geometry, const UserSet& users,
                                const Eigen::VectorXd& budgets, const AoConfig& config,
                                const BaselineParams& params)
{
    if (params.discrete_candidates < geometry.num_pas_per_waveguide) {
        throw ConfigurationError("discrete_candidates must be at least num_pas_per_waveguide");
    }
    AoConfig lattice = config;
    lattice.grid_points = params.discrete_candidates;
    lattice.refine_levels = 0;
    return alternating_optimize(geometry, users, budgets, lattice);
}

double position_objective(const SystemGeometry& geometry, const UserSet& users,
                          const PaLayout& layout, const Decoder& decoder,
                          const PowerAllocation& power)
{
    return misalignment(decoder, channel_matrix(geometry, users, layout), power.amplitudes);
}

Eigen::MatrixXd position_gradient(const SystemGeometry& geometry, const UserSet& users,
                                  const PaLayout& layout, const Decoder& decoder,
                                  const PowerAllocation& power)
{
    const ChannelMatrix channel = channel_matrix(geometry, users, layout);
    // e_k = (w^H G P)_k - 1
    const Eigen::RowVectorXcd residual =
        ((decoder.adjoint() * channel) * power.amplitudes.cast<cplx>().asDiagonal()).array() - 1.0;

    const double lambda = wavelength(geometry);
    const double wavenumber = 2.0 * kPi / lambda;
    Eigen::MatrixXd grad = Eigen::MatrixXd::Zero(layout.num_waveguides(), layout.num_pas());
    for (int m = 0; m < layout.num_waveguides(); ++m) {
        const cplx wm_conj = std::conj(decoder(m));
        for (int n = 0; n < layout.num_pas(); ++n) {
            const double v = layout.positions(m, n);
            double sum = 0.0;
            for (int k = 0; k < users.size(); ++k) {
                const Point3& u = users.positions[k];
                const double dx = v - u.x;
                const double dy = m * geometry.waveguide_spacing - u.y;
                const double dist = std::sqrt(dx * dx + dy * dy + geometry.height * geometry.height);
                const double ddist = dx / dist;
                const cplx alpha = pa_response(geometry, u, m, v);
                // d alpha / dv through the 1/D amplitude and both phase terms.
                const cplx dalpha =
                    alpha * cplx{-ddist / dist,
                                 -(wavenumber * ddist + wavenumber * geometry.refractive_index)};
                sum += 2.0 * (std::conj(residual(k)) * wm_conj * power.amplitudes(k) * dalpha).real();
            }
            grad(m, n) = sum;
        }
    }
    return grad;
}

ProjectionResult project_row(const Eigen::RowVectorXd& row, double length, double spacing,
                             double tolerance, int max_cycles)
{
    const Eigen::Index n = row.size();
    ProjectionResult out;
    out.row = row;
    if (n == 0) return out;

    auto violation = [&](const Eigen::RowVectorXd& x) {
        double worst = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            worst = std::max({worst, -x(i), x(i) - length});
            if (i > 0) worst = std::max(worst, spacing - (x(i) - x(i - 1)));
        }
        return worst;
    };

    // Set 0 is the box; set i (1 <= i < n) is {x_i - x_{i-1} >= spacing}.
    Eigen::RowVectorXd x = row;
    std::vector<Eigen::RowVectorXd> increments(static_cast<std::size_t>(n),
                                               Eigen::RowVectorXd::Zero(n));
    for (int cycle = 1; cycle <= max_cycles; ++cycle) {
        const Eigen::RowVectorXd start = x;

        Eigen::RowVectorXd y = x + increments[0];
        x = y.cwiseMax(0.0).cwiseMin(length);
        increments[0] = y - x;

        for (Eigen::Index i = 1; i < n; ++i) {
            auto& inc = increments[static_cast<std::size_t>(i)];
            y = x + inc;
            x = y;
            const double gap = y(i) - y(i - 1);
            if (gap < spacing) {
                const double shift = 0.5 * (spacing - gap);
                x(i) += shift;
                x(i - 1) -= shift;
            }
            inc = y - x;
        }

        out.cycles = cycle;
        out.residual = violation(x);
        if (out.residual <= tolerance && (x - start).cwiseAbs().maxCoeff() <= tolerance) break;
    }
    out.row = x;
    return out;
}

PaLayout project_layout(const PaLayout& layout, const SystemGeometry& geometry)
{
    PaLayout out = layout;
    for (int m = 0; m < layout.num_waveguides(); ++m) {
        auto projected = project_row(layout.positions.row(m), geometry.area_length_x,
                                     geometry.min_pa_spacing);
        Eigen::RowVectorXd row = std::move(projected.row);
        // Dykstra stops at tolerance; push the remaining slack out of the
        // spacing constraints from both ends.
        const double s = geometry.min_pa_spacing;
        const Eigen::Index n = row.size();
        for (Eigen::Index i = 0; i < n; ++i) {
            row(i) = std::max(row(i), i == 0 ? 0.0 : row(i - 1) + s);
        }
        for (Eigen::Index i = n - 1; i >= 0; --i) {
            row(i) = std::min(row(i), i == n - 1 ? geometry.area_length_x : row(i + 1) - s);
        }
        out.positions.row(m) = row.cwiseMax(0.0);
    }
    return out;
}

AoReport pgd_positions_baseline(const SystemGeometry& geometry, const UserSet& users,
                                const Eigen::VectorXd& budgets, const AoConfig& config,
                                const BaselineParams& params)
{
    check_problem(geometry, users, budgets, config);
    const auto bad = params.violations();
    if (!bad.empty()) throw ConfigurationError("invalid baseline parameters: " + bad.front());

    bool stalled = false;
    const double noise = feed_noise_variance(geometry);
    auto descend = [&](PaLayout& layout, ChannelMatrix& channel, const Decoder& decoder,
                       const PowerAllocation& power, const std::function<void(double)>& record) {
        double value = misalignment(decoder, channel, power.amplitudes);
        for (int it = 0; it < params.pgd_max_iterations; ++it) {
            const Eigen::MatrixXd grad = position_gradient(geometry, users, layout, decoder, power);
            double step = params.pgd_initial_step;
            bool accepted = false;
            bool underflow = false;
            PaLayout trial;
            ChannelMatrix trial_channel;
            double trial_value = value;
            while (true) {
                trial = project_layout(PaLayout{layout.positions - step * grad}, geometry);
                const Eigen::MatrixXd move = trial.positions - layout.positions;
                if (move.size() == 0 || move.cwiseAbs().maxCoeff() < kMinMove) {
                    underflow = true;
                    break;
                }
                trial_channel = channel_matrix(geometry, users, trial);
                trial_value = misalignment(decoder, trial_channel, power.amplitudes);
                const double predicted = (grad.array() * move.array()).sum();
                if (trial_value <= value + params.pgd_armijo * predicted && trial_value <= value) {
                    accepted = true;
                    break;
                }
                step *= params.pgd_backtrack;
            }
            if (!accepted) {
                stalled = stalled || underflow;
                break;
            }
            const double gain = value - trial_value;
            layout = std::move(trial);
            channel = std::move(trial_channel);
            value = trial_value;
            record(mse(decoder, channel, power, noise));
            if (gain <= 1e-12 * std::max(1.0, value)) break;
        }
    };

    AoReport report = run_alternating(pass_problem(geometry, users, budgets), config, descend);
    report.stalled = stalled;
    return report;
}

AoReport run_baseline(BaselineKind kind, const SystemGeometry& geometry, const UserSet& users,
                      const Eigen::VectorXd& budgets, const AoConfig& config,
                      const BaselineParams& params)
{
    switch (kind) {
        case BaselineKind::FixedPa:
            return fixed_pa_baseline(geometry, users, budgets, config);
        case BaselineKind::ConventionalMimo:
            return conventional_mimo_baseline(geometry, users, budgets, config, params);
        case BaselineKind::DiscretePass:
            return discrete_pass_baseline(geometry, users, budgets, config, params);
        case BaselineKind::PgdPositions:
            return pgd_positions_baseline(geometry, users, budgets, config, params);
    }
    throw ConfigurationError("unknown baseline kind");
}

}  // namespace pass_aircomp
