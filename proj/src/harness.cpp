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

#include "pass_aircomp/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <ostream>
#include <random>
#include <thread>
#include <tuple>

namespace pass_aircomp {

namespace {

constexpr std::string_view kSchemeNames[] = {"Proposed", "FixedPa", "ConventionalMimo",
                                             "DiscretePass", "PgdPositions"};
constexpr std::string_view kSweepNames[] = {"convergence-trace", "waveguide-length", "num-pas",
                                            "num-users"};
constexpr std::string_view kSweepParams[] = {"iteration", "L_x", "N", "K"};

std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::string format_number(double value)
{
    if (std::isnan(value)) return "nan";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", value);
    return buf;
}

struct Task {
    std::size_t sweep_index = 0;
    double sweep_value = 0.0;
    int realization = 0;
};

std::vector<ResultRow> run_task(const ExperimentConfig& config, const Task& task)
{
    std::vector<ResultRow> rows;
    const std::string param{sweep_param(config.sweep)};
    const std::uint64_t seed =
        realization_seed(config.seed, static_cast<std::uint64_t>(task.realization));

    SystemGeometry geometry;
    UserSet users;
    Eigen::VectorXd budgets;
    std::string setup_error;
    try {
        geometry = geometry_for(config, task.sweep_value);
        users = sample_users(geometry, seed);
        budgets = budgets_for(config, geometry.num_users);
    } catch (const std::exception& e) {
        setup_error = e.what();
    }

    for (const Scheme scheme : config.schemes) {
        ResultRow base;
        base.scheme = std::string(scheme_name(scheme));
        base.sweep_param = param;
        base.sweep_value = task.sweep_value;
        base.realization = task.realization;
        base.seed = seed;

        auto error_row = [&](const std::string& message) {
            ResultRow row = base;
            row.mse = std::numeric_limits<double>::quiet_NaN();
            row.error = message.empty() ? "unknown failure" : message;
            rows.push_back(std::move(row));
        };
        if (!setup_error.empty()) {
            error_row(setup_error);
            continue;
        }

        try {
            const auto start = std::chrono::steady_clock::now();
            const AoReport report =
                solve_scheme(scheme, geometry, users, budgets, config.ao, config.baselines);
            const double wall_ms = std::chrono::duration<double, std::milli>(
                                       std::chrono::steady_clock::now() - start)
                                       .count();
            if (config.sweep == SweepKind::ConvergenceTrace) {
                for (std::size_t i = 0; i < report.objective_trace.size(); ++i) {
                    ResultRow row = base;
                    row.sweep_value = static_cast<double>(i + 1);
                    row.mse = report.objective_trace[i];
                    row.iterations = report.iterations_used;
                    row.wall_ms = wall_ms;
                    rows.push_back(std::move(row));
                }
            } else {
                ResultRow row = base;
                row.mse = report.final_mse();
                row.iterations = report.iterations_used;
                row.wall_ms = wall_ms;
                rows.push_back(std::move(row));
            }
        } catch (const std::exception& e) {
            error_row(e.what());
        }
    }
    return rows;
}

}  // namespace

std::string_view scheme_name(Scheme scheme) { return kSchemeNames[static_cast<int>(scheme)]; }

std::optional<Scheme> parse_scheme(std::string_view name)
{
    for (int i = 0; i < 5; ++i) {
        if (kSchemeNames[i] == name) return static_cast<Scheme>(i);
    }
    return std::nullopt;
}

std::vector<Scheme> all_schemes()
{
    return {Scheme::Proposed, Scheme::FixedPa, Scheme::ConventionalMimo, Scheme::DiscretePass,
            Scheme::PgdPositions};
}

std::string_view sweep_name(SweepKind kind) { return kSweepNames[static_cast<int>(kind)]; }

std::optional<SweepKind> parse_sweep(std::string_view name)
{
    for (int i = 0; i < 4; ++i) {
        if (kSweepNames[i] == name) return static_cast<SweepKind>(i);
    }
    return std::nullopt;
}

std::string_view sweep_param(SweepKind kind) { return kSweepParams[static_cast<int>(kind)]; }

std::uint64_t realization_seed(std::uint64_t master_seed, std::uint64_t index)
{
    return splitmix64(splitmix64(master_seed) ^ (index * 0xd1b54a32d192ed03ULL));
}

UserSet sample_users(const SystemGeometry& geometry, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    UserSet users;
    users.positions.reserve(static_cast<std::size_t>(std::max(geometry.num_users, 0)));
    for (int k = 0; k < geometry.num_users; ++k) {
        const double x = unit(rng) * geometry.area_length_x;
        const double y = unit(rng) * geometry.area_length_y;
        users.positions.push_back({x, y, 0.0});
    }
    return users;
}

SystemGeometry geometry_for(const ExperimentConfig& config, double value)
{
    SystemGeometry g = config.geometry;
    switch (config.sweep) {
        case SweepKind::ConvergenceTrace:
            break;
        case SweepKind::WaveguideLength:
            g.area_length_x = value;
            break;
        case SweepKind::NumPas:
            g.num_pas_per_waveguide = static_cast<int>(std::lround(value));
            break;
        case SweepKind::NumUsers:
            g.num_users = static_cast<int>(std::lround(value));
            break;
    }
    if (config.derive_waveguide_spacing) g.derive_waveguide_spacing();
    if (config.half_wavelength_min_spacing) g.min_pa_spacing = wavelength(g) / 2.0;
    return g;
}

Eigen::VectorXd budgets_for(const ExperimentConfig& config, int num_users)
{
    if (config.budgets_w.size() == 1) {
        return Eigen::VectorXd::Constant(num_users, config.budgets_w.front());
    }
    if (static_cast<int>(config.budgets_w.size()) != num_users) {
        throw ConfigurationError("budget list length does not match the number of users");
    }
    return Eigen::Map<const Eigen::VectorXd>(config.budgets_w.data(), num_users);
}

AoReport solve_scheme(Scheme scheme, const SystemGeometry& geometry, const UserSet& users,
                      const Eigen::VectorXd& budgets, const AoConfig& ao,
                      const BaselineParams& params)
{
    switch (scheme) {
        case Scheme::Proposed:
            return alternating_optimize(geometry, users, budgets, ao);
        case Scheme::FixedPa:
            return run_baseline(BaselineKind::FixedPa, geometry, users, budgets, ao, params);
        case Scheme::ConventionalMimo:
            return run_baseline(BaselineKind::ConventionalMimo, geometry, users, budgets, ao, params);
        case Scheme::DiscretePass:
            return run_baseline(BaselineKind::DiscretePass, geometry, users, budgets, ao, params);
        case Scheme::PgdPositions:
            return run_baseline(BaselineKind::PgdPositions, geometry, users, budgets, ao, params);
    }
    throw ConfigurationError("unknown scheme");
}

ExperimentResult run_experiment(const ExperimentConfig& config)
{
    std::vector<double> values = config.sweep_values;
    if (config.sweep == SweepKind::ConvergenceTrace) values = {0.0};

    std::vector<Task> tasks;
    for (std::size_t s = 0; s < values.size(); ++s) {
        for (int r = 0; r < config.num_realizations; ++r) tasks.push_back({s, values[s], r});
    }

    std::vector<std::vector<ResultRow>> results(tasks.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < tasks.size(); i = next++) {
            results[i] = run_task(config, tasks[i]);
        }
    };
    const int num_workers =
        std::max(1, std::min<int>(config.workers, static_cast<int>(tasks.size())));
    if (num_workers == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int i = 0; i < num_workers; ++i) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    ExperimentResult out;
    for (auto& chunk : results) {
        for (auto& row : chunk) {
            if (!config.record_timing) row.wall_ms = 0.0;
            out.rows.push_back(std::move(row));
        }
    }
    out.summary = summarize(out.rows);
    return out;
}

std::vector<SummaryRow> summarize(const std::vector<ResultRow>& rows)
{
    struct Accumulator {
        std::size_t scheme_rank = 0;
        SummaryRow row;
        double sum = 0.0;
    };
    using Key = std::tuple<std::string, std::string, double>;
    std::map<Key, Accumulator> groups;
    std::map<std::string, std::size_t> scheme_rank;

    auto add = [&](const std::string& scheme, const std::string& param, double value,
                   double mse, bool failed) {
        auto [it, fresh] = groups.try_emplace(Key{scheme, param, value});
        auto& acc = it->second;
        if (fresh) {
            acc.scheme_rank = scheme_rank.try_emplace(scheme, scheme_rank.size()).first->second;
            acc.row.scheme = scheme;
            acc.row.sweep_param = param;
            acc.row.sweep_value = value;
        }
        if (failed) {
            ++acc.row.errors;
        } else {
            acc.sum += mse;
            ++acc.row.realizations;
        }
    };

    // Convergence traces end at different iterations; a finished run keeps
    // contributing its final objective to later iterations.
    std::map<std::string, int> longest;
    for (const auto& r : rows) {
        if (r.sweep_param == "iteration" && r.error.empty()) {
            auto& l = longest[r.scheme];
            l = std::max(l, static_cast<int>(r.sweep_value));
        }
    }

    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i];
        add(r.scheme, r.sweep_param, r.sweep_value, r.mse, !r.error.empty());
        const bool trace_end = r.sweep_param == "iteration" && r.error.empty() &&
                               (i + 1 == rows.size() || rows[i + 1].scheme != r.scheme ||
                                rows[i + 1].realization != r.realization);
        if (trace_end) {
            for (int it = static_cast<int>(r.sweep_value) + 1; it <= longest[r.scheme]; ++it) {
                add(r.scheme, r.sweep_param, static_cast<double>(it), r.mse, false);
            }
        }
    }

    std::vector<Accumulator> ordered;
    for (auto& [key, acc] : groups) ordered.push_back(std::move(acc));
    std::sort(ordered.begin(), ordered.end(), [](const Accumulator& a, const Accumulator& b) {
        if (a.row.sweep_value != b.row.sweep_value) return a.row.sweep_value < b.row.sweep_value;
        return a.scheme_rank < b.scheme_rank;
    });

    std::vector<SummaryRow> out;
    for (auto& acc : ordered) {
        acc.row.mean_mse = acc.row.realizations > 0
                               ? acc.sum / acc.row.realizations
                               : std::numeric_limits<double>::quiet_NaN();
        out.push_back(std::move(acc.row));
    }
    return out;
}

void write_csv(std::ostream& out, const std::vector<ResultRow>& rows, bool record_timing)
{
    out << "scheme,sweep_param,sweep_value,realization,mse,iterations,wall_ms,seed\n";
    for (const auto& r : rows) {
        out << r.scheme << ',' << r.sweep_param << ',' << format_number(r.sweep_value) << ','
            << r.realization << ',' << format_number(r.mse) << ',' << r.iterations << ','
            << (record_timing ? format_number(r.wall_ms) : std::string("0")) << ',' << r.seed
            << '\n';
    }
}

void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows)
{
    out << "scheme,sweep_param,sweep_value,mean_mse,realizations,errors\n";
    for (const auto& r : rows) {
        out << r.scheme << ',' << r.sweep_param << ',' << format_number(r.sweep_value) << ','
            << format_number(r.mean_mse) << ',' << r.realizations << ',' << r.errors << '\n';
    }
}

std::string summary_path(const std::string& output_path)
{
    const auto dot = output_path.rfind('.');
    const auto slash = output_path.find_last_of("/\\");
    if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) {
        return output_path + ".summary.csv";
    }
    return output_path.substr(0, dot) + ".summary" + output_path.substr(dot);
}

}  // namespace pass_aircomp
