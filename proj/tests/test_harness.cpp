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

#include <cmath>
#include <set>
#include <sstream>

#include "doctest.h"
#include "test_support.hpp"

using namespace pass_aircomp;
using namespace testing;

namespace {

bool has_path(const std::vector<Violation>& violations, const std::string& path)
{
    for (const auto& v : violations) {
        if (v.path == path) return true;
    }
    return false;
}

std::string csv_of(const ExperimentResult& result)
{
    std::ostringstream out;
    write_csv(out, result.rows, false);
    return out.str();
}

ExperimentConfig small_config()
{
    ExperimentConfig config;
    config.geometry.num_waveguides = 2;
    config.num_realizations = 3;
    config.ao.max_iterations = 4;
    config.baselines.pgd_max_iterations = 10;
    config.sweep = SweepKind::NumUsers;
    config.sweep_values = {2, 3};
    return config;
}

}  // namespace

TEST_CASE("scheme and sweep names round-trip")
{
    for (Scheme s : all_schemes()) CHECK(parse_scheme(scheme_name(s)) == s);
    CHECK_FALSE(parse_scheme("proposed"));
    for (SweepKind k : {SweepKind::ConvergenceTrace, SweepKind::WaveguideLength, SweepKind::NumPas,
                        SweepKind::NumUsers}) {
        CHECK(parse_sweep(sweep_name(k)) == k);
    }
    CHECK(sweep_param(SweepKind::WaveguideLength) == "L_x");
    CHECK(sweep_param(SweepKind::NumPas) == "N");
    CHECK(sweep_param(SweepKind::NumUsers) == "K");
    CHECK(sweep_param(SweepKind::ConvergenceTrace) == "iteration");
}

TEST_CASE("realization seeds")
{
    CHECK(realization_seed(1, 5) == realization_seed(1, 5));
    std::set<std::uint64_t> seen;
    for (std::uint64_t i = 0; i < 1000; ++i) seen.insert(realization_seed(1, i));
    CHECK(seen.size() == 1000);
    CHECK(realization_seed(1, 0) != realization_seed(2, 0));
}

TEST_CASE("user sampling")
{
    SystemGeometry g = SystemGeometry::reference();
    const UserSet a = sample_users(g, 11);
    const UserSet b = sample_users(g, 11);
    REQUIRE(a.size() == 3);
    for (int k = 0; k < 3; ++k) {
        CHECK(a.positions[k].x == b.positions[k].x);
        CHECK(a.positions[k].y == b.positions[k].y);
    }
    CHECK(a.within(g));

    g.num_users = 10000;
    const UserSet many = sample_users(g, 12);
    CHECK(many.within(g));
    double sum = 0.0;
    for (const auto& p : many.positions) {
        CHECK(p.z == 0.0);
        sum += p.x;
    }
    const double standard_error = g.area_length_x / std::sqrt(12.0) / std::sqrt(10000.0);
    CHECK(std::abs(sum / 10000.0 - g.area_length_x / 2.0) <= 3.0 * standard_error);

    SystemGeometry two = SystemGeometry::reference();
    two.num_users = 2;
    const UserSet prefix = sample_users(two, 11);
    CHECK(prefix.positions[1].x == a.positions[1].x);
}

TEST_CASE("swept geometry")
{
    ExperimentConfig config;
    config.sweep = SweepKind::WaveguideLength;
    CHECK(geometry_for(config, 26.0).area_length_x == 26.0);
    config.sweep = SweepKind::NumPas;
    CHECK(geometry_for(config, 4.0).num_pas_per_waveguide == 4);
    config.sweep = SweepKind::NumUsers;
    CHECK(geometry_for(config, 5.0).num_users == 5);
    config.geometry.num_waveguides = 3;
    CHECK(geometry_for(config, 5.0).waveguide_spacing == doctest::Approx(3.0));
}

TEST_CASE("config validation")
{
    ExperimentConfig config;
    CHECK(validate_config(config).empty());

    ExperimentConfig spacing = config;
    spacing.half_wavelength_min_spacing = false;
    spacing.geometry.min_pa_spacing = 30.0;
    CHECK(has_path(validate_config(spacing), "geometry"));

    ExperimentConfig empty = config;
    empty.schemes.clear();
    const auto violations = validate_config(empty);
    REQUIRE(violations.size() == 1);
    CHECK(violations[0].path == "schemes");
    CHECK(violations[0].message == "schemes must be nonempty");

    ExperimentConfig sweep = config;
    sweep.sweep = SweepKind::NumPas;
    CHECK(has_path(validate_config(sweep), "sweep.values"));
    sweep.sweep_values = {2.0, 2.5, 0.0};
    const auto bad = validate_config(sweep);
    CHECK(has_path(bad, "sweep.values[1]"));
    CHECK(has_path(bad, "sweep.values[2]"));

    ExperimentConfig budgets = config;
    budgets.budgets_w = {1e-3, -1.0};
    const auto bv = validate_config(budgets);
    CHECK(has_path(bv, "budget_w[1]"));
    CHECK(has_path(bv, "budget_w"));

    ExperimentConfig runs = config;
    runs.num_realizations = 0;
    runs.workers = 0;
    CHECK(has_path(validate_config(runs), "num_realizations"));
    CHECK(has_path(validate_config(runs), "workers"));
}

TEST_CASE("config parsing")
{
    SUBCASE("empty object gives the defaults")
    {
        const LoadedConfig loaded = parse_config("{}");
        CHECK(loaded.violations.empty());
        CHECK(loaded.config.num_realizations == 300);
        CHECK(loaded.config.geometry.num_waveguides == 4);
        CHECK(loaded.config.budgets_w == std::vector<double>{1e-3});
    }

    SUBCASE("full config")
    {
        const LoadedConfig loaded = parse_config(R"({
            "geometry": {"area_length_x": 14, "num_users": 4, "noise_power_dbm": -80},
            "sweep": {"kind": "num-pas", "values": [1, 2, 3]},
            "num_realizations": 7,
            "seed": 99,
            "schemes": ["Proposed", "PgdPositions"],
            "budget_w": 0.01,
            "output_path": "out.csv",
            "workers": 2,
            "record_timing": true,
            "ao": {"grid_points": 500, "max_iterations": 9, "refine_levels": 0},
            "baselines": {"discrete_candidates": 100, "mimo_center_x": 3.5}
        })");
        CHECK(loaded.violations.empty());
        const auto& c = loaded.config;
        CHECK(c.geometry.area_length_x == 14.0);
        CHECK(c.geometry.num_users == 4);
        CHECK(c.geometry.noise_power == doctest::Approx(1e-11));
        CHECK(c.sweep == SweepKind::NumPas);
        CHECK(c.sweep_values.size() == 3);
        CHECK(c.num_realizations == 7);
        CHECK(c.seed == 99);
        CHECK(c.schemes.size() == 2);
        CHECK(c.budgets_w == std::vector<double>{0.01});
        CHECK(c.output_path == "out.csv");
        CHECK(c.workers == 2);
        CHECK(c.record_timing);
        CHECK(c.ao.grid_points == 500);
        CHECK(c.ao.max_iterations == 9);
        CHECK(c.ao.refine_levels == 0);
        CHECK(c.baselines.discrete_candidates == 100);
        CHECK(c.baselines.mimo_center_x == 3.5);
    }

    SUBCASE("unknown keys and bad types carry paths")
    {
        const LoadedConfig loaded = parse_config(R"({
            "geometry": {"num_waveguide": 3, "height": "tall"},
            "sweep": {"kind": "num-antennas"},
            "schemes": ["Proposed", "Oracle"],
            "ao": {"grid_points": 2.5},
            "extra": true
        })");
        const auto& v = loaded.violations;
        CHECK(has_path(v, "geometry.num_waveguide"));
        CHECK(has_path(v, "geometry.height"));
        CHECK(has_path(v, "sweep.kind"));
        CHECK(has_path(v, "schemes[1]"));
        CHECK(has_path(v, "ao.grid_points"));
        CHECK(has_path(v, "extra"));
    }

    SUBCASE("not JSON")
    {
        CHECK(has_path(parse_config("geometry = 1").violations, "$"));
        CHECK(has_path(parse_config("[1, 2]").violations, "$"));
        CHECK(has_path(load_config("/nonexistent/config.json").violations, "$"));
    }

    SUBCASE("spacing violation from the file")
    {
        const auto loaded = parse_config(R"({"geometry": {"min_pa_spacing": 30}})");
        CHECK(has_path(loaded.violations, "geometry"));
    }
}

TEST_CASE("single-instance convergence trace")
{
    ExperimentConfig config;
    config.num_realizations = 1;
    config.schemes = {Scheme::Proposed};
    config.ao.max_iterations = 6;
    const ExperimentResult result = run_experiment(config);

    const SystemGeometry g = geometry_for(config, 0.0);
    const AoReport report = alternating_optimize(
        g, sample_users(g, realization_seed(config.seed, 0)), budgets_for(config, 3), config.ao);
    REQUIRE(result.rows.size() == report.objective_trace.size());
    for (std::size_t i = 0; i < result.rows.size(); ++i) {
        CHECK(result.rows[i].sweep_param == "iteration");
        CHECK(result.rows[i].sweep_value == static_cast<double>(i + 1));
        CHECK(result.rows[i].mse == report.objective_trace[i]);
    }
}

TEST_CASE("experiment output is deterministic and independent of scheduling")
{
    ExperimentConfig config = small_config();
    const ExperimentResult a = run_experiment(config);
    const ExperimentResult b = run_experiment(config);
    config.workers = 3;
    const ExperimentResult c = run_experiment(config);
    CHECK(csv_of(a) == csv_of(b));
    CHECK(csv_of(a) == csv_of(c));
    CHECK(a.rows.size() == 2 * 3 * 5);

    for (const auto& row : a.rows) CHECK(row.mse >= 0.0);

    std::istringstream lines(csv_of(a));
    std::string header;
    std::getline(lines, header);
    CHECK(header == "scheme,sweep_param,sweep_value,realization,mse,iterations,wall_ms,seed");
    CHECK(csv_of(a).back() == '\n');

    REQUIRE(a.summary.size() == 2 * 5);
    CHECK(a.summary[0].sweep_value == 2.0);
    CHECK(a.summary[0].scheme == "Proposed");
    double sum = 0.0;
    for (const auto& row : a.rows) {
        if (row.scheme == "Proposed" && row.sweep_value == 2.0) sum += row.mse;
    }
    CHECK(a.summary[0].mean_mse == doctest::Approx(sum / 3.0));
    CHECK(a.summary[0].realizations == 3);
}

TEST_CASE("per-instance failures become error rows")
{
    ExperimentConfig config;
    config.sweep = SweepKind::NumPas;
    config.sweep_values = {2, 400};
    config.num_realizations = 1;
    config.schemes = {Scheme::DiscretePass};
    config.ao.max_iterations = 2;
    const ExperimentResult result = run_experiment(config);
    REQUIRE(result.rows.size() == 2);
    CHECK(result.rows[0].error.empty());
    CHECK_FALSE(result.rows[1].error.empty());
    CHECK(std::isnan(result.rows[1].mse));
    CHECK(result.summary[1].errors == 1);

    std::ostringstream out;
    write_csv(out, result.rows, false);
    CHECK(out.str().find(",nan,") != std::string::npos);
}

TEST_CASE("CSV formatting")
{
    ResultRow row;
    row.scheme = "FixedPa";
    row.sweep_param = "L_x";
    row.sweep_value = 14.0;
    row.realization = 2;
    row.mse = 1.0 / 3.0;
    row.iterations = 7;
    row.wall_ms = 12.5;
    row.seed = 42;
    std::ostringstream quiet;
    write_csv(quiet, {row}, false);
    CHECK(quiet.str().substr(quiet.str().find('\n') + 1) == "FixedPa,L_x,14,2,0.333333333333,7,0,42\n");
    std::ostringstream timed;
    write_csv(timed, {row}, true);
    CHECK(timed.str().find(",12.5,42") != std::string::npos);

    CHECK(summary_path("out/results.csv") == "out/results.summary.csv");
    CHECK(summary_path("results") == "results.summary.csv");
    CHECK(summary_path("a.b/results") == "a.b/results.summary.csv");
}

TEST_CASE("convergence summaries carry finished runs forward")
{
    std::vector<ResultRow> rows;
    auto add = [&](int realization, int iteration, double mse) {
        ResultRow r;
        r.scheme = "Proposed";
        r.sweep_param = "iteration";
        r.sweep_value = iteration;
        r.realization = realization;
        r.mse = mse;
        rows.push_back(r);
    };
    add(0, 1, 1.0);
    add(0, 2, 0.5);
    add(1, 1, 2.0);
    add(1, 2, 1.0);
    add(1, 3, 0.0);
    const auto summary = summarize(rows);
    REQUIRE(summary.size() == 3);
    CHECK(summary[2].mean_mse == doctest::Approx(0.25));
    CHECK(summary[2].realizations == 2);
}
