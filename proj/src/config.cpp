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

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "pass_aircomp/harness.hpp"

namespace pass_aircomp {

namespace {

using nlohmann::json;

class Reader {
public:
    explicit Reader(std::vector<Violation>& sink) : sink_(sink) {}

    void fail(const std::string& path, const std::string& message)
    {
        sink_.push_back({path, message});
    }

    /// Reports keys of `object` outside `allowed`.
    void only(const json& object, const std::string& path, std::initializer_list<const char*> allowed)
    {
        const std::set<std::string> names(allowed.begin(), allowed.end());
        for (const auto& [key, value] : object.items()) {
            if (!names.count(key)) fail(join(path, key), "unknown key");
        }
    }

    template <class T>
    void number(const json& object, const std::string& path, const char* key, T& out)
    {
        if (!object.contains(key)) return;
        const json& v = object.at(key);
        const std::string where = join(path, key);
        if constexpr (std::is_integral_v<T>) {
            if (!v.is_number_integer() && !v.is_number_unsigned()) {
                fail(where, "expected an integer");
                return;
            }
            out = v.get<T>();
        } else {
            if (!v.is_number()) {
                fail(where, "expected a number");
                return;
            }
            out = v.get<T>();
        }
    }

    void boolean(const json& object, const std::string& path, const char* key, bool& out)
    {
        if (!object.contains(key)) return;
        const json& v = object.at(key);
        if (!v.is_boolean()) {
            fail(join(path, key), "expected true or false");
            return;
        }
        out = v.get<bool>();
    }

    void string(const json& object, const std::string& path, const char* key, std::string& out)
    {
        if (!object.contains(key)) return;
        const json& v = object.at(key);
        if (!v.is_string()) {
            fail(join(path, key), "expected a string");
            return;
        }
        out = v.get<std::string>();
    }

    bool object_at(const json& parent, const std::string& path, const char* key)
    {
        if (!parent.contains(key)) return false;
        if (!parent.at(key).is_object()) {
            fail(join(path, key), "expected an object");
            return false;
        }
        return true;
    }

    static std::string join(const std::string& path, const std::string& key)
    {
        return path.empty() ? key : path + "." + key;
    }

private:
    std::vector<Violation>& sink_;
};

void read_geometry(Reader& in, const json& node, ExperimentConfig& config)
{
    const std::string path = "geometry";
    in.only(node, path,
            {"area_length_x", "area_length_y", "num_waveguides", "num_pas_per_waveguide",
             "num_users", "height", "waveguide_spacing", "carrier_frequency", "lightspeed",
             "refractive_index", "min_pa_spacing", "noise_power", "noise_power_dbm"});
    SystemGeometry& g = config.geometry;
    in.number(node, path, "area_length_x", g.area_length_x);
    in.number(node, path, "area_length_y", g.area_length_y);
    in.number(node, path, "num_waveguides", g.num_waveguides);
    in.number(node, path, "num_pas_per_waveguide", g.num_pas_per_waveguide);
    in.number(node, path, "num_users", g.num_users);
    in.number(node, path, "height", g.height);
    in.number(node, path, "carrier_frequency", g.carrier_frequency);
    in.number(node, path, "lightspeed", g.lightspeed);
    in.number(node, path, "refractive_index", g.refractive_index);
    if (node.contains("waveguide_spacing")) {
        in.number(node, path, "waveguide_spacing", g.waveguide_spacing);
        config.derive_waveguide_spacing = false;
    }
    if (node.contains("min_pa_spacing")) {
        in.number(node, path, "min_pa_spacing", g.min_pa_spacing);
        config.half_wavelength_min_spacing = false;
    }
    if (node.contains("noise_power") && node.contains("noise_power_dbm")) {
        in.fail("geometry.noise_power", "give either noise_power or noise_power_dbm, not both");
    }
    in.number(node, path, "noise_power", g.noise_power);
    if (node.contains("noise_power_dbm")) {
        double dbm = -90.0;
        in.number(node, path, "noise_power_dbm", dbm);
        g.noise_power = dbm_to_watts(dbm);
    }
}

void read_sweep(Reader& in, const json& node, ExperimentConfig& config)
{
    const std::string path = "sweep";
    in.only(node, path, {"kind", "values"});
    std::string kind{sweep_name(config.sweep)};
    in.string(node, path, "kind", kind);
    if (const auto parsed = parse_sweep(kind)) {
        config.sweep = *parsed;
    } else {
        in.fail("sweep.kind", "unknown sweep '" + kind +
                                  "' (expected convergence-trace, waveguide-length, num-pas or num-users)");
    }
    if (node.contains("values")) {
        const json& values = node.at("values");
        if (!values.is_array()) {
            in.fail("sweep.values", "expected a list of numbers");
            return;
        }
        config.sweep_values.clear();
        for (std::size_t i = 0; i < values.size(); ++i) {
            if (!values[i].is_number()) {
                in.fail("sweep.values[" + std::to_string(i) + "]", "expected a number");
                continue;
            }
            config.sweep_values.push_back(values[i].get<double>());
        }
    }
}

void read_schemes(Reader& in, const json& node, ExperimentConfig& config)
{
    if (!node.is_array()) {
        in.fail("schemes", "expected a list of scheme names");
        return;
    }
    config.schemes.clear();
    for (std::size_t i = 0; i < node.size(); ++i) {
        const std::string where = "schemes[" + std::to_string(i) + "]";
        if (!node[i].is_string()) {
            in.fail(where, "expected a scheme name");
            continue;
        }
        const auto name = node[i].get<std::string>();
        if (const auto scheme = parse_scheme(name)) {
            config.schemes.push_back(*scheme);
        } else {
            in.fail(where, "unknown scheme '" + name + "'");
        }
    }
}

void read_budgets(Reader& in, const json& node, ExperimentConfig& config)
{
    if (node.is_number()) {
        config.budgets_w = {node.get<double>()};
        return;
    }
    if (!node.is_array()) {
        in.fail("budget_w", "expected a number or a list of numbers");
        return;
    }
    config.budgets_w.clear();
    for (std::size_t i = 0; i < node.size(); ++i) {
        if (!node[i].is_number()) {
            in.fail("budget_w[" + std::to_string(i) + "]", "expected a number");
            continue;
        }
        config.budgets_w.push_back(node[i].get<double>());
    }
}

}  // namespace

std::vector<Violation> validate_config(const ExperimentConfig& config)
{
    std::vector<Violation> out;
    auto add = [&out](std::string path, std::string message) {
        out.push_back({std::move(path), std::move(message)});
    };

    for (const auto& v : config.geometry.violations()) add("geometry", v);
    for (const auto& v : config.ao.violations()) add("ao", v);
    for (const auto& v : config.baselines.violations()) add("baselines", v);

    if (config.num_realizations < 1) add("num_realizations", "num_realizations must be at least 1");
    if (config.workers < 1) add("workers", "workers must be at least 1");
    if (config.schemes.empty()) add("schemes", "schemes must be nonempty");
    if (config.output_path.empty()) add("output_path", "output_path must be nonempty");

    if (config.budgets_w.empty()) add("budget_w", "budget_w must be nonempty");
    for (std::size_t i = 0; i < config.budgets_w.size(); ++i) {
        if (!(config.budgets_w[i] > 0.0)) {
            add("budget_w[" + std::to_string(i) + "]", "budgets must be positive");
        }
    }
    if (config.budgets_w.size() > 1) {
        if (config.sweep == SweepKind::NumUsers) {
            add("budget_w", "a per-user budget list cannot be combined with a num-users sweep");
        } else if (static_cast<int>(config.budgets_w.size()) != config.geometry.num_users) {
            add("budget_w", "budget list length must equal num_users");
        }
    }

    if (config.sweep != SweepKind::ConvergenceTrace) {
        if (config.sweep_values.empty()) add("sweep.values", "sweep values must be nonempty");
        for (std::size_t i = 0; i < config.sweep_values.size(); ++i) {
            const double value = config.sweep_values[i];
            const std::string where = "sweep.values[" + std::to_string(i) + "]";
            const bool integral = config.sweep != SweepKind::WaveguideLength;
            if (!(value > 0.0) || (integral && value != std::floor(value))) {
                add(where, integral ? "expected a positive integer" : "expected a positive length");
                continue;
            }
            const SystemGeometry g = geometry_for(config, value);
            for (const auto& v : g.violations()) add(where, v);
            const bool discrete =
                std::find(config.schemes.begin(), config.schemes.end(), Scheme::DiscretePass) !=
                config.schemes.end();
            if (discrete && config.baselines.discrete_candidates < g.num_pas_per_waveguide) {
                add(where, "discrete_candidates is smaller than num_pas_per_waveguide");
            }
        }
    } else {
        const SystemGeometry g = geometry_for(config, 0.0);
        if (config.geometry.violations().empty()) {
            for (const auto& v : g.violations()) add("geometry", v);
        }
    }
    return out;
}

LoadedConfig parse_config(std::string_view text)
{
    LoadedConfig out;
    Reader in(out.violations);
    const json root = json::parse(text.begin(), text.end(), nullptr, false);
    if (root.is_discarded()) {
        in.fail("$", "not valid JSON");
        return out;
    }
    if (!root.is_object()) {
        in.fail("$", "expected a JSON object at the top level");
        return out;
    }

    in.only(root, "",
            {"geometry", "sweep", "num_realizations", "seed", "schemes", "budget_w", "output_path",
             "workers", "record_timing", "ao", "baselines"});

    ExperimentConfig& config = out.config;
    if (in.object_at(root, "", "geometry")) read_geometry(in, root.at("geometry"), config);
    if (in.object_at(root, "", "sweep")) read_sweep(in, root.at("sweep"), config);
    in.number(root, "", "num_realizations", config.num_realizations);
    in.number(root, "", "seed", config.seed);
    if (root.contains("schemes")) read_schemes(in, root.at("schemes"), config);
    if (root.contains("budget_w")) read_budgets(in, root.at("budget_w"), config);
    in.string(root, "", "output_path", config.output_path);
    in.number(root, "", "workers", config.workers);
    in.boolean(root, "", "record_timing", config.record_timing);

    if (in.object_at(root, "", "ao")) {
        const json& ao = root.at("ao");
        in.only(ao, "ao",
                {"grid_points", "convergence_threshold", "max_iterations",
                 "include_current_position", "refine_levels", "refine_points",
                 "sweeps_per_iteration"});
        in.number(ao, "ao", "grid_points", config.ao.grid_points);
        in.number(ao, "ao", "convergence_threshold", config.ao.convergence_threshold);
        in.number(ao, "ao", "max_iterations", config.ao.max_iterations);
        in.boolean(ao, "ao", "include_current_position", config.ao.include_current_position);
        in.number(ao, "ao", "refine_levels", config.ao.refine_levels);
        in.number(ao, "ao", "refine_points", config.ao.refine_points);
        in.number(ao, "ao", "sweeps_per_iteration", config.ao.sweeps_per_iteration);
    }
    if (in.object_at(root, "", "baselines")) {
        const json& b = root.at("baselines");
        in.only(b, "baselines",
                {"discrete_candidates", "pgd_initial_step", "pgd_backtrack", "pgd_armijo",
                 "pgd_max_iterations", "mimo_center_x", "mimo_center_y"});
        auto& p = config.baselines;
        in.number(b, "baselines", "discrete_candidates", p.discrete_candidates);
        in.number(b, "baselines", "pgd_initial_step", p.pgd_initial_step);
        in.number(b, "baselines", "pgd_backtrack", p.pgd_backtrack);
        in.number(b, "baselines", "pgd_armijo", p.pgd_armijo);
        in.number(b, "baselines", "pgd_max_iterations", p.pgd_max_iterations);
        if (b.contains("mimo_center_x")) {
            double x = 0.0;
            in.number(b, "baselines", "mimo_center_x", x);
            p.mimo_center_x = x;
        }
        if (b.contains("mimo_center_y")) {
            double y = 0.0;
            in.number(b, "baselines", "mimo_center_y", y);
            p.mimo_center_y = y;
        }
    }

    // Type errors leave defaults in place; only validate a cleanly parsed config.
    if (out.violations.empty()) out.violations = validate_config(config);
    return out;
}

LoadedConfig load_config(const std::string& path)
{
    std::ifstream file(path);
    if (!file) {
        LoadedConfig out;
        out.violations.push_back({"$", "cannot open config file '" + path + "'"});
        return out;
    }
    std::ostringstream text;
    text << file.rdbuf();
    return parse_config(text.str());
}

}  // namespace pass_aircomp
