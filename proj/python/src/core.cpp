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

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "pass_aircomp/harness.hpp"

namespace py = pybind11;
using namespace pass_aircomp;

namespace {

UserSet users_from(const Eigen::MatrixXd& xy)
{
    if (xy.cols() != 2 && xy.cols() != 3) {
        throw py::value_error("users must be a (K, 2) or (K, 3) array");
    }
    UserSet users;
    for (Eigen::Index k = 0; k < xy.rows(); ++k) {
        users.positions.push_back({xy(k, 0), xy(k, 1), xy.cols() == 3 ? xy(k, 2) : 0.0});
    }
    return users;
}

Eigen::MatrixXd users_to(const UserSet& users)
{
    Eigen::MatrixXd out(users.size(), 3);
    for (int k = 0; k < users.size(); ++k) {
        out.row(k) << users.positions[k].x, users.positions[k].y, users.positions[k].z;
    }
    return out;
}

PowerAllocation power_from(const Eigen::VectorXd& amplitudes, const Eigen::VectorXd& budgets)
{
    return PowerAllocation{amplitudes, budgets};
}

py::dict report_dict(const AoReport& r)
{
    py::dict d;
    d["objective_trace"] = r.objective_trace;
    d["substep_trace"] = r.substep_trace;
    d["decoder"] = r.final_decoder;
    d["amplitudes"] = r.final_power.amplitudes;
    d["layout"] = r.final_layout.positions;
    d["iterations"] = r.iterations_used;
    d["converged"] = r.converged;
    d["stalled"] = r.stalled;
    d["mse"] = r.final_mse();
    return d;
}

Scheme scheme_from(const std::string& name)
{
    const auto scheme = parse_scheme(name);
    if (!scheme) throw py::value_error("unknown scheme '" + name + "'");
    return *scheme;
}

}  // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "Pinching-antenna AirComp model, optimizer and experiment harness";

    py::register_exception<ModelError>(m, "ModelError", PyExc_ValueError);
    py::register_exception<ConfigurationError>(m, "ConfigurationError", PyExc_ValueError);

    py::class_<SystemGeometry>(m, "SystemGeometry")
        .def(py::init<>())
        .def_static("reference", &SystemGeometry::reference)
        .def_readwrite("area_length_x", &SystemGeometry::area_length_x)
        .def_readwrite("area_length_y", &SystemGeometry::area_length_y)
        .def_readwrite("num_waveguides", &SystemGeometry::num_waveguides)
        .def_readwrite("num_pas_per_waveguide", &SystemGeometry::num_pas_per_waveguide)
        .def_readwrite("num_users", &SystemGeometry::num_users)
        .def_readwrite("height", &SystemGeometry::height)
        .def_readwrite("waveguide_spacing", &SystemGeometry::waveguide_spacing)
        .def_readwrite("carrier_frequency", &SystemGeometry::carrier_frequency)
        .def_readwrite("lightspeed", &SystemGeometry::lightspeed)
        .def_readwrite("refractive_index", &SystemGeometry::refractive_index)
        .def_readwrite("min_pa_spacing", &SystemGeometry::min_pa_spacing)
        .def_readwrite("noise_power", &SystemGeometry::noise_power)
        .def("derive_waveguide_spacing", &SystemGeometry::derive_waveguide_spacing)
        .def("violations", &SystemGeometry::violations)
        .def_property_readonly("wavelength", [](const SystemGeometry& g) { return wavelength(g); })
        .def_property_readonly("feed_noise_variance",
                               [](const SystemGeometry& g) { return feed_noise_variance(g); });

    py::class_<AoConfig>(m, "AoConfig")
        .def(py::init<>())
        .def_readwrite("grid_points", &AoConfig::grid_points)
        .def_readwrite("convergence_threshold", &AoConfig::convergence_threshold)
        .def_readwrite("max_iterations", &AoConfig::max_iterations)
        .def_readwrite("include_current_position", &AoConfig::include_current_position)
        .def_readwrite("refine_levels", &AoConfig::refine_levels)
        .def_readwrite("refine_points", &AoConfig::refine_points)
        .def_readwrite("sweeps_per_iteration", &AoConfig::sweeps_per_iteration)
        .def("violations", &AoConfig::violations);

    py::class_<BaselineParams>(m, "BaselineParams")
        .def(py::init<>())
        .def_readwrite("discrete_candidates", &BaselineParams::discrete_candidates)
        .def_readwrite("pgd_initial_step", &BaselineParams::pgd_initial_step)
        .def_readwrite("pgd_backtrack", &BaselineParams::pgd_backtrack)
        .def_readwrite("pgd_armijo", &BaselineParams::pgd_armijo)
        .def_readwrite("pgd_max_iterations", &BaselineParams::pgd_max_iterations)
        .def_readwrite("mimo_center_x", &BaselineParams::mimo_center_x)
        .def_readwrite("mimo_center_y", &BaselineParams::mimo_center_y);

    m.def("dbm_to_watts", &dbm_to_watts);
    m.def(
        "sample_users",
        [](const SystemGeometry& g, std::uint64_t seed) { return users_to(sample_users(g, seed)); },
        py::arg("geometry"), py::arg("seed"), "(K, 3) array of user positions");
    m.def("realization_seed", &realization_seed, py::arg("master_seed"), py::arg("index"));
    m.def(
        "initial_layout", [](const SystemGeometry& g) { return initial_layout(g).positions; },
        py::arg("geometry"));
    m.def(
        "channel_matrix",
        [](const SystemGeometry& g, const Eigen::MatrixXd& users, const Eigen::MatrixXd& layout) {
            return channel_matrix(g, users_from(users), PaLayout{layout});
        },
        py::arg("geometry"), py::arg("users"), py::arg("layout"));
    m.def(
        "mse",
        [](const Decoder& w, const ChannelMatrix& g, const Eigen::VectorXd& amplitudes,
           double noise_variance) {
            return mse(w, g, power_from(amplitudes, amplitudes), noise_variance);
        },
        py::arg("decoder"), py::arg("channel"), py::arg("amplitudes"), py::arg("noise_variance"));
    m.def(
        "optimal_decoder",
        [](const ChannelMatrix& g, const Eigen::VectorXd& amplitudes, double noise_variance) {
            return optimal_decoder(g, power_from(amplitudes, amplitudes), noise_variance);
        },
        py::arg("channel"), py::arg("amplitudes"), py::arg("noise_variance"));
    m.def(
        "optimal_power",
        [](const ChannelMatrix& g, const Decoder& w, const Eigen::VectorXd& budgets) {
            return optimal_power(g, w, budgets).amplitudes;
        },
        py::arg("channel"), py::arg("decoder"), py::arg("budgets"),
        "Optimal amplitudes sqrt(p_k) for a fixed decoder");
    m.def(
        "simulate_aircomp",
        [](const Decoder& w, const ChannelMatrix& g, const Eigen::VectorXd& amplitudes,
           double noise_variance, std::int64_t trials, std::uint64_t seed) {
            const auto est =
                simulate_aircomp(w, g, power_from(amplitudes, amplitudes), noise_variance, trials, seed);
            return py::make_tuple(est.mean, est.standard_error);
        },
        py::arg("decoder"), py::arg("channel"), py::arg("amplitudes"), py::arg("noise_variance"),
        py::arg("trials"), py::arg("seed"), "(mean, standard_error) of the empirical MSE");
    m.def(
        "alternating_optimize",
        [](const SystemGeometry& g, const Eigen::MatrixXd& users, const Eigen::VectorXd& budgets,
           const AoConfig& config) {
            py::gil_scoped_release release;
            AoReport r = alternating_optimize(g, users_from(users), budgets, config);
            py::gil_scoped_acquire acquire;
            return report_dict(r);
        },
        py::arg("geometry"), py::arg("users"), py::arg("budgets"), py::arg("config") = AoConfig{});
    m.def(
        "solve",
        [](const std::string& scheme, const SystemGeometry& g, const Eigen::MatrixXd& users,
           const Eigen::VectorXd& budgets, const AoConfig& config, const BaselineParams& params) {
            const Scheme s = scheme_from(scheme);
            py::gil_scoped_release release;
            AoReport r = solve_scheme(s, g, users_from(users), budgets, config, params);
            py::gil_scoped_acquire acquire;
            return report_dict(r);
        },
        py::arg("scheme"), py::arg("geometry"), py::arg("users"), py::arg("budgets"),
        py::arg("config") = AoConfig{}, py::arg("params") = BaselineParams{});
    m.def("schemes", [] {
        std::vector<std::string> out;
        for (Scheme s : all_schemes()) out.emplace_back(scheme_name(s));
        return out;
    });
    m.def(
        "validate_config",
        [](const std::string& text) {
            std::vector<std::pair<std::string, std::string>> out;
            for (const auto& v : parse_config(text).violations) out.emplace_back(v.path, v.message);
            return out;
        },
        py::arg("text"), "List of (path, message) violations of a JSON config");
    m.def(
        "run_experiment",
        [](const std::string& text) {
            const LoadedConfig loaded = parse_config(text);
            if (!loaded.violations.empty()) {
                std::ostringstream msg;
                for (const auto& v : loaded.violations) msg << v.path << ": " << v.message << "; ";
                throw ConfigurationError(msg.str());
            }
            ExperimentResult result;
            {
                py::gil_scoped_release release;
                result = run_experiment(loaded.config);
            }
            std::ostringstream csv;
            write_csv(csv, result.rows, loaded.config.record_timing);
            std::ostringstream summary;
            write_summary_csv(summary, result.summary);
            return py::make_tuple(csv.str(), summary.str());
        },
        py::arg("config_text"), "Runs a JSON config and returns (results_csv, summary_csv)");
}
