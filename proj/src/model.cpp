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

#include "pass_aircomp/model.hpp"

#include <cmath>
#include <random>
#include <sstream>

namespace pass_aircomp {

double distance(const Point3& a, const Point3& b)
{
    const double dx = a.x - b.x;
    const double dy = a.y - b.y;
    const double dz = a.z - b.z;
    return std::sqrt(dx * dx + dy * dy + dz * dz);
}

SystemGeometry SystemGeometry::reference()
{
    SystemGeometry g;
    g.derive_waveguide_spacing();
    g.min_pa_spacing = wavelength(g) / 2.0;
    g.noise_power = dbm_to_watts(-90.0);
    return g;
}

void SystemGeometry::derive_waveguide_spacing()
{
    if (num_waveguides > 1) {
        waveguide_spacing = area_length_y / (num_waveguides - 1);
    }
}

std::vector<std::string> SystemGeometry::violations() const
{
    std::vector<std::string> out;
    auto require = [&out](bool ok, const char* what) {
        if (!ok) out.emplace_back(what);
    };
    require(area_length_x > 0.0, "area_length_x must be positive");
    require(area_length_y > 0.0, "area_length_y must be positive");
    require(height > 0.0, "height must be positive");
    require(num_waveguides >= 1, "num_waveguides must be at least 1");
    require(num_pas_per_waveguide >= 1, "num_pas_per_waveguide must be at least 1");
    require(num_users >= 1, "num_users must be at least 1");
    require(carrier_frequency > 0.0, "carrier_frequency must be positive");
    require(lightspeed > 0.0, "lightspeed must be positive");
    require(refractive_index >= 1.0, "refractive_index must be at least 1");
    require(noise_power > 0.0, "noise_power must be positive");
    require(min_pa_spacing >= 0.0, "min_pa_spacing must be nonnegative");
    require(num_waveguides == 1 || waveguide_spacing >= 0.0,
            "waveguide_spacing must be nonnegative");
    if (num_pas_per_waveguide >= 1 && min_pa_spacing >= 0.0 && area_length_x > 0.0 &&
        (num_pas_per_waveguide - 1) * min_pa_spacing > area_length_x) {
        out.emplace_back("(N - 1) * min_pa_spacing exceeds area_length_x: no feasible layout");
    }
    return out;
}

void SystemGeometry::validate() const
{
    const auto problems = violations();
    if (problems.empty()) return;
    std::ostringstream msg;
    msg << "invalid geometry:";
    for (const auto& p : problems) msg << " " << p << ";";
    throw ModelError(msg.str());
}

double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

double wavelength(const SystemGeometry& geometry)
{
    return geometry.lightspeed / geometry.carrier_frequency;
}

double feed_noise_variance(const SystemGeometry& geometry)
{
    return geometry.num_pas_per_waveguide * geometry.noise_power;
}

Point3 pa_point(const SystemGeometry& geometry, int m, double x)
{
    return {x, m * geometry.waveguide_spacing, geometry.height};
}

bool UserSet::within(const SystemGeometry& geometry) const
{
    for (const auto& p : positions) {
        if (p.x < 0.0 || p.x > geometry.area_length_x) return false;
        if (p.y < 0.0 || p.y > geometry.area_length_y) return false;
        if (p.z != 0.0) return false;
    }
    return true;
}

bool PaLayout::feasible(const SystemGeometry& geometry, double tolerance) const
{
    if (num_waveguides() != geometry.num_waveguides ||
        num_pas() != geometry.num_pas_per_waveguide) {
        return false;
    }
    for (int m = 0; m < num_waveguides(); ++m) {
        for (int n = 0; n < num_pas(); ++n) {
            const double v = positions(m, n);
            if (!std::isfinite(v) || v < 0.0 || v > geometry.area_length_x) return false;
            if (n > 0 && v - positions(m, n - 1) < geometry.min_pa_spacing - tolerance) {
                return false;
            }
        }
    }
    return true;
}

PowerAllocation PowerAllocation::full(const Eigen::VectorXd& budgets)
{
    return {budgets.array().sqrt().matrix(), budgets};
}

PowerAllocation PowerAllocation::zero(const Eigen::VectorXd& budgets)
{
    return {Eigen::VectorXd::Zero(budgets.size()), budgets};
}

bool PowerAllocation::feasible() const
{
    if (amplitudes.size() != budgets.size()) return false;
    for (Eigen::Index k = 0; k < amplitudes.size(); ++k) {
        if (!(amplitudes(k) >= 0.0)) return false;
        if (amplitudes(k) * amplitudes(k) > budgets(k)) return false;
    }
    return true;
}

cplx freespace_channel(const Point3& user, const Point3& pa, double lambda)
{
    const double dist = distance(user, pa);
    if (!(dist > 0.0)) {
        throw ModelError("freespace_channel: user and antenna coincide");
    }
    return std::polar(lambda / (4.0 * kPi * dist), -2.0 * kPi * dist / lambda);
}

cplx pa_response(const SystemGeometry& geometry, const Point3& user, int m, double x)
{
    const double lambda = wavelength(geometry);
    const double dx = x - user.x;
    const double dy = m * geometry.waveguide_spacing - user.y;
    const double dist = std::sqrt(dx * dx + dy * dy + geometry.height * geometry.height);
    const double phase =
        2.0 * kPi / lambda * dist + 2.0 * kPi * geometry.refractive_index / lambda * x;
    return std::polar(lambda / (4.0 * kPi * dist), -phase);
}

cplx effective_channel(const SystemGeometry& geometry, const Point3& user, int m,
                       const Eigen::Ref<const Eigen::RowVectorXd>& row)
{
    cplx sum{0.0, 0.0};
    for (Eigen::Index n = 0; n < row.size(); ++n) {
        sum += pa_response(geometry, user, m, row(n));
    }
    return sum;
}

ChannelMatrix channel_matrix(const SystemGeometry& geometry, const UserSet& users,
                             const PaLayout& layout)
{
    ChannelMatrix g(layout.num_waveguides(), users.size());
    for (int m = 0; m < layout.num_waveguides(); ++m) {
        for (int k = 0; k < users.size(); ++k) {
            g(m, k) = effective_channel(geometry, users.positions[k], m,
                                        layout.positions.row(m));
        }
    }
    return g;
}

double misalignment(const Decoder& decoder, const ChannelMatrix& channel,
                    const Eigen::VectorXd& amplitudes)
{
    const Eigen::RowVectorXcd aligned =
        (decoder.adjoint() * channel) * amplitudes.cast<cplx>().asDiagonal();
    return (aligned.array() - 1.0).abs2().sum();
}

double mse(const Decoder& decoder, const ChannelMatrix& channel,
           const PowerAllocation& power, double noise_variance)
{
    return misalignment(decoder, channel, power.amplitudes) +
           noise_variance * decoder.squaredNorm();
}

double mse(const Decoder& decoder, const ChannelMatrix& channel,
           const PowerAllocation& power, const SystemGeometry& geometry)
{
    return mse(decoder, channel, power, feed_noise_variance(geometry));
}

MonteCarloEstimate simulate_aircomp(const Decoder& decoder, const ChannelMatrix& channel,
                                    const PowerAllocation& power, double noise_variance,
                                    std::int64_t num_trials, std::uint64_t seed)
{
    if (num_trials < 1) throw ModelError("simulate_aircomp: num_trials must be >= 1");

    const Eigen::Index num_users = channel.cols();
    const Eigen::Index num_feeds = channel.rows();
    // Per-symbol effective gain w^H G P and per-feed combining weight conj(w).
    const Eigen::RowVectorXcd user_gain =
        (decoder.adjoint() * channel) * power.amplitudes.cast<cplx>().asDiagonal();
    const Eigen::RowVectorXcd feed_gain = decoder.adjoint();

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> unit(0.0, 1.0);
    const double symbol_scale = std::sqrt(0.5);
    const double noise_scale = std::sqrt(noise_variance / 2.0);

    // Welford accumulation of |s_hat - s|^2.
    double mean = 0.0;
    double m2 = 0.0;
    for (std::int64_t t = 0; t < num_trials; ++t) {
        cplx estimate{0.0, 0.0};
        cplx target{0.0, 0.0};
        for (Eigen::Index k = 0; k < num_users; ++k) {
            const double re = unit(rng) * symbol_scale;
            const double im = unit(rng) * symbol_scale;
            const cplx s{re, im};
            estimate += user_gain(k) * s;
            target += s;
        }
        for (Eigen::Index m = 0; m < num_feeds; ++m) {
            const double re = unit(rng) * noise_scale;
            const double im = unit(rng) * noise_scale;
            estimate += feed_gain(m) * cplx{re, im};
        }
        const double err = std::norm(estimate - target);
        const double delta = err - mean;
        mean += delta / static_cast<double>(t + 1);
        m2 += delta * (err - mean);
    }

    MonteCarloEstimate out;
    out.mean = mean;
    out.trials = num_trials;
    if (num_trials > 1) {
        const double var = m2 / static_cast<double>(num_trials - 1);
        out.standard_error = std::sqrt(var / static_cast<double>(num_trials));
    }
    return out;
}

MonteCarloEstimate simulate_aircomp(const Decoder& decoder, const ChannelMatrix& channel,
                                    const PowerAllocation& power,
                                    const SystemGeometry& geometry, std::int64_t num_trials,
                                    std::uint64_t seed)
{
    return simulate_aircomp(decoder, channel, power, feed_noise_variance(geometry), num_trials,
                            seed);
}

}  // namespace pass_aircomp
