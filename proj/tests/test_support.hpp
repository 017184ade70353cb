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

#include <complex>
#include <random>

#include "pass_aircomp/harness.hpp"

namespace testing {

using namespace pass_aircomp;

inline Eigen::VectorXd uniform_budgets(int k, double watts = 1e-3)
{
    return Eigen::VectorXd::Constant(k, watts);
}

inline UserSet users_at(std::initializer_list<Point3> points)
{
    return UserSet{std::vector<Point3>(points)};
}

/// A reproducible random instance of the reference geometry.
struct Instance {
    SystemGeometry geometry = SystemGeometry::reference();
    UserSet users;
    PaLayout layout;
    ChannelMatrix channel;
    PowerAllocation power;
};

inline Instance random_instance(std::uint64_t seed)
{
    Instance out;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    out.users = sample_users(out.geometry, seed);
    out.layout = initial_layout(out.geometry);
    for (int m = 0; m < out.layout.num_waveguides(); ++m) {
        out.layout.positions(m, 0) = 8.0 * unit(rng);
        out.layout.positions(m, 1) = 10.0 + 8.0 * unit(rng);
    }
    out.channel = channel_matrix(out.geometry, out.users, out.layout);
    out.power = PowerAllocation::full(uniform_budgets(out.geometry.num_users));
    for (int k = 0; k < out.power.amplitudes.size(); ++k) out.power.amplitudes(k) *= unit(rng);
    return out;
}

inline Decoder random_decoder(std::mt19937_64& rng, Eigen::Index m, double scale)
{
    std::normal_distribution<double> normal;
    Decoder w(m);
    for (Eigen::Index i = 0; i < m; ++i) w(i) = scale * cplx{normal(rng), normal(rng)};
    return w;
}

/// Independent long-double evaluation of ||w^H G(V) P - 1^T||^2. Phases
/// reach ~1e4 rad, which costs double-precision finite differences about
/// eight digits.
inline long double reference_position_objective(const SystemGeometry& g, const UserSet& users,
                                                const PaLayout& layout, const Decoder& w,
                                                const Eigen::VectorXd& amplitudes)
{
    using ld = long double;
    const ld pi = 3.141592653589793238462643383279502884L;
    const ld lambda = static_cast<ld>(g.lightspeed) / static_cast<ld>(g.carrier_frequency);
    ld total = 0;
    for (int k = 0; k < users.size(); ++k) {
        std::complex<ld> aligned = 0;
        for (int m = 0; m < layout.num_waveguides(); ++m) {
            std::complex<ld> gain = 0;
            for (int n = 0; n < layout.num_pas(); ++n) {
                const ld v = layout.positions(m, n);
                const ld dx = v - users.positions[k].x;
                const ld dy = static_cast<ld>(m) * g.waveguide_spacing - users.positions[k].y;
                const ld dist = std::sqrt(dx * dx + dy * dy + static_cast<ld>(g.height) * g.height);
                const ld phase = 2 * pi * dist / lambda + 2 * pi * g.refractive_index * v / lambda;
                gain += lambda / (4 * pi * dist) * std::complex<ld>(std::cos(phase), -std::sin(phase));
            }
            aligned += std::conj(std::complex<ld>(w(m).real(), w(m).imag())) * gain;
        }
        aligned *= static_cast<ld>(amplitudes(k));
        total += std::norm(aligned - std::complex<ld>(1));
    }
    return total;
}

/// Fourth-order central difference of reference_position_objective along
/// v_{m,n} with step h.
inline double reference_position_derivative(const SystemGeometry& g, const UserSet& users,
                                            const PaLayout& layout, const Decoder& w,
                                            const Eigen::VectorXd& amplitudes, int m, int n,
                                            double h)
{
    auto at = [&](double offset) {
        PaLayout moved = layout;
        moved.positions(m, n) += offset;
        return reference_position_objective(g, users, moved, w, amplitudes);
    };
    const long double d = (-at(2 * h) + 8 * at(h) - 8 * at(-h) + at(-2 * h)) / (12.0L * h);
    return static_cast<double>(d);
}

}  // namespace testing
