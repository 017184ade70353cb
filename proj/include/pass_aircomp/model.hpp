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
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace pass_aircomp {

using cplx = std::complex<double>;

/// Channel matrix G(V): row m holds the effective gains from every user to
/// the feed point of waveguide m (M x K).
using ChannelMatrix = Eigen::MatrixXcd;

/// Receive combining weights w, one per waveguide feed (length M).
using Decoder = Eigen::VectorXcd;

inline constexpr double kSpeedOfLight = 3.0e8;
inline constexpr double kPi = 3.14159265358979323846;

/// Raised for geometry or layout arguments that violate the model invariants.
class ModelError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct Point3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
};

double distance(const Point3& a, const Point3& b);

/// Static deployment parameters of the pinching-antenna uplink. All values SI.
struct SystemGeometry {
    double area_length_x = 20.0;       // L_x, also the waveguide length [m]
    double area_length_y = 6.0;        // L_y [m]
    int num_waveguides = 4;            // M
    int num_pas_per_waveguide = 2;     // N
    int num_users = 3;                 // K
    double height = 5.0;               // d [m]
    double waveguide_spacing = 2.0;    // a [m]
    double carrier_frequency = 28e9;   // f [Hz]
    double lightspeed = kSpeedOfLight; // c [m/s]
    double refractive_index = 1.44;    // i_ref
    double min_pa_spacing = 0.0;       // L_0 [m]
    double noise_power = 1e-12;        // sigma^2 [W]

    /// The reference deployment: 20 m x 6 m area, four waveguides at 5 m,
    /// two PAs each, three users, 28 GHz, L_0 = lambda/2, -90 dBm noise.
    static SystemGeometry reference();

    /// Recomputes a = L_y / (M - 1); leaves a untouched when M == 1.
    void derive_waveguide_spacing();

    /// Human-readable invariant violations; empty when the geometry is usable.
    std::vector<std::string> violations() const;

    /// Throws ModelError listing every violation.
    void validate() const;
};

double dbm_to_watts(double dbm);

/// lambda = c / f.
double wavelength(const SystemGeometry& geometry);

/// Aggregate noise variance seen at one waveguide feed: N sigma^2.
double feed_noise_variance(const SystemGeometry& geometry);

/// Position of the PA at x-coordinate `x` on waveguide `m` (0-based).
Point3 pa_point(const SystemGeometry& geometry, int m, double x);

/// Users sit on the ground plane, one point per user.
struct UserSet {
    std::vector<Point3> positions;

    int size() const { return static_cast<int>(positions.size()); }
    bool within(const SystemGeometry& geometry) const;
};

/// PA x-positions V, one row per waveguide, one column per PA.
struct PaLayout {
    Eigen::MatrixXd positions;

    int num_waveguides() const { return static_cast<int>(positions.rows()); }
    int num_pas() const { return static_cast<int>(positions.cols()); }

    /// Box and spacing constraints, with `tolerance` meters of slack for
    /// rounding in the spacing differences.
    bool feasible(const SystemGeometry& geometry, double tolerance = 1e-9) const;
};

/// Per-user amplitudes sqrt(p_k) together with the power budgets P^max_k.
struct PowerAllocation {
    Eigen::VectorXd amplitudes;
    Eigen::VectorXd budgets;

    static PowerAllocation full(const Eigen::VectorXd& budgets);
    static PowerAllocation zero(const Eigen::VectorXd& budgets);

    Eigen::VectorXd powers() const { return amplitudes.array().square(); }
    bool feasible() const;
};

/// Free-space gain (lambda / (4 pi D)) exp(-j 2 pi D / lambda).
/// Throws ModelError for coincident points.
cplx freespace_channel(const Point3& user, const Point3& pa, double lambda);

/// Contribution of one PA at x-position `x` on waveguide `m` to the feed-point
/// channel of `user`: free-space gain times the in-waveguide delay
/// exp(-j 2 pi i_ref x / lambda).
cplx pa_response(const SystemGeometry& geometry, const Point3& user, int m, double x);

/// Sum of pa_response over every PA of one waveguide row.
cplx effective_channel(const SystemGeometry& geometry, const Point3& user, int m,
                       const Eigen::Ref<const Eigen::RowVectorXd>& row);

ChannelMatrix channel_matrix(const SystemGeometry& geometry, const UserSet& users,
                             const PaLayout& layout);

/// ||w^H G P - 1^T||^2, the signal-misalignment part of the MSE.
double misalignment(const Decoder& decoder, const ChannelMatrix& channel,
                    const Eigen::VectorXd& amplitudes);

/// ||w^H G P - 1^T||^2 + noise_variance ||w||^2.
double mse(const Decoder& decoder, const ChannelMatrix& channel,
           const PowerAllocation& power, double noise_variance);

/// MSE with the PASS feed noise N sigma^2.
double mse(const Decoder& decoder, const ChannelMatrix& channel,
           const PowerAllocation& power, const SystemGeometry& geometry);

struct MonteCarloEstimate {
    double mean = 0.0;
    double standard_error = 0.0;
    std::int64_t trials = 0;
};

/// Draws s ~ CN(0, I_K) and per-feed noise ~ CN(0, noise_variance I_M),
/// forms s_hat = w^H (G P s + z) and averages |s_hat - sum(s)|^2.
/// Bit-identical for identical inputs and seed.
MonteCarloEstimate simulate_aircomp(const Decoder& decoder, const ChannelMatrix& channel,
                                    const PowerAllocation& power, double noise_variance,
                                    std::int64_t num_trials, std::uint64_t seed);

MonteCarloEstimate simulate_aircomp(const Decoder& decoder, const ChannelMatrix& channel,
                                    const PowerAllocation& power,
                                    const SystemGeometry& geometry, std::int64_t num_trials,
                                    std::uint64_t seed);

}  // namespace pass_aircomp
