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
#include <complex>

#include "doctest.h"
#include "test_support.hpp"

using namespace pass_aircomp;
using namespace testing;

namespace {

// Independent long-double evaluation of one PA term.
std::complex<long double> reference_term(long double lambda, long double d, long double a,
                                         long double iref, int m, long double v,
                                         long double ux, long double uy)
{
    const long double pi = 3.141592653589793238462643383279502884L;
    const long double dist =
        std::sqrt((v - ux) * (v - ux) + (m * a - uy) * (m * a - uy) + d * d);
    const long double phase = 2 * pi * dist / lambda + 2 * pi * iref * v / lambda;
    return lambda / (4 * pi * dist) * std::complex<long double>(std::cos(phase), -std::sin(phase));
}

double relative(cplx got, std::complex<long double> want)
{
    const std::complex<long double> diff(got.real() - want.real(), got.imag() - want.imag());
    return static_cast<double>(std::abs(diff) / std::abs(want));
}

}  // namespace

TEST_CASE("wavelength is c over f")
{
    SystemGeometry g = SystemGeometry::reference();
    CHECK(wavelength(g) == doctest::Approx(0.0107142857).epsilon(1e-9));
    g.carrier_frequency = g.lightspeed;
    CHECK(wavelength(g) == 1.0);
    g.carrier_frequency = 2.0 * g.lightspeed;
    CHECK(wavelength(g) == 0.5);
}

TEST_CASE("reference geometry")
{
    const SystemGeometry g = SystemGeometry::reference();
    CHECK(g.violations().empty());
    CHECK(g.waveguide_spacing == doctest::Approx(2.0));
    CHECK(g.min_pa_spacing == doctest::Approx(wavelength(g) / 2.0));
    CHECK(g.noise_power == doctest::Approx(1e-12).epsilon(1e-12));
    CHECK(feed_noise_variance(g) == doctest::Approx(2e-12));
    CHECK(dbm_to_watts(0.0) == doctest::Approx(1e-3));
}

TEST_CASE("geometry violations")
{
    SystemGeometry g = SystemGeometry::reference();
    g.min_pa_spacing = 30.0;
    CHECK_FALSE(g.violations().empty());
    CHECK_THROWS_AS(g.validate(), ModelError);

    g = SystemGeometry::reference();
    g.refractive_index = 0.5;
    g.num_users = 0;
    g.noise_power = 0.0;
    CHECK(g.violations().size() >= 3);
}

TEST_CASE("freespace channel against a high-precision evaluation")
{
    const double lambda = 0.010714;
    const cplx h = freespace_channel({10, 2, 0}, {10, 2, 5}, lambda);
    CHECK(std::abs(h) == doctest::Approx(lambda / (20.0 * kPi)).epsilon(1e-12));
    CHECK(std::abs(lambda / (20.0 * kPi) - 1.7053e-4) < 1e-7);
    const long double want_phase = std::remainder(-2.0L * 3.141592653589793238462643383279502884L /
                                                      lambda * 5.0L,
                                                  2.0L * 3.141592653589793238462643383279502884L);
    CHECK(std::arg(h) == doctest::Approx(static_cast<double>(want_phase)).epsilon(1e-9));

    const cplx at_lambda = freespace_channel({0, 0, 0}, {0, 0, 0.5}, 0.5);
    CHECK(std::abs(at_lambda) == doctest::Approx(1.0 / (4.0 * kPi)).epsilon(1e-12));
    CHECK(std::abs(std::arg(at_lambda)) < 1e-12);

    const cplx near = freespace_channel({0, 0, 0}, {1, 2, 3}, 0.01);
    const cplx far = freespace_channel({0, 0, 0}, {2, 4, 6}, 0.01);
    CHECK(std::abs(far) == doctest::Approx(std::abs(near) / 2.0).epsilon(1e-12));

    CHECK_THROWS_AS(freespace_channel({1, 1, 0}, {1, 1, 0}, 0.01), ModelError);
}

TEST_CASE("effective channel")
{
    const SystemGeometry g = SystemGeometry::reference();
    const double lambda = wavelength(g);

    SUBCASE("single PA at the feed directly over the user")
    {
        const Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(1);
        const cplx h = effective_channel(g, {0.0, 0.0, 0.0}, 0, row);
        CHECK(std::abs(h) == doctest::Approx(lambda / (4.0 * kPi * g.height)).epsilon(1e-12));
    }

    SUBCASE("matches an independent evaluation")
    {
        Eigen::RowVectorXd row(2);
        row << 5.0, 15.0;
        const int m = 1;
        const cplx got = effective_channel(g, {10.0, 3.0, 0.0}, m, row);
        std::complex<long double> want = 0;
        for (double v : {5.0, 15.0}) {
            want += reference_term(lambda, g.height, g.waveguide_spacing, g.refractive_index, m, v,
                                   10.0, 3.0);
        }
        CHECK(relative(got, want) < 1e-12);
    }

    SUBCASE("two equidistant PAs in antiphase cancel")
    {
        // Three half-waves of in-waveguide phase between two PAs placed
        // symmetrically about the user.
        const double gap = 3.0 * lambda / (2.0 * g.refractive_index);
        const double x0 = 10.0;
        Eigen::RowVectorXd row(2);
        row << x0 - gap / 2.0, x0 + gap / 2.0;
        const Point3 user{x0, 0.0, 0.0};
        const cplx a = pa_response(g, user, 0, row(0));
        const cplx b = pa_response(g, user, 0, row(1));
        const cplx sum = effective_channel(g, user, 0, row);
        CHECK(std::abs(sum) < std::abs(a) + std::abs(b));
        CHECK(std::abs(sum) < 1e-9 * std::abs(a));
        CHECK(std::abs(sum - (a + b)) < 1e-18);
    }

    SUBCASE("zero refractive index leaves only free-space terms")
    {
        SystemGeometry h = g;
        h.refractive_index = 0.0;
        Eigen::RowVectorXd row(3);
        row << 1.0, 7.5, 19.0;
        const Point3 user{4.0, 5.0, 0.0};
        cplx want = 0;
        for (int n = 0; n < 3; ++n) want += freespace_channel(user, pa_point(h, 2, row(n)), lambda);
        const cplx got = effective_channel(h, user, 2, row);
        // Equal up to the rounding of phases of ~1e4 rad.
        CHECK(std::abs(got - want) <= 1e-11 * std::abs(want));
    }
}

TEST_CASE("channel matrix")
{
    const SystemGeometry g = SystemGeometry::reference();
    const UserSet users = sample_users(g, 77);
    const PaLayout layout = initial_layout(g);
    const ChannelMatrix G = channel_matrix(g, users, layout);
    REQUIRE(G.rows() == g.num_waveguides);
    REQUIRE(G.cols() == g.num_users);

    const double lambda = wavelength(g);
    const double bound = g.num_pas_per_waveguide * lambda / (4.0 * kPi * g.height);
    for (int m = 0; m < G.rows(); ++m) {
        for (int k = 0; k < G.cols(); ++k) {
            std::complex<long double> want = 0;
            for (int n = 0; n < layout.num_pas(); ++n) {
                want += reference_term(lambda, g.height, g.waveguide_spacing, g.refractive_index, m,
                                       layout.positions(m, n), users.positions[k].x,
                                       users.positions[k].y);
            }
            // Phases reach ~1e4 rad here, so double rounding alone is ~1e-12.
            CHECK(relative(G(m, k), want) < 1e-11);
            CHECK(std::abs(G(m, k)) <= bound);
        }
    }

    UserSet swapped = users;
    std::swap(swapped.positions[0], swapped.positions[2]);
    const ChannelMatrix Gs = channel_matrix(g, swapped, layout);
    CHECK(Gs.col(0) == G.col(2));
    CHECK(Gs.col(2) == G.col(0));
    CHECK(Gs.col(1) == G.col(1));

    SystemGeometry one = g;
    one.num_waveguides = 1;
    one.num_pas_per_waveguide = 1;
    one.num_users = 1;
    const UserSet single = users_at({{3.0, 1.0, 0.0}});
    const PaLayout l1{Eigen::MatrixXd::Constant(1, 1, 4.0)};
    const ChannelMatrix G1 = channel_matrix(one, single, l1);
    CHECK(G1(0, 0) == effective_channel(one, single.positions[0], 0, l1.positions.row(0)));
}

TEST_CASE("channel magnitude bound on random geometries")
{
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        SystemGeometry g = SystemGeometry::reference();
        g.height = 0.5 + 10.0 * unit(rng);
        g.num_pas_per_waveguide = 1 + trial % 4;
        g.area_length_x = 5.0 + 30.0 * unit(rng);
        const UserSet users = sample_users(g, 1000 + trial);
        PaLayout layout{Eigen::MatrixXd(g.num_waveguides, g.num_pas_per_waveguide)};
        for (int m = 0; m < layout.num_waveguides(); ++m) {
            for (int n = 0; n < layout.num_pas(); ++n) {
                layout.positions(m, n) = g.area_length_x * unit(rng);
            }
        }
        const ChannelMatrix G = channel_matrix(g, users, layout);
        const double bound = g.num_pas_per_waveguide * wavelength(g) / (4.0 * kPi * g.height);
        CHECK(G.allFinite());
        CHECK(G.cwiseAbs().maxCoeff() <= bound);
    }
}

TEST_CASE("layout feasibility")
{
    const SystemGeometry g = SystemGeometry::reference();
    PaLayout layout = initial_layout(g);
    CHECK(layout.feasible(g));
    layout.positions(0, 1) = layout.positions(0, 0) + g.min_pa_spacing / 2.0;
    CHECK_FALSE(layout.feasible(g));
    layout = initial_layout(g);
    layout.positions(2, 1) = g.area_length_x + 0.1;
    CHECK_FALSE(layout.feasible(g));
    layout.positions(2, 1) = 0.0;
    layout.positions(2, 0) = 0.0;
    CHECK_FALSE(layout.feasible(g));
}

TEST_CASE("mse")
{
    const SystemGeometry g = SystemGeometry::reference();
    const UserSet users = sample_users(g, 3);
    const ChannelMatrix G = channel_matrix(g, users, initial_layout(g));
    const Eigen::VectorXd budgets = uniform_budgets(3);

    CHECK(mse(Decoder::Zero(4), G, PowerAllocation::full(budgets), g) == doctest::Approx(3.0));

    std::mt19937_64 rng(8);
    const Decoder w = random_decoder(rng, 4, 100.0);
    const double noise = feed_noise_variance(g);
    CHECK(mse(w, G, PowerAllocation::zero(budgets), g) ==
          doctest::Approx(3.0 + noise * w.squaredNorm()).epsilon(1e-14));

    SUBCASE("scalar real case against calculus")
    {
        const double gain = 2e-4;
        const double p = 1e-3;
        ChannelMatrix G1(1, 1);
        G1(0, 0) = gain;
        PowerAllocation power{Eigen::VectorXd::Constant(1, std::sqrt(p)),
                              Eigen::VectorXd::Constant(1, p)};
        auto value = [&](double w) {
            return mse(Decoder::Constant(1, w), G1, power, noise);
        };
        const double w_star = gain * std::sqrt(p) / (gain * gain * p + noise);
        const double at_star = noise / (gain * gain * p + noise);
        CHECK(value(w_star) == doctest::Approx(at_star).epsilon(1e-12));
        CHECK(value(w_star) < value(w_star * 1.001));
        CHECK(value(w_star) < value(w_star * 0.999));
        const double w = 123.0;
        CHECK(value(w) == doctest::Approx(std::pow(w * gain * std::sqrt(p) - 1.0, 2) + noise * w * w));
    }
}

TEST_CASE("Monte-Carlo MSE")
{
    SUBCASE("silent users")
    {
        ChannelMatrix G = ChannelMatrix::Zero(2, 3);
        PowerAllocation power = PowerAllocation::zero(uniform_budgets(3));
        const auto est = simulate_aircomp(Decoder::Zero(2), G, power, 1e-12, 100000, 9);
        CHECK(std::abs(est.mean - 3.0) <= 4.0 * est.standard_error);
        CHECK(est.trials == 100000);
    }

    SUBCASE("agrees with the analytic MSE and is reproducible")
    {
        const Instance inst = random_instance(21);
        const double noise = feed_noise_variance(inst.geometry);
        const Decoder w = optimal_decoder(inst.channel, inst.power, noise);
        const auto a = simulate_aircomp(w, inst.channel, inst.power, inst.geometry, 100000, 4);
        const auto b = simulate_aircomp(w, inst.channel, inst.power, inst.geometry, 100000, 4);
        CHECK(a.mean == b.mean);
        CHECK(a.standard_error == b.standard_error);
        const double analytic = mse(w, inst.channel, inst.power, noise);
        CHECK(std::abs(a.mean - analytic) <= 4.0 * a.standard_error);
    }
}
