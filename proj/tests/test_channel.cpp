// SPDX-License-Identifier: Apache-2.0
//
// risbeam - hybrid beamforming and RIS reflection design for mmWave downlink
// Copyright (C) 2026 The risbeam authors
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

#include "risbeam/channel.hpp"

#include <catch_amalgamated.hpp>

#include <sstream>

using namespace risbeam;
using Catch::Approx;

TEST_CASE("broadside steering vector is flat")
{
    const ArrayGeometry g{3, 5, 0.5};
    const cvec a = upa_response(0.0, pi / 2, g);
    REQUIRE(a.size() == 15);
    for (Eigen::Index i = 0; i < a.size(); ++i)
        CHECK(std::abs(a(i) - cd(1.0 / std::sqrt(15.0), 0)) < 1e-12);
}

TEST_CASE("zero elevation alternates by column at half-wavelength spacing")
{
    const ArrayGeometry g{2, 4, 0.5};
    const cvec a = upa_response(0.0, 0.0, g);
    for (int o = 0; o < 2; ++o)
        for (int p = 0; p < 4; ++p)
            CHECK(std::abs(a(o * 4 + p) - std::polar(1.0 / std::sqrt(8.0), pi * p)) < 1e-12);
}

TEST_CASE("steering vectors have unit norm")
{
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-10, 10);
    for (int i = 0; i < 200; ++i)
        CHECK(std::abs(upa_response(u(rng), u(rng), ArrayGeometry{1 + i % 5, 1 + i % 7, 0.5}).norm() - 1.0) < 1e-12);
}

TEST_CASE("log-distance path loss")
{
    const ClusterParams p;
    CHECK(path_loss_db(1.0, p) == Approx(72.0));
    CHECK(path_loss_db(100.0, p) == Approx(130.4));
    CHECK(path_loss_db(10.0, p) == Approx(101.2));
    CHECK_THROWS_AS(path_loss_db(0.0, p), std::invalid_argument);
    CHECK_THROWS_AS(path_loss_db(-1.0, p), std::invalid_argument);
    double prev = path_loss_db(0.5, p);
    for (double d = 1.0; d < 500.0; d *= 1.3)
    {
        const double v = path_loss_db(d, p);
        CHECK(v > prev);
        prev = v;
    }
}

TEST_CASE("channel shapes follow the configuration")
{
    const Scenario sc = full_profile();
    const ChannelSet ch = sample_channels(sc.system, sc.channel, RngSeed{5, 0});
    CHECK(ch.G.rows() == 36);
    CHECK(ch.G.cols() == 36);
    REQUIRE(ch.h.size() == 3);
    for (const auto &h : ch.h)
        CHECK(h.size() == 36);
    CHECK_NOTHROW(ch.check(sc.system));
    CHECK(ch.G.allFinite());
}

TEST_CASE("same seed and stream give identical channels")
{
    const Scenario sc = desk_profile();
    const ChannelSet a = sample_channels(sc.system, sc.channel, RngSeed{9, 4});
    const ChannelSet b = sample_channels(sc.system, sc.channel, RngSeed{9, 4});
    const ChannelSet c = sample_channels(sc.system, sc.channel, RngSeed{9, 5});
    CHECK((a.G.array() == b.G.array()).all());
    for (int k = 0; k < 2; ++k)
        CHECK((a.h[k].array() == b.h[k].array()).all());
    CHECK_FALSE((a.G.array() == c.G.array()).all());
}

TEST_CASE("user positions stay inside the disc")
{
    const Scenario sc = desk_profile();
    for (int r = 0; r < 50; ++r)
    {
        const ChannelSet ch = sample_channels(sc.system, sc.channel, RngSeed{2, static_cast<std::uint64_t>(r)});
        for (const auto &p : ch.user_positions)
            CHECK(distance(p, sc.system.user_center) <= sc.system.user_radius + 1e-12);
    }
}

TEST_CASE("Monte-Carlo channel power matches the generative expectation")
{
    Scenario sc = desk_profile();
    sc.channel.shadowing_db = 0.0;
    const int F = sc.system.ris_elements(), M = sc.system.antennas();
    const double g_expect = M * F * expected_link_gain(distance(sc.system.bs_position, sc.system.ris_position), sc.channel);
    double h_ratio = 0.0, g_ratio = 0.0;
    int count = 0;
    const int runs = 1000;
    for (int r = 0; r < runs; ++r)
    {
        const ChannelSet ch = sample_channels(sc.system, sc.channel, RngSeed{77, static_cast<std::uint64_t>(r)});
        g_ratio += ch.G.squaredNorm() / g_expect;
        for (int k = 0; k < sc.system.users; ++k, ++count)
        {
            const double d = distance(sc.system.ris_position, ch.user_positions[k]);
            h_ratio += ch.h[k].squaredNorm() / (F * expected_link_gain(d, sc.channel));
        }
    }
    CHECK(h_ratio / count == Approx(1.0).margin(0.2));
    CHECK(g_ratio / runs == Approx(1.0).margin(0.2));
}

TEST_CASE("shadowing inflates the mean gain by the log-normal factor")
{
    const ClusterParams p;
    const double s = p.shadowing_db * std::log(10.0) / 10.0;
    CHECK(expected_link_gain(50.0, p) == Approx(std::pow(10.0, -0.1 * path_loss_db(50.0, p)) * std::exp(s * s / 2)));
}

TEST_CASE("channel CSV round-trips")
{
    const Scenario sc = desk_profile();
    const ChannelSet a = sample_channels(sc.system, sc.channel, RngSeed{1, 1});
    std::stringstream ss;
    write_channel_csv(ss, a);
    const ChannelSet b = read_channel_csv(ss);
    CHECK((a.G - b.G).norm() <= 1e-15 * a.G.norm());
    REQUIRE(b.h.size() == a.h.size());
    for (size_t k = 0; k < a.h.size(); ++k)
        CHECK((a.h[k] - b.h[k]).norm() <= 1e-15 * a.h[k].norm());
}
