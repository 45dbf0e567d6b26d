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

#pragma once

#include "risbeam/scenario.hpp"
#include "risbeam/types.hpp"

#include <iosfwd>
#include <vector>

namespace risbeam
{
    struct ArrayGeometry
    {
        int rows = 1;
        int cols = 1;
        double spacing = 0.5; // wavelengths

        int size() const { return rows * cols; }
    };

    // UPA steering vector, unit norm. Entry (o, p) sits at index o * cols + p and equals
    // exp(j 2 pi d (o sin(az) sin(el) + p cos(el))) / sqrt(rows * cols).
    template <typename Scalar = double>
    CVec<Scalar> upa_response(Scalar azimuth, Scalar elevation, const ArrayGeometry &geometry)
    {
        const Scalar two_pi_d = Scalar(2) * std::numbers::pi_v<Scalar> * Scalar(geometry.spacing);
        const Scalar u = std::sin(azimuth) * std::sin(elevation);
        const Scalar v = std::cos(elevation);
        const Scalar scale = Scalar(1) / std::sqrt(Scalar(geometry.size()));
        CVec<Scalar> a(geometry.size());
        for (int o = 0; o < geometry.rows; ++o)
            for (int p = 0; p < geometry.cols; ++p)
                a(o * geometry.cols + p) = std::polar(scale, two_pi_d * (Scalar(o) * u + Scalar(p) * v));
        return a;
    }

    // Deterministic part of the log-distance model: intercept + 10 * exponent * log10(d).
    double path_loss_db(double distance_m, const ClusterParams &params);

    struct ChannelSet
    {
        cmat G;                          // BS -> RIS, F x M
        std::vector<cvec> h;             // RIS -> user k, length F each; the user sees h_k^H
        std::vector<Point2> user_positions;

        int users() const { return static_cast<int>(h.size()); }
        void check(const SystemConfig &config) const;
    };

    // Clustered narrowband channel draw. Shadowing is drawn once per link; cluster centers are
    // uniform (azimuth in [0, 2pi), elevation in (0, pi)) and rays are Laplacian around them.
    ChannelSet sample_channels(const SystemConfig &config, const ClusterParams &params, const RngSeed &rng);

    // Expected ||h_k||^2 and ||G||_F^2 for the given link distance, including the log-normal
    // shadowing bias E[10^(-phi/10)] = exp((sigma ln10 / 10)^2 / 2).
    double expected_link_gain(double distance_m, const ClusterParams &params);

    // CSV with header "name,row,col,re,im"; G entries are named "G", user k's vector "h<k>".
    void write_channel_csv(std::ostream &os, const ChannelSet &channels);
    ChannelSet read_channel_csv(std::istream &is);
}
