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

#include <vector>

namespace risbeam
{
    enum class SolveStatus
    {
        Optimal,
        Infeasible,
        MaxIterations,
        InfeasibleAfterQuantization,
    };

    const char *to_string(SolveStatus status);

    // Row k holds the effective channel seen by user k: user k receives rows.row(k) * w_j from
    // stream j. power_scale multiplies sum ||w_k||^2 in the reported power (antennas per chain).
    struct EffectiveChannels
    {
        cmat rows; // K x N
        std::vector<double> targets;
        std::vector<double> noise; // powers (sigma^2)
        double power_scale = 1.0;

        int users() const { return static_cast<int>(rows.rows()); }
        int dims() const { return static_cast<int>(rows.cols()); }
    };

    struct PowerMinResult
    {
        SolveStatus status = SolveStatus::Infeasible;
        cmat W;       // N x K
        double power = 0.0; // power_scale * sum ||w_k||^2, watts
        rvec sinr;
        rvec uplink;  // dual variables in noise-normalized units
        int iterations = 0;

        bool feasible() const { return status == SolveStatus::Optimal; }
    };

    struct DualityOptions
    {
        int max_iters = 10000;
        double tol = 1e-10;
        double power_cap_ratio = 1e6; // relative to the interference-free power sum_k D gamma_k sigma_k^2 / ||r_k||^2

        static DualityOptions from(const SolverConfig &cfg) { return {cfg.duality_max_iters, cfg.duality_tol, cfg.power_cap_ratio}; }
    };

    // Minimum-power beamformers meeting every SINR target with equality. Uses the uplink-downlink
    // duality fixed point lambda_k <- gamma_k / (c_k^H (I + sum_{j!=k} lambda_j c_j c_j^H)^{-1} c_k)
    // on noise-normalized channels, MMSE receive directions, then the K x K power system.
    // Infeasible when the dual power passes power_cap_ratio times the interference-free power
    // or the iteration does not settle within max_iters.
    PowerMinResult solve_power_min(const EffectiveChannels &channels, const DualityOptions &opt = {});

    // SINR of every user: |r_k w_k|^2 / (sum_{j != k} |r_k w_j|^2 + sigma_k^2).
    rvec achieved_sinr(const cmat &rows, const cmat &W, const std::vector<double> &noise);

    // Euclidean projection of row `a` onto {t : |t_k|^2 >= gamma (sum_{j!=k} |t_j|^2 + sigma^2)},
    // written as the cone sqrt(1 + 1/gamma) |t_k| >= ||(t, sigma)||. `noise_std` is sigma.
    cvec project_sinr_row(const cvec &a, int k, double target, double noise_std);
}
