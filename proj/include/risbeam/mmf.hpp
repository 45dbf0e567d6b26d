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

#include "risbeam/channel.hpp"
#include "risbeam/penalty.hpp"
#include "risbeam/scenario.hpp"

#include <iosfwd>
#include <optional>
#include <vector>

namespace risbeam
{
    struct BisectionStep
    {
        int iter = 0;
        double scale = 0.0; // varsigma
        double power_w = 0.0;
        bool feasible = false; // solved and within budget
    };

    struct MMFSolution
    {
        HybridBeamformer beamformer;
        RisResponse ris;
        rvec sinr;
        double xi = 0.0;      // min_k SINR_k / gamma_k
        double scale = 0.0;   // varsigma of the returned probe
        double power_w = 0.0;
        SolveStatus status = SolveStatus::Infeasible;
        std::vector<BisectionStep> trace;

        bool feasible() const { return status == SolveStatus::Optimal; }
    };

    // FixedPhases keeps (Theta, V) and solves each probe exactly; FullJoint runs the penalty
    // method per probe, warm-started from the previous probe's phases.
    struct FixedPhases
    {
        RisResponse ris;
        std::vector<cvec> V_blocks;
    };

    struct FullJoint
    {
        QosOptions options;
    };

    // Bisection over the target scaling varsigma: probes solve the power minimization with targets
    // varsigma * gamma. The bracket keeps the lower probe within budget and the upper one over it.
    MMFSolution solve_mmf(const ChannelSet &channels, const SystemConfig &sys, const SolverConfig &solver, double budget_w,
                          const FixedPhases &mode);
    MMFSolution solve_mmf(const ChannelSet &channels, const SystemConfig &sys, const SolverConfig &solver, double budget_w,
                          const FullJoint &mode);

    // "iter,scale,power_w,feasible" rows.
    void write_bisection_csv(std::ostream &os, const std::vector<BisectionStep> &trace);
}
