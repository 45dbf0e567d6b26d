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
#include "risbeam/mmf.hpp"
#include "risbeam/penalty.hpp"
#include "risbeam/scenario.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace risbeam
{
    enum class Algorithm
    {
        PenaltyAlt,
        PenaltyJointRcg,
        PenaltyJointSca,
        Sequential,
        RandomTheta,
        SdrTheta,
        FullyDigital,
    };

    const char *to_string(Algorithm algorithm);
    Algorithm parse_algorithm(const std::string &name); // throws std::invalid_argument

    enum class SweepAxis
    {
        None,
        SinrTarget,  // dB, all users
        RisElements, // total F; columns = F / ris_rows
        RisDistance, // RIS x coordinate, meters
        PhaseBits,   // Q1 = Q2; "inf" for continuous
    };

    const char *to_string(SweepAxis axis);
    SweepAxis parse_axis(const std::string &name);

    // Applies one sweep value to a copy of the system configuration.
    SystemConfig apply_sweep(SystemConfig sys, SweepAxis axis, const std::string &value);

    struct ExperimentSpec
    {
        Scenario scenario;
        std::vector<Algorithm> algorithms{Algorithm::PenaltyJointRcg};
        SweepAxis axis = SweepAxis::None;
        std::vector<std::string> values; // ignored for SweepAxis::None
        int realizations = 1;
        std::uint64_t seed = 1;
        std::optional<double> mmf_budget_dbm; // max-min fairness instead of power minimization
        int threads = 0;                       // 0: hardware concurrency

        void validate() const;
    };

    struct ResultRow
    {
        int realization = 0;
        Algorithm algorithm = Algorithm::PenaltyJointRcg;
        std::string value;
        double power_dbm = 0.0;
        double min_sinr_db = 0.0;
        bool feasible = false;
        SolveStatus status = SolveStatus::Infeasible;
        int outer_iterations = 0;
        int inner_iterations = 0;
        int rcg_iterations = 0;
        double wall_ms = 0.0;
        double mmf_ratio = 0.0; // min_k SINR_k / gamma_k, max-min runs only
    };

    struct SummaryRow
    {
        Algorithm algorithm = Algorithm::PenaltyJointRcg;
        std::string value;
        double mean = 0.0; // power in dBm (max-min runs: ratio in dB) over feasible rows
        double stddev = 0.0;
        int feasible = 0;
        int total = 0;
    };

    struct ExperimentResult
    {
        std::vector<ResultRow> rows; // ordered by realization, value, algorithm
        std::vector<SummaryRow> summary;

        bool any_infeasible() const;
    };

    // Per-realization random streams: channels, penalty initialization, random RIS, RIS design.
    struct RealizationSeeds
    {
        RngSeed channel, init, random_ris, ris_design;

        static RealizationSeeds make(std::uint64_t seed, int realization);
    };

    // Runs one algorithm on one channel realization.
    QoSSolution run_algorithm(Algorithm algorithm, const ChannelSet &channels, const SystemConfig &sys,
                              const SolverConfig &solver, const RealizationSeeds &seeds);

    // Max-min fairness for one algorithm: penalty variants bisect with the joint solver,
    // sequential keeps its (Theta, V) and bisects exactly.
    MMFSolution run_algorithm_mmf(Algorithm algorithm, const ChannelSet &channels, const SystemConfig &sys,
                                  const SolverConfig &solver, const RealizationSeeds &seeds, double budget_w);

    // Monte-Carlo driver. Channels are shared across algorithms and across sweep values that do
    // not change the geometry. Output is independent of the thread count.
    ExperimentResult run_experiment(const ExperimentSpec &spec);

    std::vector<SummaryRow> summarize(const std::vector<ResultRow> &rows, bool mmf);

    void write_rows_csv(std::ostream &os, const std::vector<ResultRow> &rows, SweepAxis axis, bool mmf, bool timing);
    void write_summary(std::ostream &os, const std::vector<SummaryRow> &summary, bool mmf);
}
