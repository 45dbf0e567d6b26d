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
#include "risbeam/conic.hpp"
#include "risbeam/penalty.hpp"
#include "risbeam/scenario.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace risbeam
{
    // Worst-case user metric min_k ||h_k^H Theta G||^2 - gamma_k sum_{j != k} |h_k^H Theta G G^H Theta^H h_j|.
    double ris_maxmin_objective(const ChannelSet &channels, const std::vector<double> &targets, const cvec &theta);

    struct RisDesign
    {
        RisResponse ris;
        double objective = 0.0;         // ris_maxmin_objective of the returned response
        double relaxed_objective = 0.0; // min_k of the relaxed metric at the factorized optimum
        int candidates = 0;
    };

    // Relaxation B = R R^H with unit-norm rows of R (F x r, r = min(F, relaxation_rank)),
    // softmin over users with the temperature annealed from 1 to 0.01, then Gaussian
    // randomization b = R r projected onto the RIS phase set. The best candidate is returned.
    RisDesign ris_maxmin_design(const ChannelSet &channels, const SystemConfig &sys, const SolverConfig &solver, const RngSeed &rng);

    // Optimal fully digital precoder (M x K) for the given RIS response.
    PowerMinResult fully_digital_reference(const ChannelSet &channels, const RisResponse &ris, const SystemConfig &sys,
                                           const SolverConfig &solver);

    // Oversampled BS steering codebook: columns a_B(psi_i, phi_j), psi_i = 2 pi i / (mu N_y),
    // phi_j = 2 pi j / (mu N_z), with N_z x N_y the BS array (rows x cols).
    struct Codebook
    {
        int mu = 1;
        int chains = 1;
        int per_chain = 1;
        cmat A; // M x (mu N_y)(mu N_z)

        static Codebook build(const SystemConfig &sys, int mu, double spacing = 0.5);

        // A restricted to antennas [t D, (t + 1) D); zero elsewhere.
        cmat masked(int chain) const;
    };

    struct OmpResult
    {
        std::vector<cvec> V_blocks; // unit modulus, projected onto the analog phase set
        std::vector<int> selected;  // codebook column per chain
        double residual = 0.0;      // ||W_opt - A_sel F_BB||_F
        std::vector<double> residual_history;
    };

    // One column per chain from its masked codebook, least-squares refit after every selection.
    OmpResult omp_analog(const cmat &W_opt, const Codebook &codebook, const SystemConfig &sys);

    struct StageDiagnostic
    {
        std::string stage;
        double value = 0.0;
    };

    struct SequentialSolution
    {
        QoSSolution solution;
        RisDesign ris_design;
        double fully_digital_power_w = 0.0;
        int best_mu = 0;
        std::vector<StageDiagnostic> stages;
    };

    // RIS max-min design, fully digital reference, OMP analog design for mu = 1..4 (best final
    // power kept), then the optimal digital precoder for the resulting hybrid channels.
    SequentialSolution run_sequential(const ChannelSet &channels, const SystemConfig &sys, const SolverConfig &solver,
                                      const RngSeed &rng);

    // "stage,value" rows.
    void write_stage_csv(std::ostream &os, const std::vector<StageDiagnostic> &stages);
}
