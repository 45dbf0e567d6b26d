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
#include "risbeam/manifold.hpp"
#include "risbeam/scenario.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace risbeam
{
    enum class PhaseMethod
    {
        AlternatingRCG,
        JointRCG,
        JointSCA,
    };

    const char *to_string(PhaseMethod method);

    // Sub-connected hybrid precoder: chain n drives antennas [n D, (n + 1) D) through the
    // unit-modulus block V_blocks[n]; W is the N x K digital precoder.
    struct HybridBeamformer
    {
        std::vector<cvec> V_blocks;
        cmat W;

        int chains() const { return static_cast<int>(V_blocks.size()); }
        cvec analog() const; // stacked blocks, length M
        cmat V() const;      // M x N block diagonal
        static HybridBeamformer from_analog(const cvec &x, int chains);
    };

    // Diagonal of the reflection matrix Theta. The optimizer works with b = conj(theta), so that
    // h_k^H Theta G = b^H diag(conj(h_k)) G.
    struct RisResponse
    {
        cvec theta;

        cvec b() const { return theta.conjugate(); }
        static RisResponse from_b(const cvec &b) { return {b.conjugate()}; }
    };

    // Per-user cascaded channels H_k = diag(conj(h_k)) G / (sigma_k s), with one global scale s
    // chosen so that mean_k ||H_k||_F = 1. In these units the noise is one and a precoder W'
    // corresponds to W = W' / s in watts-scale units.
    struct CascadedChannels
    {
        std::vector<cmat> H; // F x M each
        double scale = 1.0;  // s
        int chains = 1;
        int per_chain = 1;   // D
        std::vector<double> targets;

        static CascadedChannels build(const ChannelSet &channels, const SystemConfig &sys);

        int users() const { return static_cast<int>(H.size()); }
        int ris() const { return static_cast<int>(H.front().rows()); }
        int antennas() const { return static_cast<int>(H.front().cols()); }

        // K x N effective channels h~_k = b^H H_k V(x).
        cmat effective(const cvec &b, const cvec &x) const;
    };

    // Effective channels h_k^H Theta G V in physical units (K x N).
    cmat effective_channels(const ChannelSet &channels, const RisResponse &ris, const HybridBeamformer &bf);
    cmat effective_channels(const ChannelSet &channels, const RisResponse &ris, const cmat &V);

    // Inner-loop state in normalized units.
    struct PenaltyState
    {
        cvec b; // length F
        cvec x; // length M, stacked analog blocks
        cmat W; // N x K
        cmat t; // K x K, t(k, j) tracks h~_k w_j
        double rho = 1e-3;
    };

    // Penalized objective D ||W||^2 + rho / 2 sum_{k,j} |h~_k w_j - t_kj|^2.
    double penalized_objective(const PenaltyState &state, const CascadedChannels &ch);

    // Stopping indicator max_{k,j} |h~_k w_j - t_kj|^2.
    double stopping_indicator(const PenaltyState &state, const CascadedChannels &ch);

    // w_k = rho A^{-1} sum_j h~_j^H t_jk with A = 2 D I + rho sum_j h~_j^H h~_j.
    cmat update_digital(const PenaltyState &state, const CascadedChannels &ch);

    enum class PhaseBlock
    {
        Ris,    // variable b, x fixed
        Analog, // variable x, b fixed
        Joint,  // variable z = [b; x]
    };

    // f = sum_{k,j} |b^H H_k (w^_j .* x) - t_kj|^2 where w^_j repeats each entry of w_j D times.
    SmoothProblem<cvec> build_phase_problem(const PenaltyState &state, const CascadedChannels &ch, PhaseBlock block);

    struct PhaseUpdate
    {
        cvec b, x;
        int iterations = 0;
        bool stalled = false;
    };

    // One phase step with W and t fixed. `ris_free` / `analog_free` select the blocks that move.
    PhaseUpdate update_phases(const PenaltyState &state, const CascadedChannels &ch, PhaseMethod method,
                              const SolverConfig &solver, bool ris_free = true, bool analog_free = true);

    // Row k is the projection of a_k = (h~_k w_1, ..., h~_k w_K) onto user k's SINR cone.
    cmat update_t(const PenaltyState &state, const CascadedChannels &ch);

    struct TraceRecord
    {
        int outer = 0;
        int inner = 0;
        double rho = 0.0;
        double start = 0.0;        // objective entering the pass
        double after_digital = 0.0;
        double after_phases = 0.0;
        double objective = 0.0;    // after the t update
        double xi = 0.0;
        int rcg_iterations = 0;
    };

    struct QosOptions
    {
        PhaseMethod method = PhaseMethod::JointRCG;
        bool optimize_ris = true;
        bool optimize_analog = true;
        std::optional<cvec> init_theta;
        std::optional<cvec> init_analog;
        RngSeed rng;
        bool keep_trace = true;
    };

    struct QoSSolution
    {
        HybridBeamformer beamformer; // physical units, projected phases
        RisResponse ris;
        rvec sinr;
        double power_w = 0.0;
        SolveStatus status = SolveStatus::Infeasible;
        bool converged = false; // stopping indicator reached
        double xi = 0.0;
        int outer_iterations = 0;
        int inner_iterations = 0;
        int rcg_iterations = 0;
        double wall_ms = 0.0;
        std::vector<TraceRecord> trace;
        cvec theta_continuous; // before projection
        cvec analog_continuous;

        // MaxIterations designs still meet every target after the exact digital re-solve.
        bool feasible() const { return status == SolveStatus::Optimal || status == SolveStatus::MaxIterations; }
        double power_dbm() const { return watts_to_dbm(power_w); }
        double min_sinr_db() const;
    };

    // Projects (theta, analog) onto the configured phase sets and re-solves W optimally. When the
    // projected design is infeasible the continuous design is re-solved instead and the status
    // becomes InfeasibleAfterQuantization.
    QoSSolution finalize_design(const ChannelSet &channels, const SystemConfig &sys, const SolverConfig &solver,
                                const cvec &theta, const cvec &analog);

    // Two-layer penalty method: inner BCD over W, phases and t until the relative decrease drops
    // below inner_tol, then rho <- rho / rho_scale, until the stopping indicator is below xi_tol.
    QoSSolution run_qos(const ChannelSet &channels, const SystemConfig &sys, const SolverConfig &solver,
                        const QosOptions &options = {});

    // "outer_iter,inner_iter,rho,objective,xi" rows.
    void write_trace_csv(std::ostream &os, const std::vector<TraceRecord> &trace);
}
