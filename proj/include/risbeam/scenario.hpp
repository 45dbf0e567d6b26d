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

#include "risbeam/types.hpp"

#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace risbeam
{
    // Phase-shifter resolution. Discrete sets hold e^{j 2 pi q / 2^bits}, q = 0..2^bits-1;
    // a continuous set only imposes unit modulus.
    struct PhaseSet
    {
        std::optional<int> bits;

        static PhaseSet continuous() { return {}; }
        static PhaseSet discrete(int b)
        {
            if (b <= 0)
                throw std::invalid_argument("PhaseSet: bits must be positive");
            return PhaseSet{b};
        }
        bool is_continuous() const { return !bits.has_value(); }
        long levels() const { return bits ? (1L << *bits) : 0; }
        std::string to_string() const { return bits ? std::to_string(*bits) : "continuous"; }

        bool operator==(const PhaseSet &) const = default;
    };

    // Nearest element of the set under circular angular distance. Exact midpoints go to the
    // grid point with the smaller angle in [0, 2pi).
    template <typename Scalar>
    std::complex<Scalar> phase_project(std::complex<Scalar> value, const PhaseSet &set)
    {
        const Scalar mag = std::abs(value);
        if (mag == Scalar(0))
            throw std::domain_error("phase_project: zero input has no phase");
        if (std::abs(mag - Scalar(1)) > Scalar(1e-9))
            throw std::invalid_argument("phase_project: input is not unit-modulus");
        value /= mag;
        if (set.is_continuous())
            return value;

        const long levels = set.levels();
        const Scalar two_pi = Scalar(2) * std::numbers::pi_v<Scalar>;
        const Scalar step = two_pi / Scalar(levels);
        Scalar angle = std::arg(value);
        if (angle < Scalar(0))
            angle += two_pi;
        const Scalar x = angle / step;
        long lower = static_cast<long>(std::floor(x));
        const Scalar frac = x - Scalar(lower);
        long q;
        if (frac < Scalar(0.5))
            q = lower;
        else if (frac > Scalar(0.5))
            q = lower + 1;
        else
            q = std::min(lower % levels, (lower + 1) % levels);
        q = ((q % levels) + levels) % levels;
        return std::polar(Scalar(1), step * Scalar(q));
    }

    template <typename Derived>
    typename Derived::PlainObject phase_project(const Eigen::MatrixBase<Derived> &values, const PhaseSet &set)
    {
        typename Derived::PlainObject out(values.rows(), values.cols());
        for (Eigen::Index i = 0; i < values.size(); ++i)
            out(i) = phase_project(values(i), set);
        return out;
    }

    struct Point2
    {
        double x = 0.0, y = 0.0;
        bool operator==(const Point2 &) const = default;
    };

    inline double distance(const Point2 &a, const Point2 &b) { return std::hypot(a.x - b.x, a.y - b.y); }

    struct SystemConfig
    {
        int bs_rows = 6; // BS UPA, antennas = bs_rows * bs_cols
        int bs_cols = 6;
        int rf_chains = 6;
        int users = 3;
        int ris_rows = 6;
        int ris_cols = 6;
        PhaseSet analog_phases = PhaseSet::discrete(3);
        PhaseSet ris_phases = PhaseSet::discrete(3);
        std::vector<double> sinr_targets; // linear, one per user
        std::vector<double> noise_powers; // watts, one per user
        Point2 bs_position{0.0, 0.0};
        Point2 ris_position{50.0, 10.0};
        Point2 user_center{100.0, 0.0};
        double user_radius = 5.0;
        double carrier_hz = 28e9;
        double bandwidth_hz = 251.1886e6;

        int antennas() const { return bs_rows * bs_cols; }
        int antennas_per_chain() const { return antennas() / rf_chains; }
        int ris_elements() const { return ris_rows * ris_cols; }

        // Throws std::invalid_argument on a broken invariant. Returns false (without throwing)
        // when users > rf_chains, which is allowed but likely infeasible.
        bool validate() const;

        bool operator==(const SystemConfig &) const = default;
    };

    struct ClusterParams
    {
        int clusters_bs_ris = 5;
        int rays_bs_ris = 10;
        int clusters_ris_user = 5;
        int rays_ris_user = 10;
        double angle_spread_deg = 10.0;
        double pl_intercept_db = 72.0;
        double pl_exponent = 2.92;
        double shadowing_db = 8.7;
        double element_spacing = 0.5; // wavelengths

        void validate() const;
        bool operator==(const ClusterParams &) const = default;
    };

    struct ArmijoParams
    {
        double sufficient_decrease = 1e-4;
        double contraction = 0.5;
        double initial_step = 1.0;
        int max_backtracks = 50;
        bool operator==(const ArmijoParams &) const = default;
    };

    struct ScaParams
    {
        double zeta = 0.1;   // in (0, 0.5)
        double beta = 1.0;   // > 0
        double kappa0 = 0.5; // in (0, 1)
        int max_iters = 200;
        int max_trials = 50;
        bool operator==(const ScaParams &) const = default;
    };

    struct SolverConfig
    {
        double rho0 = 1e-3;
        double rho_scale = 0.9;     // rho <- rho / rho_scale after each inner loop
        double grad_tol = 1e-7;     // RCG Riemannian gradient norm
        double inner_tol = 1e-4;    // relative decrease of the penalized objective
        double xi_tol = 1e-7;       // stopping indicator
        int max_outer = 300;
        int max_inner = 50;
        int max_rcg_iters = 200;
        ArmijoParams armijo;
        ScaParams sca;
        int randomizations = 100;
        int relaxation_rank = 8;
        double bisection_tol = 1e-3;
        double power_cap_ratio = 1e6; // infeasibility cap, multiple of the interference-free power
        int duality_max_iters = 10000;
        double duality_tol = 1e-10;

        void validate() const;
        bool operator==(const SolverConfig &) const = default;
    };

    struct Scenario
    {
        SystemConfig system;
        ClusterParams channel;
        SolverConfig solver;
        bool operator==(const Scenario &) const = default;
    };

    class ScenarioError : public std::runtime_error
    {
      public:
        using std::runtime_error::runtime_error;
    };

    // Noise power in dBm for a receiver bandwidth: -174 dBm/Hz + 10 log10(B).
    inline double thermal_noise_dbm(double bandwidth_hz) { return -174.0 + 10.0 * std::log10(bandwidth_hz); }

    // Parses an INI-style document ("[section]" headers, "key = value" lines). Any key may be
    // omitted; the defaults are the full-size system (36 antennas, 6 RF chains, 3 users,
    // 6x6 RIS, 10 dB targets, noise from the bandwidth).
    Scenario load_scenario(std::string_view text);
    Scenario load_scenario_file(const std::string &path);

    // Inverse of load_scenario. Powers are written in dBm and targets in dB.
    std::string to_ini(const Scenario &scenario);

    Scenario full_profile();
    // 4x4 BS with 4 RF chains, 2 users, 4x4 RIS.
    Scenario desk_profile();

    // Scenario path from RISBEAM_SCENARIO, if set.
    std::optional<std::string> scenario_path_from_env();

    // Deterministic random streams. The same (seed, stream) always yields the same engine state.
    struct RngSeed
    {
        std::uint64_t seed = 0;
        std::uint64_t stream = 0;

        RngSeed derive(std::uint64_t salt) const;
        std::mt19937_64 engine() const;
    };

    std::uint64_t splitmix64(std::uint64_t x);
}
