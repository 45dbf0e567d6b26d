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

#include "risbeam/mmf.hpp"

#include <functional>
#include <limits>
#include <ostream>

namespace risbeam
{
    namespace
    {
        struct Probe
        {
            bool solved = false;
            double power_w = std::numeric_limits<double>::infinity();
            HybridBeamformer beamformer;
            RisResponse ris;
            rvec sinr;
        };

        using ProbeFn = std::function<Probe(double)>;

        MMFSolution bisect(const SystemConfig &sys, const SolverConfig &solver, double budget_w, const ProbeFn &probe)
        {
            if (!(budget_w > 0.0))
                throw std::invalid_argument("solve_mmf: budget must be positive");
            MMFSolution out;
            int iter = 0;
            auto within = [&](const Probe &p) { return p.solved && p.power_w <= budget_w * (1.0 + 1e-9); };
            auto run = [&](double scale) {
                Probe p = probe(scale);
                out.trace.push_back({++iter, scale, p.power_w, within(p)});
                return p;
            };

            double lo = 1e-3;
            Probe best = run(lo);
            if (!within(best))
            {
                out.status = SolveStatus::Infeasible;
                out.power_w = best.power_w;
                return out;
            }

            double hi = 1.0;
            const double hi_cap = std::ldexp(1.0, 20);
            for (;;)
            {
                Probe p = run(hi);
                if (!within(p))
                    break;
                lo = hi;
                best = std::move(p);
                if (hi >= hi_cap)
                    break;
                hi *= 2.0;
            }
            while (lo < hi_cap && hi - lo > solver.bisection_tol * lo)
            {
                const double mid = 0.5 * (lo + hi);
                Probe p = run(mid);
                if (within(p))
                {
                    lo = mid;
                    best = std::move(p);
                }
                else
                    hi = mid;
            }

            out.beamformer = std::move(best.beamformer);
            out.ris = std::move(best.ris);
            out.sinr = best.sinr;
            out.power_w = best.power_w;
            out.scale = lo;
            out.xi = std::numeric_limits<double>::infinity();
            for (int k = 0; k < sys.users; ++k)
                out.xi = std::min(out.xi, out.sinr(k) / sys.sinr_targets[k]);
            out.status = SolveStatus::Optimal;
            return out;
        }

        std::vector<double> scaled(const std::vector<double> &targets, double s)
        {
            std::vector<double> out = targets;
            for (auto &g : out)
                g *= s;
            return out;
        }
    }

    MMFSolution solve_mmf(const ChannelSet &channels, const SystemConfig &sys, const SolverConfig &solver, double budget_w,
                          const FixedPhases &mode)
    {
        HybridBeamformer bf;
        bf.V_blocks = mode.V_blocks;
        const cmat rows = effective_channels(channels, mode.ris, bf);
        const double D = sys.antennas_per_chain();
        return bisect(sys, solver, budget_w, [&](double s) {
            Probe p;
            const PowerMinResult pm = solve_power_min({rows, scaled(sys.sinr_targets, s), sys.noise_powers, D}, DualityOptions::from(solver));
            p.solved = pm.feasible();
            if (p.solved)
            {
                p.power_w = pm.power;
                p.beamformer = bf;
                p.beamformer.W = pm.W;
                p.ris = mode.ris;
                p.sinr = pm.sinr;
            }
            return p;
        });
    }

    MMFSolution solve_mmf(const ChannelSet &channels, const SystemConfig &sys, const SolverConfig &solver, double budget_w,
                          const FullJoint &mode)
    {
        QosOptions options = mode.options;
        options.keep_trace = false;
        return bisect(sys, solver, budget_w, [&](double s) {
            SystemConfig probe_sys = sys;
            probe_sys.sinr_targets = scaled(sys.sinr_targets, s);
            const QoSSolution sol = run_qos(channels, probe_sys, solver, options);
            Probe p;
            p.solved = sol.feasible();
            if (p.solved)
            {
                p.power_w = sol.power_w;
                p.beamformer = sol.beamformer;
                p.ris = sol.ris;
                p.sinr = sol.sinr;
                options.init_theta = sol.theta_continuous;
                options.init_analog = sol.analog_continuous;
            }
            return p;
        });
    }

    void write_bisection_csv(std::ostream &os, const std::vector<BisectionStep> &trace)
    {
        os << "iter,scale,power_w,feasible\n";
        const auto old = os.precision(12);
        for (const auto &s : trace)
            os << s.iter << ',' << s.scale << ',' << s.power_w << ',' << (s.feasible ? 1 : 0) << '\n';
        os.precision(old);
    }
}
