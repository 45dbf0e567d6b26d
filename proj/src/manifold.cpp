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

#include "risbeam/manifold.hpp"

namespace risbeam
{
    RcgResult<cvec> rcg_minimize(const SmoothProblem<cvec> &problem, cvec init, const RcgOptions &opt)
    {
        if (!on_circle(init))
            throw std::invalid_argument("rcg_minimize: initial point is not unit-modulus");
        return rcg_minimize<ComplexCircle>(problem, std::move(init), opt);
    }

    SmoothProblem<rvec> phase_domain(SmoothProblem<cvec> problem)
    {
        SmoothProblem<rvec> out;
        out.cost = [cost = problem.cost](const rvec &phi) { return cost(phases_to_point(phi)); };
        out.gradient = [grad = problem.gradient](const rvec &phi) -> rvec {
            const cvec z = phases_to_point(phi);
            const cvec g = grad(z);
            return (g.array() * z.array().conjugate()).imag();
        };
        return out;
    }

    ScaResult sca_phase_minimize(const SmoothProblem<rvec> &problem, rvec init, const ScaParams &params, double tol)
    {
        if (!init.allFinite())
            throw std::invalid_argument("sca_phase_minimize: non-finite initial phases");
        ScaResult res;
        rvec phi = std::move(init);
        double f = problem.cost(phi);
        res.trace.push_back(f);
        for (int it = 0; it < params.max_iters; ++it)
        {
            const rvec grad = problem.gradient(phi);
            const double gg = grad.squaredNorm();
            if (!std::isfinite(gg))
                throw std::runtime_error("sca_phase_minimize: non-finite gradient");
            if (gg == 0.0)
                break;

            double kappa = params.beta;
            bool accepted = false;
            rvec next;
            double f_next = f;
            for (int trial = 0; trial < params.max_trials; ++trial, kappa *= params.kappa0)
            {
                next = phi - kappa * grad;
                f_next = problem.cost(next);
                if (std::isfinite(f_next) && f - f_next >= params.zeta * kappa * gg)
                {
                    accepted = true;
                    break;
                }
            }
            if (!accepted)
            {
                res.stalled = true;
                break;
            }
            const double decrease = f - f_next;
            phi = std::move(next);
            f = f_next;
            res.trace.push_back(f);
            res.iterations = it + 1;
            if (decrease < tol)
                break;
        }
        res.phases = std::move(phi);
        return res;
    }
}
