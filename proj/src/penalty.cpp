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

#include "risbeam/penalty.hpp"

#include <Eigen/Cholesky>
#include <chrono>
#include <limits>
#include <memory>
#include <ostream>

namespace risbeam
{
    const char *to_string(PhaseMethod method)
    {
        switch (method)
        {
        case PhaseMethod::AlternatingRCG:
            return "alternating-rcg";
        case PhaseMethod::JointRCG:
            return "joint-rcg";
        case PhaseMethod::JointSCA:
            return "joint-sca";
        }
        return "unknown";
    }

    cvec HybridBeamformer::analog() const
    {
        long total = 0;
        for (const auto &v : V_blocks)
            total += v.size();
        cvec x(total);
        long offset = 0;
        for (const auto &v : V_blocks)
        {
            x.segment(offset, v.size()) = v;
            offset += v.size();
        }
        return x;
    }

    cmat HybridBeamformer::V() const
    {
        const cvec x = analog();
        cmat out = cmat::Zero(x.size(), chains());
        long offset = 0;
        for (int n = 0; n < chains(); ++n)
        {
            out.col(n).segment(offset, V_blocks[n].size()) = V_blocks[n];
            offset += V_blocks[n].size();
        }
        return out;
    }

    HybridBeamformer HybridBeamformer::from_analog(const cvec &x, int chains)
    {
        if (chains <= 0 || x.size() % chains != 0)
            throw std::invalid_argument("HybridBeamformer: antenna count not divisible by chains");
        const long D = x.size() / chains;
        HybridBeamformer bf;
        for (int n = 0; n < chains; ++n)
            bf.V_blocks.push_back(x.segment(n * D, D));
        return bf;
    }

    CascadedChannels CascadedChannels::build(const ChannelSet &channels, const SystemConfig &sys)
    {
        channels.check(sys);
        CascadedChannels ch;
        ch.chains = sys.rf_chains;
        ch.per_chain = sys.antennas_per_chain();
        ch.targets = sys.sinr_targets;
        double mean_norm = 0.0;
        for (int k = 0; k < channels.users(); ++k)
        {
            ch.H.push_back(channels.h[k].conjugate().asDiagonal() * channels.G / std::sqrt(sys.noise_powers[k]));
            mean_norm += ch.H.back().norm();
        }
        mean_norm /= channels.users();
        if (!(mean_norm > 0.0) || !std::isfinite(mean_norm))
            throw std::invalid_argument("CascadedChannels: degenerate channel");
        ch.scale = mean_norm;
        for (auto &H : ch.H)
            H /= mean_norm;
        return ch;
    }

    namespace
    {
        // Sums consecutive groups of D entries: (M) -> (M / D).
        cvec block_sum(const cvec &v, int D)
        {
            return v.reshaped(D, v.size() / D).colwise().sum().transpose();
        }

        // Repeats each row of W D times: (N x K) -> (N D x K).
        cmat expand_rows(const cmat &W, int D)
        {
            cmat out(W.rows() * D, W.cols());
            for (Eigen::Index n = 0; n < W.rows(); ++n)
                out.middleRows(n * D, D) = W.row(n).replicate(D, 1);
            return out;
        }
    }

    cmat CascadedChannels::effective(const cvec &b, const cvec &x) const
    {
        cmat rows(users(), chains);
        for (int k = 0; k < users(); ++k)
        {
            const cvec q = H[k].adjoint() * b;
            rows.row(k) = block_sum(q.conjugate().cwiseProduct(x), per_chain).transpose();
        }
        return rows;
    }

    cmat effective_channels(const ChannelSet &channels, const RisResponse &ris, const cmat &V)
    {
        cmat rows(channels.users(), V.cols());
        for (int k = 0; k < channels.users(); ++k)
            rows.row(k) = channels.h[k].conjugate().cwiseProduct(ris.theta).transpose() * channels.G * V;
        return rows;
    }

    cmat effective_channels(const ChannelSet &channels, const RisResponse &ris, const HybridBeamformer &bf)
    {
        return effective_channels(channels, ris, bf.V());
    }

    double penalized_objective(const PenaltyState &s, const CascadedChannels &ch)
    {
        const cmat r = ch.effective(s.b, s.x) * s.W - s.t;
        return ch.per_chain * s.W.squaredNorm() + 0.5 * s.rho * r.squaredNorm();
    }

    double stopping_indicator(const PenaltyState &s, const CascadedChannels &ch)
    {
        return (ch.effective(s.b, s.x) * s.W - s.t).cwiseAbs2().maxCoeff();
    }

    cmat update_digital(const PenaltyState &s, const CascadedChannels &ch)
    {
        const cmat Ht = ch.effective(s.b, s.x);
        const int N = ch.chains;
        const cmat A = 2.0 * ch.per_chain * cmat::Identity(N, N) + s.rho * Ht.adjoint() * Ht;
        return A.llt().solve(s.rho * Ht.adjoint() * s.t);
    }

    namespace
    {
        // Joint evaluation of the phase objective and its gradients in (b, x).
        struct PhaseObjective
        {
            const CascadedChannels &ch;
            cmat What; // M x K
            cmat t;

            PhaseObjective(const PenaltyState &s, const CascadedChannels &c) : ch(c), What(expand_rows(s.W, c.per_chain)), t(s.t) {}

            cmat residual(const cvec &b, const cvec &x, cmat *Q) const
            {
                const int K = ch.users();
                cmat q(x.size(), K);
                for (int k = 0; k < K; ++k)
                    q.col(k) = ch.H[k].adjoint() * b;
                cmat r = q.adjoint() * (x.asDiagonal() * What) - t;
                if (Q)
                    *Q = std::move(q);
                return r;
            }

            double cost(const cvec &b, const cvec &x) const { return residual(b, x, nullptr).squaredNorm(); }

            void gradient(const cvec &b, const cvec &x, cvec *gb, cvec *gx) const
            {
                cmat Q;
                const cmat r = residual(b, x, &Q);
                if (gb)
                {
                    const cmat E = What * r.adjoint(); // col k = sum_j w^_j conj(r_kj)
                    cvec g = cvec::Zero(b.size());
                    for (int k = 0; k < ch.users(); ++k)
                        g += ch.H[k] * x.cwiseProduct(E.col(k));
                    *gb = 2.0 * g;
                }
                if (gx)
                {
                    const cmat E = What.conjugate() * r.transpose(); // col k = sum_j conj(w^_j) r_kj
                    *gx = 2.0 * Q.cwiseProduct(E).rowwise().sum();
                }
            }
        };
    }

    SmoothProblem<cvec> build_phase_problem(const PenaltyState &state, const CascadedChannels &ch, PhaseBlock block)
    {
        auto obj = std::make_shared<PhaseObjective>(state, ch);
        SmoothProblem<cvec> p;
        switch (block)
        {
        case PhaseBlock::Ris:
        {
            const cvec x = state.x;
            p.cost = [obj, x](const cvec &b) { return obj->cost(b, x); };
            p.gradient = [obj, x](const cvec &b) {
                cvec g;
                obj->gradient(b, x, &g, nullptr);
                return g;
            };
            break;
        }
        case PhaseBlock::Analog:
        {
            const cvec b = state.b;
            p.cost = [obj, b](const cvec &x) { return obj->cost(b, x); };
            p.gradient = [obj, b](const cvec &x) {
                cvec g;
                obj->gradient(b, x, nullptr, &g);
                return g;
            };
            break;
        }
        case PhaseBlock::Joint:
        {
            const long F = state.b.size();
            p.cost = [obj, F](const cvec &z) { return obj->cost(z.head(F), z.tail(z.size() - F)); };
            p.gradient = [obj, F](const cvec &z) {
                cvec gb, gx;
                obj->gradient(z.head(F), z.tail(z.size() - F), &gb, &gx);
                cvec g(z.size());
                g << gb, gx;
                return g;
            };
            break;
        }
        }
        return p;
    }

    namespace
    {
        struct BlockResult
        {
            cvec point;
            int iterations = 0;
            bool stalled = false;
        };

        BlockResult minimize_block(const SmoothProblem<cvec> &problem, const cvec &init, bool sca, const SolverConfig &solver)
        {
            if (sca)
            {
                const SmoothProblem<rvec> phased = phase_domain(problem);
                ScaResult r = sca_phase_minimize(phased, point_to_phases(init), solver.sca, solver.inner_tol);
                return {phases_to_point(r.phases), r.iterations, r.stalled};
            }
            RcgOptions opt{solver.grad_tol, solver.max_rcg_iters, solver.armijo};
            RcgResult<cvec> r = rcg_minimize(problem, init, opt);
            return {std::move(r.point), r.iterations, r.stalled};
        }
    }

    PhaseUpdate update_phases(const PenaltyState &state, const CascadedChannels &ch, PhaseMethod method,
                              const SolverConfig &solver, bool ris_free, bool analog_free)
    {
        PhaseUpdate out{state.b, state.x};
        const bool sca = method == PhaseMethod::JointSCA;
        if (ris_free && analog_free && method != PhaseMethod::AlternatingRCG)
        {
            cvec z(state.b.size() + state.x.size());
            z << state.b, state.x;
            BlockResult r = minimize_block(build_phase_problem(state, ch, PhaseBlock::Joint), z, sca, solver);
            out.b = r.point.head(state.b.size());
            out.x = r.point.tail(state.x.size());
            out.iterations = r.iterations;
            out.stalled = r.stalled;
            return out;
        }
        if (ris_free)
        {
            BlockResult r = minimize_block(build_phase_problem(state, ch, PhaseBlock::Ris), state.b, sca, solver);
            out.b = std::move(r.point);
            out.iterations += r.iterations;
            out.stalled = out.stalled || r.stalled;
        }
        if (analog_free)
        {
            PenaltyState moved = state;
            moved.b = out.b;
            BlockResult r = minimize_block(build_phase_problem(moved, ch, PhaseBlock::Analog), state.x, sca, solver);
            out.x = std::move(r.point);
            out.iterations += r.iterations;
            out.stalled = out.stalled || r.stalled;
        }
        return out;
    }

    cmat update_t(const PenaltyState &s, const CascadedChannels &ch)
    {
        const cmat a = ch.effective(s.b, s.x) * s.W;
        cmat t(a.rows(), a.cols());
        for (Eigen::Index k = 0; k < a.rows(); ++k)
            t.row(k) = project_sinr_row(a.row(k).transpose(), static_cast<int>(k), ch.targets[k], 1.0).transpose();
        return t;
    }

    double QoSSolution::min_sinr_db() const
    {
        if (sinr.size() == 0)
            return std::numeric_limits<double>::quiet_NaN();
        return linear_to_db(sinr.minCoeff());
    }

    QoSSolution finalize_design(const ChannelSet &channels, const SystemConfig &sys, const SolverConfig &solver,
                                const cvec &theta, const cvec &analog)
    {
        auto solve = [&](const cvec &th, const cvec &x, QoSSolution &sol) {
            sol.ris = RisResponse{th};
            sol.beamformer = HybridBeamformer::from_analog(x, sys.rf_chains);
            EffectiveChannels ec{effective_channels(channels, sol.ris, sol.beamformer), sys.sinr_targets,
                                 sys.noise_powers, static_cast<double>(sys.antennas_per_chain())};
            PowerMinResult pm = solve_power_min(ec, DualityOptions::from(solver));
            sol.beamformer.W = pm.W;
            sol.sinr = pm.sinr;
            sol.power_w = pm.feasible() ? pm.power : std::numeric_limits<double>::infinity();
            return pm.feasible();
        };

        QoSSolution sol;
        sol.theta_continuous = theta;
        sol.analog_continuous = analog;
        if (solve(phase_project(theta, sys.ris_phases), phase_project(analog, sys.analog_phases), sol))
        {
            sol.status = SolveStatus::Optimal;
            return sol;
        }
        QoSSolution fallback = sol;
        if (solve(theta, analog, fallback))
        {
            fallback.status = SolveStatus::InfeasibleAfterQuantization;
            return fallback;
        }
        sol.status = SolveStatus::Infeasible;
        return sol;
    }

    QoSSolution run_qos(const ChannelSet &channels, const SystemConfig &sys, const SolverConfig &solver, const QosOptions &options)
    {
        const auto started = std::chrono::steady_clock::now();
        const CascadedChannels ch = CascadedChannels::build(channels, sys);
        const int F = ch.ris(), M = ch.antennas(), K = ch.users();

        auto engine = options.rng.engine();
        std::uniform_real_distribution<double> phase(0.0, 2.0 * pi);
        std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
        auto random_phases = [&](long n) {
            cvec v(n);
            for (long i = 0; i < n; ++i)
                v(i) = std::polar(1.0, phase(engine));
            return v;
        };

        PenaltyState s;
        s.b = options.init_theta ? cvec(options.init_theta->conjugate()) : random_phases(F);
        s.x = options.init_analog ? *options.init_analog : random_phases(M);
        if (s.b.size() != F || s.x.size() != M)
            throw std::invalid_argument("run_qos: warm start has the wrong length");
        s.t.resize(K, K);
        for (int j = 0; j < K; ++j)
            for (int k = 0; k < K; ++k)
                s.t(k, j) = cd(normal(engine), normal(engine));
        s.rho = solver.rho0;
        s.W = update_digital(s, ch);

        QoSSolution tally;
        double xi = stopping_indicator(s, ch);
        bool converged = false;
        int outer = 0;
        while (outer < solver.max_outer)
        {
            ++outer;
            for (int inner = 1; inner <= solver.max_inner; ++inner)
            {
                TraceRecord rec;
                rec.outer = outer;
                rec.inner = inner;
                rec.rho = s.rho;
                rec.start = penalized_objective(s, ch);
                s.W = update_digital(s, ch);
                rec.after_digital = penalized_objective(s, ch);
                PhaseUpdate pu = update_phases(s, ch, options.method, solver, options.optimize_ris, options.optimize_analog);
                s.b = std::move(pu.b);
                s.x = std::move(pu.x);
                rec.after_phases = penalized_objective(s, ch);
                rec.rcg_iterations = pu.iterations;
                s.t = update_t(s, ch);
                rec.objective = penalized_objective(s, ch);
                rec.xi = stopping_indicator(s, ch);
                ++tally.inner_iterations;
                tally.rcg_iterations += pu.iterations;
                if (options.keep_trace)
                    tally.trace.push_back(rec);
                if (rec.start - rec.objective <= solver.inner_tol * std::abs(rec.start))
                    break;
            }
            xi = stopping_indicator(s, ch);
            if (xi < solver.xi_tol)
            {
                converged = true;
                break;
            }
            s.rho /= solver.rho_scale;
        }

        QoSSolution sol = finalize_design(channels, sys, solver, s.b.conjugate(), s.x);
        sol.converged = converged;
        if (!converged && sol.status == SolveStatus::Optimal)
            sol.status = SolveStatus::MaxIterations;
        sol.xi = xi;
        sol.outer_iterations = outer;
        sol.inner_iterations = tally.inner_iterations;
        sol.rcg_iterations = tally.rcg_iterations;
        sol.trace = std::move(tally.trace);
        sol.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
        return sol;
    }

    void write_trace_csv(std::ostream &os, const std::vector<TraceRecord> &trace)
    {
        os << "outer_iter,inner_iter,rho,objective,xi\n";
        const auto old = os.precision(12);
        for (const auto &r : trace)
            os << r.outer << ',' << r.inner << ',' << r.rho << ',' << r.objective << ',' << r.xi << '\n';
        os.precision(old);
    }
}
