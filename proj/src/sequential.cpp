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

#include "risbeam/sequential.hpp"

#include <Eigen/Cholesky>
#include <Eigen/SVD>
#include <algorithm>
#include <chrono>
#include <limits>
#include <ostream>

namespace risbeam
{
    namespace
    {
        std::vector<cmat> cascaded(const ChannelSet &channels)
        {
            std::vector<cmat> H;
            for (const auto &h : channels.h)
                H.push_back(h.conjugate().asDiagonal() * channels.G);
            return H;
        }

        // Metric per user for b = conj(theta): ||b^H H_k||^2 - gamma_k sum_{j!=k} |b^H H_k H_j^H b|.
        rvec user_metrics(const std::vector<cmat> &H, const std::vector<double> &targets, const cvec &b)
        {
            const int K = static_cast<int>(H.size());
            cmat P(H.front().cols(), K);
            for (int k = 0; k < K; ++k)
                P.col(k) = H[k].adjoint() * b;
            const cmat C = P.adjoint() * P;
            rvec u(K);
            for (int k = 0; k < K; ++k)
            {
                double cross = 0.0;
                for (int j = 0; j < K; ++j)
                    if (j != k)
                        cross += std::abs(C(k, j));
                u(k) = C(k, k).real() - targets[k] * cross;
            }
            return u;
        }

        struct SoftminProblem
        {
            std::vector<cmat> H;
            std::vector<double> targets;
            double temperature = 1.0;
            double smoothing = 1e-12;

            void metrics(const cmat &R, std::vector<cmat> &P, rvec &u, cmat &C) const
            {
                const int K = static_cast<int>(H.size());
                P.resize(K);
                for (int k = 0; k < K; ++k)
                    P[k] = H[k].adjoint() * R;
                C.resize(K, K);
                for (int k = 0; k < K; ++k)
                    for (int j = 0; j < K; ++j)
                        C(k, j) = (P[k].conjugate().cwiseProduct(P[j])).sum();
                u.resize(K);
                for (int k = 0; k < K; ++k)
                {
                    double cross = 0.0;
                    for (int j = 0; j < K; ++j)
                        if (j != k)
                            cross += std::sqrt(std::norm(C(k, j)) + smoothing * smoothing);
                    u(k) = C(k, k).real() - targets[k] * cross;
                }
            }

            // tau log sum exp(-u / tau), a smooth upper bound on -min u.
            double cost(const cmat &R) const
            {
                std::vector<cmat> P;
                rvec u;
                cmat C;
                metrics(R, P, u, C);
                const rvec a = -u / temperature;
                const double m = a.maxCoeff();
                return temperature * (m + std::log((a.array() - m).exp().sum()));
            }

            cmat gradient(const cmat &R) const
            {
                std::vector<cmat> P;
                rvec u;
                cmat C;
                metrics(R, P, u, C);
                const int K = static_cast<int>(H.size());
                rvec a = -u / temperature;
                a = (a.array() - a.maxCoeff()).exp();
                const rvec w = a / a.sum();
                cmat g = cmat::Zero(R.rows(), R.cols());
                for (int k = 0; k < K; ++k)
                {
                    cmat gk = 2.0 * H[k] * P[k];
                    for (int j = 0; j < K; ++j)
                    {
                        if (j == k)
                            continue;
                        const double mag = std::sqrt(std::norm(C(k, j)) + smoothing * smoothing);
                        gk -= targets[k] * (std::conj(C(k, j)) * (H[k] * P[j]) + C(k, j) * (H[j] * P[k])) / mag;
                    }
                    g -= w(k) * gk;
                }
                return g;
            }
        };

        cvec complex_normal(std::mt19937_64 &engine, long n)
        {
            std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
            cvec v(n);
            for (long i = 0; i < n; ++i)
                v(i) = cd(normal(engine), normal(engine));
            return v;
        }

        // Coordinate ascent on the worst-case metric: each element tries every level of the
        // phase set (or 32 rotations of its current value when continuous) until a sweep
        // brings no improvement.
        double polish(const std::vector<cmat> &H, const std::vector<double> &targets, const PhaseSet &set, cvec &theta, int max_sweeps = 20)
        {
            auto value = [&](const cvec &th) { return user_metrics(H, targets, th.conjugate()).minCoeff(); };
            double best = value(theta);
            const long levels = set.is_continuous() ? 32 : set.levels();
            for (int sweep = 0; sweep < max_sweeps; ++sweep)
            {
                bool improved = false;
                for (long f = 0; f < theta.size(); ++f)
                {
                    const cd keep = theta(f);
                    cd choice = keep;
                    for (long q = 0; q < levels; ++q)
                    {
                        const cd level = std::polar(1.0, 2.0 * pi * q / levels);
                        theta(f) = set.is_continuous() ? keep * level : level;
                        const double v = value(theta);
                        if (v > best * (1.0 + (best > 0 ? 1e-12 : -1e-12)) + 1e-300)
                        {
                            best = v;
                            choice = theta(f);
                            improved = true;
                        }
                    }
                    theta(f) = choice;
                }
                if (!improved)
                    break;
            }
            return best;
        }

        cvec unit_entries(const cvec &v)
        {
            cvec out(v.size());
            for (long i = 0; i < v.size(); ++i)
                out(i) = std::abs(v(i)) > 0.0 ? v(i) / std::abs(v(i)) : cd(1.0, 0.0);
            return out;
        }
    }

    double ris_maxmin_objective(const ChannelSet &channels, const std::vector<double> &targets, const cvec &theta)
    {
        return user_metrics(cascaded(channels), targets, theta.conjugate()).minCoeff();
    }

    RisDesign ris_maxmin_design(const ChannelSet &channels, const SystemConfig &sys, const SolverConfig &solver, const RngSeed &rng)
    {
        channels.check(sys);
        SoftminProblem prob;
        prob.H = cascaded(channels);
        prob.targets = sys.sinr_targets;
        double scale = 0.0;
        for (const auto &H : prob.H)
            scale += H.squaredNorm();
        scale /= prob.H.size();
        if (!(scale > 0.0))
            throw std::invalid_argument("ris_maxmin_design: degenerate channel");
        for (auto &H : prob.H)
            H /= std::sqrt(scale);
        prob.smoothing = 1e-9;

        const int F = sys.ris_elements();
        const int r = std::min(F, solver.relaxation_rank);
        auto engine = rng.engine();
        cmat R(F, r);
        for (int f = 0; f < F; ++f)
            R.row(f) = complex_normal(engine, r).transpose().normalized();

        SmoothProblem<cmat> smooth;
        smooth.cost = [&prob](const cmat &X) { return prob.cost(X); };
        smooth.gradient = [&prob](const cmat &X) { return prob.gradient(X); };
        RcgOptions opt{solver.grad_tol, solver.max_rcg_iters, solver.armijo};
        const int stages = 5;
        for (int s = 0; s < stages; ++s)
        {
            prob.temperature = std::pow(0.01, static_cast<double>(s) / (stages - 1));
            R = rcg_minimize<RowSphere>(smooth, R, opt).point;
        }

        RisDesign out;
        {
            std::vector<cmat> P;
            rvec u;
            cmat C;
            prob.metrics(R, P, u, C);
            out.relaxed_objective = u.minCoeff() * scale;
        }

        std::vector<std::pair<double, cvec>> pool;
        auto evaluate = [&](const cvec &bbar) {
            const cvec theta = phase_project(cvec(unit_entries(bbar).conjugate()), sys.ris_phases);
            pool.emplace_back(user_metrics(prob.H, prob.targets, theta.conjugate()).minCoeff(), theta);
        };
        Eigen::JacobiSVD<cmat> svd(R, Eigen::ComputeThinU);
        evaluate(svd.matrixU().col(0));
        for (int i = 0; i < solver.randomizations; ++i)
            evaluate(R * complex_normal(engine, r));
        out.candidates = static_cast<int>(pool.size());

        std::stable_sort(pool.begin(), pool.end(), [](const auto &a, const auto &b) { return a.first > b.first; });
        double best = -std::numeric_limits<double>::infinity();
        cvec best_theta = pool.front().second;
        const size_t polished = pool.size();
        for (size_t i = 0; i < polished; ++i)
        {
            cvec theta = pool[i].second;
            const double v = polish(prob.H, prob.targets, sys.ris_phases, theta);
            if (v > best)
            {
                best = v;
                best_theta = theta;
            }
        }

        out.ris = RisResponse{best_theta};
        out.objective = ris_maxmin_objective(channels, sys.sinr_targets, best_theta);
        return out;
    }

    PowerMinResult fully_digital_reference(const ChannelSet &channels, const RisResponse &ris, const SystemConfig &sys,
                                           const SolverConfig &solver)
    {
        EffectiveChannels ec{effective_channels(channels, ris, cmat::Identity(sys.antennas(), sys.antennas())),
                             sys.sinr_targets, sys.noise_powers, 1.0};
        return solve_power_min(ec, DualityOptions::from(solver));
    }

    Codebook Codebook::build(const SystemConfig &sys, int mu, double spacing)
    {
        if (mu < 1)
            throw std::invalid_argument("Codebook: overlapping coefficient must be positive");
        Codebook cb;
        cb.mu = mu;
        cb.chains = sys.rf_chains;
        cb.per_chain = sys.antennas_per_chain();
        const ArrayGeometry geom{sys.bs_rows, sys.bs_cols, spacing};
        const int ny = mu * sys.bs_cols, nz = mu * sys.bs_rows;
        cb.A.resize(geom.size(), ny * nz);
        for (int i = 0; i < ny; ++i)
            for (int j = 0; j < nz; ++j)
                cb.A.col(i * nz + j) = upa_response(2.0 * pi * i / ny, 2.0 * pi * j / nz, geom);
        return cb;
    }

    cmat Codebook::masked(int chain) const
    {
        if (chain < 0 || chain >= chains)
            throw std::invalid_argument("Codebook: chain out of range");
        cmat out = cmat::Zero(A.rows(), A.cols());
        out.middleRows(chain * per_chain, per_chain) = A.middleRows(chain * per_chain, per_chain);
        return out;
    }

    OmpResult omp_analog(const cmat &W_opt, const Codebook &codebook, const SystemConfig &sys)
    {
        const int M = sys.antennas(), N = sys.rf_chains, D = sys.antennas_per_chain();
        if (W_opt.rows() != M || codebook.A.rows() != M || codebook.chains != N)
            throw std::invalid_argument("omp_analog: dimension mismatch");

        OmpResult out;
        cmat selected(M, 0);
        cmat residual = W_opt;
        for (int t = 0; t < N; ++t)
        {
            const cmat At = codebook.masked(t);
            const Eigen::VectorXd corr = (At.adjoint() * residual).rowwise().norm();
            Eigen::Index best;
            corr.maxCoeff(&best);
            out.selected.push_back(static_cast<int>(best));
            selected.conservativeResize(Eigen::NoChange, t + 1);
            selected.col(t) = At.col(best);

            const cmat gram = selected.adjoint() * selected + 1e-10 * cmat::Identity(t + 1, t + 1);
            const cmat Fbb = gram.ldlt().solve(selected.adjoint() * W_opt);
            residual = W_opt - selected * Fbb;
            out.residual_history.push_back(residual.norm());
        }
        out.residual = out.residual_history.back();
        const double amp = std::sqrt(static_cast<double>(M));
        for (int t = 0; t < N; ++t)
            out.V_blocks.push_back(phase_project(cvec(unit_entries(selected.col(t).segment(t * D, D) * amp)), sys.analog_phases));
        return out;
    }

    SequentialSolution run_sequential(const ChannelSet &channels, const SystemConfig &sys, const SolverConfig &solver,
                                      const RngSeed &rng)
    {
        const auto started = std::chrono::steady_clock::now();
        SequentialSolution out;
        out.ris_design = ris_maxmin_design(channels, sys, solver, rng);
        out.stages.push_back({"ris_objective", out.ris_design.objective});
        out.stages.push_back({"ris_relaxed_objective", out.ris_design.relaxed_objective});

        QoSSolution &sol = out.solution;
        sol.ris = out.ris_design.ris;
        sol.theta_continuous = sol.ris.theta;
        sol.converged = true;
        const PowerMinResult fd = fully_digital_reference(channels, sol.ris, sys, solver);
        out.fully_digital_power_w = fd.feasible() ? fd.power : std::numeric_limits<double>::infinity();
        out.stages.push_back({"fully_digital_power_dbm", watts_to_dbm(out.fully_digital_power_w)});
        if (!fd.feasible())
        {
            sol.status = SolveStatus::Infeasible;
            sol.power_w = std::numeric_limits<double>::infinity();
            sol.beamformer = HybridBeamformer::from_analog(cvec::Ones(sys.antennas()), sys.rf_chains);
            sol.beamformer.W = cmat::Zero(sys.rf_chains, sys.users);
            sol.sinr = rvec::Zero(sys.users);
        }
        else
        {
            double best_power = std::numeric_limits<double>::infinity();
            for (int mu = 1; mu <= 4; ++mu)
            {
                const OmpResult omp = omp_analog(fd.W, Codebook::build(sys, mu), sys);
                HybridBeamformer bf;
                bf.V_blocks = omp.V_blocks;
                EffectiveChannels ec{effective_channels(channels, sol.ris, bf), sys.sinr_targets, sys.noise_powers,
                                     static_cast<double>(sys.antennas_per_chain())};
                const PowerMinResult pm = solve_power_min(ec, DualityOptions::from(solver));
                const double power = pm.feasible() ? pm.power : std::numeric_limits<double>::infinity();
                out.stages.push_back({"omp_residual_mu" + std::to_string(mu), omp.residual});
                out.stages.push_back({"hybrid_power_dbm_mu" + std::to_string(mu), watts_to_dbm(power)});
                if (out.best_mu == 0 || power < best_power)
                {
                    out.best_mu = mu;
                    best_power = power;
                    bf.W = pm.W;
                    sol.beamformer = bf;
                    sol.sinr = pm.sinr;
                    sol.power_w = power;
                    sol.status = pm.feasible() ? SolveStatus::Optimal : SolveStatus::Infeasible;
                }
            }
            sol.analog_continuous = sol.beamformer.analog();
        }
        out.stages.push_back({"final_power_dbm", sol.power_dbm()});
        sol.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
        return out;
    }

    void write_stage_csv(std::ostream &os, const std::vector<StageDiagnostic> &stages)
    {
        os << "stage,value\n";
        const auto old = os.precision(12);
        for (const auto &s : stages)
            os << s.stage << ',' << s.value << '\n';
        os.precision(old);
    }
}
