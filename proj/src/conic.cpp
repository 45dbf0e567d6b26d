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

#include "risbeam/conic.hpp"

#include <Eigen/Cholesky>
#include <Eigen/LU>

namespace risbeam
{
    const char *to_string(SolveStatus status)
    {
        switch (status)
        {
        case SolveStatus::Optimal:
            return "optimal";
        case SolveStatus::Infeasible:
            return "infeasible";
        case SolveStatus::MaxIterations:
            return "max_iterations";
        case SolveStatus::InfeasibleAfterQuantization:
            return "infeasible_after_quantization";
        }
        return "unknown";
    }

    rvec achieved_sinr(const cmat &rows, const cmat &W, const std::vector<double> &noise)
    {
        const cmat gains = rows * W; // (k, j): user k, stream j
        const Eigen::MatrixXd p = gains.cwiseAbs2();
        rvec out(rows.rows());
        for (Eigen::Index k = 0; k < rows.rows(); ++k)
            out(k) = p(k, k) / (p.row(k).sum() - p(k, k) + noise[k]);
        return out;
    }

    PowerMinResult solve_power_min(const EffectiveChannels &ch, const DualityOptions &opt)
    {
        const int K = ch.users(), N = ch.dims();
        if (K < 1)
            throw std::invalid_argument("solve_power_min: need at least one user");
        if (ch.targets.size() != static_cast<size_t>(K) || ch.noise.size() != static_cast<size_t>(K))
            throw std::invalid_argument("solve_power_min: targets/noise size mismatch");

        // Columns c_k = conj(row_k) / sigma_k, so the normalized noise is one.
        cmat C(N, K);
        for (int k = 0; k < K; ++k)
            C.col(k) = ch.rows.row(k).adjoint() / std::sqrt(ch.noise[k]);

        PowerMinResult res;
        res.W = cmat::Zero(N, K);
        res.sinr = rvec::Zero(K);
        for (int k = 0; k < K; ++k)
            if (C.col(k).squaredNorm() == 0.0)
                return res;

        double cap = 0.0;
        for (int k = 0; k < K; ++k)
            cap += ch.targets[k] / C.col(k).squaredNorm();
        cap *= opt.power_cap_ratio;

        rvec lambda = rvec::Zero(K);
        bool converged = false;
        for (int it = 1; it <= opt.max_iters; ++it)
        {
            const cmat A = cmat::Identity(N, N) + C * lambda.cast<cd>().asDiagonal() * C.adjoint();
            rvec next(K);
            for (int k = 0; k < K; ++k)
            {
                const cmat Ak = A - lambda(k) * C.col(k) * C.col(k).adjoint();
                const double q = Ak.ldlt().solve(C.col(k)).dot(C.col(k)).real();
                next(k) = ch.targets[k] / q;
            }
            res.iterations = it;
            const double change = (next - lambda).cwiseAbs().maxCoeff() / next.maxCoeff();
            lambda = next;
            if (!lambda.allFinite() || lambda.sum() > cap)
            {
                res.uplink = lambda;
                res.status = SolveStatus::Infeasible;
                return res;
            }
            if (change < opt.tol)
            {
                converged = true;
                break;
            }
        }
        res.uplink = lambda;
        if (!converged)
        {
            res.status = SolveStatus::Infeasible;
            return res;
        }

        const cmat A = cmat::Identity(N, N) + C * lambda.cast<cd>().asDiagonal() * C.adjoint();
        cmat U = A.ldlt().solve(C);
        U.colwise().normalize();

        // Tight SINRs in normalized units: p_k |c_k^H u_k|^2 / gamma_k - sum_{j!=k} p_j |c_k^H u_j|^2 = 1.
        const Eigen::MatrixXd G = (C.adjoint() * U).cwiseAbs2();
        Eigen::MatrixXd S = -G;
        for (int k = 0; k < K; ++k)
            S(k, k) = G(k, k) / ch.targets[k];
        const rvec p = S.partialPivLu().solve(rvec::Ones(K));
        if (!p.allFinite() || (p.array() <= 0).any() || p.sum() > cap)
        {
            res.status = SolveStatus::Infeasible;
            return res;
        }
        res.W = U * p.cwiseSqrt().cast<cd>().asDiagonal();
        res.power = ch.power_scale * res.W.squaredNorm();
        res.sinr = achieved_sinr(ch.rows, res.W, ch.noise);
        res.status = SolveStatus::Optimal;
        return res;
    }

    cvec project_sinr_row(const cvec &a, int k, double target, double noise_std)
    {
        if (!(target > 0.0))
            throw std::invalid_argument("project_sinr_row: target must be positive");
        if (k < 0 || k >= a.size())
            throw std::invalid_argument("project_sinr_row: user index out of range");

        const double beta2 = 1.0 / target; // |t_k|^2 / gamma >= |u|^2 + sigma^2
        const double beta = std::sqrt(beta2);
        const double sigma2 = noise_std * noise_std;
        const double x = std::abs(a(k));
        const double r2 = a.squaredNorm() - x * x;
        if (beta * x >= std::sqrt(std::max(r2, 0.0) + sigma2))
            return a;

        const cd phase = x > 0.0 ? a(k) / x : cd(1.0, 0.0);
        double tau, shrink; // t_k = tau * phase, t_j = a_j / shrink
        if (x == 0.0)
        {
            shrink = 1.0 + 1.0 / beta2;
            tau = std::sqrt(r2 / (shrink * shrink) + sigma2) / beta;
        }
        else
        {
            // s = 1 - nu beta^2 in (0, 1]; tau = x / s, shrink = 1 + nu. The active-constraint
            // residual beta^2 tau^2 - r^2 / shrink^2 - sigma^2 is decreasing in s.
            auto residual = [&](double s) {
                const double nu = (1.0 - s) / beta2;
                const double sh = 1.0 + nu;
                return beta2 * x * x / (s * s) - r2 / (sh * sh) - sigma2;
            };
            double lo = 0.0, hi = 1.0; // residual(lo) > 0 >= residual(hi)
            for (int it = 0; it < 400; ++it)
            {
                const double mid = (lo == 0.0) ? 0.5 * hi : 0.5 * (lo + hi);
                if (mid <= lo || mid >= hi)
                    break;
                if (residual(mid) > 0.0)
                    lo = mid;
                else
                    hi = mid;
            }
            const double s = hi;
            tau = x / s;
            shrink = 1.0 + (1.0 - s) / beta2;
        }

        cvec t = a / shrink;
        t(k) = tau * phase;
        return t;
    }
}
