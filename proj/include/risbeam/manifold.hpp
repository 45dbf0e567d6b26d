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

#include "risbeam/scenario.hpp"
#include "risbeam/types.hpp"

#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

namespace risbeam
{
    // ---- Complex circle manifold: vectors with unit-modulus entries ----------------------

    template <typename Derived>
    bool on_circle(const Eigen::MatrixBase<Derived> &point, typename Derived::RealScalar tol = 1e-9)
    {
        return ((point.array().abs() - 1).abs() <= tol).all();
    }

    template <typename DerivedV, typename DerivedB>
    bool is_tangent(const Eigen::MatrixBase<DerivedV> &v, const Eigen::MatrixBase<DerivedB> &base,
                    typename DerivedV::RealScalar tol = 1e-9)
    {
        return ((v.array() * base.array().conjugate()).real().abs() <= tol).all();
    }

    // Orthogonal projection onto the tangent space at `point`: v - Re(v .* conj(point)) .* point.
    template <typename DerivedV, typename DerivedP>
    typename DerivedV::PlainObject tangent_project(const Eigen::MatrixBase<DerivedV> &v, const Eigen::MatrixBase<DerivedP> &point)
    {
        if (v.size() != point.size())
            throw std::invalid_argument("tangent_project: length mismatch");
        return (v.array() - (v.array() * point.array().conjugate()).real() * point.array()).matrix();
    }

    template <typename DerivedG, typename DerivedP>
    typename DerivedG::PlainObject riemannian_grad(const Eigen::MatrixBase<DerivedG> &egrad, const Eigen::MatrixBase<DerivedP> &point)
    {
        return tangent_project(egrad, point);
    }

    // Vector transport by projection onto the tangent space at the new point.
    template <typename DerivedT, typename DerivedP>
    typename DerivedT::PlainObject transport(const Eigen::MatrixBase<DerivedT> &tangent, const Eigen::MatrixBase<DerivedP> &new_point)
    {
        return tangent_project(tangent, new_point);
    }

    // Entrywise renormalization of point + step * direction. Empty when an entry vanishes.
    template <typename DerivedP, typename DerivedD>
    std::optional<typename DerivedP::PlainObject> retract(const Eigen::MatrixBase<DerivedP> &point,
                                                          const Eigen::MatrixBase<DerivedD> &direction,
                                                          typename DerivedP::RealScalar step)
    {
        if (point.size() != direction.size())
            throw std::invalid_argument("retract: length mismatch");
        if (!(step >= 0))
            throw std::invalid_argument("retract: step must be nonnegative");
        typename DerivedP::PlainObject y = point + step * direction;
        const auto mag = y.array().abs().eval();
        if ((mag == 0).any())
            return std::nullopt;
        y.array() /= mag;
        return y;
    }

    struct ComplexCircle
    {
        using Point = cvec;

        static Point project(const Point &x, const Point &v) { return tangent_project(v, x); }
        static std::optional<Point> retract(const Point &x, const Point &v, double step) { return risbeam::retract(x, v, step); }
        static long dimension(const Point &x) { return x.size(); }
    };

    // Rows of a complex matrix constrained to unit Euclidean norm (the oblique manifold).
    struct RowSphere
    {
        using Point = cmat;

        static Point project(const Point &x, const Point &v)
        {
            const Eigen::VectorXd radial = (x.conjugate().array() * v.array()).real().rowwise().sum();
            return v - radial.asDiagonal() * x;
        }

        static std::optional<Point> retract(const Point &x, const Point &v, double step)
        {
            Point y = x + step * v;
            const Eigen::VectorXd norms = y.rowwise().norm();
            if ((norms.array() == 0).any())
                return std::nullopt;
            return Point(norms.cwiseInverse().asDiagonal() * y);
        }

        static long dimension(const Point &x) { return x.rows() * (2 * x.cols() - 1); }
    };

    // Objective plus Euclidean gradient. The gradient convention is d f/d Re + j d f/d Im,
    // i.e. twice the conjugate Wirtinger derivative.
    template <typename Point>
    struct SmoothProblem
    {
        std::function<double(const Point &)> cost;
        std::function<Point(const Point &)> gradient;
    };

    struct RcgOptions
    {
        double grad_tol = 1e-7;
        int max_iters = 200;
        ArmijoParams armijo;
    };

    template <typename Point>
    struct RcgResult
    {
        Point point;
        std::vector<double> trace; // objective after each accepted step, starting with the initial value
        std::vector<double> grad_norms;
        double grad_norm = 0.0;
        int iterations = 0;
        bool converged = false;
        bool stalled = false;
    };

    namespace detail
    {
        inline void require_finite(double value, const char *what)
        {
            if (!std::isfinite(value))
                throw std::runtime_error(std::string("rcg_minimize: non-finite ") + what);
        }
    }

    // Riemannian conjugate gradient with Polak-Ribiere+ directions and Armijo backtracking.
    // The first trial step moves a tangent distance of armijo.initial_step; later trial steps
    // reuse the previous decrease (2 (f_prev - f) / -slope). Directions reset to steepest
    // descent every dimension() iterations and whenever the line search stalls.
    template <typename Manifold>
    RcgResult<typename Manifold::Point> rcg_minimize(const SmoothProblem<typename Manifold::Point> &problem,
                                                     typename Manifold::Point init, const RcgOptions &opt)
    {
        using Point = typename Manifold::Point;
        RcgResult<Point> res;
        Point x = std::move(init);
        double f = problem.cost(x);
        detail::require_finite(f, "objective");
        Point g = Manifold::project(x, problem.gradient(x));
        double gg = real_inner(g, g);
        detail::require_finite(gg, "gradient");
        Point eta = -g;
        res.trace.push_back(f);
        res.grad_norms.push_back(std::sqrt(gg));

        const long reset_period = std::max<long>(1, Manifold::dimension(x));
        long since_reset = 0;
        std::optional<double> f_prev;

        for (int it = 0; it < opt.max_iters; ++it)
        {
            if (std::sqrt(gg) <= opt.grad_tol)
            {
                res.converged = true;
                break;
            }
            double slope = real_inner(g, eta);
            bool steepest = false;
            if (!(slope < 0))
            {
                eta = -g;
                slope = -gg;
                since_reset = 0;
                steepest = true;
            }

            std::optional<Point> accepted;
            double f_new = f;
            for (int attempt = 0; attempt < 2 && !accepted; ++attempt)
            {
                const double eta_norm = std::sqrt(real_inner(eta, eta));
                double alpha = opt.armijo.initial_step / eta_norm;
                if (f_prev && *f_prev > f)
                {
                    const double guess = 2.0 * (*f_prev - f) / -slope;
                    if (std::isfinite(guess) && guess > 0)
                        alpha = guess;
                }
                for (int b = 0; b < opt.armijo.max_backtracks; ++b, alpha *= opt.armijo.contraction)
                {
                    std::optional<Point> y = Manifold::retract(x, eta, alpha);
                    for (int shrink = 0; !y && shrink < 30; ++shrink)
                    {
                        alpha *= 0.5;
                        y = Manifold::retract(x, eta, alpha);
                    }
                    if (!y)
                        break;
                    const double fy = problem.cost(*y);
                    if (std::isfinite(fy) && fy <= f + opt.armijo.sufficient_decrease * alpha * slope && fy < f)
                    {
                        accepted = std::move(y);
                        f_new = fy;
                        break;
                    }
                }
                if (!accepted)
                {
                    if (steepest)
                        break;
                    eta = -g;
                    slope = -gg;
                    since_reset = 0;
                    steepest = true;
                }
            }
            if (!accepted)
            {
                res.stalled = true;
                break;
            }

            Point g_new = Manifold::project(*accepted, problem.gradient(*accepted));
            const double gg_new = real_inner(g_new, g_new);
            detail::require_finite(gg_new, "gradient");
            const Point g_moved = Manifold::project(*accepted, g);
            const Point eta_moved = Manifold::project(*accepted, eta);
            double beta = std::max(0.0, (gg_new - real_inner(g_new, g_moved)) / gg);
            if (++since_reset >= reset_period)
            {
                beta = 0.0;
                since_reset = 0;
            }
            eta = -g_new + beta * eta_moved;

            f_prev = f;
            x = std::move(*accepted);
            f = f_new;
            g = std::move(g_new);
            gg = gg_new;
            res.trace.push_back(f);
            res.grad_norms.push_back(std::sqrt(gg));
            res.iterations = it + 1;
        }
        if (!res.converged && std::sqrt(gg) <= opt.grad_tol)
            res.converged = true;
        res.grad_norm = std::sqrt(gg);
        res.point = std::move(x);
        return res;
    }

    // Complex circle manifold convenience overload.
    RcgResult<cvec> rcg_minimize(const SmoothProblem<cvec> &problem, cvec init, const RcgOptions &opt);

    struct ScaResult
    {
        rvec phases;
        std::vector<double> trace;
        int iterations = 0;
        bool stalled = false; // Armijo found no acceptable step
    };

    // Gradient steps phi <- phi - kappa grad f(phi) where kappa is the largest beta * kappa0^i
    // with f(phi) - f(phi_new) >= zeta * kappa * ||grad||^2. Stops once the decrease falls
    // below `tol`, at a zero gradient, or after params.max_iters.
    ScaResult sca_phase_minimize(const SmoothProblem<rvec> &problem, rvec init, const ScaParams &params, double tol);

    // Re-expresses a problem on the circle as one over phases z = exp(j phi);
    // d f / d phi_i = Im(g_i conj(z_i)).
    SmoothProblem<rvec> phase_domain(SmoothProblem<cvec> problem);

    inline cvec phases_to_point(const rvec &phi)
    {
        return phi.unaryExpr([](double p) { return std::polar(1.0, p); });
    }

    inline rvec point_to_phases(const cvec &z)
    {
        return z.unaryExpr([](const cd &v) { return std::arg(v); });
    }
}
