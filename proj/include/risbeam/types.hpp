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

#include <Eigen/Dense>
#include <complex>
#include <numbers>

namespace risbeam
{
    template <typename Scalar>
    using CVec = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1>;

    template <typename Scalar>
    using CMat = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>;

    template <typename Scalar>
    using RVec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

    using cd = std::complex<double>;
    using cvec = CVec<double>;
    using cmat = CMat<double>;
    using rvec = RVec<double>;

    inline constexpr double pi = std::numbers::pi;

    inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
    inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }
    inline double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
    inline double watts_to_dbm(double w) { return 10.0 * std::log10(w) + 30.0; }

    // Real inner product Re(x^H y), the metric used on every manifold in this library.
    template <typename DerivedA, typename DerivedB>
    typename DerivedA::RealScalar real_inner(const Eigen::MatrixBase<DerivedA> &x,
                                             const Eigen::MatrixBase<DerivedB> &y)
    {
        return (x.array().conjugate() * y.array()).real().sum();
    }
}
