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

#include "risbeam/channel.hpp"

#include <iomanip>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

namespace risbeam
{
    double path_loss_db(double distance_m, const ClusterParams &params)
    {
        if (!(distance_m > 0.0))
            throw std::invalid_argument("path_loss_db: distance must be positive");
        return params.pl_intercept_db + 10.0 * params.pl_exponent * std::log10(distance_m);
    }

    double expected_link_gain(double distance_m, const ClusterParams &params)
    {
        const double s = params.shadowing_db * std::log(10.0) / 10.0;
        return std::pow(10.0, -0.1 * path_loss_db(distance_m, params)) * std::exp(0.5 * s * s);
    }

    void ChannelSet::check(const SystemConfig &config) const
    {
        const int F = config.ris_elements(), M = config.antennas();
        if (G.rows() != F || G.cols() != M)
            throw std::invalid_argument("ChannelSet: G has wrong dimensions");
        if (h.size() != static_cast<size_t>(config.users))
            throw std::invalid_argument("ChannelSet: wrong number of user channels");
        for (const auto &hk : h)
            if (hk.size() != F)
                throw std::invalid_argument("ChannelSet: user channel has wrong length");
        if (!G.allFinite())
            throw std::invalid_argument("ChannelSet: non-finite entries");
    }

    namespace
    {
        struct Angles
        {
            double azimuth, elevation;
        };

        class RayDrawer
        {
          public:
            RayDrawer(std::mt19937_64 &eng, double spread_rad) : eng_(eng), scale_(spread_rad / std::sqrt(2.0)) {}

            Angles center()
            {
                std::uniform_real_distribution<double> az(0.0, 2.0 * pi);
                double el;
                do
                    el = std::uniform_real_distribution<double>(0.0, pi)(eng_);
                while (el <= 0.0);
                return {az(eng_), el};
            }

            // Laplacian offset by inverse CDF; the standard deviation equals the configured spread.
            double offset()
            {
                if (scale_ == 0.0)
                    return 0.0;
                const double u = std::uniform_real_distribution<double>(-0.5, 0.5)(eng_);
                return -scale_ * (u < 0 ? -1.0 : 1.0) * std::log(1.0 - 2.0 * std::abs(u));
            }

            cd gain(double variance)
            {
                std::normal_distribution<double> n(0.0, std::sqrt(variance / 2.0));
                const double re = n(eng_);
                const double im = n(eng_);
                return {re, im};
            }

          private:
            std::mt19937_64 &eng_;
            double scale_;
        };

        double link_variance(double distance_m, const ClusterParams &params, std::mt19937_64 &eng)
        {
            double shadow = 0.0;
            if (params.shadowing_db > 0.0)
                shadow = std::normal_distribution<double>(0.0, params.shadowing_db)(eng);
            return std::pow(10.0, -0.1 * (path_loss_db(distance_m, params) + shadow));
        }
    }

    ChannelSet sample_channels(const SystemConfig &config, const ClusterParams &params, const RngSeed &rng)
    {
        config.validate();
        params.validate();
        auto eng = rng.engine();
        RayDrawer draw(eng, params.angle_spread_deg * pi / 180.0);

        const ArrayGeometry bs{config.bs_rows, config.bs_cols, params.element_spacing};
        const ArrayGeometry ris{config.ris_rows, config.ris_cols, params.element_spacing};
        const int M = bs.size(), F = ris.size();

        ChannelSet out;
        out.G = cmat::Zero(F, M);
        {
            const double var = link_variance(distance(config.bs_position, config.ris_position), params, eng);
            for (int i = 0; i < params.clusters_bs_ris; ++i)
            {
                const Angles arrival = draw.center();
                const Angles departure = draw.center();
                for (int l = 0; l < params.rays_bs_ris; ++l)
                {
                    const double a_az = arrival.azimuth + draw.offset();
                    const double a_el = arrival.elevation + draw.offset();
                    const double d_az = departure.azimuth + draw.offset();
                    const double d_el = departure.elevation + draw.offset();
                    const cd alpha = draw.gain(var);
                    out.G.noalias() += alpha * upa_response(a_az, a_el, ris) * upa_response(d_az, d_el, bs).adjoint();
                }
            }
            out.G *= std::sqrt(double(M) * F / (params.clusters_bs_ris * params.rays_bs_ris));
        }

        std::uniform_real_distribution<double> unit(0.0, 1.0);
        for (int k = 0; k < config.users; ++k)
        {
            const double r = config.user_radius * std::sqrt(unit(eng));
            const double phi = 2.0 * pi * unit(eng);
            const Point2 pos{config.user_center.x + r * std::cos(phi), config.user_center.y + r * std::sin(phi)};
            out.user_positions.push_back(pos);

            const double var = link_variance(distance(config.ris_position, pos), params, eng);
            cvec hk = cvec::Zero(F);
            for (int i = 0; i < params.clusters_ris_user; ++i)
            {
                const Angles departure = draw.center();
                for (int l = 0; l < params.rays_ris_user; ++l)
                {
                    const double az = departure.azimuth + draw.offset();
                    const double el = departure.elevation + draw.offset();
                    hk += draw.gain(var) * upa_response(az, el, ris);
                }
            }
            hk *= std::sqrt(double(F) / (params.clusters_ris_user * params.rays_ris_user));
            out.h.push_back(std::move(hk));
        }
        return out;
    }

    void write_channel_csv(std::ostream &os, const ChannelSet &channels)
    {
        os << "name,row,col,re,im\n" << std::setprecision(17);
        for (Eigen::Index c = 0; c < channels.G.cols(); ++c)
            for (Eigen::Index r = 0; r < channels.G.rows(); ++r)
                os << "G," << r << ',' << c << ',' << channels.G(r, c).real() << ',' << channels.G(r, c).imag() << '\n';
        for (size_t k = 0; k < channels.h.size(); ++k)
            for (Eigen::Index r = 0; r < channels.h[k].size(); ++r)
                os << 'h' << k << ',' << r << ",0," << channels.h[k](r).real() << ',' << channels.h[k](r).imag() << '\n';
    }

    ChannelSet read_channel_csv(std::istream &is)
    {
        std::string line;
        if (!std::getline(is, line) || line.rfind("name,row,col,re,im", 0) != 0)
            throw std::runtime_error("channel CSV: missing header");
        struct Entry
        {
            long row, col;
            cd value;
        };
        std::map<std::string, std::vector<Entry>> entries;
        while (std::getline(is, line))
        {
            if (line.empty())
                continue;
            std::stringstream ss(line);
            std::string name, row, col, re, im;
            if (!std::getline(ss, name, ',') || !std::getline(ss, row, ',') || !std::getline(ss, col, ',') ||
                !std::getline(ss, re, ',') || !std::getline(ss, im))
                throw std::runtime_error("channel CSV: malformed line '" + line + "'");
            entries[name].push_back({std::stol(row), std::stol(col), {std::stod(re), std::stod(im)}});
        }
        auto extent = [](const std::vector<Entry> &v) {
            long r = 0, c = 0;
            for (const auto &e : v)
                r = std::max(r, e.row + 1), c = std::max(c, e.col + 1);
            return std::pair{r, c};
        };
        ChannelSet out;
        if (!entries.count("G"))
            throw std::runtime_error("channel CSV: no G entries");
        auto [gr, gc] = extent(entries["G"]);
        out.G = cmat::Zero(gr, gc);
        for (const auto &e : entries["G"])
            out.G(e.row, e.col) = e.value;
        for (int k = 0;; ++k)
        {
            auto it = entries.find("h" + std::to_string(k));
            if (it == entries.end())
                break;
            cvec hk = cvec::Zero(extent(it->second).first);
            for (const auto &e : it->second)
                hk(e.row) = e.value;
            out.h.push_back(std::move(hk));
        }
        return out;
    }
}
