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

#include "risbeam/scenario.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <set>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace pt = boost::property_tree;

namespace risbeam
{
    bool SystemConfig::validate() const
    {
        if (bs_rows <= 0 || bs_cols <= 0)
            throw std::invalid_argument("BS array dimensions must be positive");
        if (rf_chains <= 0)
            throw std::invalid_argument("RF chain count must be positive");
        if (antennas() % rf_chains != 0)
            throw std::invalid_argument("antenna count " + std::to_string(antennas()) +
                                        " is not divisible by RF chain count " + std::to_string(rf_chains));
        if (users <= 0)
            throw std::invalid_argument("user count must be positive");
        if (ris_rows <= 0 || ris_cols <= 0)
            throw std::invalid_argument("RIS dimensions must be positive");
        if (sinr_targets.size() != static_cast<size_t>(users) || noise_powers.size() != static_cast<size_t>(users))
            throw std::invalid_argument("need one SINR target and one noise power per user");
        for (double g : sinr_targets)
            if (!(g > 0.0) || !std::isfinite(g))
                throw std::invalid_argument("SINR targets must be positive");
        for (double s : noise_powers)
            if (!(s > 0.0) || !std::isfinite(s))
                throw std::invalid_argument("noise powers must be positive");
        if (!(user_radius >= 0.0))
            throw std::invalid_argument("user radius must be nonnegative");
        return users <= rf_chains;
    }

    void ClusterParams::validate() const
    {
        if (clusters_bs_ris <= 0 || rays_bs_ris <= 0 || clusters_ris_user <= 0 || rays_ris_user <= 0)
            throw std::invalid_argument("cluster and ray counts must be positive");
        if (!(angle_spread_deg >= 0.0))
            throw std::invalid_argument("angle spread must be nonnegative");
        if (!(shadowing_db >= 0.0))
            throw std::invalid_argument("shadowing deviation must be nonnegative");
        if (!(element_spacing > 0.0))
            throw std::invalid_argument("element spacing must be positive");
    }

    void SolverConfig::validate() const
    {
        if (!(rho0 > 0.0))
            throw std::invalid_argument("rho0 must be positive");
        if (!(rho_scale > 0.0 && rho_scale < 1.0))
            throw std::invalid_argument("rho_scale must lie in (0, 1)");
        if (!(grad_tol > 0.0 && inner_tol > 0.0 && xi_tol > 0.0))
            throw std::invalid_argument("tolerances must be positive");
        if (max_outer <= 0 || max_inner <= 0 || max_rcg_iters <= 0)
            throw std::invalid_argument("iteration limits must be positive");
        if (!(armijo.contraction > 0.0 && armijo.contraction < 1.0) || !(armijo.sufficient_decrease > 0.0 && armijo.sufficient_decrease < 1.0) ||
            !(armijo.initial_step > 0.0) || armijo.max_backtracks <= 0)
            throw std::invalid_argument("invalid Armijo parameters");
        if (!(sca.zeta > 0.0 && sca.zeta < 0.5) || !(sca.beta > 0.0) || !(sca.kappa0 > 0.0 && sca.kappa0 < 1.0) ||
            sca.max_iters <= 0 || sca.max_trials <= 0)
            throw std::invalid_argument("invalid SCA parameters");
        if (randomizations <= 0 || relaxation_rank <= 0)
            throw std::invalid_argument("randomization count and relaxation rank must be positive");
        if (!(bisection_tol > 0.0) || !(power_cap_ratio > 0.0) || duality_max_iters <= 0 || !(duality_tol > 0.0))
            throw std::invalid_argument("invalid bisection or duality parameters");
    }

    namespace
    {
        std::vector<double> parse_list(const std::string &text)
        {
            std::vector<double> out;
            std::stringstream ss(text);
            std::string item;
            while (std::getline(ss, item, ','))
            {
                item.erase(0, item.find_first_not_of(" \t"));
                item.erase(item.find_last_not_of(" \t") + 1);
                if (item.empty())
                    continue;
                size_t used = 0;
                double v = std::stod(item, &used);
                if (used != item.size())
                    throw ScenarioError("bad number '" + item + "'");
                out.push_back(v);
            }
            if (out.empty())
                throw ScenarioError("empty value list");
            return out;
        }

        std::vector<double> per_user(const std::vector<double> &values, int users, const char *key)
        {
            if (values.size() == 1)
                return std::vector<double>(users, values.front());
            if (values.size() != static_cast<size_t>(users))
                throw ScenarioError(std::string(key) + ": expected 1 or " + std::to_string(users) + " values");
            return values;
        }

        PhaseSet parse_phase(const std::string &text)
        {
            std::string t = text;
            std::transform(t.begin(), t.end(), t.begin(), ::tolower);
            if (t == "continuous" || t == "inf" || t == "infinite")
                return PhaseSet::continuous();
            size_t used = 0;
            int bits = std::stoi(t, &used);
            if (used != t.size() || bits <= 0)
                throw ScenarioError("phase bits must be a positive integer or 'continuous'");
            return PhaseSet::discrete(bits);
        }

        std::string fmt(double v)
        {
            std::ostringstream os;
            os << std::setprecision(17) << v;
            return os.str();
        }

        std::string fmt_list(const std::vector<double> &values, double (*conv)(double))
        {
            std::string out;
            for (size_t i = 0; i < values.size(); ++i)
                out += (i ? "," : "") + fmt(conv(values[i]));
            return out;
        }

        // Typed lookups that remember every key they were asked for.
        struct Reader
        {
            const pt::ptree &tree;
            std::set<std::string> known;

            template <typename T>
            T get(const char *key, T fallback)
            {
                known.insert(key);
                const auto node = tree.get_child_optional(key);
                if (!node)
                    return fallback;
                try
                {
                    return node->get_value<T>();
                }
                catch (const pt::ptree_bad_data &)
                {
                    throw ScenarioError(std::string("invalid value for ") + key);
                }
            }

            void reject_unknown() const
            {
                for (const auto &[section, body] : tree)
                {
                    if (body.empty())
                        throw ScenarioError("entry outside a section: " + section);
                    for (const auto &[key, value] : body)
                        if (!known.count(section + "." + key))
                            throw ScenarioError("unknown key " + section + "." + key);
                }
            }
        };
    }

    Scenario load_scenario(std::string_view text)
    {
        pt::ptree tree;
        try
        {
            std::istringstream is{std::string(text)};
            pt::read_ini(is, tree);
        }
        catch (const pt::ini_parser_error &e)
        {
            throw ScenarioError(std::string("scenario parse error: ") + e.what());
        }

        Reader in{tree, {}};
        Scenario sc;
        SystemConfig &s = sc.system;
        s.bs_rows = in.get("array.bs_rows", s.bs_rows);
        s.bs_cols = in.get("array.bs_cols", s.bs_cols);
        s.rf_chains = in.get("array.rf_chains", s.rf_chains);
        s.ris_rows = in.get("array.ris_rows", s.ris_rows);
        s.ris_cols = in.get("array.ris_cols", s.ris_cols);
        s.users = in.get("users.count", s.users);
        if (s.users <= 0)
            throw ScenarioError("users.count must be positive");

        s.analog_phases = parse_phase(in.get<std::string>("phase.analog_bits", s.analog_phases.to_string()));
        s.ris_phases = parse_phase(in.get<std::string>("phase.ris_bits", s.ris_phases.to_string()));

        s.carrier_hz = in.get("radio.carrier_ghz", s.carrier_hz / 1e9) * 1e9;
        s.bandwidth_hz = in.get("radio.bandwidth_mhz", s.bandwidth_hz / 1e6) * 1e6;
        if (!(s.bandwidth_hz > 0.0))
            throw ScenarioError("radio.bandwidth_mhz must be positive");

        try
        {
            const auto sinr_db = per_user(parse_list(in.get<std::string>("users.sinr_db", "10")), s.users, "users.sinr_db");
            const std::string noise_default = fmt(thermal_noise_dbm(s.bandwidth_hz));
            const auto noise_dbm = per_user(parse_list(in.get<std::string>("users.noise_dbm", noise_default)), s.users, "users.noise_dbm");
            s.sinr_targets.clear();
            s.noise_powers.clear();
            for (double v : sinr_db)
                s.sinr_targets.push_back(db_to_linear(v));
            for (double v : noise_dbm)
                s.noise_powers.push_back(dbm_to_watts(v));
        }
        catch (const std::invalid_argument &)
        {
            throw ScenarioError("users.sinr_db / users.noise_dbm must be numbers");
        }

        s.bs_position = {in.get("geometry.bs_x", s.bs_position.x), in.get("geometry.bs_y", s.bs_position.y)};
        s.ris_position = {in.get("geometry.ris_x", s.ris_position.x), in.get("geometry.ris_y", s.ris_position.y)};
        s.user_center = {in.get("geometry.user_x", s.user_center.x), in.get("geometry.user_y", s.user_center.y)};
        s.user_radius = in.get("geometry.user_radius", s.user_radius);

        ClusterParams &c = sc.channel;
        c.clusters_bs_ris = in.get("channel.clusters_bs_ris", c.clusters_bs_ris);
        c.rays_bs_ris = in.get("channel.rays_bs_ris", c.rays_bs_ris);
        c.clusters_ris_user = in.get("channel.clusters_ris_user", c.clusters_ris_user);
        c.rays_ris_user = in.get("channel.rays_ris_user", c.rays_ris_user);
        c.angle_spread_deg = in.get("channel.angle_spread_deg", c.angle_spread_deg);
        c.pl_intercept_db = in.get("channel.pl_intercept_db", c.pl_intercept_db);
        c.pl_exponent = in.get("channel.pl_exponent", c.pl_exponent);
        c.shadowing_db = in.get("channel.shadowing_db", c.shadowing_db);
        c.element_spacing = in.get("channel.element_spacing", c.element_spacing);

        SolverConfig &v = sc.solver;
        v.rho0 = in.get("solver.rho0", v.rho0);
        v.rho_scale = in.get("solver.rho_scale", v.rho_scale);
        v.grad_tol = in.get("solver.grad_tol", v.grad_tol);
        v.inner_tol = in.get("solver.inner_tol", v.inner_tol);
        v.xi_tol = in.get("solver.xi_tol", v.xi_tol);
        v.max_outer = in.get("solver.max_outer", v.max_outer);
        v.max_inner = in.get("solver.max_inner", v.max_inner);
        v.max_rcg_iters = in.get("solver.max_rcg_iters", v.max_rcg_iters);
        v.armijo.sufficient_decrease = in.get("solver.armijo_sufficient_decrease", v.armijo.sufficient_decrease);
        v.armijo.contraction = in.get("solver.armijo_contraction", v.armijo.contraction);
        v.armijo.initial_step = in.get("solver.armijo_initial_step", v.armijo.initial_step);
        v.armijo.max_backtracks = in.get("solver.armijo_max_backtracks", v.armijo.max_backtracks);
        v.sca.zeta = in.get("solver.sca_zeta", v.sca.zeta);
        v.sca.beta = in.get("solver.sca_beta", v.sca.beta);
        v.sca.kappa0 = in.get("solver.sca_kappa0", v.sca.kappa0);
        v.sca.max_iters = in.get("solver.sca_max_iters", v.sca.max_iters);
        v.sca.max_trials = in.get("solver.sca_max_trials", v.sca.max_trials);
        v.randomizations = in.get("solver.randomizations", v.randomizations);
        v.relaxation_rank = in.get("solver.relaxation_rank", v.relaxation_rank);
        v.bisection_tol = in.get("solver.bisection_tol", v.bisection_tol);
        v.power_cap_ratio = in.get("solver.power_cap_ratio", v.power_cap_ratio);
        v.duality_max_iters = in.get("solver.duality_max_iters", v.duality_max_iters);
        v.duality_tol = in.get("solver.duality_tol", v.duality_tol);

        try
        {
            s.validate();
            c.validate();
            v.validate();
        }
        catch (const std::invalid_argument &e)
        {
            throw ScenarioError(e.what());
        }
        in.reject_unknown();
        return sc;
    }

    Scenario load_scenario_file(const std::string &path)
    {
        std::ifstream in(path);
        if (!in)
            throw ScenarioError("cannot open scenario file " + path);
        std::stringstream buf;
        buf << in.rdbuf();
        return load_scenario(buf.str());
    }

    std::string to_ini(const Scenario &sc)
    {
        const SystemConfig &s = sc.system;
        const ClusterParams &c = sc.channel;
        const SolverConfig &v = sc.solver;
        std::ostringstream os;
        os << "[array]\n"
           << "bs_rows = " << s.bs_rows << "\n"
           << "bs_cols = " << s.bs_cols << "\n"
           << "rf_chains = " << s.rf_chains << "\n"
           << "ris_rows = " << s.ris_rows << "\n"
           << "ris_cols = " << s.ris_cols << "\n\n"
           << "[users]\n"
           << "count = " << s.users << "\n"
           << "sinr_db = " << fmt_list(s.sinr_targets, linear_to_db) << "\n"
           << "noise_dbm = " << fmt_list(s.noise_powers, watts_to_dbm) << "\n\n"
           << "[phase]\n"
           << "analog_bits = " << s.analog_phases.to_string() << "\n"
           << "ris_bits = " << s.ris_phases.to_string() << "\n\n"
           << "[radio]\n"
           << "carrier_ghz = " << fmt(s.carrier_hz / 1e9) << "\n"
           << "bandwidth_mhz = " << fmt(s.bandwidth_hz / 1e6) << "\n\n"
           << "[geometry]\n"
           << "bs_x = " << fmt(s.bs_position.x) << "\nbs_y = " << fmt(s.bs_position.y) << "\n"
           << "ris_x = " << fmt(s.ris_position.x) << "\nris_y = " << fmt(s.ris_position.y) << "\n"
           << "user_x = " << fmt(s.user_center.x) << "\nuser_y = " << fmt(s.user_center.y) << "\n"
           << "user_radius = " << fmt(s.user_radius) << "\n\n"
           << "[channel]\n"
           << "clusters_bs_ris = " << c.clusters_bs_ris << "\n"
           << "rays_bs_ris = " << c.rays_bs_ris << "\n"
           << "clusters_ris_user = " << c.clusters_ris_user << "\n"
           << "rays_ris_user = " << c.rays_ris_user << "\n"
           << "angle_spread_deg = " << fmt(c.angle_spread_deg) << "\n"
           << "pl_intercept_db = " << fmt(c.pl_intercept_db) << "\n"
           << "pl_exponent = " << fmt(c.pl_exponent) << "\n"
           << "shadowing_db = " << fmt(c.shadowing_db) << "\n"
           << "element_spacing = " << fmt(c.element_spacing) << "\n\n"
           << "[solver]\n"
           << "rho0 = " << fmt(v.rho0) << "\n"
           << "rho_scale = " << fmt(v.rho_scale) << "\n"
           << "grad_tol = " << fmt(v.grad_tol) << "\n"
           << "inner_tol = " << fmt(v.inner_tol) << "\n"
           << "xi_tol = " << fmt(v.xi_tol) << "\n"
           << "max_outer = " << v.max_outer << "\n"
           << "max_inner = " << v.max_inner << "\n"
           << "max_rcg_iters = " << v.max_rcg_iters << "\n"
           << "armijo_sufficient_decrease = " << fmt(v.armijo.sufficient_decrease) << "\n"
           << "armijo_contraction = " << fmt(v.armijo.contraction) << "\n"
           << "armijo_initial_step = " << fmt(v.armijo.initial_step) << "\n"
           << "armijo_max_backtracks = " << v.armijo.max_backtracks << "\n"
           << "sca_zeta = " << fmt(v.sca.zeta) << "\n"
           << "sca_beta = " << fmt(v.sca.beta) << "\n"
           << "sca_kappa0 = " << fmt(v.sca.kappa0) << "\n"
           << "sca_max_iters = " << v.sca.max_iters << "\n"
           << "sca_max_trials = " << v.sca.max_trials << "\n"
           << "randomizations = " << v.randomizations << "\n"
           << "relaxation_rank = " << v.relaxation_rank << "\n"
           << "bisection_tol = " << fmt(v.bisection_tol) << "\n"
           << "power_cap_ratio = " << fmt(v.power_cap_ratio) << "\n"
           << "duality_max_iters = " << v.duality_max_iters << "\n"
           << "duality_tol = " << fmt(v.duality_tol) << "\n";
        return os.str();
    }

    Scenario full_profile() { return load_scenario(""); }

    Scenario desk_profile()
    {
        return load_scenario("[array]\nbs_rows = 4\nbs_cols = 4\nrf_chains = 4\nris_rows = 4\nris_cols = 4\n"
                             "[users]\ncount = 2\n");
    }

    std::optional<std::string> scenario_path_from_env()
    {
        const char *p = std::getenv("RISBEAM_SCENARIO");
        if (p == nullptr || *p == '\0')
            return std::nullopt;
        return std::string(p);
    }

    std::uint64_t splitmix64(std::uint64_t x)
    {
        x += 0x9e3779b97f4a7c15ULL;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
        return x ^ (x >> 31);
    }

    RngSeed RngSeed::derive(std::uint64_t salt) const
    {
        return {seed, splitmix64(stream ^ splitmix64(salt + 0x5bd1e995ULL))};
    }

    std::mt19937_64 RngSeed::engine() const
    {
        const std::uint64_t a = splitmix64(seed);
        const std::uint64_t b = splitmix64(stream ^ 0xd1b54a32d192ed03ULL);
        std::seed_seq seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                          static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
        return std::mt19937_64(seq);
    }
}
