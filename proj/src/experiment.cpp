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

#include "risbeam/experiment.hpp"
#include "risbeam/sequential.hpp"

#include <atomic>
#include <chrono>
#include <cstdio>
#include <exception>
#include <limits>
#include <map>
#include <ostream>
#include <thread>

namespace risbeam
{
    namespace
    {
        struct AlgorithmName
        {
            Algorithm algorithm;
            const char *name;
        };

        constexpr AlgorithmName algorithm_names[] = {
            {Algorithm::PenaltyAlt, "penalty-alt"},
            {Algorithm::PenaltyJointRcg, "penalty-joint-rcg"},
            {Algorithm::PenaltyJointSca, "penalty-joint-sca"},
            {Algorithm::Sequential, "sequential"},
            {Algorithm::RandomTheta, "random-theta"},
            {Algorithm::SdrTheta, "sdr-theta"},
            {Algorithm::FullyDigital, "fully-digital"},
        };

        struct AxisName
        {
            SweepAxis axis;
            const char *name;
        };

        constexpr AxisName axis_names[] = {
            {SweepAxis::None, "none"},
            {SweepAxis::SinrTarget, "sinr_target"},
            {SweepAxis::RisElements, "ris_elements"},
            {SweepAxis::RisDistance, "ris_distance"},
            {SweepAxis::PhaseBits, "phase_bits"},
        };

        std::string number(double v)
        {
            if (std::isnan(v))
                return "nan";
            if (std::isinf(v))
                return v > 0 ? "inf" : "-inf";
            char buf[64];
            std::snprintf(buf, sizeof buf, "%.6f", v);
            return buf;
        }

        bool changes_geometry(SweepAxis axis) { return axis == SweepAxis::RisElements || axis == SweepAxis::RisDistance; }

        cvec random_phases(const RngSeed &seed, int n)
        {
            auto engine = seed.engine();
            std::uniform_real_distribution<double> phase(0.0, 2.0 * pi);
            cvec v(n);
            for (int i = 0; i < n; ++i)
                v(i) = std::polar(1.0, phase(engine));
            return v;
        }

        // System and penalty options for the penalty-based algorithms.
        std::pair<SystemConfig, QosOptions> penalty_setup(Algorithm algorithm, const ChannelSet &channels, const SystemConfig &sys,
                                                          const SolverConfig &solver, const RealizationSeeds &seeds)
        {
            SystemConfig s = sys;
            QosOptions o;
            o.rng = seeds.init;
            switch (algorithm)
            {
            case Algorithm::PenaltyAlt:
                o.method = PhaseMethod::AlternatingRCG;
                break;
            case Algorithm::PenaltyJointRcg:
                o.method = PhaseMethod::JointRCG;
                break;
            case Algorithm::PenaltyJointSca:
                o.method = PhaseMethod::JointSCA;
                break;
            case Algorithm::RandomTheta:
                o.optimize_ris = false;
                o.init_theta = random_phases(seeds.random_ris, sys.ris_elements());
                break;
            case Algorithm::SdrTheta:
                o.optimize_ris = false;
                o.init_theta = ris_maxmin_design(channels, sys, solver, seeds.ris_design).ris.theta;
                break;
            case Algorithm::FullyDigital:
                s.rf_chains = s.antennas();
                s.analog_phases = PhaseSet::continuous();
                o.optimize_analog = false;
                o.init_analog = cvec::Ones(s.antennas());
                break;
            case Algorithm::Sequential:
                throw std::invalid_argument("sequential is not a penalty algorithm");
            }
            return {s, o};
        }
    }

    const char *to_string(Algorithm algorithm)
    {
        for (const auto &a : algorithm_names)
            if (a.algorithm == algorithm)
                return a.name;
        return "unknown";
    }

    Algorithm parse_algorithm(const std::string &name)
    {
        for (const auto &a : algorithm_names)
            if (name == a.name)
                return a.algorithm;
        throw std::invalid_argument("unknown algorithm: " + name);
    }

    const char *to_string(SweepAxis axis)
    {
        for (const auto &a : axis_names)
            if (a.axis == axis)
                return a.name;
        return "unknown";
    }

    SweepAxis parse_axis(const std::string &name)
    {
        for (const auto &a : axis_names)
            if (name == a.name)
                return a.axis;
        throw std::invalid_argument("unknown sweep axis: " + name);
    }

    SystemConfig apply_sweep(SystemConfig sys, SweepAxis axis, const std::string &value)
    {
        try
        {
            switch (axis)
            {
            case SweepAxis::None:
                break;
            case SweepAxis::SinrTarget:
                sys.sinr_targets.assign(sys.users, db_to_linear(std::stod(value)));
                break;
            case SweepAxis::RisElements:
            {
                const int F = std::stoi(value);
                if (F <= 0 || F % sys.ris_rows != 0)
                    throw std::invalid_argument("RIS element count " + value + " is not a multiple of the RIS rows");
                sys.ris_cols = F / sys.ris_rows;
                break;
            }
            case SweepAxis::RisDistance:
                sys.ris_position.x = std::stod(value);
                break;
            case SweepAxis::PhaseBits:
                if (value == "inf" || value == "continuous")
                    sys.analog_phases = sys.ris_phases = PhaseSet::continuous();
                else
                    sys.analog_phases = sys.ris_phases = PhaseSet::discrete(std::stoi(value));
                break;
            }
        }
        catch (const std::logic_error &e)
        {
            throw std::invalid_argument(std::string("bad value '") + value + "' for axis " + to_string(axis) + ": " + e.what());
        }
        sys.validate();
        return sys;
    }

    void ExperimentSpec::validate() const
    {
        if (realizations < 1)
            throw std::invalid_argument("realizations must be at least 1");
        if (algorithms.empty())
            throw std::invalid_argument("no algorithm selected");
        if (axis != SweepAxis::None && values.empty())
            throw std::invalid_argument("sweep needs at least one value");
        for (const auto &v : values)
            apply_sweep(scenario.system, axis, v);
    }

    bool ExperimentResult::any_infeasible() const
    {
        for (const auto &r : rows)
            if (!r.feasible)
                return true;
        return false;
    }

    RealizationSeeds RealizationSeeds::make(std::uint64_t seed, int realization)
    {
        const RngSeed base{seed, static_cast<std::uint64_t>(realization)};
        return {base.derive(1), base.derive(2), base.derive(3), base.derive(4)};
    }

    QoSSolution run_algorithm(Algorithm algorithm, const ChannelSet &channels, const SystemConfig &sys,
                              const SolverConfig &solver, const RealizationSeeds &seeds)
    {
        if (algorithm == Algorithm::Sequential)
            return run_sequential(channels, sys, solver, seeds.ris_design).solution;
        auto [s, o] = penalty_setup(algorithm, channels, sys, solver, seeds);
        return run_qos(channels, s, solver, o);
    }

    MMFSolution run_algorithm_mmf(Algorithm algorithm, const ChannelSet &channels, const SystemConfig &sys,
                                  const SolverConfig &solver, const RealizationSeeds &seeds, double budget_w)
    {
        if (algorithm == Algorithm::Sequential)
        {
            const SequentialSolution seq = run_sequential(channels, sys, solver, seeds.ris_design);
            return solve_mmf(channels, sys, solver, budget_w, FixedPhases{seq.solution.ris, seq.solution.beamformer.V_blocks});
        }
        auto [s, o] = penalty_setup(algorithm, channels, sys, solver, seeds);
        return solve_mmf(channels, s, solver, budget_w, FullJoint{o});
    }

    ExperimentResult run_experiment(const ExperimentSpec &spec)
    {
        spec.validate();
        const std::vector<std::string> values = spec.axis == SweepAxis::None ? std::vector<std::string>{""} : spec.values;
        const Scenario &sc = spec.scenario;

        std::vector<std::vector<ResultRow>> per_realization(spec.realizations);
        std::vector<std::exception_ptr> errors(spec.realizations);

        auto work = [&](int r) {
            const RealizationSeeds seeds = RealizationSeeds::make(spec.seed, r);
            std::optional<ChannelSet> shared;
            if (!changes_geometry(spec.axis))
                shared = sample_channels(sc.system, sc.channel, seeds.channel);
            for (const auto &value : values)
            {
                const SystemConfig sys = apply_sweep(sc.system, spec.axis, value);
                const ChannelSet channels = shared ? *shared : sample_channels(sys, sc.channel, seeds.channel);
                for (Algorithm algorithm : spec.algorithms)
                {
                    ResultRow row;
                    row.realization = r;
                    row.algorithm = algorithm;
                    row.value = value;
                    if (spec.mmf_budget_dbm)
                    {
                        const auto started = std::chrono::steady_clock::now();
                        const MMFSolution m = run_algorithm_mmf(algorithm, channels, sys, sc.solver, seeds, dbm_to_watts(*spec.mmf_budget_dbm));
                        row.feasible = m.feasible();
                        row.status = m.status;
                        row.power_dbm = m.feasible() ? watts_to_dbm(m.power_w) : std::numeric_limits<double>::quiet_NaN();
                        row.min_sinr_db = m.feasible() ? linear_to_db(m.sinr.minCoeff()) : std::numeric_limits<double>::quiet_NaN();
                        row.mmf_ratio = m.feasible() ? m.xi : 0.0;
                        row.outer_iterations = static_cast<int>(m.trace.size());
                        row.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
                    }
                    else
                    {
                        const QoSSolution q = run_algorithm(algorithm, channels, sys, sc.solver, seeds);
                        row.feasible = q.feasible();
                        row.status = q.status;
                        row.power_dbm = q.feasible() ? q.power_dbm() : std::numeric_limits<double>::quiet_NaN();
                        row.min_sinr_db = q.feasible() ? q.min_sinr_db() : std::numeric_limits<double>::quiet_NaN();
                        row.outer_iterations = q.outer_iterations;
                        row.inner_iterations = q.inner_iterations;
                        row.rcg_iterations = q.rcg_iterations;
                        row.wall_ms = q.wall_ms;
                    }
                    per_realization[r].push_back(row);
                }
            }
        };

        int threads = spec.threads > 0 ? spec.threads : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
        threads = std::min(threads, spec.realizations);
        std::atomic<int> next{0};
        auto worker = [&] {
            for (int r = next++; r < spec.realizations; r = next++)
            {
                try
                {
                    work(r);
                }
                catch (...)
                {
                    errors[r] = std::current_exception();
                }
            }
        };
        if (threads <= 1)
            worker();
        else
        {
            std::vector<std::thread> pool;
            for (int i = 0; i < threads; ++i)
                pool.emplace_back(worker);
            for (auto &t : pool)
                t.join();
        }
        for (const auto &e : errors)
            if (e)
                std::rethrow_exception(e);

        ExperimentResult result;
        for (auto &rows : per_realization)
            for (auto &row : rows)
                result.rows.push_back(std::move(row));
        result.summary = summarize(result.rows, spec.mmf_budget_dbm.has_value());
        return result;
    }

    std::vector<SummaryRow> summarize(const std::vector<ResultRow> &rows, bool mmf)
    {
        std::vector<SummaryRow> out;
        std::map<std::pair<std::string, int>, size_t> index; // (value, algorithm) -> position
        std::vector<std::vector<double>> samples;
        for (const auto &r : rows)
        {
            const auto key = std::make_pair(r.value, static_cast<int>(r.algorithm));
            auto it = index.find(key);
            if (it == index.end())
            {
                it = index.emplace(key, out.size()).first;
                out.push_back(SummaryRow{r.algorithm, r.value});
                samples.emplace_back();
            }
            SummaryRow &s = out[it->second];
            ++s.total;
            if (r.feasible)
            {
                ++s.feasible;
                samples[it->second].push_back(mmf ? linear_to_db(r.mmf_ratio) : r.power_dbm);
            }
        }
        for (size_t i = 0; i < out.size(); ++i)
        {
            const auto &x = samples[i];
            if (x.empty())
            {
                out[i].mean = out[i].stddev = std::numeric_limits<double>::quiet_NaN();
                continue;
            }
            double mean = 0.0;
            for (double v : x)
                mean += v;
            mean /= x.size();
            double var = 0.0;
            for (double v : x)
                var += (v - mean) * (v - mean);
            out[i].mean = mean;
            out[i].stddev = x.size() > 1 ? std::sqrt(var / (x.size() - 1)) : 0.0;
        }
        return out;
    }

    void write_rows_csv(std::ostream &os, const std::vector<ResultRow> &rows, SweepAxis axis, bool mmf, bool timing)
    {
        os << "realization,algorithm,axis,value,power_dbm,min_sinr_db,feasible,status,outer_iters,inner_iters,rcg_iters";
        if (mmf)
            os << ",mmf_ratio";
        if (timing)
            os << ",wall_ms";
        os << '\n';
        for (const auto &r : rows)
        {
            os << r.realization << ',' << to_string(r.algorithm) << ',' << to_string(axis) << ',' << r.value << ','
               << number(r.power_dbm) << ',' << number(r.min_sinr_db) << ',' << (r.feasible ? 1 : 0) << ','
               << to_string(r.status) << ',' << r.outer_iterations << ',' << r.inner_iterations << ',' << r.rcg_iterations;
            if (mmf)
                os << ',' << number(r.mmf_ratio);
            if (timing)
                os << ',' << number(r.wall_ms);
            os << '\n';
        }
    }

    void write_summary(std::ostream &os, const std::vector<SummaryRow> &summary, bool mmf)
    {
        os << "algorithm,value," << (mmf ? "mean_ratio_db,std_ratio_db" : "mean_power_dbm,std_power_dbm") << ",feasible,total\n";
        for (const auto &s : summary)
            os << to_string(s.algorithm) << ',' << s.value << ',' << number(s.mean) << ',' << number(s.stddev) << ','
               << s.feasible << ',' << s.total << '\n';
    }
}
