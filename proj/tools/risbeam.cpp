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

// risbeam: Monte-Carlo experiments for RIS-aided hybrid beamforming.
//   risbeam qos|mmf|sweep|compare-methods|trace --scenario <file> --seed <u64> --realizations <n> --out <csv>
// Exit codes: 0 success, 2 some realization infeasible (rows still written), 1 error.

#include "risbeam/experiment.hpp"
#include "risbeam/sequential.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

using namespace risbeam;

namespace
{
    struct Common
    {
        std::string scenario;
        std::uint64_t seed = 1;
        int realizations = 20;
        std::string out;
        bool timing = false;
        int threads = 0;
        std::string algorithms = "penalty-joint-rcg";
        std::string axis = "none";
        std::string values;
        double budget_dbm = 0.0;
        int realization = 0;
    };

    std::vector<std::string> split(const std::string &list)
    {
        std::vector<std::string> out;
        std::stringstream ss(list);
        std::string item;
        while (std::getline(ss, item, ','))
            if (!item.empty())
                out.push_back(item);
        return out;
    }

    Scenario load(const Common &c)
    {
        if (!c.scenario.empty())
            return load_scenario_file(c.scenario);
        if (auto env = scenario_path_from_env())
            return load_scenario_file(*env);
        return desk_profile();
    }

    void add_common(CLI::App *cmd, Common &c, bool with_algorithms)
    {
        cmd->add_option("--scenario", c.scenario, "Scenario file (default: $RISBEAM_SCENARIO, else the desk profile)");
        cmd->add_option("--seed", c.seed, "Master seed");
        cmd->add_option("--realizations", c.realizations, "Channel realizations")->check(CLI::PositiveNumber);
        cmd->add_option("--out", c.out, "Output CSV (default: stdout)");
        cmd->add_option("--threads", c.threads, "Worker threads (0: all cores)");
        cmd->add_flag("--timing", c.timing, "Add a wall_ms column");
        if (with_algorithms)
            cmd->add_option("--algorithm", c.algorithms,
                            "Comma list of penalty-alt, penalty-joint-rcg, penalty-joint-sca, sequential, random-theta, "
                            "sdr-theta, fully-digital");
    }

    // Writes rows to --out (summary to stdout) or rows to stdout (summary to stderr).
    int emit(const Common &c, const ExperimentSpec &spec, const ExperimentResult &res)
    {
        const bool mmf = spec.mmf_budget_dbm.has_value();
        if (c.out.empty())
        {
            write_rows_csv(std::cout, res.rows, spec.axis, mmf, c.timing);
            write_summary(std::cerr, res.summary, mmf);
        }
        else
        {
            std::ofstream os(c.out);
            if (!os)
                throw std::runtime_error("cannot write " + c.out);
            write_rows_csv(os, res.rows, spec.axis, mmf, c.timing);
            if (!os)
                throw std::runtime_error("write failed: " + c.out);
            write_summary(std::cout, res.summary, mmf);
        }
        return res.any_infeasible() ? 2 : 0;
    }

    ExperimentSpec make_spec(const Common &c)
    {
        ExperimentSpec spec;
        spec.scenario = load(c);
        spec.seed = c.seed;
        spec.realizations = c.realizations;
        spec.threads = c.threads;
        spec.algorithms.clear();
        for (const auto &name : split(c.algorithms))
            spec.algorithms.push_back(parse_algorithm(name));
        spec.axis = parse_axis(c.axis);
        spec.values = split(c.values);
        return spec;
    }

    int run_trace(const Common &c)
    {
        const Scenario sc = load(c);
        const auto names = split(c.algorithms);
        if (names.size() != 1)
            throw std::invalid_argument("trace takes exactly one algorithm");
        const Algorithm algorithm = parse_algorithm(names.front());
        const RealizationSeeds seeds = RealizationSeeds::make(c.seed, c.realization);
        const ChannelSet channels = sample_channels(sc.system, sc.channel, seeds.channel);

        std::ofstream file;
        if (!c.out.empty())
        {
            file.open(c.out);
            if (!file)
                throw std::runtime_error("cannot write " + c.out);
        }
        std::ostream &os = c.out.empty() ? std::cout : file;
        bool feasible;
        if (algorithm == Algorithm::Sequential)
        {
            const SequentialSolution seq = run_sequential(channels, sc.system, sc.solver, seeds.ris_design);
            write_stage_csv(os, seq.stages);
            feasible = seq.solution.feasible();
        }
        else
        {
            const QoSSolution sol = run_algorithm(algorithm, channels, sc.system, sc.solver, seeds);
            write_trace_csv(os, sol.trace);
            feasible = sol.feasible();
        }
        return feasible ? 0 : 2;
    }
}

int main(int argc, char **argv)
{
    CLI::App app{"risbeam: joint hybrid beamforming and RIS reflection design experiments"};
    app.require_subcommand(1);
    Common c;

    auto *qos = app.add_subcommand("qos", "Power minimization under SINR targets");
    add_common(qos, c, true);

    auto *mmf = app.add_subcommand("mmf", "Max-min fairness under a power budget");
    add_common(mmf, c, true);
    mmf->add_option("--budget", c.budget_dbm, "Total power budget in dBm")->required();

    auto *sweep = app.add_subcommand("sweep", "Power minimization over a parameter sweep");
    add_common(sweep, c, true);
    sweep->add_option("--axis", c.axis, "sinr_target, ris_elements, ris_distance or phase_bits")->required();
    sweep->add_option("--values", c.values, "Comma list of sweep values")->required();

    auto *compare = app.add_subcommand("compare-methods", "Alternating RCG vs joint RCG vs joint SCA");
    add_common(compare, c, false);
    std::string compare_axis = "sinr_target", compare_values = "0,5,10,15";
    compare->add_option("--axis", compare_axis, "Sweep axis")->capture_default_str();
    compare->add_option("--values", compare_values, "Comma list of sweep values")->capture_default_str();

    auto *trace = app.add_subcommand("trace", "Convergence trace of one realization");
    add_common(trace, c, true);
    trace->add_option("--realization", c.realization, "Realization index");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError &e)
    {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try
    {
        if (trace->parsed())
            return run_trace(c);
        if (compare->parsed())
        {
            c.algorithms = "penalty-alt,penalty-joint-rcg,penalty-joint-sca";
            c.axis = compare_axis;
            c.values = compare_values;
        }
        ExperimentSpec spec = make_spec(c);
        if (mmf->parsed())
            spec.mmf_budget_dbm = c.budget_dbm;
        return emit(c, spec, run_experiment(spec));
    }
    catch (const std::exception &e)
    {
        std::cerr << "risbeam: " << e.what() << '\n';
        return 1;
    }
}
