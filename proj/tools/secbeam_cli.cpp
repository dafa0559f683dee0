// SPDX-License-Identifier: Apache-2.0
//
// secbeam - movable-antenna analog beamforming for multicast secrecy
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

#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "secbeam/experiment.hpp"
#include "secbeam/oracles.hpp"

namespace
{

int cmd_run(const std::string& config_path, uint64_t seed, bool seed_set, int trials,
            const std::string& out_dir, const std::string& schemes, int workers, bool no_time,
            bool quiet)
{
    secbeam::ExperimentSpec spec = secbeam::parse_config(config_path);
    if (seed_set)
        spec.master_seed = seed;
    if (trials > 0)
        spec.trials = trials;
    if (!out_dir.empty())
        spec.output_dir = out_dir;
    if (!schemes.empty())
    {
        spec.schemes.clear();
        std::string item;
        std::istringstream in(schemes);
        while (std::getline(in, item, ','))
            if (!item.empty())
                spec.schemes.push_back(secbeam::scheme_from_string(item));
    }
    if (no_time)
        spec.measure_time = false;
    spec.validate();

    if (!quiet)
        std::printf("running %s: %zu sweep values x %zu schemes x %d trials\n",
                    secbeam::to_string(spec.experiment).c_str(), spec.sweep_values.size(),
                    spec.schemes.size(), spec.trials);

    std::vector<secbeam::ResultRow> rows = secbeam::run_experiment(spec, workers);

    std::filesystem::create_directories(spec.output_dir);
    std::string base = spec.output_dir + "/" + secbeam::to_string(spec.experiment);
    secbeam::emit_csv(rows, base + ".csv");
    secbeam::emit_chart(rows, base + ".svg");
    if (!quiet)
        std::printf("wrote %s.csv and %s.svg (%zu rows)\n", base.c_str(), base.c_str(),
                    rows.size());
    return 0;
}

int cmd_list()
{
    for (secbeam::ExperimentKind k : secbeam::all_experiments())
        std::printf("%s\n", secbeam::to_string(k).c_str());
    return 0;
}

// Small end-to-end smoke test: gradient against finite differences on a
// random point, then one proposed-scheme solve on a 4-antenna scenario.
int cmd_check(bool quiet)
{
    secbeam::ScenarioConfig cfg;
    cfg.num_antennas = 4;
    cfg.num_lus = 2;
    cfg.num_eves = 2;
    cfg.num_paths = 3;
    cfg.validate();
    secbeam::ChannelRealization chan = secbeam::sample_channels(cfg, 7);

    secbeam::BeamformerPoint x =
        secbeam::initialize(cfg, chan, secbeam::InitStrategy::RandomPhase, 11);
    secbeam::SmoothingParams smooth{cfg.lse_alpha, 0.1, 100.0};
    auto objective = [&](const secbeam::BeamformerPoint& pt) {
        return secbeam::smoothed_objective(pt, chan, smooth, cfg.wavelength, cfg.aperture);
    };
    secbeam::EuclideanGradient analytic =
        secbeam::euclidean_gradient(x, chan, smooth, cfg.wavelength, cfg.aperture);
    secbeam::EuclideanGradient numeric =
        secbeam::finite_difference_gradient(objective, x, 1e-6);
    secbeam::OracleReport report = secbeam::compare_gradients(analytic, numeric);
    bool grad_ok = report.max_rel_error < 1e-5 || report.max_abs_error < 1e-8;

    secbeam::PcpmSchedule sched;
    sched.max_outer_iters = 5;
    sched.max_inner_iters = 40;
    secbeam::PcpmResult res =
        secbeam::pcpm_solve(cfg, chan, sched, secbeam::LineSearchParams{}, 13);
    bool solve_ok = std::isfinite(res.msr) && res.msr >= 0.0;

    if (!quiet)
    {
        std::printf("gradient check: max rel err %.3e, max abs err %.3e [%s]\n",
                    report.max_rel_error, report.max_abs_error, grad_ok ? "ok" : "FAIL");
        std::printf("solver check: msr %.4f bits, violation %.3e [%s]\n", res.msr, res.violation,
                    solve_ok ? "ok" : "FAIL");
    }
    return (grad_ok && solve_ok) ? 0 : 1;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"secbeam: movable-antenna analog beamforming experiments"};
    app.require_subcommand(1);

    std::string config_path, out_dir, schemes;
    uint64_t seed = 0;
    int trials = 0, workers = 0;
    bool quiet = false, no_time = false;

    CLI::App* run = app.add_subcommand("run", "run an experiment described by a config file");
    run->add_option("config", config_path, "path to a key = value config file")
        ->required()
        ->check(CLI::ExistingFile);
    CLI::Option* seed_opt = run->add_option("--seed", seed, "override the master seed");
    run->add_option("--trials", trials, "override the Monte Carlo trial count");
    run->add_option("--out", out_dir, "output directory for csv/svg");
    run->add_option("--schemes", schemes, "comma-separated scheme tags");
    run->add_option("--workers", workers, "worker threads (default: hardware concurrency)");
    run->add_flag("--no-time", no_time, "zero the wall_time_ms column for reproducible bytes");
    run->add_flag("--quiet", quiet, "suppress progress output");

    CLI::App* list = app.add_subcommand("list-experiments", "print the known experiment tags");
    CLI::App* check = app.add_subcommand("check", "quick gradient and solver self-test");
    check->add_flag("--quiet", quiet, "suppress output");

    CLI11_PARSE(app, argc, argv);

    try
    {
        if (run->parsed())
            return cmd_run(config_path, seed, seed_opt->count() > 0, trials, out_dir, schemes,
                           workers, no_time, quiet);
        if (list->parsed())
            return cmd_list();
        if (check->parsed())
            return cmd_check(quiet);
    }
    catch (const std::exception& e)
    {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
