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

#include "secbeam/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "secbeam/parallel.hpp"
#include "secbeam/rng.hpp"

namespace secbeam
{

namespace
{

std::string fmt_double(double v)
{
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string fmt_short(double v)
{
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

uint64_t derive_seed(uint64_t master, uint64_t a, uint64_t b, uint64_t c, uint64_t d)
{
    uint64_t s = Rng::mix(master ^ Rng::mix(a));
    s = Rng::mix(s ^ Rng::mix(b));
    s = Rng::mix(s ^ Rng::mix(c));
    return Rng::mix(s ^ Rng::mix(d));
}

struct BoundScenario
{
    ScenarioConfig config;
    CsiErrorParams err;
};

BoundScenario bind_sweep(const ExperimentSpec& spec, double value)
{
    BoundScenario out{spec.base_config, {}};
    switch (spec.experiment)
    {
    case ExperimentKind::AlphaSweep: out.config.lse_alpha = value; break;
    case ExperimentKind::CorrelationVsL:
    case ExperimentKind::MsrVsL: out.config.num_antennas = int(std::lround(value)); break;
    case ExperimentKind::MsrVsPower: out.config.total_power = std::pow(10.0, value / 10.0); break;
    case ExperimentKind::MsrVsNb: out.config.num_lus = int(std::lround(value)); break;
    case ExperimentKind::MsrVsNe: out.config.num_eves = int(std::lround(value)); break;
    case ExperimentKind::MsrVsD: out.config.aperture = value; break;
    case ExperimentKind::MsrVsMp: out.config.num_paths = int(std::lround(value)); break;
    case ExperimentKind::CsiAodSweep: out.err.max_aod_error = value; break;
    case ExperimentKind::CsiGainSweep: out.err.gain_error_variance = value; break;
    case ExperimentKind::Convergence:
    case ExperimentKind::PositionsSnapshot: break;
    }
    return out;
}

std::vector<double> default_sweep(ExperimentKind kind)
{
    switch (kind)
    {
    case ExperimentKind::Convergence:
    case ExperimentKind::PositionsSnapshot: return {0.0};
    case ExperimentKind::AlphaSweep: return {1e-3, 1e-2, 1e-1, 1.0, 1e1, 1e2, 1e3};
    case ExperimentKind::CorrelationVsL:
    case ExperimentKind::MsrVsL: return {4, 8, 12, 16};
    case ExperimentKind::MsrVsPower: return {-10, -5, 0, 5, 10};
    case ExperimentKind::MsrVsNb:
    case ExperimentKind::MsrVsNe: return {2, 4, 6, 8};
    case ExperimentKind::MsrVsD: return {0.1, 0.3, 0.5, 0.7};
    case ExperimentKind::MsrVsMp: return {2, 4, 6, 8};
    case ExperimentKind::CsiAodSweep: return {0.0, 0.05, 0.1};
    case ExperimentKind::CsiGainSweep: return {0.0, 0.01, 0.05};
    }
    return {0.0};
}

std::vector<SchemeId> all_schemes()
{
    return {SchemeId::ProposedMaAb, SchemeId::MaFdbGd, SchemeId::FpaFdbSs, SchemeId::MaAbGd,
            SchemeId::FpaFdbUla, SchemeId::FpaAbUla, SchemeId::MaAbR};
}

} // namespace

std::string to_string(ExperimentKind kind)
{
    switch (kind)
    {
    case ExperimentKind::Convergence: return "convergence";
    case ExperimentKind::AlphaSweep: return "alpha_sweep";
    case ExperimentKind::CorrelationVsL: return "correlation_vs_L";
    case ExperimentKind::MsrVsL: return "msr_vs_L";
    case ExperimentKind::MsrVsPower: return "msr_vs_power";
    case ExperimentKind::MsrVsNb: return "msr_vs_Nb";
    case ExperimentKind::MsrVsNe: return "msr_vs_Ne";
    case ExperimentKind::MsrVsD: return "msr_vs_D";
    case ExperimentKind::PositionsSnapshot: return "positions_snapshot";
    case ExperimentKind::MsrVsMp: return "msr_vs_Mp";
    case ExperimentKind::CsiAodSweep: return "csi_aod_sweep";
    case ExperimentKind::CsiGainSweep: return "csi_gain_sweep";
    }
    throw std::logic_error("unknown experiment kind");
}

const std::vector<ExperimentKind>& all_experiments()
{
    static const std::vector<ExperimentKind> kinds = {
        ExperimentKind::Convergence, ExperimentKind::AlphaSweep, ExperimentKind::CorrelationVsL,
        ExperimentKind::MsrVsL, ExperimentKind::MsrVsPower, ExperimentKind::MsrVsNb,
        ExperimentKind::MsrVsNe, ExperimentKind::MsrVsD, ExperimentKind::PositionsSnapshot,
        ExperimentKind::MsrVsMp, ExperimentKind::CsiAodSweep, ExperimentKind::CsiGainSweep};
    return kinds;
}

ExperimentKind experiment_from_string(const std::string& tag)
{
    for (ExperimentKind k : all_experiments())
        if (to_string(k) == tag)
            return k;
    throw std::invalid_argument("unknown experiment tag: " + tag);
}

void ExperimentSpec::validate() const
{
    if (trials < 1)
        throw std::invalid_argument("experiment spec: trials must be >= 1");
    if (sweep_values.empty())
        throw std::invalid_argument("experiment spec: sweep_values must be non-empty");
    if (schemes.empty())
        throw std::invalid_argument("experiment spec: schemes must be non-empty");
    base_config.validate();
}

ExperimentSpec default_spec()
{
    ExperimentSpec spec;
    spec.experiment = ExperimentKind::MsrVsL;
    spec.sweep_values = default_sweep(spec.experiment);
    spec.schemes = all_schemes();
    return spec;
}

std::vector<ResultRow> run_experiment(const ExperimentSpec& spec, int workers)
{
    spec.validate();
    const int n_sweep = int(spec.sweep_values.size());
    const int n_scheme = int(spec.schemes.size());
    const int n_tasks = n_sweep * n_scheme * spec.trials;

    std::vector<std::vector<ResultRow>> results;
    results.resize(size_t(n_tasks));
    parallel_for(n_tasks, workers, [&](int task) {
        const int sweep_idx = task / (n_scheme * spec.trials);
        const int scheme_idx = (task / spec.trials) % n_scheme;
        const int trial = task % spec.trials;
        const double value = spec.sweep_values[size_t(sweep_idx)];
        const SchemeId scheme = spec.schemes[size_t(scheme_idx)];

        BoundScenario bound = bind_sweep(spec, value);
        bound.config.validate();

        // channel seed depends on the trial only, so sweeps that do not
        // change the channel statistics compare schemes on paired draws
        const uint64_t chan_seed = derive_seed(spec.master_seed, 0xC0, 0, 0, uint64_t(trial));
        const uint64_t perturb_seed = derive_seed(spec.master_seed, 0xCE, 0, 0, uint64_t(trial));
        const uint64_t solver_seed = derive_seed(spec.master_seed, 0x50, uint64_t(sweep_idx),
                                                 uint64_t(scheme_idx), uint64_t(trial));

        ChannelRealization truth = sample_channels(bound.config, chan_seed);
        ChannelRealization est =
            (bound.err.max_aod_error > 0.0 || bound.err.gain_error_variance > 0.0)
                ? perturb_csi(truth, bound.err, perturb_seed)
                : truth;

        auto t0 = std::chrono::steady_clock::now();
        SchemeResult res = run_scheme(scheme, bound.config, est, truth, solver_seed);
        double ms = spec.measure_time
                        ? std::chrono::duration<double, std::milli>(
                              std::chrono::steady_clock::now() - t0)
                              .count()
                        : 0.0;

        ResultRow base;
        base.experiment = to_string(spec.experiment);
        base.scheme = to_string(scheme);
        base.sweep_value = value;
        base.trial_index = trial;
        base.seed = solver_seed;
        base.msr_bits = res.msr;
        base.rho_cc = channel_correlation(truth, res.positions, bound.config.wavelength);
        base.violation = res.violation;
        base.inner_iters = int(res.trace.inner.size());
        base.outer_iters = int(res.trace.outer.size());
        base.wall_time_ms = ms;

        std::vector<ResultRow>& rows = results[size_t(task)];
        if (spec.experiment == ExperimentKind::Convergence)
        {
            // one row per inner iterate; the msr_bits column carries the
            // surrogate objective so the chart shows the descent curve
            for (size_t k = 0; k < res.trace.inner.size(); ++k)
            {
                ResultRow r = base;
                r.sweep_value = double(k);
                r.msr_bits = res.trace.inner[k].objective;
                rows.push_back(std::move(r));
            }
        }
        else if (spec.experiment == ExperimentKind::PositionsSnapshot)
        {
            // one row per antenna; the sweep_value column carries p_l
            for (Eigen::Index l = 0; l < res.positions.size(); ++l)
            {
                ResultRow r = base;
                r.sweep_value = res.positions[l];
                rows.push_back(std::move(r));
            }
        }
        else
            rows.push_back(std::move(base));
    });

    std::vector<ResultRow> out;
    for (auto& part : results)
        for (auto& row : part)
            out.push_back(std::move(row));
    return out;
}

std::string csv_string(const std::vector<ResultRow>& rows)
{
    std::string s = "experiment,scheme,sweep_value,trial_index,seed,msr_bits,rho_cc,violation,"
                    "inner_iters,outer_iters,wall_time_ms\n";
    for (const auto& r : rows)
    {
        s += r.experiment + ',' + r.scheme + ',' + fmt_double(r.sweep_value) + ',' +
             std::to_string(r.trial_index) + ',' + std::to_string(r.seed) + ',' +
             fmt_double(r.msr_bits) + ',' + fmt_double(r.rho_cc) + ',' + fmt_double(r.violation) +
             ',' + std::to_string(r.inner_iters) + ',' + std::to_string(r.outer_iters) + ',' +
             fmt_double(r.wall_time_ms) + '\n';
    }
    return s;
}

void emit_csv(const std::vector<ResultRow>& rows, const std::string& path)
{
    if (rows.empty())
        throw std::invalid_argument("emit_csv: no rows");
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("emit_csv: cannot open " + path);
    out << csv_string(rows);
    if (!out)
        throw std::runtime_error("emit_csv: write failed for " + path);
}

void emit_chart(const std::vector<ResultRow>& rows, const std::string& path)
{
    if (rows.empty())
        throw std::invalid_argument("emit_chart: no rows");
    const std::string& exp = rows.front().experiment;
    for (const auto& r : rows)
        if (r.experiment != exp)
            throw std::invalid_argument("emit_chart: mixed experiments");

    const bool snapshot = exp == "positions_snapshot";
    const bool correlation = exp == "correlation_vs_L";

    // scheme order = order of first appearance
    std::vector<std::string> schemes;
    for (const auto& r : rows)
        if (std::find(schemes.begin(), schemes.end(), r.scheme) == schemes.end())
            schemes.push_back(r.scheme);

    static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                    "#ff7f0e", "#8c564b", "#17becf"};
    const int W = 640, H = 420, ML = 70, MR = 150, MT = 20, MB = 50;

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
        << "\" viewBox=\"0 0 " << W << ' ' << H << "\">\n";
    svg << "<rect x=\"" << ML << "\" y=\"" << MT << "\" width=\"" << (W - ML - MR)
        << "\" height=\"" << (H - MT - MB)
        << "\" fill=\"none\" stroke=\"#444\" stroke-width=\"1\"/>\n";

    auto xmap = [&](double x, double lo, double hi) {
        double t = hi > lo ? (x - lo) / (hi - lo) : 0.5;
        return double(ML) + t * double(W - ML - MR);
    };
    auto ymap = [&](double y, double lo, double hi) {
        double t = hi > lo ? (y - lo) / (hi - lo) : 0.5;
        return double(H - MB) - t * double(H - MT - MB);
    };

    if (snapshot)
    {
        double xlo = rows.front().sweep_value, xhi = xlo;
        for (const auto& r : rows)
        {
            xlo = std::min(xlo, r.sweep_value);
            xhi = std::max(xhi, r.sweep_value);
        }
        for (size_t s = 0; s < schemes.size(); ++s)
        {
            double y = ymap(double(s), -0.5, double(schemes.size()) - 0.5);
            for (const auto& r : rows)
                if (r.scheme == schemes[s])
                    svg << "<circle cx=\"" << fmt_short(xmap(r.sweep_value, xlo, xhi)) << "\" cy=\""
                        << fmt_short(y) << "\" r=\"3\" fill=\"" << palette[s % 7] << "\"/>\n";
            svg << "<text x=\"" << (W - MR + 8) << "\" y=\"" << fmt_short(y + 4)
                << "\" font-size=\"11\" fill=\"" << palette[s % 7] << "\">" << schemes[s]
                << "</text>\n";
        }
        svg << "<text x=\"" << (ML + (W - ML - MR) / 2) << "\" y=\"" << (H - 14)
            << "\" font-size=\"12\" text-anchor=\"middle\">antenna position [m]</text>\n";
        svg << "<text x=\"" << ML << "\" y=\"" << (H - MB + 16) << "\" font-size=\"10\">"
            << fmt_short(xlo) << "</text>\n";
        svg << "<text x=\"" << (W - MR) << "\" y=\"" << (H - MB + 16)
            << "\" font-size=\"10\" text-anchor=\"end\">" << fmt_short(xhi) << "</text>\n";
    }
    else
    {
        // mean of the plotted metric per (scheme, sweep value)
        std::map<std::string, std::map<double, std::pair<double, int>>> agg;
        for (const auto& r : rows)
        {
            auto& cell = agg[r.scheme][r.sweep_value];
            cell.first += correlation ? r.rho_cc : r.msr_bits;
            cell.second += 1;
        }
        double xlo = rows.front().sweep_value, xhi = xlo;
        double ylo = 0.0, yhi = -std::numeric_limits<double>::infinity();
        for (const auto& [scheme, pts] : agg)
            for (const auto& [x, cell] : pts)
            {
                double y = cell.first / double(cell.second);
                xlo = std::min(xlo, x);
                xhi = std::max(xhi, x);
                yhi = std::max(yhi, y);
            }
        if (yhi <= ylo)
            yhi = ylo + 1.0;

        for (size_t s = 0; s < schemes.size(); ++s)
        {
            const auto& pts = agg[schemes[s]];
            svg << "<polyline fill=\"none\" stroke=\"" << palette[s % 7]
                << "\" stroke-width=\"1.5\" points=\"";
            bool first = true;
            for (const auto& [x, cell] : pts)
            {
                double y = cell.first / double(cell.second);
                if (!first)
                    svg << ' ';
                svg << fmt_short(xmap(x, xlo, xhi)) << ',' << fmt_short(ymap(y, ylo, yhi));
                first = false;
            }
            svg << "\"/>\n";
            double ty = double(MT) + 16.0 * double(s + 1);
            svg << "<text x=\"" << (W - MR + 8) << "\" y=\"" << fmt_short(ty)
                << "\" font-size=\"11\" fill=\"" << palette[s % 7] << "\">" << schemes[s]
                << "</text>\n";
        }
        svg << "<text x=\"" << (ML + (W - ML - MR) / 2) << "\" y=\"" << (H - 14)
            << "\" font-size=\"12\" text-anchor=\"middle\">" << exp << "</text>\n";
        svg << "<text x=\"" << ML << "\" y=\"" << (H - MB + 16) << "\" font-size=\"10\">"
            << fmt_short(xlo) << "</text>\n";
        svg << "<text x=\"" << (W - MR) << "\" y=\"" << (H - MB + 16)
            << "\" font-size=\"10\" text-anchor=\"end\">" << fmt_short(xhi) << "</text>\n";
        svg << "<text x=\"" << (ML - 6) << "\" y=\"" << (H - MB)
            << "\" font-size=\"10\" text-anchor=\"end\">" << fmt_short(ylo) << "</text>\n";
        svg << "<text x=\"" << (ML - 6) << "\" y=\"" << (MT + 10)
            << "\" font-size=\"10\" text-anchor=\"end\">" << fmt_short(yhi) << "</text>\n";
    }
    svg << "</svg>\n";

    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("emit_chart: cannot open " + path);
    out << svg.str();
    if (!out)
        throw std::runtime_error("emit_chart: write failed for " + path);
}

namespace
{

std::string trim(const std::string& s)
{
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos)
        return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

[[noreturn]] void parse_fail(int line, const std::string& what)
{
    throw std::runtime_error("config line " + std::to_string(line) + ": " + what);
}

// number with an optional unit token: dBW, dBm, dB (-> linear), m (pass-through)
double parse_value(const std::string& text, int line)
{
    std::istringstream in(text);
    double v;
    if (!(in >> v))
        parse_fail(line, "expected a number, got '" + text + "'");
    std::string unit;
    in >> unit;
    std::string extra;
    if (in >> extra)
        parse_fail(line, "trailing token '" + extra + "'");
    if (unit.empty() || unit == "m")
        return v;
    if (unit == "dBW" || unit == "dB")
        return std::pow(10.0, v / 10.0);
    if (unit == "dBm")
        return std::pow(10.0, (v - 30.0) / 10.0);
    parse_fail(line, "unknown unit '" + unit + "'");
}

std::vector<std::string> split_list(const std::string& text)
{
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(text);
    while (std::getline(in, item, ','))
    {
        item = trim(item);
        if (!item.empty())
            out.push_back(item);
    }
    return out;
}

} // namespace

ExperimentSpec parse_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("parse_config: cannot open " + path);

    ExperimentSpec spec = default_spec();
    bool sweep_set = false, experiment_set = false;

    std::string line;
    int lineno = 0;
    while (std::getline(in, line))
    {
        ++lineno;
        size_t hash = line.find('#');
        if (hash != std::string::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty())
            continue;
        size_t eq = line.find('=');
        if (eq == std::string::npos)
            parse_fail(lineno, "expected 'key = value'");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (value.empty())
            parse_fail(lineno, "empty value for key '" + key + "'");

        try
        {
            if (key == "experiment")
            {
                spec.experiment = experiment_from_string(value);
                experiment_set = true;
            }
            else if (key == "schemes")
            {
                spec.schemes.clear();
                for (const auto& tag : split_list(value))
                    spec.schemes.push_back(scheme_from_string(tag));
            }
            else if (key == "sweep_values")
            {
                spec.sweep_values.clear();
                for (const auto& tok : split_list(value))
                    spec.sweep_values.push_back(parse_value(tok, lineno));
                sweep_set = true;
            }
            else if (key == "trials")
                spec.trials = int(std::lround(parse_value(value, lineno)));
            else if (key == "master_seed")
                spec.master_seed = std::stoull(value);
            else if (key == "output_dir")
                spec.output_dir = value;
            else if (key == "measure_time")
                spec.measure_time = (value == "on" || value == "true" || value == "1");
            else if (key == "L")
                spec.base_config.num_antennas = int(std::lround(parse_value(value, lineno)));
            else if (key == "lambda")
                spec.base_config.wavelength = parse_value(value, lineno);
            else if (key == "D")
                spec.base_config.aperture = parse_value(value, lineno);
            else if (key == "N_b")
                spec.base_config.num_lus = int(std::lround(parse_value(value, lineno)));
            else if (key == "N_e")
                spec.base_config.num_eves = int(std::lround(parse_value(value, lineno)));
            else if (key == "M_p")
                spec.base_config.num_paths = int(std::lround(parse_value(value, lineno)));
            else if (key == "P_t")
                spec.base_config.total_power = parse_value(value, lineno);
            else if (key == "noise_lu")
                spec.base_config.noise_variance_lu = parse_value(value, lineno);
            else if (key == "noise_eve")
                spec.base_config.noise_variance_eve = parse_value(value, lineno);
            else if (key == "g0")
                spec.base_config.ref_gain = parse_value(value, lineno);
            else if (key == "alpha_pl")
                spec.base_config.pathloss_exponent = parse_value(value, lineno);
            else if (key == "d_min")
                spec.base_config.min_distance = parse_value(value, lineno);
            else if (key == "d_max")
                spec.base_config.max_distance = parse_value(value, lineno);
            else if (key == "lse_alpha")
                spec.base_config.lse_alpha = parse_value(value, lineno);
            else
                parse_fail(lineno, "unknown key '" + key + "'");
        }
        catch (const std::invalid_argument& e)
        {
            parse_fail(lineno, e.what());
        }
    }

    if (experiment_set && !sweep_set)
        spec.sweep_values = default_sweep(spec.experiment);
    spec.validate();
    return spec;
}

} // namespace secbeam
