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

#pragma once

#include <string>
#include <vector>

#include "secbeam/baselines.hpp"

namespace secbeam
{

enum class ExperimentKind
{
    Convergence,       // per-iteration objective trace of the proposed solver
    AlphaSweep,        // sweep the LSE smoothing constant
    CorrelationVsL,    // LU/EVE channel correlation vs antenna count
    MsrVsL,
    MsrVsPower,        // sweep values in dBW
    MsrVsNb,
    MsrVsNe,
    MsrVsD,            // sweep values in meters
    PositionsSnapshot, // final antenna positions per scheme
    MsrVsMp,
    CsiAodSweep,       // sweep max AoD error nu [rad]
    CsiGainSweep       // sweep normalized gain error variance chi
};

std::string to_string(ExperimentKind kind);
ExperimentKind experiment_from_string(const std::string& tag);
const std::vector<ExperimentKind>& all_experiments();

struct ExperimentSpec
{
    ExperimentKind experiment = ExperimentKind::MsrVsL;
    std::vector<SchemeId> schemes;
    std::vector<double> sweep_values;
    int trials = 100;
    ScenarioConfig base_config;
    uint64_t master_seed = 1;
    std::string output_dir = ".";
    // Timing can be disabled so CSV bytes are fully reproducible.
    bool measure_time = true;

    void validate() const;
};

struct ResultRow
{
    std::string experiment;
    std::string scheme;
    double sweep_value = 0.0;
    int trial_index = 0;
    uint64_t seed = 0;
    double msr_bits = 0.0;
    double rho_cc = 0.0;
    double violation = 0.0;
    int inner_iters = 0;
    int outer_iters = 0;
    double wall_time_ms = 0.0;
};

// Runs (sweep value, scheme, trial) tasks on a worker pool; rows come back
// in deterministic task order regardless of completion order. workers <= 0
// uses the hardware concurrency.
std::vector<ResultRow> run_experiment(const ExperimentSpec& spec, int workers = 0);

void emit_csv(const std::vector<ResultRow>& rows, const std::string& path);
std::string csv_string(const std::vector<ResultRow>& rows);

// Self-contained SVG: one mean-over-trials line per scheme, or a position
// scatter for the snapshot experiment. Byte-deterministic for fixed input.
void emit_chart(const std::vector<ResultRow>& rows, const std::string& path);

// Line-oriented `key = value` file with `#` comments; unknown keys are
// rejected with the line number. An empty file yields the default spec.
ExperimentSpec parse_config(const std::string& path);
ExperimentSpec default_spec();

} // namespace secbeam
