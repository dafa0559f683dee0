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

#include "secbeam/pcpm.hpp"

namespace secbeam
{

enum class SchemeId
{
    ProposedMaAb, // the penalty/product-manifold solver, weights + positions
    MaFdbGd,      // movable antennas, fully digital weights, gradient solver
    FpaFdbSs,     // fixed lambda/2 grid, greedy antenna subset, digital weights
    MaAbGd,       // digital solve then direct projection onto the unit circle
    FpaFdbUla,    // fixed ULA, digital weights
    FpaAbUla,     // fixed ULA, constant-modulus weights
    MaAbR         // random feasible positions, constant-modulus weights
};

std::string to_string(SchemeId id);
SchemeId scheme_from_string(const std::string& tag); // throws on unknown tag

// p_l = (l-1) * lambda/2
VectorXd fpa_ula_positions(int num_antennas, double wavelength);

// Sorted uniform draws repaired to honor the lambda/2 spacing and [0, D];
// always feasible, deterministic for a fixed seed.
VectorXd random_ma_positions(int num_antennas, double aperture, double wavelength, uint64_t seed);

// w_l / |w_l| per element; zero elements are an error.
VectorXcd project_to_cm(const VectorXcd& w_fdb);

struct FdbResult
{
    VectorXcd weights; // ||w||^2 = L (power matched to the analog schemes)
    VectorXd positions;
    double msr = 0.0;
    ConvergenceTrace trace;
};

// Digital-beamforming counterpart solver: same smoothed surrogate with the
// constant-modulus constraint replaced by the power sphere ||w||^2 = L.
// With `movable` set, positions use the same penalty schedule as the
// proposed scheme; otherwise they stay fixed at `positions`.
FdbResult fdb_gradient_solve(const ScenarioConfig& config, const ChannelRealization& channels,
                             const VectorXd& positions, bool movable, uint64_t seed);

// Greedily picks L grid positions, re-solving the digital weights at each
// step to maximize the resulting secrecy rate. Ties break on lowest index.
VectorXd greedy_antenna_selection(const ScenarioConfig& config, const ChannelRealization& channels,
                                  const VectorXd& candidate_grid, int num_selected);

struct SchemeResult
{
    double msr = 0.0;
    VectorXd positions;
    VectorXcd weights;
    double violation = 0.0;
    ConvergenceTrace trace;
};

// Dispatch over the benchmark schemes. All schemes report the same
// multicast_secrecy_rate; with distinct `eval_channels` the solver sees the
// estimated channels and the reported rate uses the true ones.
SchemeResult run_scheme(SchemeId scheme, const ScenarioConfig& config,
                        const ChannelRealization& channels, uint64_t seed);
SchemeResult run_scheme(SchemeId scheme, const ScenarioConfig& config,
                        const ChannelRealization& est_channels,
                        const ChannelRealization& eval_channels, uint64_t seed);

} // namespace secbeam
