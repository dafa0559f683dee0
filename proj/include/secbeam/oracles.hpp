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

// Independent, slow, brute-force references. These never touch the
// analytic gradient code; they share only the objective evaluator.

#pragma once

#include "secbeam/objective.hpp"

namespace secbeam
{

struct OracleReport
{
    double max_rel_error = 0.0;
    double max_abs_error = 0.0;
    int worst_coordinate = -1; // over the 3L packed real coordinates
    int samples = 0;
};

// Central differences over all 3L real coordinates (Re w, Im w, p), packed
// to match euclidean_gradient's complex convention.
EuclideanGradient finite_difference_gradient(const ObjectiveFn& objective,
                                             const BeamformerPoint& point, double step);

// Per-coordinate comparison of an analytic gradient against its
// finite-difference counterpart. Relative error uses a 1e-9 denominator
// floor so near-zero coordinates do not blow up.
OracleReport compare_gradients(const EuclideanGradient& analytic,
                               const EuclideanGradient& reference);

struct BruteForceResult
{
    VectorXcd weights;
    VectorXd positions;
    double value = 0.0; // smoothed surrogate ratio at the optimum
};

// Exhaustive search over w_l in {e^{j 2 pi q / Q}}; minimizes the smoothed
// EVE/LU ratio at fixed positions. Guard: Q^L <= 1e7. Ties break toward the
// first-found lowest lexicographic index.
BruteForceResult brute_force_ab(const ChannelRealization& channels, const VectorXd& p_fixed,
                                int phase_levels, double lse_alpha, double wavelength);

// Exhaustive search over feasible position pairs (L = 2 only) on a uniform
// grid with the given step, at fixed weights. Guard: <= 1e7 grid pairs.
BruteForceResult brute_force_positions(const ChannelRealization& channels,
                                       const VectorXcd& w_fixed, double grid_step,
                                       double lse_alpha, double wavelength, double aperture);

} // namespace secbeam
