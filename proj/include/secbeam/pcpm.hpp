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

#include <functional>
#include <vector>

#include "secbeam/manifold.hpp"

namespace secbeam
{

struct LineSearchParams
{
    double tau = 0.5;           // backtracking factor, in (0,1)
    double initial_step = 1e-2; // step seed for the first iteration
    // Sufficient-decrease coefficient on the directional derivative. The
    // acceptance test is phi(next) <= phi + c1 * step * directional; with
    // c1 = 1 the test is unsatisfiable wherever the curvature along the
    // direction is positive, so the usual small fraction is the default.
    double armijo_coeff = 1e-4;
    double grow_after_one = 2.0;  // iota_1, applied when r = 1
    double grow_after_many = 2.0; // iota_2, applied when r > 2
    int max_backtracks = 30;
    // Replaces the grow-on-many-backtracks rule with a shrink, for
    // comparison runs; off by default (the printed rule).
    bool shrink_on_backtrack = false;

    void validate() const;
};

// Outer-loop parameter schedule: penalty weight grows, smoothing /
// threshold / violation targets decay toward their floors.
struct PcpmSchedule
{
    double gamma0 = 0.1, gamma_min = 1e-4, gamma_decay = 0.5;
    double rho0 = 100.0, rho_divisor = 0.5; // rho_{j+1} = rho_j / divisor on violation
    double eps0 = 1e-2, eps_min = 1e-6, eps_decay = 0.5;
    double sigma0 = 1e-2, sigma_min = 1e-8, sigma_decay = 0.5;
    double step_floor = 1e-6; // o_min, outer displacement stop
    int max_outer_iters = 50;
    int max_inner_iters = 200;

    void validate() const;
};

struct InnerRecord
{
    double objective;
    double grad_norm;
    double step;     // accepted step size (0 for the initial record)
    int backtracks;  // r
};

struct OuterRecord
{
    double gamma, rho, eps, sigma;
    double max_violation;
    double msr;       // bits, at the endpoint iterate
    double ratio;     // smoothed surrogate ratio at the endpoint (penalty-free)
    double objective; // phi at the endpoint under this outer iteration's params
    int inner_iters;
};

enum class SolveStatus
{
    Converged,        // gradient threshold reached
    IterationLimit,   // inner/outer cap hit with gradient still large
    LineSearchFailure // Armijo exhausted max_backtracks
};

struct ConvergenceTrace
{
    std::vector<InnerRecord> inner;       // concatenated across outer loops
    std::vector<int> inner_loop_starts;   // index into `inner` where each loop begins
    std::vector<OuterRecord> outer;
    double max_cm_error = 0.0;          // max | |w_l| - 1 | seen post-retraction
    double max_tangent_residual = 0.0;  // max |Re(xi_w .* conj(w))| over iterates
    SolveStatus status = SolveStatus::Converged;
};

// Hybrid conjugate parameter with transported previous gradient/direction
// and an outer non-negativity clamp. Returns 0 on a vanishing denominator
// (restart to steepest descent).
double conjugate_parameter(const TangentVector& grad_k, const TangentVector& grad_prev,
                           const TangentVector& d_prev, const VectorXcd& w_k);

// d = -grad + sigma * d_prev_transported
TangentVector conjugate_direction(const TangentVector& grad_k, double sigma,
                                  const TangentVector& d_prev_transported);

struct ArmijoResult
{
    BeamformerPoint point;
    double objective = 0.0; // phi at the accepted point
    double step = 0.0;      // upsilon_k
    int backtracks = 0;     // r
    bool success = false;
};


// First r in {1..r_max} with phi(retract(x + tau^r * step_seed * d)) <=
// phi_current + tau^r * step_seed * directional. Throws if the direction
// is not a descent direction; returns success=false when r_max is hit.
ArmijoResult armijo_search(const BeamformerPoint& point, const TangentVector& d,
                           double phi_current, double directional,
                           double step_seed, const LineSearchParams& params,
                           const ObjectiveFn& objective);

struct CgdOptions
{
    bool freeze_positions = false; // zero the position block of every direction
};

struct CgdResult
{
    BeamformerPoint point;
    double objective = 0.0;
    SolveStatus status = SolveStatus::Converged;
    int iterations = 0;
};

// Inner conjugate-gradient-descent loop. Appends per-iteration records to
// `trace` and updates its manifold-invariant maxima.
CgdResult cgd_solve(const BeamformerPoint& start, const ChannelRealization& channels,
                    const SmoothingParams& params, const LineSearchParams& ls,
                    double eps_threshold, int max_inner, double wavelength, double aperture,
                    ConvergenceTrace& trace, const CgdOptions& opts = {});

enum class InitStrategy
{
    UniformGrid,   // p evenly spread over [0, D], matched-filter w
    RandomPhase,   // uniform-grid p, random unit-modulus w
    MatchedFilter  // alias of UniformGrid weight rule, explicit name
};

// Strictly feasible starting point. Matched-filter weights take the phases
// of the summed LU channels at p0.
BeamformerPoint initialize(const ScenarioConfig& config, const ChannelRealization& channels,
                           InitStrategy strategy, uint64_t seed);

struct PcpmResult
{
    BeamformerPoint point;
    ConvergenceTrace trace;
    double msr = 0.0;       // bits, at the final point
    double violation = 0.0; // max constraint violation at the final point
};

// Outer penalty/smoothing schedule around cgd_solve.
PcpmResult pcpm_solve(const ScenarioConfig& config, const ChannelRealization& channels,
                      const PcpmSchedule& schedule, const LineSearchParams& ls, uint64_t seed,
                      InitStrategy strategy = InitStrategy::MatchedFilter,
                      const CgdOptions& opts = {});

} // namespace secbeam
