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

#include "secbeam/channel.hpp"

namespace secbeam
{

/*!
The optimization variable pair. The weights live on the complex circle
(|w_l| = 1); positions are unconstrained here because the penalty method
permits infeasible iterates.
*/
struct BeamformerPoint
{
    VectorXcd weights;
    VectorXd positions; // [m]
};

using ObjectiveFn = std::function<double(const BeamformerPoint&)>;

struct SmoothingParams
{
    double lse_alpha = 1.0;     // alpha, LSE smoothing
    double penalty_gamma = 0.1; // gamma, softplus smoothing [m-scale]
    double penalty_rho = 100.0; // rho, penalty weight

    void validate() const;
};

// alpha-scaled log-sum-exp with max subtraction. Satisfies
// max(v) <= result <= max(v) + alpha*log(K).
double log_sum_exp(const VectorXd& values, double alpha);

// Numerically safe log(1 + exp(x)).
double softplus(double x);

// [min_b R_b - max_e R_e]^+ in bits per channel use, with
// R = log2(1 + t |h(p)^H w|^2).
double multicast_secrecy_rate(const BeamformerPoint& point, const ChannelRealization& channels,
                              double wavelength);

// Sum of the L+1 smoothed constraint penalties rho*gamma*log(1+e^{g/gamma}).
double penalty_value(const VectorXd& positions, const SmoothingParams& params, double wavelength,
                     double aperture);

// max{0, g_l forall l, f_1, f_2}; zero iff the spacing and boundary
// constraints all hold.
double constraint_violation(const VectorXd& positions, double wavelength, double aperture);

// The LSE-smoothed EVE/LU ratio u_e / u_b (natural logs), without penalty.
// Shared by the solver traces and the brute-force oracles.
double surrogate_ratio(const BeamformerPoint& point, const ChannelRealization& channels,
                       double lse_alpha, double wavelength);

// Full penalized surrogate phi = u_e/u_b + penalty. Throws on numerical
// degeneracy of the denominator (u_b <= 1e-12).
double smoothed_objective(const BeamformerPoint& point, const ChannelRealization& channels,
                          const SmoothingParams& params, double wavelength, double aperture);

struct EuclideanGradient
{
    VectorXcd wrt_weights;  // packed d/dRe + j d/dIm
    VectorXd wrt_positions;
};

// Analytic gradient of smoothed_objective with respect to both variables.
EuclideanGradient euclidean_gradient(const BeamformerPoint& point,
                                     const ChannelRealization& channels,
                                     const SmoothingParams& params, double wavelength,
                                     double aperture);

} // namespace secbeam
