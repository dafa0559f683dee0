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

#include <complex>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace secbeam
{

using Eigen::VectorXcd;
using Eigen::VectorXd;

/*!
One experiment scenario: array geometry, user counts, power and noise
budgets, path-loss model, and the log-sum-exp smoothing constant. All
fields are linear-scale; dB/dBm/dBW conversion happens at config parse
time, never inside the math.
*/
struct ScenarioConfig
{
    int num_antennas = 16;            // L
    double wavelength = 0.01;         // lambda [m]
    double aperture = 0.3;            // D [m]
    int num_lus = 4;                  // N_b
    int num_eves = 4;                 // N_e
    int num_paths = 6;                // M_p
    double total_power = 1.0;         // P [W]
    double noise_variance_lu = 1e-10; // [W]
    double noise_variance_eve = 1e-10;
    double ref_gain = 1e-4; // channel gain at 1 m, linear
    double pathloss_exponent = 2.8;
    double min_distance = 60.0; // [m]
    double max_distance = 100.0;
    double lse_alpha = 1.0;

    // Throws std::invalid_argument with the violated constraint named.
    void validate() const;
};

// Departure angles, complex path gains, receiver distance, and the derived
// SNR scale t = P / sigma^2 for one LU or EVE.
struct UserPaths
{
    VectorXd angles;  // radians, one per path
    VectorXcd gains;  // complex amplitudes, one per path
    double distance = 0.0;  // [m]
    double snr_scale = 0.0; // t_i > 0
};

struct ChannelRealization
{
    std::vector<UserPaths> lus;
    std::vector<UserPaths> eves;

    int num_paths() const { return lus.empty() ? 0 : int(lus.front().angles.size()); }
};

struct CsiErrorParams
{
    double max_aod_error = 0.0;       // nu [rad], AoD error uniform on [-nu/2, nu/2]
    double gain_error_variance = 0.0; // chi, normalized gain error ~ CN(0, chi)
};

// Draws angles ~ U[0, pi], distances ~ U[d_min, d_max] and i.i.d. complex
// Gaussian path gains with per-path variance g0 * d^-alpha_pl / M_p.
// Deterministic for a fixed seed.
ChannelRealization sample_channels(const ScenarioConfig& config, uint64_t seed);

// Field response vector: element l is exp(j * 2pi/lambda * p_l * cos(angle)).
VectorXcd steering_vector(const VectorXd& positions, double angle, double wavelength);

// Multi-path channel h(p) = sum_m beta_m * a(p, theta_m).
VectorXcd channel_vector(const VectorXd& positions, const UserPaths& user,
                         double wavelength);

// Worst-case normalized LU/EVE correlation max_{b,e} |g_e^H h_b| / (|g_e||h_b|).
// Pairs with a zero channel vector are skipped; all-zero input is an error.
double channel_correlation(const ChannelRealization& channels, const VectorXd& positions,
                           double wavelength);

// Applies independent per-path AoD and gain perturbations. Zero error
// parameters return the input unchanged.
ChannelRealization perturb_csi(const ChannelRealization& channels, const CsiErrorParams& err,
                               uint64_t seed);

} // namespace secbeam
