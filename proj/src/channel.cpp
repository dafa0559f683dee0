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

#include "secbeam/channel.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "secbeam/rng.hpp"

namespace secbeam
{

namespace
{
constexpr double kPi = 3.141592653589793238462643383279;

void check(bool ok, const std::string& what)
{
    if (!ok)
        throw std::invalid_argument("invalid scenario config: " + what);
}

UserPaths sample_user(const ScenarioConfig& cfg, double noise_variance, Rng rng)
{
    UserPaths u;
    u.distance = rng.uniform(cfg.min_distance, cfg.max_distance);
    u.snr_scale = cfg.total_power / noise_variance;
    int mp = cfg.num_paths;
    u.angles.resize(mp);
    u.gains.resize(mp);
    // per-path gain variance g0 * d^-alpha / M_p, split evenly over Re/Im
    double var = cfg.ref_gain * std::pow(u.distance, -cfg.pathloss_exponent) / double(mp);
    double s = std::sqrt(var / 2.0);
    for (int m = 0; m < mp; ++m)
        u.angles[m] = rng.uniform(0.0, kPi);
    for (int m = 0; m < mp; ++m)
        u.gains[m] = std::complex<double>(s * rng.normal(), s * rng.normal());
    return u;
}
} // namespace

void ScenarioConfig::validate() const
{
    check(num_antennas >= 2, "L must be >= 2");
    check(wavelength > 0.0, "wavelength must be positive");
    check(aperture >= 0.5 * wavelength * double(num_antennas - 1),
          "aperture D must be at least (lambda/2)*(L-1)");
    check(num_lus >= 1, "N_b must be >= 1");
    check(num_eves >= 1, "N_e must be >= 1");
    check(num_paths >= 1, "M_p must be >= 1");
    check(total_power > 0.0, "total power must be positive");
    check(noise_variance_lu > 0.0, "LU noise variance must be positive");
    check(noise_variance_eve > 0.0, "EVE noise variance must be positive");
    check(ref_gain > 0.0, "reference gain must be positive");
    check(min_distance > 0.0 && max_distance >= min_distance, "distance bounds invalid");
    check(lse_alpha > 0.0, "lse_alpha must be positive");
}

ChannelRealization sample_channels(const ScenarioConfig& config, uint64_t seed)
{
    config.validate();
    Rng root(seed);
    ChannelRealization ch;
    ch.lus.reserve(config.num_lus);
    ch.eves.reserve(config.num_eves);
    // one substream per user; LU labels are even, EVE labels odd
    for (int b = 0; b < config.num_lus; ++b)
        ch.lus.push_back(sample_user(config, config.noise_variance_lu, root.substream(2 * uint64_t(b))));
    for (int e = 0; e < config.num_eves; ++e)
        ch.eves.push_back(sample_user(config, config.noise_variance_eve, root.substream(2 * uint64_t(e) + 1)));
    return ch;
}

VectorXcd steering_vector(const VectorXd& positions, double angle, double wavelength)
{
    if (!(wavelength > 0.0) || !std::isfinite(angle) || !positions.allFinite())
        throw std::invalid_argument("steering_vector: non-finite input or non-positive wavelength");
    double k = 2.0 * kPi / wavelength * std::cos(angle);
    VectorXcd a(positions.size());
    for (Eigen::Index l = 0; l < positions.size(); ++l)
        a[l] = std::polar(1.0, k * positions[l]);
    return a;
}

VectorXcd channel_vector(const VectorXd& positions, const UserPaths& user, double wavelength)
{
    if (user.angles.size() != user.gains.size())
        throw std::invalid_argument("channel_vector: angle/gain path count mismatch");
    VectorXcd h = VectorXcd::Zero(positions.size());
    for (Eigen::Index m = 0; m < user.angles.size(); ++m)
        h += user.gains[m] * steering_vector(positions, user.angles[m], wavelength);
    return h;
}

double channel_correlation(const ChannelRealization& channels, const VectorXd& positions,
                           double wavelength)
{
    if (channels.lus.empty() || channels.eves.empty())
        throw std::invalid_argument("channel_correlation: need at least one LU and one EVE");

    std::vector<VectorXcd> hs, gs;
    for (const auto& b : channels.lus)
        hs.push_back(channel_vector(positions, b, wavelength));
    for (const auto& e : channels.eves)
        gs.push_back(channel_vector(positions, e, wavelength));

    double best = -1.0;
    for (const auto& g : gs)
    {
        double gn = g.norm();
        if (gn == 0.0)
            continue;
        for (const auto& h : hs)
        {
            double hn = h.norm();
            if (hn == 0.0)
                continue;
            double rho = std::abs(g.dot(h)) / (gn * hn);
            best = std::max(best, rho);
        }
    }
    if (best < 0.0)
        throw std::runtime_error("channel_correlation: all LU/EVE pairs degenerate (zero channels)");
    return std::min(best, 1.0);
}

ChannelRealization perturb_csi(const ChannelRealization& channels, const CsiErrorParams& err,
                               uint64_t seed)
{
    if (err.max_aod_error < 0.0 || err.gain_error_variance < 0.0)
        throw std::invalid_argument("perturb_csi: error parameters must be non-negative");
    if (err.max_aod_error == 0.0 && err.gain_error_variance == 0.0)
        return channels;

    Rng root(seed);
    ChannelRealization out = channels;
    uint64_t label = 0;
    auto perturb_user = [&](UserPaths& u) {
        Rng rng = root.substream(label++);
        for (Eigen::Index m = 0; m < u.angles.size(); ++m)
        {
            u.angles[m] += rng.uniform(-err.max_aod_error / 2.0, err.max_aod_error / 2.0);
            if (err.gain_error_variance > 0.0)
            {
                double s = std::sqrt(err.gain_error_variance / 2.0);
                std::complex<double> eps(s * rng.normal(), s * rng.normal());
                u.gains[m] += std::abs(u.gains[m]) * eps;
            }
        }
    };
    for (auto& b : out.lus)
        perturb_user(b);
    for (auto& e : out.eves)
        perturb_user(e);
    return out;
}

} // namespace secbeam
