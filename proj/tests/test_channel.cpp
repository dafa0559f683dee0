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

#include <doctest.h>

#include <cmath>
#include <complex>

#include "secbeam/channel.hpp"
#include "secbeam/rng.hpp"

using namespace secbeam;

namespace
{
constexpr double kPi = 3.141592653589793238462643383279;

bool identical(const UserPaths& a, const UserPaths& b)
{
    return a.angles == b.angles && a.gains == b.gains && a.distance == b.distance &&
           a.snr_scale == b.snr_scale;
}
} // namespace

TEST_CASE("default config matches the simulated scenario and validates")
{
    ScenarioConfig cfg;
    CHECK(cfg.num_antennas == 16);
    CHECK(cfg.wavelength == 0.01);
    CHECK(cfg.aperture == doctest::Approx(30.0 * cfg.wavelength));
    CHECK(cfg.num_lus == 4);
    CHECK(cfg.num_eves == 4);
    CHECK(cfg.num_paths == 6);
    CHECK(cfg.total_power == 1.0);            // 0 dBW
    CHECK(cfg.noise_variance_lu == 1e-10);    // -70 dBm
    CHECK(cfg.ref_gain == 1e-4);              // -40 dB
    CHECK(cfg.pathloss_exponent == 2.8);
    CHECK_NOTHROW(cfg.validate());

    ChannelRealization ch = sample_channels(cfg, 3);
    CHECK(ch.lus.size() == 4);
    CHECK(ch.eves.size() == 4);
    for (const auto& u : ch.lus)
    {
        CHECK(u.angles.size() == 6);
        CHECK(u.gains.size() == 6);
        CHECK(u.snr_scale == doctest::Approx(1e10));
        CHECK(u.distance >= 60.0);
        CHECK(u.distance <= 100.0);
    }
}

TEST_CASE("config validation names the violated constraint")
{
    ScenarioConfig cfg;
    cfg.num_antennas = 1;
    CHECK_THROWS_WITH_AS(cfg.validate(), "invalid scenario config: L must be >= 2",
                         std::invalid_argument);
    cfg = ScenarioConfig{};
    cfg.aperture = 0.01; // < (lambda/2)(L-1) = 0.075
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = ScenarioConfig{};
    cfg.total_power = 0.0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("sample_channels is deterministic for a fixed seed")
{
    ScenarioConfig cfg;
    ChannelRealization a = sample_channels(cfg, 77);
    ChannelRealization b = sample_channels(cfg, 77);
    for (size_t i = 0; i < a.lus.size(); ++i)
        CHECK(identical(a.lus[i], b.lus[i]));
    for (size_t i = 0; i < a.eves.size(); ++i)
        CHECK(identical(a.eves[i], b.eves[i]));
    ChannelRealization c = sample_channels(cfg, 78);
    CHECK_FALSE(identical(a.lus[0], c.lus[0]));
}

TEST_CASE("per-path gain variance matches g0 d^-alpha / M_p at fixed distance")
{
    ScenarioConfig cfg;
    cfg.min_distance = 100.0;
    cfg.max_distance = 100.0;
    cfg.num_lus = 1;
    cfg.num_eves = 1;
    double expected = cfg.ref_gain * std::pow(100.0, -cfg.pathloss_exponent) / cfg.num_paths;

    double sum = 0.0;
    int n = 0;
    const int draws = 20000; // x 6 paths = 1.2e5 samples
    for (int i = 0; i < draws; ++i)
    {
        ChannelRealization ch = sample_channels(cfg, uint64_t(i));
        for (Eigen::Index m = 0; m < ch.lus[0].gains.size(); ++m)
        {
            sum += std::norm(ch.lus[0].gains[m]);
            ++n;
        }
    }
    double est = sum / n;
    // |beta|^2 is exponential with sd = mean, so sd of the estimate is
    // expected / sqrt(n)
    CHECK(std::abs(est - expected) < 3.0 * expected / std::sqrt(double(n)));
}

TEST_CASE("steering vector closed forms")
{
    VectorXd p(2);
    p << 0.0, 0.005;
    VectorXcd a = steering_vector(p, kPi / 2.0, 0.01);
    CHECK(std::abs(a[0] - 1.0) < 1e-12);
    CHECK(std::abs(a[1] - 1.0) < 1e-12);

    VectorXd q(1);
    q << 0.0025;
    VectorXcd b = steering_vector(q, 0.0, 0.01);
    CHECK(std::abs(b[0] - std::complex<double>(0.0, 1.0)) < 1e-12);

    VectorXd z = VectorXd::Zero(3);
    VectorXcd c = steering_vector(z, 1.234, 0.01);
    for (int l = 0; l < 3; ++l)
        CHECK(std::abs(c[l] - 1.0) < 1e-15);
}

TEST_CASE("steering vector elements are unit modulus for random inputs")
{
    Rng rng(5);
    for (int trial = 0; trial < 50; ++trial)
    {
        VectorXd p(8);
        for (int l = 0; l < 8; ++l)
            p[l] = rng.uniform(-1.0, 1.0);
        VectorXcd a = steering_vector(p, rng.uniform(0.0, kPi), 0.01);
        for (int l = 0; l < 8; ++l)
            CHECK(std::abs(std::abs(a[l]) - 1.0) < 1e-14);
    }
}

TEST_CASE("steering vector rejects non-finite input")
{
    VectorXd p(1);
    p << 0.0;
    CHECK_THROWS_AS(steering_vector(p, std::nan(""), 0.01), std::invalid_argument);
    CHECK_THROWS_AS(steering_vector(p, 0.0, 0.0), std::invalid_argument);
}

TEST_CASE("channel vector reduces to the steering vector for one unit path")
{
    UserPaths u;
    u.angles.resize(1);
    u.gains.resize(1);
    u.angles[0] = kPi / 2.0;
    u.gains[0] = 1.0;
    VectorXd p(3);
    p << 0.0, 0.004, 0.011;
    VectorXcd h = channel_vector(p, u, 0.01);
    for (int l = 0; l < 3; ++l)
        CHECK(std::abs(h[l] - 1.0) < 1e-14);

    u.gains[0] = 0.0;
    CHECK(channel_vector(p, u, 0.01).norm() == 0.0);
}

TEST_CASE("channel vector matches independent path summation")
{
    Rng rng(17);
    VectorXd p(4);
    for (int l = 0; l < 4; ++l)
        p[l] = rng.uniform(0.0, 0.3);
    UserPaths u;
    u.angles.resize(2);
    u.gains.resize(2);
    for (int m = 0; m < 2; ++m)
    {
        u.angles[m] = rng.uniform(0.0, kPi);
        u.gains[m] = {rng.normal(), rng.normal()};
    }
    VectorXcd h = channel_vector(p, u, 0.01);
    for (int l = 0; l < 4; ++l)
    {
        std::complex<double> expect(0.0, 0.0);
        for (int m = 0; m < 2; ++m)
            expect += u.gains[m] *
                      std::polar(1.0, 2.0 * kPi / 0.01 * std::cos(u.angles[m]) * p[l]);
        CHECK(std::abs(h[l] - expect) <= 1e-12);
    }
}

TEST_CASE("channel vector is additive in paths")
{
    Rng rng(23);
    VectorXd p(5);
    for (int l = 0; l < 5; ++l)
        p[l] = rng.uniform(0.0, 0.3);
    UserPaths a, b, both;
    a.angles.resize(2); a.gains.resize(2);
    b.angles.resize(3); b.gains.resize(3);
    both.angles.resize(5); both.gains.resize(5);
    for (int m = 0; m < 2; ++m)
    {
        a.angles[m] = rng.uniform(0.0, kPi);
        a.gains[m] = {rng.normal(), rng.normal()};
        both.angles[m] = a.angles[m];
        both.gains[m] = a.gains[m];
    }
    for (int m = 0; m < 3; ++m)
    {
        b.angles[m] = rng.uniform(0.0, kPi);
        b.gains[m] = {rng.normal(), rng.normal()};
        both.angles[2 + m] = b.angles[m];
        both.gains[2 + m] = b.gains[m];
    }
    VectorXcd sum = channel_vector(p, a, 0.01) + channel_vector(p, b, 0.01);
    VectorXcd joint = channel_vector(p, both, 0.01);
    CHECK((sum - joint).norm() < 1e-12);
}

TEST_CASE("channel vector rejects path count mismatch")
{
    UserPaths u;
    u.angles.resize(2);
    u.gains.resize(3);
    VectorXd p = VectorXd::Zero(2);
    CHECK_THROWS_AS(channel_vector(p, u, 0.01), std::invalid_argument);
}

TEST_CASE("correlation is 1 for identical channels and 0 for orthogonal ones")
{
    ChannelRealization ch;
    UserPaths lu;
    lu.angles.resize(1);
    lu.gains.resize(1);
    lu.angles[0] = kPi / 2.0; // steering [1, 1]
    lu.gains[0] = 1.0;
    lu.snr_scale = 1.0;
    ch.lus.push_back(lu);
    ch.eves.push_back(lu);
    VectorXd p(2);
    p << 0.0, 0.005;
    CHECK(channel_correlation(ch, p, 0.01) == doctest::Approx(1.0).epsilon(1e-12));

    // EVE at theta = 0 over a lambda/2 pair gives steering [1, -1], which is
    // orthogonal to the LU's [1, 1]
    ch.eves[0].angles[0] = 0.0;
    CHECK(channel_correlation(ch, p, 0.01) < 1e-12);
}

TEST_CASE("correlation matches a direct max-over-pairs evaluation")
{
    ScenarioConfig cfg;
    cfg.num_antennas = 8;
    ChannelRealization ch = sample_channels(cfg, 31);
    VectorXd p(8);
    Rng rng(32);
    for (int l = 0; l < 8; ++l)
        p[l] = rng.uniform(0.0, cfg.aperture);

    double expect = 0.0;
    for (const auto& e : ch.eves)
        for (const auto& b : ch.lus)
        {
            VectorXcd g = channel_vector(p, e, cfg.wavelength);
            VectorXcd h = channel_vector(p, b, cfg.wavelength);
            expect = std::max(expect, std::abs(g.dot(h)) / (g.norm() * h.norm()));
        }
    CHECK(channel_correlation(ch, p, cfg.wavelength) == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("correlation is invariant under a global phase on one channel")
{
    ScenarioConfig cfg;
    cfg.num_antennas = 4;
    ChannelRealization ch = sample_channels(cfg, 41);
    VectorXd p(4);
    p << 0.0, 0.1, 0.2, 0.3;
    double before = channel_correlation(ch, p, cfg.wavelength);
    std::complex<double> rot = std::polar(1.0, 1.2345);
    for (Eigen::Index m = 0; m < ch.lus[0].gains.size(); ++m)
        ch.lus[0].gains[m] *= rot;
    CHECK(channel_correlation(ch, p, cfg.wavelength) == doctest::Approx(before).epsilon(1e-12));
}

TEST_CASE("correlation skips zero channels and errors when all are zero")
{
    ChannelRealization ch;
    UserPaths good;
    good.angles.resize(1);
    good.gains.resize(1);
    good.angles[0] = 1.0;
    good.gains[0] = 1.0;
    UserPaths dead = good;
    dead.gains[0] = 0.0;

    ch.lus = {dead, good};
    ch.eves = {good};
    VectorXd p(2);
    p << 0.0, 0.005;
    CHECK_NOTHROW(channel_correlation(ch, p, 0.01));

    ch.lus = {dead};
    CHECK_THROWS_AS(channel_correlation(ch, p, 0.01), std::runtime_error);
}

TEST_CASE("perturb_csi with zero errors returns the input exactly")
{
    ScenarioConfig cfg;
    ChannelRealization ch = sample_channels(cfg, 51);
    ChannelRealization out = perturb_csi(ch, CsiErrorParams{}, 1);
    for (size_t i = 0; i < ch.lus.size(); ++i)
        CHECK(identical(ch.lus[i], out.lus[i]));
    for (size_t i = 0; i < ch.eves.size(); ++i)
        CHECK(identical(ch.eves[i], out.eves[i]));
}

TEST_CASE("AoD perturbation is uniform on [-nu/2, nu/2]")
{
    ScenarioConfig cfg;
    cfg.num_lus = 1;
    cfg.num_eves = 1;
    ChannelRealization ch = sample_channels(cfg, 61);
    CsiErrorParams err;
    err.max_aod_error = 0.1;

    double sum = 0.0, lo = 1.0, hi = -1.0;
    int n = 0;
    for (int i = 0; i < 10000; ++i)
    {
        ChannelRealization out = perturb_csi(ch, err, uint64_t(i));
        for (Eigen::Index m = 0; m < out.lus[0].angles.size(); ++m)
        {
            double d = out.lus[0].angles[m] - ch.lus[0].angles[m];
            sum += d;
            lo = std::min(lo, d);
            hi = std::max(hi, d);
            ++n;
        }
    }
    CHECK(lo >= -0.05);
    CHECK(hi < 0.05);
    // sd of the mean = (0.1/sqrt(12))/sqrt(n)
    CHECK(std::abs(sum / n) < 3.0 * 0.1 / std::sqrt(12.0 * n));
}

TEST_CASE("normalized gain error has the requested variance")
{
    ScenarioConfig cfg;
    cfg.num_lus = 1;
    cfg.num_eves = 1;
    ChannelRealization ch = sample_channels(cfg, 71);
    CsiErrorParams err;
    err.gain_error_variance = 0.01;

    double sum2 = 0.0;
    int n = 0;
    for (int i = 0; i < 20000; ++i)
    {
        ChannelRealization out = perturb_csi(ch, err, uint64_t(i));
        for (Eigen::Index m = 0; m < out.lus[0].gains.size(); ++m)
        {
            std::complex<double> d =
                (out.lus[0].gains[m] - ch.lus[0].gains[m]) / std::abs(ch.lus[0].gains[m]);
            sum2 += std::norm(d);
            ++n;
        }
    }
    double est = sum2 / n;
    CHECK(std::abs(est - 0.01) < 3.0 * 0.01 / std::sqrt(double(n)));
}

TEST_CASE("perturb_csi is deterministic for a fixed seed")
{
    ScenarioConfig cfg;
    ChannelRealization ch = sample_channels(cfg, 81);
    CsiErrorParams err{0.05, 0.01};
    ChannelRealization a = perturb_csi(ch, err, 9);
    ChannelRealization b = perturb_csi(ch, err, 9);
    for (size_t i = 0; i < a.lus.size(); ++i)
        CHECK(identical(a.lus[i], b.lus[i]));
}
