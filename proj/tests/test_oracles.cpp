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

#include "secbeam/oracles.hpp"
#include "secbeam/rng.hpp"

using namespace secbeam;

namespace
{
constexpr double kPi = 3.141592653589793238462643383279;

ChannelRealization single_lu(double angle, double snr_scale)
{
    UserPaths u;
    u.angles.resize(1);
    u.gains.resize(1);
    u.angles[0] = angle;
    u.gains[0] = 1.0;
    u.snr_scale = snr_scale;
    ChannelRealization ch;
    ch.lus.push_back(u);
    return ch;
}
} // namespace

TEST_CASE("finite differences are exact for affine functions")
{
    VectorXd c(3);
    c << 1.5, -2.0, 0.25;
    ObjectiveFn f = [&](const BeamformerPoint& x) { return c.dot(x.positions); };
    BeamformerPoint x;
    x.weights = VectorXcd::Constant(3, std::complex<double>(1.0, 0.0));
    x.positions = VectorXd::Zero(3);
    EuclideanGradient g = finite_difference_gradient(f, x, 1e-6);
    CHECK((g.wrt_positions - c).norm() < 1e-9);
    CHECK(g.wrt_weights.norm() < 1e-9);
}

TEST_CASE("finite differences are exact for quadratics in Re w")
{
    ObjectiveFn f = [](const BeamformerPoint& x) {
        double s = 0.0;
        for (Eigen::Index l = 0; l < x.weights.size(); ++l)
            s += x.weights[l].real() * x.weights[l].real();
        return s;
    };
    BeamformerPoint x;
    x.weights.resize(2);
    x.weights << std::complex<double>(0.7, 0.2), std::complex<double>(-1.1, 0.5);
    x.positions = VectorXd::Zero(2);
    EuclideanGradient g = finite_difference_gradient(f, x, 1e-6);
    for (Eigen::Index l = 0; l < 2; ++l)
    {
        CHECK(g.wrt_weights[l].real() == doctest::Approx(2.0 * x.weights[l].real()).epsilon(1e-9));
        CHECK(std::abs(g.wrt_weights[l].imag()) < 1e-9);
    }
}

TEST_CASE("finite differences reject bad steps and non-finite objectives")
{
    ObjectiveFn f = [](const BeamformerPoint&) { return std::nan(""); };
    BeamformerPoint x;
    x.weights = VectorXcd::Constant(1, std::complex<double>(1.0, 0.0));
    x.positions = VectorXd::Zero(1);
    CHECK_THROWS_AS(finite_difference_gradient(f, x, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(finite_difference_gradient(f, x, 1e-6), std::runtime_error);
}

TEST_CASE("gradient comparison report tracks the worst coordinate")
{
    EuclideanGradient a, b;
    a.wrt_weights = VectorXcd::Zero(2);
    b.wrt_weights = VectorXcd::Zero(2);
    a.wrt_positions = VectorXd::Zero(2);
    b.wrt_positions = VectorXd::Zero(2);
    a.wrt_positions[1] = 1.0;
    b.wrt_positions[1] = 1.1;
    OracleReport rep = compare_gradients(a, b);
    CHECK(rep.samples == 6);
    CHECK(rep.worst_coordinate == 5); // 2L + 1
    CHECK(rep.max_abs_error == doctest::Approx(0.1));
    CHECK(rep.max_rel_error == doctest::Approx(0.1 / 1.1));
}

TEST_CASE("analytic gradient agrees with the finite-difference oracle")
{
    ScenarioConfig cfg;
    cfg.num_antennas = 8;
    cfg.num_lus = 2;
    cfg.num_eves = 2;
    cfg.num_paths = 3;
    SmoothingParams params{cfg.lse_alpha, 0.1, 100.0};
    Rng rng(99);
    for (int trial = 0; trial < 5; ++trial)
    {
        ChannelRealization ch = sample_channels(cfg, uint64_t(100 + trial));
        BeamformerPoint x;
        x.weights.resize(8);
        x.positions.resize(8);
        for (int l = 0; l < 8; ++l)
        {
            x.weights[l] = std::polar(1.0, rng.uniform(0.0, 2.0 * kPi));
            x.positions[l] = double(l) * cfg.aperture / 7.0;
        }
        ObjectiveFn f = [&](const BeamformerPoint& pt) {
            return smoothed_objective(pt, ch, params, cfg.wavelength, cfg.aperture);
        };
        EuclideanGradient analytic =
            euclidean_gradient(x, ch, params, cfg.wavelength, cfg.aperture);
        EuclideanGradient numeric = finite_difference_gradient(f, x, 1e-6);
        OracleReport rep = compare_gradients(analytic, numeric);
        CHECK((rep.max_rel_error <= 1e-6 || rep.max_abs_error <= 1e-9));
    }
}

TEST_CASE("brute force phases: L = 1 is flat by global phase invariance")
{
    ChannelRealization ch = single_lu(1.0, 1.0);
    ch.eves.push_back(ch.lus[0]);
    ch.eves[0].gains[0] = 0.3;
    VectorXd p(1);
    p << 0.0;
    BruteForceResult best = brute_force_ab(ch, p, 8, 1.0, 0.01);

    // every phase gives the same ratio
    BeamformerPoint x;
    x.positions = p;
    x.weights = VectorXcd::Constant(1, std::complex<double>(1.0, 0.0));
    CHECK(best.value == doctest::Approx(surrogate_ratio(x, ch, 1.0, 0.01)).epsilon(1e-12));
}

TEST_CASE("brute force phases match direct enumeration for one LU")
{
    ChannelRealization ch = single_lu(0.7, 2.0);
    VectorXd p(2);
    p << 0.0, 0.0137;
    const int Q = 4;
    BruteForceResult best = brute_force_ab(ch, p, Q, 1.0, 0.01);

    VectorXcd h = channel_vector(p, ch.lus[0], 0.01);
    double best_direct = 1e300;
    for (int q0 = 0; q0 < Q; ++q0)
        for (int q1 = 0; q1 < Q; ++q1)
        {
            VectorXcd w(2);
            w << std::polar(1.0, 2.0 * kPi * q0 / Q), std::polar(1.0, 2.0 * kPi * q1 / Q);
            double c = 1.0 + 2.0 * std::norm(h.dot(w));
            best_direct = std::min(best_direct, 1.0 / c); // u_e = 1 with no EVEs
        }
    CHECK(best.value == doctest::Approx(best_direct).epsilon(1e-12));
}

TEST_CASE("brute force optimum is no worse than random grid vectors")
{
    ScenarioConfig cfg;
    cfg.num_antennas = 4;
    cfg.num_lus = 2;
    cfg.num_eves = 2;
    cfg.num_paths = 2;
    ChannelRealization ch = sample_channels(cfg, 7);
    VectorXd p(4);
    p << 0.0, 0.1, 0.2, 0.3;
    const int Q = 16;
    BruteForceResult best = brute_force_ab(ch, p, Q, 1.0, cfg.wavelength);

    Rng rng(8);
    for (int trial = 0; trial < 50; ++trial)
    {
        BeamformerPoint x;
        x.positions = p;
        x.weights.resize(4);
        for (int l = 0; l < 4; ++l)
            x.weights[l] =
                std::polar(1.0, 2.0 * kPi * std::floor(rng.uniform(0.0, double(Q))) / Q);
        CHECK(best.value <= surrogate_ratio(x, ch, 1.0, cfg.wavelength) + 1e-12);
    }
}

TEST_CASE("brute force guards its search space")
{
    ChannelRealization ch = single_lu(1.0, 1.0);
    VectorXd p = VectorXd::Zero(16);
    CHECK_THROWS_AS(brute_force_ab(ch, p, 16, 1.0, 0.01), std::invalid_argument);
    CHECK_THROWS_AS(brute_force_ab(ch, p, 0, 1.0, 0.01), std::invalid_argument);
}

TEST_CASE("brute force positions align phases for a single path")
{
    // single LU, single path at angle theta; the optimum pairs the two
    // antennas so the weighted responses add coherently
    const double lam = 0.01, theta = 0.3;
    ChannelRealization ch = single_lu(theta, 1.0);
    VectorXcd w(2);
    w << 1.0, 1.0;
    const double grid = lam / 40.0;
    BruteForceResult best = brute_force_positions(ch, w, grid, 1.0, lam, 0.1);

    // |h^H w| is maximized when k (p2 - p1) = 0 mod 2pi; with w = [1,1] the
    // alignment condition is on the position difference only
    double k = 2.0 * kPi / lam * std::cos(theta);
    double diff = best.positions[1] - best.positions[0];
    double phase = std::fmod(k * diff, 2.0 * kPi);
    if (phase > kPi)
        phase -= 2.0 * kPi;
    if (phase < -kPi)
        phase += 2.0 * kPi;
    CHECK(std::abs(phase) <= k * grid + 1e-9);
}

TEST_CASE("brute force positions include the ULA and a degenerate grid works")
{
    ScenarioConfig cfg;
    cfg.num_antennas = 2;
    cfg.num_lus = 2;
    cfg.num_eves = 1;
    cfg.num_paths = 2;
    cfg.aperture = 0.05;
    ChannelRealization ch = sample_channels(cfg, 9);
    VectorXcd w(2);
    w << std::polar(1.0, 0.4), std::polar(1.0, -0.9);

    BruteForceResult best = brute_force_positions(ch, w, 0.005, 1.0, cfg.wavelength, cfg.aperture);
    BeamformerPoint ula;
    ula.weights = w;
    ula.positions.resize(2);
    ula.positions << 0.0, 0.005; // on the grid and feasible
    CHECK(best.value <= surrogate_ratio(ula, ch, 1.0, cfg.wavelength) + 1e-12);

    // aperture exactly lambda/2: the only feasible grid pair is [0, 0.005]
    BruteForceResult tight = brute_force_positions(ch, w, 0.005, 1.0, cfg.wavelength, 0.005);
    CHECK(tight.positions[0] == 0.0);
    CHECK(tight.positions[1] == 0.005);

    CHECK_THROWS_AS(brute_force_positions(ch, VectorXcd::Ones(3), 0.005, 1.0, 0.01, 0.05),
                    std::invalid_argument);
    CHECK_THROWS_AS(brute_force_positions(ch, w, 1e-9, 1.0, 0.01, 0.05), std::invalid_argument);
}
