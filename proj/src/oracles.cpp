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

#include "secbeam/oracles.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace secbeam
{

namespace
{
constexpr double kPi = 3.141592653589793238462643383279;
constexpr double kRelFloor = 1e-9;
constexpr double kSearchGuard = 1e7;

double central_diff(const ObjectiveFn& objective, BeamformerPoint& x, double* coord, double h)
{
    const double saved = *coord;
    *coord = saved + h;
    double fp = objective(x);
    *coord = saved - h;
    double fm = objective(x);
    *coord = saved;
    if (!std::isfinite(fp) || !std::isfinite(fm))
        throw std::runtime_error("finite_difference_gradient: non-finite objective");
    return (fp - fm) / (2.0 * h);
}
} // namespace

EuclideanGradient finite_difference_gradient(const ObjectiveFn& objective,
                                             const BeamformerPoint& point, double step)
{
    if (!(step > 0.0))
        throw std::invalid_argument("finite_difference_gradient: step must be positive");
    const Eigen::Index L = point.weights.size();
    BeamformerPoint x = point;
    EuclideanGradient g;
    g.wrt_weights.resize(L);
    g.wrt_positions.resize(L);
    for (Eigen::Index l = 0; l < L; ++l)
    {
        double* re = &reinterpret_cast<double(&)[2]>(x.weights[l])[0];
        double* im = &reinterpret_cast<double(&)[2]>(x.weights[l])[1];
        g.wrt_weights[l] = std::complex<double>(central_diff(objective, x, re, step),
                                                central_diff(objective, x, im, step));
    }
    for (Eigen::Index l = 0; l < L; ++l)
        g.wrt_positions[l] = central_diff(objective, x, &x.positions[l], step);
    return g;
}

OracleReport compare_gradients(const EuclideanGradient& analytic, const EuclideanGradient& reference)
{
    const Eigen::Index L = analytic.wrt_weights.size();
    OracleReport rep;
    auto consider = [&](double a, double r, int coord) {
        double abs_err = std::abs(a - r);
        double rel_err = abs_err / std::max(std::max(std::abs(a), std::abs(r)), kRelFloor);
        if (rel_err > rep.max_rel_error)
        {
            rep.max_rel_error = rel_err;
            rep.worst_coordinate = coord;
        }
        rep.max_abs_error = std::max(rep.max_abs_error, abs_err);
        ++rep.samples;
    };
    for (Eigen::Index l = 0; l < L; ++l)
    {
        consider(analytic.wrt_weights[l].real(), reference.wrt_weights[l].real(), int(2 * l));
        consider(analytic.wrt_weights[l].imag(), reference.wrt_weights[l].imag(), int(2 * l + 1));
    }
    for (Eigen::Index l = 0; l < analytic.wrt_positions.size(); ++l)
        consider(analytic.wrt_positions[l], reference.wrt_positions[l], int(2 * L + l));
    return rep;
}

BruteForceResult brute_force_ab(const ChannelRealization& channels, const VectorXd& p_fixed,
                                int phase_levels, double lse_alpha, double wavelength)
{
    const int L = int(p_fixed.size());
    if (phase_levels < 1)
        throw std::invalid_argument("brute_force_ab: phase_levels must be >= 1");
    if (std::pow(double(phase_levels), L) > kSearchGuard)
        throw std::invalid_argument("brute_force_ab: search space exceeds guard");

    std::vector<std::complex<double>> phases(phase_levels);
    for (int q = 0; q < phase_levels; ++q)
        phases[q] = std::polar(1.0, 2.0 * kPi * double(q) / double(phase_levels));

    BeamformerPoint x;
    x.positions = p_fixed;
    x.weights = VectorXcd::Constant(L, phases[0]);

    BruteForceResult best;
    best.positions = p_fixed;
    best.value = std::numeric_limits<double>::infinity();

    std::vector<int> idx(L, 0);
    while (true)
    {
        for (int l = 0; l < L; ++l)
            x.weights[l] = phases[idx[l]];
        double v = surrogate_ratio(x, channels, lse_alpha, wavelength);
        if (v < best.value)
        {
            best.value = v;
            best.weights = x.weights;
        }
        // odometer over phase indices, last element fastest
        int l = L - 1;
        while (l >= 0 && ++idx[l] == phase_levels)
            idx[l--] = 0;
        if (l < 0)
            break;
    }
    return best;
}

BruteForceResult brute_force_positions(const ChannelRealization& channels,
                                       const VectorXcd& w_fixed, double grid_step,
                                       double lse_alpha, double wavelength, double aperture)
{
    if (w_fixed.size() != 2)
        throw std::invalid_argument("brute_force_positions: only L = 2 supported");
    if (!(grid_step > 0.0))
        throw std::invalid_argument("brute_force_positions: grid step must be positive");
    const int n = int(std::floor(aperture / grid_step)) + 1;
    if (double(n) * double(n) > kSearchGuard)
        throw std::invalid_argument("brute_force_positions: search space exceeds guard");

    BeamformerPoint x;
    x.weights = w_fixed;
    x.positions.resize(2);

    BruteForceResult best;
    best.weights = w_fixed;
    best.value = std::numeric_limits<double>::infinity();

    for (int i = 0; i < n; ++i)
    {
        for (int k = 0; k < n; ++k)
        {
            x.positions[0] = double(i) * grid_step;
            x.positions[1] = double(k) * grid_step;
            if (constraint_violation(x.positions, wavelength, aperture) > 0.0)
                continue;
            double v = surrogate_ratio(x, channels, lse_alpha, wavelength);
            if (v < best.value)
            {
                best.value = v;
                best.positions = x.positions;
            }
        }
    }
    if (!std::isfinite(best.value))
        throw std::runtime_error("brute_force_positions: no feasible grid point");
    return best;
}

} // namespace secbeam
