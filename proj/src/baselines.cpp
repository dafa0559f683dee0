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

#include "secbeam/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "secbeam/rng.hpp"

namespace secbeam
{

namespace
{

// ---- power-sphere geometry (||w||^2 = radius_sq) --------------------------

VectorXcd sphere_project(const VectorXcd& w, const VectorXcd& grad, double radius_sq)
{
    return grad - (std::real(w.dot(grad)) / radius_sq) * w;
}

VectorXcd sphere_retract(const VectorXcd& w_hat, double radius_sq)
{
    double n = w_hat.norm();
    if (n == 0.0)
        throw std::runtime_error("sphere retraction: zero vector");
    return (std::sqrt(radius_sq) / n) * w_hat;
}

struct SphereDir
{
    VectorXcd w;
    VectorXd p;
};

double sphere_ip(const SphereDir& a, const SphereDir& b)
{
    return std::real(a.w.dot(b.w)) + a.p.dot(b.p);
}

// True for the numerical-degeneracy error raised when lse_alpha is too
// large for the channel scale; such solves fall back to their start point.
bool is_degenerate_error(const std::runtime_error& e)
{
    return std::string(e.what()).find("degenerate") != std::string::npos;
}

// Conjugate-gradient loop on the power sphere x Euclidean product; the
// digital-beamforming counterpart of cgd_solve, sharing the line-search
// machinery so scheme comparisons are apples to apples.
BeamformerPoint sphere_cgd(const BeamformerPoint& start, const ChannelRealization& channels,
                           const SmoothingParams& params, const LineSearchParams& ls,
                           double eps, int max_inner, double wavelength, double aperture,
                           bool freeze_positions, ConvergenceTrace* trace)
{
    const double radius_sq = double(start.weights.size());
    auto objective = [&](const BeamformerPoint& x) {
        return smoothed_objective(x, channels, params, wavelength, aperture);
    };

    BeamformerPoint point = start;
    double phi = objective(point);
    double step_seed = ls.initial_step;
    if (trace)
    {
        trace->inner_loop_starts.push_back(int(trace->inner.size()));
        trace->inner.push_back({phi, 0.0, 0.0, 0});
    }

    SphereDir grad_prev, d_prev;
    bool have_prev = false;

    for (int k = 0; k < max_inner; ++k)
    {
        EuclideanGradient eg = euclidean_gradient(point, channels, params, wavelength, aperture);
        if (freeze_positions)
            eg.wrt_positions.setZero();
        SphereDir grad{sphere_project(point.weights, eg.wrt_weights, radius_sq), eg.wrt_positions};
        double gnorm = std::sqrt(sphere_ip(grad, grad));
        if (gnorm <= eps)
            break;

        SphereDir d;
        if (!have_prev)
            d = {-grad.w, -grad.p};
        else
        {
            SphereDir gp{sphere_project(point.weights, grad_prev.w, radius_sq), grad_prev.p};
            SphereDir dp{sphere_project(point.weights, d_prev.w, radius_sq), d_prev.p};
            SphereDir diff{grad.w - gp.w, grad.p - gp.p};
            double num = sphere_ip(grad, diff);
            double den = sphere_ip(diff, dp);
            double sigma = (num > 0.0 && std::abs(den) > 1e-30) ? std::max(num / den, 0.0) : 0.0;
            d = {-grad.w + sigma * dp.w, -grad.p + sigma * dp.p};
        }
        if (freeze_positions)
            d.p.setZero();

        double directional = sphere_ip(grad, d);
        if (directional >= 0.0)
        {
            d = {-grad.w, -grad.p};
            directional = -gnorm * gnorm;
        }

        bool accepted = false;
        for (int r = 1; r <= ls.max_backtracks; ++r)
        {
            double step = std::pow(ls.tau, r) * step_seed;
            BeamformerPoint cand;
            cand.weights = sphere_retract(point.weights + step * d.w, radius_sq);
            cand.positions = point.positions + step * d.p;
            double phi_c = objective(cand);
            if (phi_c <= phi + ls.armijo_coeff * step * directional)
            {
                point = std::move(cand);
                phi = phi_c;
                if (trace)
                    trace->inner.push_back({phi, gnorm, step, r});
                if (r == 1)
                    step_seed = ls.grow_after_one * step;
                else if (r == 2)
                    step_seed = step;
                else
                    step_seed = ls.shrink_on_backtrack ? ls.tau * step : ls.grow_after_many * step;
                accepted = true;
                break;
            }
        }
        if (!accepted)
            break;
        grad_prev = grad;
        d_prev = d;
        have_prev = true;
    }
    return point;
}

// Matched-filter start on the power sphere: sum of LU channels, rescaled.
VectorXcd fdb_start_weights(const ChannelRealization& channels, const VectorXd& positions,
                            double wavelength)
{
    const Eigen::Index L = positions.size();
    VectorXcd hsum = VectorXcd::Zero(L);
    for (const auto& b : channels.lus)
        hsum += channel_vector(positions, b, wavelength);
    double n = hsum.norm();
    if (n == 0.0)
        return VectorXcd::Constant(L, std::complex<double>(1.0, 0.0));
    return (std::sqrt(double(L)) / n) * hsum;
}

VectorXd uniform_grid_positions(int L, double aperture)
{
    VectorXd p(L);
    double spacing = aperture / double(L - 1);
    for (int l = 0; l < L; ++l)
        p[l] = double(l) * spacing;
    return p;
}

// Frozen-position weight solve at fixed positions, used by the FDB schemes
// and the greedy selector.
FdbResult fdb_fixed(const ScenarioConfig& config, const ChannelRealization& channels,
                    const VectorXd& positions, double eps, int max_inner, ConvergenceTrace* trace)
{
    SmoothingParams params{config.lse_alpha, 1e-4, 1.0};
    LineSearchParams ls;
    BeamformerPoint start{fdb_start_weights(channels, positions, config.wavelength), positions};
    BeamformerPoint sol = start;
    try
    {
        sol = sphere_cgd(start, channels, params, ls, eps, max_inner, config.wavelength,
                         config.aperture, true, trace);
    }
    catch (const std::runtime_error& e)
    {
        if (!is_degenerate_error(e))
            throw;
    }
    FdbResult out;
    out.weights = sol.weights;
    out.positions = positions;
    out.msr = multicast_secrecy_rate(sol, channels, config.wavelength);
    return out;
}

} // namespace

std::string to_string(SchemeId id)
{
    switch (id)
    {
    case SchemeId::ProposedMaAb: return "PROPOSED_MA_AB";
    case SchemeId::MaFdbGd: return "MA_FDB_GD";
    case SchemeId::FpaFdbSs: return "FPA_FDB_SS";
    case SchemeId::MaAbGd: return "MA_AB_GD";
    case SchemeId::FpaFdbUla: return "FPA_FDB_ULA";
    case SchemeId::FpaAbUla: return "FPA_AB_ULA";
    case SchemeId::MaAbR: return "MA_AB_R";
    }
    throw std::logic_error("unknown scheme id");
}

SchemeId scheme_from_string(const std::string& tag)
{
    for (SchemeId id : {SchemeId::ProposedMaAb, SchemeId::MaFdbGd, SchemeId::FpaFdbSs,
                        SchemeId::MaAbGd, SchemeId::FpaFdbUla, SchemeId::FpaAbUla, SchemeId::MaAbR})
        if (to_string(id) == tag)
            return id;
    throw std::invalid_argument("unknown scheme tag: " + tag);
}

VectorXd fpa_ula_positions(int num_antennas, double wavelength)
{
    if (num_antennas < 1)
        throw std::invalid_argument("fpa_ula_positions: L must be >= 1");
    VectorXd p(num_antennas);
    for (int l = 0; l < num_antennas; ++l)
        p[l] = double(l) * wavelength / 2.0;
    return p;
}

VectorXd random_ma_positions(int num_antennas, double aperture, double wavelength, uint64_t seed)
{
    const double slack = aperture - wavelength / 2.0 * double(num_antennas - 1);
    if (slack < 0.0)
        throw std::invalid_argument("random_ma_positions: aperture too small for L antennas");
    // sorted uniforms in the slack interval, then shifted by the minimum
    // spacing: feasible by construction
    Rng rng(seed);
    std::vector<double> u(num_antennas);
    for (auto& x : u)
        x = rng.uniform(0.0, slack);
    std::sort(u.begin(), u.end());
    VectorXd p(num_antennas);
    for (int l = 0; l < num_antennas; ++l)
        p[l] = u[size_t(l)] + wavelength / 2.0 * double(l);
    return p;
}

VectorXcd project_to_cm(const VectorXcd& w_fdb)
{
    VectorXcd out(w_fdb.size());
    for (Eigen::Index l = 0; l < w_fdb.size(); ++l)
    {
        double m = std::abs(w_fdb[l]);
        if (m == 0.0)
            throw std::invalid_argument("project_to_cm: zero element");
        out[l] = w_fdb[l] / m;
    }
    return out;
}

FdbResult fdb_gradient_solve(const ScenarioConfig& config, const ChannelRealization& channels,
                             const VectorXd& positions, bool movable, uint64_t seed)
{
    config.validate();
    if (!movable)
    {
        FdbResult out;
        out.msr = 0.0;
        ConvergenceTrace trace;
        out = fdb_fixed(config, channels, positions, 1e-6, 200, &trace);
        out.trace = std::move(trace);
        return out;
    }

    // movable: outer penalty schedule mirroring the proposed framework
    PcpmSchedule schedule;
    LineSearchParams ls;
    BeamformerPoint point{fdb_start_weights(channels, positions, config.wavelength), positions};

    double gamma = schedule.gamma0, rho = schedule.rho0, eps = schedule.eps0,
           sigma = schedule.sigma0;
    FdbResult out;
    for (int j = 0; j < schedule.max_outer_iters; ++j)
    {
        SmoothingParams params{config.lse_alpha, gamma, rho};
        BeamformerPoint next;
        try
        {
            next = sphere_cgd(point, channels, params, ls, eps, schedule.max_inner_iters,
                              config.wavelength, config.aperture, false, &out.trace);
        }
        catch (const std::runtime_error& e)
        {
            if (!is_degenerate_error(e))
                throw;
            break;
        }
        double viol = constraint_violation(next.positions, config.wavelength, config.aperture);

        double next_gamma = std::max(schedule.gamma_min, gamma * schedule.gamma_decay);
        double next_eps = std::max(schedule.eps_min, eps * schedule.eps_decay);
        double next_sigma = std::max(schedule.sigma_min, sigma * schedule.sigma_decay);
        if (viol >= next_sigma)
            rho /= schedule.rho_divisor;

        double disp = std::sqrt((next.weights - point.weights).squaredNorm() +
                                (next.positions - point.positions).squaredNorm());
        bool at_floors = next_gamma <= schedule.gamma_min && next_eps <= schedule.eps_min &&
                         next_sigma <= schedule.sigma_min;
        point = next;
        gamma = next_gamma;
        eps = next_eps;
        sigma = next_sigma;
        if (disp <= schedule.step_floor && at_floors)
            break;
    }
    out.weights = point.weights;
    out.positions = point.positions;
    out.msr = multicast_secrecy_rate(point, channels, config.wavelength);

    // Second start: the digital feasible set contains the constant-modulus
    // circle, so the CM optimum is a valid sphere point. Refining it at the
    // floor smoothing keeps the relaxation at least as strong as the
    // analog solution whenever the matched-filter start stalls early.
    PcpmResult cm = pcpm_solve(config, channels, schedule, ls, seed);
    BeamformerPoint refined = cm.point;
    try
    {
        SmoothingParams floor_params{config.lse_alpha, schedule.gamma_min, rho};
        refined = sphere_cgd(cm.point, channels, floor_params, ls, schedule.eps_min,
                             schedule.max_inner_iters, config.wavelength, config.aperture, false,
                             &out.trace);
    }
    catch (const std::runtime_error& e)
    {
        if (!is_degenerate_error(e))
            throw;
    }
    for (const BeamformerPoint* cand : {&refined, &cm.point})
    {
        double msr = multicast_secrecy_rate(*cand, channels, config.wavelength);
        if (msr > out.msr)
        {
            out.weights = cand->weights;
            out.positions = cand->positions;
            out.msr = msr;
        }
    }
    return out;
}

VectorXd greedy_antenna_selection(const ScenarioConfig& config, const ChannelRealization& channels,
                                  const VectorXd& candidate_grid, int num_selected)
{
    const int n = int(candidate_grid.size());
    if (n < num_selected)
        throw std::invalid_argument("greedy_antenna_selection: grid smaller than L");
    if (n == num_selected)
        return candidate_grid;

    std::vector<bool> taken(size_t(n), false);
    std::vector<double> selected;
    for (int step = 0; step < num_selected; ++step)
    {
        double best_msr = -std::numeric_limits<double>::infinity();
        int best_idx = -1;
        for (int i = 0; i < n; ++i)
        {
            if (taken[size_t(i)])
                continue;
            std::vector<double> pos = selected;
            pos.push_back(candidate_grid[i]);
            std::sort(pos.begin(), pos.end());
            VectorXd pv = Eigen::Map<VectorXd>(pos.data(), Eigen::Index(pos.size()));
            FdbResult f = fdb_fixed(config, channels, pv, 1e-4, 60, nullptr);
            if (f.msr > best_msr)
            {
                best_msr = f.msr;
                best_idx = i;
            }
        }
        taken[size_t(best_idx)] = true;
        selected.push_back(candidate_grid[best_idx]);
    }
    std::sort(selected.begin(), selected.end());
    return Eigen::Map<VectorXd>(selected.data(), Eigen::Index(selected.size()));
}

SchemeResult run_scheme(SchemeId scheme, const ScenarioConfig& config,
                        const ChannelRealization& channels, uint64_t seed)
{
    return run_scheme(scheme, config, channels, channels, seed);
}

SchemeResult run_scheme(SchemeId scheme, const ScenarioConfig& config,
                        const ChannelRealization& est_channels,
                        const ChannelRealization& eval_channels, uint64_t seed)
{
    config.validate();
    SchemeResult out;
    const double lam = config.wavelength;

    auto ab_fixed = [&](const VectorXd& positions) {
        SmoothingParams params{config.lse_alpha, 1e-4, 1.0};
        LineSearchParams ls;
        VectorXcd hsum = VectorXcd::Zero(positions.size());
        for (const auto& b : est_channels.lus)
            hsum += channel_vector(positions, b, lam);
        VectorXcd w0(positions.size());
        for (Eigen::Index l = 0; l < positions.size(); ++l)
        {
            double m = std::abs(hsum[l]);
            w0[l] = m > 0.0 ? hsum[l] / m : std::complex<double>(1.0, 0.0);
        }
        CgdOptions opts;
        opts.freeze_positions = true;
        out.weights = w0;
        out.positions = positions;
        try
        {
            CgdResult res = cgd_solve({w0, positions}, est_channels, params, ls, 1e-6, 200, lam,
                                      config.aperture, out.trace, opts);
            out.weights = res.point.weights;
            out.positions = res.point.positions;
        }
        catch (const std::runtime_error& e)
        {
            if (!is_degenerate_error(e))
                throw;
        }
    };

    switch (scheme)
    {
    case SchemeId::ProposedMaAb:
    {
        PcpmResult r = pcpm_solve(config, est_channels, PcpmSchedule{}, LineSearchParams{}, seed);
        out.weights = r.point.weights;
        out.positions = r.point.positions;
        out.trace = std::move(r.trace);
        break;
    }
    case SchemeId::MaFdbGd:
    {
        FdbResult f = fdb_gradient_solve(config, est_channels,
                                         uniform_grid_positions(config.num_antennas, config.aperture),
                                         true, seed);
        out.weights = f.weights;
        out.positions = f.positions;
        out.trace = std::move(f.trace);
        break;
    }
    case SchemeId::FpaFdbSs:
    {
        int grid_n = int(std::floor(config.aperture / (lam / 2.0))) + 1;
        VectorXd grid = fpa_ula_positions(grid_n, lam);
        VectorXd pos = greedy_antenna_selection(config, est_channels, grid, config.num_antennas);
        FdbResult f = fdb_gradient_solve(config, est_channels, pos, false, seed);
        out.weights = f.weights;
        out.positions = f.positions;
        out.trace = std::move(f.trace);
        break;
    }
    case SchemeId::MaAbGd:
    {
        FdbResult f = fdb_gradient_solve(config, est_channels,
                                         uniform_grid_positions(config.num_antennas, config.aperture),
                                         true, seed);
        out.weights = project_to_cm(f.weights);
        out.positions = f.positions;
        out.trace = std::move(f.trace);
        break;
    }
    case SchemeId::FpaFdbUla:
    {
        FdbResult f = fdb_gradient_solve(config, est_channels,
                                         fpa_ula_positions(config.num_antennas, lam), false, seed);
        out.weights = f.weights;
        out.positions = f.positions;
        out.trace = std::move(f.trace);
        break;
    }
    case SchemeId::FpaAbUla:
        ab_fixed(fpa_ula_positions(config.num_antennas, lam));
        break;
    case SchemeId::MaAbR:
        ab_fixed(random_ma_positions(config.num_antennas, config.aperture, lam, seed));
        break;
    }

    out.msr = multicast_secrecy_rate({out.weights, out.positions}, eval_channels, lam);
    out.violation = constraint_violation(out.positions, lam, config.aperture);
    return out;
}

} // namespace secbeam
