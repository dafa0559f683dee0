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

#include "secbeam/pcpm.hpp"

#include <cmath>
#include <stdexcept>

#include "secbeam/rng.hpp"

namespace secbeam
{

namespace
{
constexpr double kDenominatorFloor = 1e-30;

double cm_error(const VectorXcd& w)
{
    double m = 0.0;
    for (Eigen::Index l = 0; l < w.size(); ++l)
        m = std::max(m, std::abs(std::abs(w[l]) - 1.0));
    return m;
}

double tangent_residual(const TangentVector& xi, const VectorXcd& w)
{
    double m = 0.0;
    for (Eigen::Index l = 0; l < w.size(); ++l)
        m = std::max(m, std::abs(std::real(xi.w[l] * std::conj(w[l]))));
    return m;
}
} // namespace

void LineSearchParams::validate() const
{
    if (!(tau > 0.0 && tau < 1.0))
        throw std::invalid_argument("line search: tau must be in (0,1)");
    if (!(initial_step > 0.0))
        throw std::invalid_argument("line search: initial step must be positive");
    if (!(armijo_coeff > 0.0 && armijo_coeff <= 1.0))
        throw std::invalid_argument("line search: armijo_coeff must be in (0,1]");
    if (!(grow_after_one > 1.0) || !(grow_after_many > 1.0))
        throw std::invalid_argument("line search: growth factors must exceed 1");
    if (max_backtracks < 1)
        throw std::invalid_argument("line search: max_backtracks must be >= 1");
}

void PcpmSchedule::validate() const
{
    auto in01 = [](double x) { return x > 0.0 && x < 1.0; };
    if (!in01(gamma_decay) || !in01(rho_divisor) || !in01(eps_decay) || !in01(sigma_decay))
        throw std::invalid_argument("schedule: decay factors must be in (0,1)");
    if (gamma_min < 0.0 || eps_min < 0.0 || sigma_min < 0.0)
        throw std::invalid_argument("schedule: floors must be non-negative");
    if (!(gamma0 > 0.0 && rho0 > 0.0 && eps0 > 0.0 && sigma0 > 0.0 && step_floor > 0.0))
        throw std::invalid_argument("schedule: initial parameters must be positive");
    if (max_outer_iters < 1 || max_inner_iters < 1)
        throw std::invalid_argument("schedule: iteration caps must be >= 1");
}

double conjugate_parameter(const TangentVector& grad_k, const TangentVector& grad_prev,
                           const TangentVector& d_prev, const VectorXcd& w_k)
{
    TangentVector gp = transport(w_k, grad_prev);
    TangentVector dp = transport(w_k, d_prev);
    TangentVector diff{grad_k.w - gp.w, grad_k.p - gp.p};
    double num = inner_product(grad_k, diff);
    if (num <= 0.0)
        return 0.0;
    double den = inner_product(diff, dp);
    if (std::abs(den) < kDenominatorFloor)
        return 0.0;
    return std::max(num / den, 0.0);
}

TangentVector conjugate_direction(const TangentVector& grad_k, double sigma,
                                  const TangentVector& d_prev_transported)
{
    return {-grad_k.w + sigma * d_prev_transported.w, -grad_k.p + sigma * d_prev_transported.p};
}

ArmijoResult armijo_search(const BeamformerPoint& point, const TangentVector& d,
                           double phi_current, double directional, double step_seed,
                           const LineSearchParams& params, const ObjectiveFn& objective)
{
    params.validate();
    if (!(directional < 0.0))
        throw std::invalid_argument("armijo_search: direction is not a descent direction");

    ArmijoResult out;
    for (int r = 1; r <= params.max_backtracks; ++r)
    {
        double step = std::pow(params.tau, r) * step_seed;
        BeamformerPoint candidate = retract(point.weights + step * d.w, point.positions + step * d.p);
        double phi = objective(candidate);
        if (phi <= phi_current + params.armijo_coeff * step * directional)
        {
            out.point = std::move(candidate);
            out.objective = phi;
            out.step = step;
            out.backtracks = r;
            out.success = true;
            return out;
        }
    }
    out.backtracks = params.max_backtracks;
    return out;
}

CgdResult cgd_solve(const BeamformerPoint& start, const ChannelRealization& channels,
                    const SmoothingParams& params, const LineSearchParams& ls,
                    double eps_threshold, int max_inner, double wavelength, double aperture,
                    ConvergenceTrace& trace, const CgdOptions& opts)
{
    params.validate();
    ls.validate();
    if (cm_error(start.weights) > 1e-9)
        throw std::invalid_argument("cgd_solve: start weights are not unit-modulus");

    ObjectiveFn objective = [&](const BeamformerPoint& x) {
        return smoothed_objective(x, channels, params, wavelength, aperture);
    };

    CgdResult res;
    res.point = start;
    double phi = objective(res.point);
    double step_seed = ls.initial_step;

    trace.inner_loop_starts.push_back(int(trace.inner.size()));
    trace.max_cm_error = std::max(trace.max_cm_error, cm_error(res.point.weights));

    TangentVector grad_prev, d_prev;
    bool have_prev = false;

    for (int k = 0; k < max_inner; ++k)
    {
        EuclideanGradient eg = euclidean_gradient(res.point, channels, params, wavelength, aperture);
        if (opts.freeze_positions)
            eg.wrt_positions.setZero();
        TangentVector grad = riemannian_gradient(res.point, eg);
        trace.max_tangent_residual =
            std::max(trace.max_tangent_residual, tangent_residual(grad, res.point.weights));
        double gnorm = tangent_norm(grad);

        if (k == 0)
            trace.inner.push_back({phi, gnorm, 0.0, 0});

        if (gnorm <= eps_threshold)
        {
            res.status = SolveStatus::Converged;
            res.iterations = k;
            return res;
        }

        TangentVector d;
        if (!have_prev)
            d = conjugate_direction(grad, 0.0, grad); // sigma = 0: steepest descent
        else
        {
            double sigma = conjugate_parameter(grad, grad_prev, d_prev, res.point.weights);
            d = conjugate_direction(grad, sigma, transport(res.point.weights, d_prev));
        }
        if (opts.freeze_positions)
            d.p.setZero();

        double directional = inner_product(grad, d);
        if (directional >= 0.0)
        {
            // non-descent conjugate direction: restart to steepest descent
            d = {-grad.w, -grad.p};
            directional = -gnorm * gnorm;
        }

        ArmijoResult ar = armijo_search(res.point, d, phi, directional, step_seed, ls, objective);
        if (!ar.success)
        {
            res.status = SolveStatus::LineSearchFailure;
            res.iterations = k;
            res.objective = phi;
            return res;
        }

        res.point = ar.point;
        phi = ar.objective;
        trace.max_cm_error = std::max(trace.max_cm_error, cm_error(res.point.weights));
        trace.inner.push_back({phi, gnorm, ar.step, ar.backtracks});

        // step-seed update rule keyed on the accepted backtrack count
        if (ar.backtracks == 1)
            step_seed = ls.grow_after_one * ar.step;
        else if (ar.backtracks == 2)
            step_seed = ar.step;
        else
            step_seed = ls.shrink_on_backtrack ? ls.tau * ar.step : ls.grow_after_many * ar.step;

        grad_prev = grad;
        d_prev = d;
        have_prev = true;
        res.iterations = k + 1;
    }
    res.status = SolveStatus::IterationLimit;
    res.objective = phi;
    return res;
}

BeamformerPoint initialize(const ScenarioConfig& config, const ChannelRealization& channels,
                           InitStrategy strategy, uint64_t seed)
{
    config.validate();
    const int L = config.num_antennas;
    const double spacing = config.aperture / double(L - 1);
    if (spacing < config.wavelength / 2.0)
        throw std::invalid_argument("initialize: aperture too small for a feasible uniform grid");

    BeamformerPoint p0;
    p0.positions.resize(L);
    for (int l = 0; l < L; ++l)
        p0.positions[l] = double(l) * spacing;

    p0.weights.resize(L);
    if (strategy == InitStrategy::RandomPhase)
    {
        Rng rng(seed);
        for (int l = 0; l < L; ++l)
            p0.weights[l] = std::polar(1.0, rng.uniform(0.0, 2.0 * 3.141592653589793238462643383279));
    }
    else
    {
        VectorXcd hsum = VectorXcd::Zero(L);
        for (const auto& b : channels.lus)
            hsum += channel_vector(p0.positions, b, config.wavelength);
        for (int l = 0; l < L; ++l)
        {
            double m = std::abs(hsum[l]);
            p0.weights[l] = m > 0.0 ? hsum[l] / m : std::complex<double>(1.0, 0.0);
        }
    }
    return p0;
}

PcpmResult pcpm_solve(const ScenarioConfig& config, const ChannelRealization& channels,
                      const PcpmSchedule& schedule, const LineSearchParams& ls, uint64_t seed,
                      InitStrategy strategy, const CgdOptions& opts)
{
    config.validate();
    schedule.validate();

    PcpmResult out;
    out.point = initialize(config, channels, strategy, seed);

    double gamma = schedule.gamma0;
    double rho = schedule.rho0;
    double eps = schedule.eps0;
    double sigma = schedule.sigma0;

    for (int j = 0; j < schedule.max_outer_iters; ++j)
    {
        SmoothingParams params{config.lse_alpha, gamma, rho};
        size_t inner_before = out.trace.inner.size();
        CgdResult res;
        try
        {
            res = cgd_solve(out.point, channels, params, ls, eps, schedule.max_inner_iters,
                            config.wavelength, config.aperture, out.trace, opts);
        }
        catch (const std::runtime_error& e)
        {
            // An overly large lse_alpha can drive the surrogate denominator
            // non-positive; the smoothed problem is then undefined and the
            // best available answer is the last valid iterate (initially the
            // feasible starting point).
            if (std::string(e.what()).find("degenerate") == std::string::npos)
                throw;
            break;
        }

        double viol = constraint_violation(res.point.positions, config.wavelength, config.aperture);
        OuterRecord rec;
        rec.gamma = gamma;
        rec.rho = rho;
        rec.eps = eps;
        rec.sigma = sigma;
        rec.max_violation = viol;
        rec.msr = multicast_secrecy_rate(res.point, channels, config.wavelength);
        rec.ratio = surrogate_ratio(res.point, channels, config.lse_alpha, config.wavelength);
        rec.objective = smoothed_objective(res.point, channels, params, config.wavelength,
                                           config.aperture);
        rec.inner_iters = int(out.trace.inner.size() - inner_before);
        out.trace.outer.push_back(rec);
        out.trace.status = res.status;

        double next_gamma = std::max(schedule.gamma_min, gamma * schedule.gamma_decay);
        double next_eps = std::max(schedule.eps_min, eps * schedule.eps_decay);
        double next_sigma = std::max(schedule.sigma_min, sigma * schedule.sigma_decay);
        if (viol >= next_sigma)
            rho = rho / schedule.rho_divisor;

        double displacement = std::sqrt((res.point.weights - out.point.weights).squaredNorm() +
                                        (res.point.positions - out.point.positions).squaredNorm());
        bool at_floors = next_gamma <= schedule.gamma_min && next_eps <= schedule.eps_min &&
                         next_sigma <= schedule.sigma_min;

        out.point = res.point;
        gamma = next_gamma;
        eps = next_eps;
        sigma = next_sigma;

        if (displacement <= schedule.step_floor && at_floors)
            break;
    }

    out.msr = multicast_secrecy_rate(out.point, channels, config.wavelength);
    out.violation = constraint_violation(out.point.positions, config.wavelength, config.aperture);
    return out;
}

} // namespace secbeam
