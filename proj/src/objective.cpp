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

#include "secbeam/objective.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace secbeam
{

namespace
{
constexpr double kPi = 3.141592653589793238462643383279;
constexpr double kDegeneracyFloor = 1e-12;

// Per-user quantities shared by the objective and both gradient blocks.
struct UserEval
{
    VectorXcd h;                // channel vector at p
    std::complex<double> psi;   // h^H w
    double c;                   // 1 + t |h^H w|^2
    double t;
};

std::vector<UserEval> evaluate_users(const std::vector<UserPaths>& users, const VectorXd& p,
                                     const VectorXcd& w, double wavelength)
{
    std::vector<UserEval> out;
    out.reserve(users.size());
    for (const auto& u : users)
    {
        UserEval e;
        e.h = channel_vector(p, u, wavelength);
        e.psi = e.h.dot(w); // conjugates e.h
        e.t = u.snr_scale;
        e.c = 1.0 + e.t * std::norm(e.psi);
        out.push_back(std::move(e));
    }
    return out;
}

// u_e = alpha * log sum exp(c/alpha): tight upper bound on max_e c_e
double lse_max(const std::vector<UserEval>& ev, double alpha)
{
    double m = ev.front().c;
    for (const auto& e : ev)
        m = std::max(m, e.c);
    double s = 0.0;
    for (const auto& e : ev)
        s += std::exp((e.c - m) / alpha);
    return m + alpha * std::log(s);
}

// u_b = -alpha * log sum exp(-c/alpha): tight lower bound on min_b c_b
double lse_min(const std::vector<UserEval>& ev, double alpha)
{
    double m = ev.front().c;
    for (const auto& e : ev)
        m = std::min(m, e.c);
    double s = 0.0;
    for (const auto& e : ev)
        s += std::exp(-(e.c - m) / alpha);
    return m - alpha * std::log(s);
}

// Softmax weights; sign = +1 for the EVE (max) side, -1 for the LU (min) side.
VectorXd softmax_weights(const std::vector<UserEval>& ev, double alpha, double sign)
{
    double m = sign * ev.front().c;
    for (const auto& e : ev)
        m = std::max(m, sign * e.c);
    VectorXd s(Eigen::Index(ev.size()));
    double total = 0.0;
    for (size_t i = 0; i < ev.size(); ++i)
    {
        s[Eigen::Index(i)] = std::exp((sign * ev[i].c - m) / alpha);
        total += s[Eigen::Index(i)];
    }
    return s / total;
}

// Gradient of u w.r.t. w: sum_i s_i * t_i * 2 h_i h_i^H w = sum_i s_i t_i 2 h_i psi_i
VectorXcd group_grad_w(const std::vector<UserEval>& ev, const VectorXd& s)
{
    VectorXcd g = VectorXcd::Zero(ev.front().h.size());
    for (size_t i = 0; i < ev.size(); ++i)
        g += s[Eigen::Index(i)] * ev[i].t * 2.0 * ev[i].psi * ev[i].h;
    return g;
}

// Gradient of u w.r.t. p. dpsi/dp_l = w_l * sum_m conj(beta_m) (-j k_m) e^{-j k_m p_l}
VectorXd group_grad_p(const std::vector<UserEval>& ev, const std::vector<UserPaths>& users,
                      const VectorXd& s, const VectorXd& p, const VectorXcd& w,
                      double wavelength)
{
    const Eigen::Index L = p.size();
    VectorXd g = VectorXd::Zero(L);
    for (size_t i = 0; i < ev.size(); ++i)
    {
        const auto& u = users[i];
        const double wgt = s[Eigen::Index(i)] * ev[i].t;
        for (Eigen::Index l = 0; l < L; ++l)
        {
            std::complex<double> dpsi(0.0, 0.0);
            for (Eigen::Index m = 0; m < u.angles.size(); ++m)
            {
                double k = 2.0 * kPi / wavelength * std::cos(u.angles[m]);
                dpsi += std::conj(u.gains[m]) * std::complex<double>(0.0, -k) *
                        std::polar(1.0, -k * p[l]);
            }
            dpsi *= w[l];
            g[l] += wgt * 2.0 * std::real(std::conj(ev[i].psi) * dpsi);
        }
    }
    return g;
}

double logistic(double x) { return x >= 0.0 ? 1.0 / (1.0 + std::exp(-x)) : std::exp(x) / (1.0 + std::exp(x)); }

} // namespace

void SmoothingParams::validate() const
{
    if (!(lse_alpha > 0.0) || !(penalty_gamma > 0.0) || !(penalty_rho > 0.0))
        throw std::invalid_argument("smoothing parameters must be strictly positive");
}

double softplus(double x) { return std::max(x, 0.0) + std::log1p(std::exp(-std::abs(x))); }

double log_sum_exp(const VectorXd& values, double alpha)
{
    if (values.size() == 0)
        throw std::invalid_argument("log_sum_exp: empty input");
    if (!(alpha > 0.0))
        throw std::invalid_argument("log_sum_exp: alpha must be positive");
    double m = values.maxCoeff();
    double s = 0.0;
    for (Eigen::Index i = 0; i < values.size(); ++i)
        s += std::exp((values[i] - m) / alpha);
    return m + alpha * std::log(s);
}

double multicast_secrecy_rate(const BeamformerPoint& point, const ChannelRealization& channels,
                              double wavelength)
{
    double min_lu = std::numeric_limits<double>::infinity();
    for (const auto& b : channels.lus)
    {
        std::complex<double> psi = channel_vector(point.positions, b, wavelength).dot(point.weights);
        min_lu = std::min(min_lu, std::log2(1.0 + b.snr_scale * std::norm(psi)));
    }
    double max_eve = 0.0;
    for (const auto& e : channels.eves)
    {
        std::complex<double> psi = channel_vector(point.positions, e, wavelength).dot(point.weights);
        max_eve = std::max(max_eve, std::log2(1.0 + e.snr_scale * std::norm(psi)));
    }
    return std::max(min_lu - max_eve, 0.0);
}

double penalty_value(const VectorXd& positions, const SmoothingParams& params, double wavelength,
                     double aperture)
{
    params.validate();
    const Eigen::Index L = positions.size();
    const double g = params.penalty_gamma;
    double sum = softplus(-positions[0] / g);                // f1 = -p1
    sum += softplus((positions[L - 1] - aperture) / g);      // f2 = pL - D
    for (Eigen::Index l = 0; l + 1 < L; ++l)                 // g_l = p_l - p_{l+1} + lambda/2
        sum += softplus((positions[l] - positions[l + 1] + wavelength / 2.0) / g);
    return params.penalty_rho * g * sum;
}

double constraint_violation(const VectorXd& positions, double wavelength, double aperture)
{
    const Eigen::Index L = positions.size();
    double v = std::max(0.0, -positions[0]);
    v = std::max(v, positions[L - 1] - aperture);
    for (Eigen::Index l = 0; l + 1 < L; ++l)
        v = std::max(v, positions[l] - positions[l + 1] + wavelength / 2.0);
    return v;
}

double surrogate_ratio(const BeamformerPoint& point, const ChannelRealization& channels,
                       double lse_alpha, double wavelength)
{
    if (!(lse_alpha > 0.0))
        throw std::invalid_argument("surrogate_ratio: alpha must be positive");
    if (channels.lus.empty())
        throw std::invalid_argument("surrogate_ratio: at least one LU required");
    auto lus = evaluate_users(channels.lus, point.positions, point.weights, wavelength);
    auto eves = evaluate_users(channels.eves, point.positions, point.weights, wavelength);
    double ub = lse_min(lus, lse_alpha);
    if (ub <= kDegeneracyFloor)
        throw std::runtime_error("surrogate_ratio: LU denominator numerically degenerate");
    // no eavesdroppers: the numerator degenerates to c = 1 (zero leakage rate)
    double ue = eves.empty() ? 1.0 : lse_max(eves, lse_alpha);
    return ue / ub;
}

double smoothed_objective(const BeamformerPoint& point, const ChannelRealization& channels,
                          const SmoothingParams& params, double wavelength, double aperture)
{
    params.validate();
    if (channels.lus.empty())
        throw std::invalid_argument("smoothed_objective: at least one LU required");
    auto lus = evaluate_users(channels.lus, point.positions, point.weights, wavelength);
    auto eves = evaluate_users(channels.eves, point.positions, point.weights, wavelength);
    double ue = eves.empty() ? 1.0 : lse_max(eves, params.lse_alpha);
    double ub = lse_min(lus, params.lse_alpha);
    if (ub <= kDegeneracyFloor)
        throw std::runtime_error("smoothed_objective: LU denominator numerically degenerate");
    return ue / ub + penalty_value(point.positions, params, wavelength, aperture);
}

EuclideanGradient euclidean_gradient(const BeamformerPoint& point,
                                     const ChannelRealization& channels,
                                     const SmoothingParams& params, double wavelength,
                                     double aperture)
{
    params.validate();
    if (channels.lus.empty())
        throw std::invalid_argument("euclidean_gradient: at least one LU required");
    const VectorXd& p = point.positions;
    const VectorXcd& w = point.weights;
    const Eigen::Index L = p.size();
    const double alpha = params.lse_alpha;

    auto lus = evaluate_users(channels.lus, p, w, wavelength);
    auto eves = evaluate_users(channels.eves, p, w, wavelength);
    double ue = eves.empty() ? 1.0 : lse_max(eves, alpha);
    double ub = lse_min(lus, alpha);
    if (ub <= kDegeneracyFloor)
        throw std::runtime_error("euclidean_gradient: LU denominator numerically degenerate");

    VectorXd sb = softmax_weights(lus, alpha, -1.0);
    VectorXcd dub_w = group_grad_w(lus, sb);
    VectorXd dub_p = group_grad_p(lus, channels.lus, sb, p, w, wavelength);

    VectorXcd due_w = VectorXcd::Zero(L);
    VectorXd due_p = VectorXd::Zero(L);
    if (!eves.empty())
    {
        VectorXd se = softmax_weights(eves, alpha, +1.0);
        due_w = group_grad_w(eves, se);
        due_p = group_grad_p(eves, channels.eves, se, p, w, wavelength);
    }

    EuclideanGradient g;
    double inv_ub2 = 1.0 / (ub * ub);
    g.wrt_weights = (ub * due_w - ue * dub_w) * inv_ub2;
    g.wrt_positions = (ub * due_p - ue * dub_p) * inv_ub2;

    // softplus chain rule: d/dp [rho*gamma*log(1+e^{g/gamma})] = rho*sigma(g/gamma)*dg/dp
    const double gam = params.penalty_gamma;
    const double rho = params.penalty_rho;
    g.wrt_positions[0] += rho * logistic(-p[0] / gam) * (-1.0);
    g.wrt_positions[L - 1] += rho * logistic((p[L - 1] - aperture) / gam);
    for (Eigen::Index l = 0; l + 1 < L; ++l)
    {
        double s = rho * logistic((p[l] - p[l + 1] + wavelength / 2.0) / gam);
        g.wrt_positions[l] += s;
        g.wrt_positions[l + 1] -= s;
    }
    return g;
}

} // namespace secbeam
