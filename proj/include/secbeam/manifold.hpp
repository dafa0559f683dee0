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

// Geometry of the product of the complex circle manifold (weights) and
// Euclidean space (positions): tangent projection, retraction, transport,
// and the real inner product on the unified tangent space.

#pragma once

#include <stdexcept>

#include "secbeam/objective.hpp"

namespace secbeam
{

// A direction in the unified tangent space: the complex part satisfies
// Re(w_part .* conj(w)) = 0 at its anchor, the real part is free.
struct TangentVector
{
    VectorXcd w;
    VectorXd p;
};

// grad - Re(grad .* conj(w)) .* w; removes the radial component per element.
inline VectorXcd project_to_tangent(const VectorXcd& w, const VectorXcd& euclidean_grad)
{
    VectorXcd out(w.size());
    for (Eigen::Index l = 0; l < w.size(); ++l)
        out[l] = euclidean_grad[l] -
                 std::real(euclidean_grad[l] * std::conj(w[l])) * w[l];
    return out;
}

// Weight block projected, position block passed through (flat space).
inline TangentVector riemannian_gradient(const BeamformerPoint& point,
                                         const EuclideanGradient& euclid)
{
    return {project_to_tangent(point.weights, euclid.wrt_weights), euclid.wrt_positions};
}

// w <- w_hat / |w_hat| elementwise; positions pass through unchanged.
// A zero-modulus element signals a pathological step and is a hard error.
inline BeamformerPoint retract(const VectorXcd& w_hat, const VectorXd& p_hat)
{
    BeamformerPoint out;
    out.weights.resize(w_hat.size());
    for (Eigen::Index l = 0; l < w_hat.size(); ++l)
    {
        double m = std::abs(w_hat[l]);
        if (m == 0.0)
            throw std::runtime_error("retract: zero-modulus weight element");
        out.weights[l] = w_hat[l] / m;
    }
    out.positions = p_hat;
    return out;
}

// Re-projects the weight block into the tangent space at w_new; the
// position block is carried over unchanged.
inline TangentVector transport(const VectorXcd& w_new, const TangentVector& d_old)
{
    return {project_to_tangent(w_new, d_old.w), d_old.p};
}

// Re(a_w^H b_w) + a_p^T b_p
inline double inner_product(const TangentVector& a, const TangentVector& b)
{
    if (a.w.size() != b.w.size() || a.p.size() != b.p.size())
        throw std::invalid_argument("inner_product: dimension mismatch");
    return std::real(a.w.dot(b.w)) + a.p.dot(b.p);
}

inline double tangent_norm(const TangentVector& a)
{
    return std::sqrt(inner_product(a, a));
}

} // namespace secbeam
