// SPDX-License-Identifier: Apache-2.0
//
// eit-coherence: field degrees of freedom from radiation operators and cross-spectral densities
// Copyright (C) 2026 The eit-coherence authors
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

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string_view>

#include <Eigen/Dense>

#include "error.hpp"
#include "geometry.hpp"
#include "kernels.hpp"
#include "parallel.hpp"
#include "source_model.hpp"
#include "spectral.hpp"

namespace eit
{

/// Name recorded in output manifests; changing the generator must change this string.
inline constexpr std::string_view rng_algorithm = "splitmix64-counter/polar-exponential-v1";

struct EnsembleConfig
{
    std::size_t n_realizations = 2;
    std::uint64_t seed = 0;
    SourceModel src;
    ObservationSet obs;
    WaveContext wc;

    void validate() const
    {
        if (n_realizations < 2)
            throw DomainError("EnsembleConfig: at least 2 realizations are required");
        obs.validate();
        if (src.size() == 0)
            throw DomainError("EnsembleConfig: empty source model");
    }
};

namespace detail
{
inline constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Uniform in (0, 1], a pure function of (seed, realization, node, stream).
inline double counter_uniform(std::uint64_t seed, std::uint64_t realization, std::uint64_t node,
                              std::uint64_t stream) noexcept
{
    std::uint64_t h = splitmix64(seed);
    h = splitmix64(h ^ realization);
    h = splitmix64(h ^ (node << 1 | stream));
    return (static_cast<double>(h >> 11) + 1.0) * 0x1.0p-53;
}
} // namespace detail

/// Realization `index` of the incoherent source currents: independent circular complex
/// Gaussians with E|J_q|^2 = I_q / w_q, so that (w_q J_q) has covariance I_q w_q delta_qp.
/// Sampled as sqrt(variance * Exp(1)) * exp(j 2 pi U).
inline CVector draw_realization(const EnsembleConfig &cfg, std::size_t index)
{
    if (index >= cfg.n_realizations)
        throw RangeError("draw_realization: index out of range");
    const auto q_count = static_cast<Eigen::Index>(cfg.src.size());
    CVector j(q_count);
    for (Eigen::Index q = 0; q < q_count; ++q)
    {
        const auto qi = static_cast<std::size_t>(q);
        const double var = cfg.src.intensity[qi] / cfg.src.weights[qi];
        const double u1 = detail::counter_uniform(cfg.seed, index, qi, 0);
        const double u2 = detail::counter_uniform(cfg.seed, index, qi, 1);
        const double mag = std::sqrt(-var * std::log(u1));
        const double ph = 2.0 * std::numbers::pi * u2;
        j(q) = complex(mag * std::cos(ph), mag * std::sin(ph));
    }
    return j;
}

/// Field of one realization, E_m = sum_q w_q J_q G(r_m, r'_q).
inline CVector propagate(const CVector &realization, const ObservationSet &obs, const SourceModel &src,
                         const WaveContext &wc)
{
    if (realization.size() != static_cast<Eigen::Index>(src.size()))
        throw ContractViolation("propagate: realization length does not match the source nodes");
    const CMatrix g = green_matrix(obs, src, wc);
    CVector wj(realization.size());
    for (Eigen::Index q = 0; q < wj.size(); ++q)
        wj(q) = src.weights[static_cast<std::size_t>(q)] * realization(q);
    return g * wj;
}

/// Fields of every realization as columns, rows scaled by sqrt(obs weight) in continuous
/// mode (the same scaling as build_csd_matrix). Columns are computed independently, so the
/// result is bitwise identical for any thread count.
inline CMatrix ensemble_fields(const EnsembleConfig &cfg)
{
    cfg.validate();
    CMatrix g = green_matrix(cfg.obs, cfg.src, cfg.wc);
    if (cfg.obs.continuous())
        for (std::size_t m = 0; m < cfg.obs.size(); ++m)
            g.row(static_cast<Eigen::Index>(m)) *= std::sqrt(cfg.obs.weights[m]);

    CMatrix fields(g.rows(), static_cast<Eigen::Index>(cfg.n_realizations));
    parallel_for(cfg.n_realizations, [&](std::size_t r) {
        CVector wj = draw_realization(cfg, r);
        for (Eigen::Index q = 0; q < wj.size(); ++q)
            wj(q) *= cfg.src.weights[static_cast<std::size_t>(q)];
        // Plain loop: no dependence on BLAS blocking.
        for (Eigen::Index m = 0; m < g.rows(); ++m)
        {
            complex acc(0.0, 0.0);
            for (Eigen::Index q = 0; q < g.cols(); ++q)
                acc += g(m, q) * wj(q);
            fields(m, static_cast<Eigen::Index>(r)) = acc;
        }
    });
    return fields;
}

/// (1/M) sum_m E^(m) E^(m)^H, accumulated in realization order. Hermitian by construction.
inline CMatrix empirical_csd(const CMatrix &fields)
{
    const Eigen::Index n = fields.rows(), m_count = fields.cols();
    if (m_count < 2)
        throw DomainError("empirical_csd: at least 2 realizations are required");
    CMatrix w = CMatrix::Zero(n, n);
    for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index i = j; i < n; ++i)
        {
            complex acc(0.0, 0.0);
            for (Eigen::Index r = 0; r < m_count; ++r)
                acc += fields(i, r) * std::conj(fields(j, r));
            acc /= static_cast<double>(m_count);
            w(i, j) = i == j ? complex(acc.real(), 0.0) : acc;
            w(j, i) = std::conj(w(i, j));
        }
    return w;
}

inline CMatrix empirical_csd(const EnsembleConfig &cfg) { return empirical_csd(ensemble_fields(cfg)); }

/// Covariance of the Karhunen-Loeve coefficients a_n = <psi_n, E> over the ensemble;
/// diagonal ~ lambda_n, off-diagonal ~ 0.
inline CMatrix kl_coefficient_covariance(const CMatrix &fields, const CSDEigensystem &eig, std::size_t n_modes)
{
    if (eig.eigenvectors.rows() != fields.rows())
        throw ContractViolation("kl_coefficient_covariance: eigenvectors and fields differ in length");
    if (n_modes == 0 || static_cast<Eigen::Index>(n_modes) > eig.eigenvectors.cols())
        throw ContractViolation("kl_coefficient_covariance: n_modes out of range");
    const auto n = static_cast<Eigen::Index>(n_modes);
    const CMatrix a = eig.eigenvectors.leftCols(n).adjoint() * fields; // n x M
    CMatrix c = CMatrix::Zero(n, n);
    for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index i = 0; i < n; ++i)
        {
            complex acc(0.0, 0.0);
            for (Eigen::Index r = 0; r < a.cols(); ++r)
                acc += a(i, r) * std::conj(a(j, r));
            c(i, j) = acc / static_cast<double>(a.cols());
        }
    return c;
}

inline CMatrix kl_coefficient_covariance(const EnsembleConfig &cfg, const CSDEigensystem &eig, std::size_t n_modes)
{
    return kl_coefficient_covariance(ensemble_fields(cfg), eig, n_modes);
}

} // namespace eit
