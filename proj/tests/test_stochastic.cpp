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

#include <cmath>
#include <cstring>

#include <gtest/gtest.h>

#include "eit/stochastic.hpp"

using namespace eit;

namespace
{
const WaveContext wc = WaveContext::from_wavelength(1.0);
const LineSource line8 = LineSource::with_length(8.0);

EnsembleConfig small_config(std::size_t m, std::uint64_t seed = 7)
{
    EnsembleConfig cfg;
    cfg.n_realizations = m;
    cfg.seed = seed;
    cfg.src = build_quadrature(line8, homogeneous_intensity(), wc, 10.0);
    cfg.obs = semicircular_arc(60.0, 48);
    cfg.wc = wc;
    return cfg;
}

bool bitwise_equal(const CMatrix &a, const CMatrix &b)
{
    return a.rows() == b.rows() && a.cols() == b.cols() &&
           std::memcmp(a.data(), b.data(), sizeof(complex) * static_cast<std::size_t>(a.size())) == 0;
}

struct ThreadGuard
{
    unsigned saved = thread_count();
    ~ThreadGuard() { set_thread_count(saved); }
};
} // namespace

TEST(CounterRng, PureAndInUnitInterval)
{
    EXPECT_EQ(detail::counter_uniform(1, 2, 3, 0), detail::counter_uniform(1, 2, 3, 0));
    EXPECT_NE(detail::counter_uniform(1, 2, 3, 0), detail::counter_uniform(1, 2, 3, 1));
    EXPECT_NE(detail::counter_uniform(1, 2, 3, 0), detail::counter_uniform(2, 2, 3, 0));
    double lo = 1.0, hi = 0.0, mean = 0.0;
    const int n = 100000;
    for (int i = 0; i < n; ++i)
    {
        const double u = detail::counter_uniform(99, static_cast<std::uint64_t>(i), 5, 0);
        lo = std::min(lo, u);
        hi = std::max(hi, u);
        mean += u / n;
    }
    EXPECT_GT(lo, 0.0);
    EXPECT_LE(hi, 1.0);
    EXPECT_NEAR(mean, 0.5, 3.0 * std::sqrt(1.0 / 12.0 / n));
}

TEST(DrawRealization, MomentsMatchIncoherentModel)
{
    auto cfg = small_config(10000);
    const std::size_t m = cfg.n_realizations;
    const std::size_t q = cfg.src.size() / 3;
    const double var = cfg.src.intensity[q] / cfg.src.weights[q];
    double power = 0.0;
    complex mean(0.0, 0.0), pseudo(0.0, 0.0);
    for (std::size_t r = 0; r < m; ++r)
    {
        const complex j = draw_realization(cfg, r)(static_cast<Eigen::Index>(q));
        power += std::norm(j) * cfg.src.weights[q];
        mean += j;
        pseudo += j * j;
    }
    power /= static_cast<double>(m);
    mean /= static_cast<double>(m);
    pseudo /= static_cast<double>(m);
    const double sm = std::sqrt(static_cast<double>(m));
    // |J|^2 is exponential: relative standard error 1 / sqrt(M).
    EXPECT_NEAR(power, cfg.src.intensity[q], 0.05 * cfg.src.intensity[q]);
    EXPECT_LT(std::abs(mean), 3.0 * std::sqrt(var) / sm);
    EXPECT_LT(std::abs(pseudo), 3.0 * var / sm);
    EXPECT_THROW(draw_realization(cfg, m), RangeError);
}

TEST(DrawRealization, ReproducibleInIsolation)
{
    const auto a = small_config(100);
    auto b = small_config(5000);
    EXPECT_TRUE(bitwise_equal(draw_realization(a, 42), draw_realization(b, 42)));
    b.seed = 8;
    EXPECT_FALSE(bitwise_equal(draw_realization(a, 42), draw_realization(b, 42)));
}

TEST(Propagate, ZeroLinearityAndDimension)
{
    const auto cfg = small_config(4);
    const CVector j = draw_realization(cfg, 1);
    const CVector e = propagate(j, cfg.obs, cfg.src, wc);
    EXPECT_EQ(propagate(CVector::Zero(j.size()), cfg.obs, cfg.src, wc).cwiseAbs().maxCoeff(), 0.0);
    const complex alpha(0.3, -1.7);
    EXPECT_LE((propagate(alpha * j, cfg.obs, cfg.src, wc) - alpha * e).cwiseAbs().maxCoeff(),
              1e-14 * e.cwiseAbs().maxCoeff());
    EXPECT_THROW(propagate(CVector::Zero(3), cfg.obs, cfg.src, wc), ContractViolation);
}

TEST(Propagate, SingleNodeVariance)
{
    EnsembleConfig cfg;
    cfg.n_realizations = 10000;
    cfg.seed = 3;
    cfg.src.geometry = line8;
    cfg.src.nodes = {yz(0.5, 0.0)};
    cfg.src.weights = {0.2};
    cfg.src.intensity = {2.0};
    cfg.obs.points = {yz(3.0, 10.0)};
    cfg.wc = wc;
    double var = 0.0;
    for (std::size_t r = 0; r < cfg.n_realizations; ++r)
        var += std::norm(propagate(draw_realization(cfg, r), cfg.obs, cfg.src, wc)(0));
    var /= static_cast<double>(cfg.n_realizations);
    const double expected = std::norm(green(cfg.obs.points[0], cfg.src.nodes[0], wc)) * 2.0 * 0.2;
    EXPECT_NEAR(var, expected, 0.05 * expected);
}

TEST(EmpiricalCsd, ConvergesToAnalyticCsd)
{
    const auto cfg = small_config(10000);
    const CMatrix w = build_csd_matrix(cfg.obs, cfg.src, wc);
    const CMatrix fields = ensemble_fields(cfg);
    const CMatrix e = empirical_csd(fields);
    const double m = static_cast<double>(cfg.n_realizations);
    for (Eigen::Index i = 0; i < w.rows(); ++i)
        for (Eigen::Index j = 0; j < w.cols(); ++j)
        {
            const double sigma = std::sqrt(w(i, i).real() * w(j, j).real() / m);
            EXPECT_LE(std::abs(e(i, j) - w(i, j)), 5.0 * sigma) << i << "," << j;
            EXPECT_EQ(e(i, j), std::conj(e(j, i)));
        }

    // 1/sqrt(M) law: four times the realizations halves the error.
    const CMatrix e_quarter = empirical_csd(CMatrix(fields.leftCols(2500)));
    const double ratio = (e_quarter - w).norm() / (e - w).norm();
    EXPECT_GE(ratio, 1.5);
    EXPECT_LE(ratio, 2.7);
    EXPECT_THROW(empirical_csd(CMatrix(fields.leftCols(1))), DomainError);
}

TEST(KlCoefficients, DiagonalEigenvaluesAndUncorrelated)
{
    const auto cfg = small_config(10000);
    const auto eig = eigen_decompose(build_csd_matrix(cfg.obs, cfg.src, wc));
    const std::size_t n = 10;
    const CMatrix c = kl_coefficient_covariance(cfg, eig, n);
    const double m = static_cast<double>(cfg.n_realizations);
    for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(n); ++i)
        for (Eigen::Index j = 0; j < static_cast<Eigen::Index>(n); ++j)
        {
            const double li = eig.eigenvalues(i), lj = eig.eigenvalues(j);
            if (i == j)
                EXPECT_NEAR(c(i, i).real(), li, 5.0 * li / std::sqrt(m)) << "mode " << i;
            else
                EXPECT_LE(std::abs(c(i, j)), 5.0 * std::sqrt(li * lj / m)) << i << "," << j;
        }
    EXPECT_THROW(kl_coefficient_covariance(cfg, eig, 0), ContractViolation);
}

TEST(Ensemble, BitwiseIdenticalAcrossThreadCounts)
{
    ThreadGuard guard;
    const auto cfg = small_config(2000, 11);
    set_thread_count(1);
    const CMatrix f1 = ensemble_fields(cfg);
    const CMatrix w1 = empirical_csd(f1);
    set_thread_count(8);
    const CMatrix f8 = ensemble_fields(cfg);
    const CMatrix w8 = empirical_csd(f8);
    set_thread_count(3);
    const CMatrix f3 = ensemble_fields(cfg);
    EXPECT_TRUE(bitwise_equal(f1, f8));
    EXPECT_TRUE(bitwise_equal(f1, f3));
    EXPECT_TRUE(bitwise_equal(w1, w8));
}

TEST(Ensemble, ConfigValidation)
{
    auto cfg = small_config(1);
    EXPECT_THROW(ensemble_fields(cfg), DomainError);
    cfg.n_realizations = 4;
    cfg.src.nodes.clear();
    cfg.src.weights.clear();
    cfg.src.intensity.clear();
    EXPECT_THROW(ensemble_fields(cfg), DomainError);
}
