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

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "eit/spectral.hpp"

using namespace eit;

namespace
{
const WaveContext wc = WaveContext::from_wavelength(1.0);
const LineSource line8 = LineSource::with_length(8.0);

SourceModel line_source(double npw, const IntensityProfile &profile = homogeneous_intensity())
{
    return build_quadrature(line8, profile, wc, npw);
}

double max_abs(const CMatrix &m) { return m.cwiseAbs().maxCoeff(); }

// Four unit point sources on a C4v-symmetric diamond seen from four symmetric points:
// the Gram matrix is circulant and has an exactly degenerate pair.
SourceModel diamond_source()
{
    SourceModel s;
    s.geometry = LineSource{0.5};
    s.nodes = {Point{1.0, 0.0, 0.0}, Point{0.0, 1.0, 0.0}, Point{-1.0, 0.0, 0.0}, Point{0.0, -1.0, 0.0}};
    s.weights.assign(4, 1.0);
    s.intensity.assign(4, 1.0);
    return s;
}

ObservationSet diamond_observers()
{
    ObservationSet o;
    o.kind = ObservationKind::closed_curve;
    o.points = {Point{3.0, 0.0, 2.0}, Point{0.0, 3.0, 2.0}, Point{-3.0, 0.0, 2.0}, Point{0.0, -3.0, 2.0}};
    return o;
}
} // namespace

TEST(RadiationMatrix, DegenerateSizes)
{
    SourceModel s;
    s.geometry = line8;
    s.nodes = {yz(0.0, 0.0)};
    s.weights = {1.0};
    s.intensity = {1.0};
    ObservationSet o;
    o.points = {yz(0.3, 2.0)};
    const auto a = build_radiation_matrix(o, s, wc);
    ASSERT_EQ(a.rows(), 1);
    ASSERT_EQ(a.cols(), 1);
    EXPECT_EQ(a.entries(0, 0), green(o.points[0], s.nodes[0], wc));

    const auto dec = singular_decompose(a);
    EXPECT_NEAR(dec.singular_values(0), std::abs(a.entries(0, 0)), 1e-16);
}

TEST(RadiationMatrix, DarkSourceGivesZeroMatrix)
{
    const auto s = line_source(10.0, homogeneous_intensity(0.0));
    const auto a = build_radiation_matrix(semicircular_arc(50.0, 30), s, wc);
    EXPECT_EQ(max_abs(a.entries), 0.0);
}

TEST(RadiationMatrix, DoublingWeightsScalesSingularValues)
{
    auto s = line_source(10.0);
    const auto obs = semicircular_arc(40.0, 90);
    const auto d1 = singular_decompose(build_radiation_matrix(obs, s, wc));
    for (double &w : s.weights)
        w *= 2.0;
    const auto d2 = singular_decompose(build_radiation_matrix(obs, s, wc));
    for (Eigen::Index n = 0; n < 20; ++n)
        EXPECT_NEAR(d2.singular_values(n), std::sqrt(2.0) * d1.singular_values(n), 1e-12 * d1.singular_values(0));
}

TEST(RadiationMatrix, SingularityReportsIndices)
{
    const auto s = line_source(10.0);
    ObservationSet o;
    o.points = {yz(0.0, 3.0), yz(1.0, 0.0)};
    try
    {
        build_radiation_matrix(o, s, wc);
        FAIL() << "expected SingularityError";
    }
    catch (const SingularityError &e)
    {
        EXPECT_EQ(e.obs_index(), 1u);
    }
}

TEST(SingularDecompose, MatchesGramEigenvaluesAndReconstructs)
{
    const auto s = line_source(10.0);
    const auto a = build_radiation_matrix(semicircular_arc(60.0, 200), s, wc);
    const auto dec = singular_decompose(a);
    const double s1 = dec.singular_values(0);

    for (Eigen::Index n = 1; n < dec.singular_values.size(); ++n)
        EXPECT_GE(dec.singular_values(n - 1), dec.singular_values(n));

    // sigma_n^2 versus eigenvalues of A^H A (independent route)
    Eigen::SelfAdjointEigenSolver<CMatrix> es(a.entries.adjoint() * a.entries);
    const RVector ev = es.eigenvalues().reverse();
    for (Eigen::Index n = 0; n < ev.size(); ++n)
        EXPECT_NEAR(dec.singular_values(n) * dec.singular_values(n), ev(n), 1e-10 * s1 * s1);

    const CMatrix recon = dec.left_vectors * dec.singular_values.asDiagonal() * dec.right_vectors.adjoint();
    EXPECT_LE((a.entries - recon).norm(), 1e-10 * s1 * static_cast<double>(std::max(a.rows(), a.cols())));

    const auto k = dec.left_vectors.cols();
    EXPECT_LE(max_abs(dec.left_vectors.adjoint() * dec.left_vectors - CMatrix::Identity(k, k)), 1e-10);
    EXPECT_LE(max_abs(dec.right_vectors.adjoint() * dec.right_vectors - CMatrix::Identity(k, k)), 1e-10);
}

TEST(SingularDecompose, KneeOnFarArcIsResolutionIndependent)
{
    // The spectrum of the 8-lambda line on the 720-point arc at 200 lambda: flat head,
    // sharp drop after the first ~17 values. The ratios are frozen from this computation
    // and must agree between 10 and 20 nodes per wavelength.
    const auto obs = semicircular_arc(200.0, 720);
    const auto d10 = singular_decompose(build_radiation_matrix(obs, line_source(10.0), wc));
    const auto d20 = singular_decompose(build_radiation_matrix(obs, line_source(20.0), wc));
    const auto ratio = [](const SpectralDecomposition &d, int i, int j) {
        return d.singular_values(i - 1) / d.singular_values(j - 1);
    };
    EXPECT_NEAR(ratio(d10, 17, 15), ratio(d20, 17, 15), 0.01 * ratio(d20, 17, 15));
    EXPECT_NEAR(ratio(d10, 20, 17), ratio(d20, 20, 17), 0.01 * ratio(d20, 20, 17));
    // sigma_17 / sigma_15 sits on the shoulder (~0.93), sigma_21 / sigma_17 is past the knee.
    EXPECT_NEAR(ratio(d20, 17, 15), 0.9335, 0.005);
    EXPECT_LT(ratio(d20, 21, 17), 0.1);
}

TEST(CsdMatrix, HermitianWithRealNonnegativeDiagonal)
{
    const auto s = line_source(10.0);
    const auto w = build_csd_matrix(semicircular_arc(30.0, 100), s, wc);
    for (Eigen::Index i = 0; i < w.rows(); ++i)
    {
        EXPECT_EQ(w(i, i).imag(), 0.0);
        EXPECT_GE(w(i, i).real(), 0.0);
        for (Eigen::Index j = 0; j < w.cols(); ++j)
            EXPECT_LE(std::abs(w(i, j) - std::conj(w(j, i))), 1e-15 * std::abs(w(i, j)));
    }
}

TEST(CsdMatrix, OnAxisDiagonalMatchesClosedForm)
{
    const auto s = line_source(20.0);
    ObservationSet o;
    o.points = {yz(0.0, 5.0), yz(0.0, 25.0), yz(0.0, 100.0)};
    const auto w = build_csd_matrix(o, s, wc);
    for (Eigen::Index i = 0; i < 3; ++i)
    {
        const double exact = on_axis_intensity_closed_form(o.points[static_cast<std::size_t>(i)].z, line8);
        EXPECT_NEAR(w(i, i).real(), exact, 1e-6 * exact);
    }
}

TEST(EigenDecompose, IdentityAndContracts)
{
    const auto e = eigen_decompose(CMatrix::Identity(2, 2));
    EXPECT_DOUBLE_EQ(e.eigenvalues(0), 1.0);
    EXPECT_DOUBLE_EQ(e.eigenvalues(1), 1.0);

    CMatrix bad = CMatrix::Identity(2, 2);
    bad(0, 1) = complex(0.5, 0.0);
    EXPECT_THROW(eigen_decompose(bad), ContractViolation);
    EXPECT_THROW(eigen_decompose(CMatrix::Zero(2, 3)), ContractViolation);
}

TEST(EigenDecompose, GramIdentityAndTrace)
{
    const auto s = line_source(10.0);
    const auto obs = semicircular_arc(80.0, 150);
    const auto a = build_radiation_matrix(obs, s, wc);
    const auto dec = singular_decompose(a);
    const auto w = build_csd_matrix(obs, s, wc);
    const auto eig = eigen_decompose(w);
    const double s1sq = dec.singular_values(0) * dec.singular_values(0);
    for (Eigen::Index n = 0; n < dec.singular_values.size(); ++n)
        EXPECT_NEAR(eig.eigenvalues(n), dec.singular_values(n) * dec.singular_values(n), 1e-10 * s1sq);
    for (Eigen::Index n = 1; n < eig.eigenvalues.size(); ++n)
        EXPECT_GE(eig.eigenvalues(n - 1), eig.eigenvalues(n));
    EXPECT_GE(eig.eigenvalues(eig.eigenvalues.size() - 1), -1e-10 * eig.eigenvalues(0));
    EXPECT_NEAR(w.trace().real(), eig.eigenvalues.sum(), 1e-12 * w.trace().real());
    const auto k = eig.eigenvectors.cols();
    EXPECT_LE(max_abs(eig.eigenvectors.adjoint() * eig.eigenvectors - CMatrix::Identity(k, k)), 1e-10);
}

TEST(EigenDecompose, PermutationInvariant)
{
    const auto s = line_source(10.0);
    auto obs = semicircular_arc(50.0, 120);
    const auto e1 = eigen_decompose(build_csd_matrix(obs, s, wc));
    std::mt19937_64 rng(1);
    std::vector<std::size_t> perm(obs.size());
    for (std::size_t i = 0; i < perm.size(); ++i)
        perm[i] = i;
    std::shuffle(perm.begin(), perm.end(), rng);
    ObservationSet shuffled;
    shuffled.kind = ObservationKind::curve;
    for (std::size_t i : perm)
    {
        shuffled.points.push_back(obs.points[i]);
        shuffled.weights.push_back(obs.weights[i]);
    }
    const auto e2 = eigen_decompose(build_csd_matrix(shuffled, s, wc));
    for (Eigen::Index n = 0; n < e1.eigenvalues.size(); ++n)
        EXPECT_NEAR(e1.eigenvalues(n), e2.eigenvalues(n), 1e-12 * e1.eigenvalues(0));
}

TEST(NdfFromSpectrum, Counting)
{
    const std::vector<double> v{1.0, 0.9, 1e-6};
    EXPECT_EQ(ndf_from_spectrum(v), 2u);
    const std::vector<double> flat(7, 3.0);
    EXPECT_EQ(ndf_from_spectrum(flat), 7u);
    const std::vector<double> with_negative{1.0, 0.5, -1e-17};
    EXPECT_EQ(ndf_from_spectrum(with_negative, 0.4), 2u);
    EXPECT_THROW(ndf_from_spectrum(std::span<const double>{}), DomainError);
    EXPECT_THROW(ndf_from_spectrum(v, 1.5), DomainError);
}

TEST(NdfFromSpectrum, FarArcLineSource)
{
    // Phase-space prediction 2 l / lambda = 16; the eigen-count must sit in [13, 19] and
    // agree between two resolutions.
    const auto obs = semicircular_arc(200.0, 720);
    const auto e10 = eigen_decompose(build_csd_matrix(obs, line_source(10.0), wc));
    const auto e20 = eigen_decompose(build_csd_matrix(obs, line_source(20.0), wc));
    const auto n10 = ndf_from_spectrum(e10.eigenvalues), n20 = ndf_from_spectrum(e20.eigenvalues);
    EXPECT_GE(n20, 13u);
    EXPECT_LE(n20, 19u);
    EXPECT_LE(std::abs(static_cast<long>(n10) - static_cast<long>(n20)), 1);
    for (std::size_t n = 0; n < n20; ++n)
        EXPECT_NEAR(e10.eigenvalues(static_cast<Eigen::Index>(n)), e20.eigenvalues(static_cast<Eigen::Index>(n)),
                    0.01 * e20.eigenvalues(static_cast<Eigen::Index>(n)));
}

TEST(NdfFromSpectrum, InvariantUnderIntensityScaling)
{
    const auto obs = semicircular_arc(100.0, 240);
    const auto s = line_source(10.0);
    const auto e1 = eigen_decompose(build_csd_matrix(obs, s, wc));
    const auto e2 = eigen_decompose(build_csd_matrix(obs, s.scaled(37.5), wc));
    EXPECT_EQ(ndf_from_spectrum(e1.eigenvalues), ndf_from_spectrum(e2.eigenvalues));
    EXPECT_NEAR(e2.eigenvalues(0), 37.5 * e1.eigenvalues(0), 1e-10 * e2.eigenvalues(0));
}

TEST(Equivalence, HomogeneousAndInhomogeneousSources)
{
    const auto obs = semicircular_arc(120.0, 300);
    const auto taper = [](double y) { return 1.0 + 0.8 * std::cos(std::numbers::pi * y / 8.0); };
    for (const auto &s : {line_source(10.0), line_source(10.0, taper)})
    {
        const auto dec = singular_decompose(build_radiation_matrix(obs, s, wc));
        const auto eig = eigen_decompose(build_csd_matrix(obs, s, wc));
        const auto rep = equivalence_report(dec, eig, 20);
        EXPECT_LE(rep.max_gap, 1e-10);
        for (const auto &m : rep.modes)
            if (!m.degenerate)
                EXPECT_GE(m.alignment, 1.0 - 1e-8) << "mode " << m.n;
    }
}

TEST(Equivalence, DegeneratePairComparedBySubspace)
{
    const auto s = diamond_source();
    const auto obs = diamond_observers();
    const auto dec = singular_decompose(build_radiation_matrix(obs, s, wc));
    const auto eig = eigen_decompose(build_csd_matrix(obs, s, wc));
    const auto rep = equivalence_report(dec, eig, 4);

    std::size_t pair_start = 4;
    for (std::size_t n = 0; n + 1 < 4; ++n)
        if (rep.modes[n].degenerate && rep.modes[n + 1].degenerate)
        {
            pair_start = n;
            break;
        }
    ASSERT_LT(pair_start, 4u) << "expected a degenerate pair";
    EXPECT_EQ(rep.modes[pair_start].cluster_size, 2u);
    EXPECT_LT(rep.max_principal_angle, 1e-6);

    // Oracle: explicit projector comparison on the 2D subspaces.
    const auto b = static_cast<Eigen::Index>(pair_start);
    const CMatrix u = dec.left_vectors.middleCols(b, 2), psi = eig.eigenvectors.middleCols(b, 2);
    const CMatrix pu = u * u.adjoint(), ppsi = psi * psi.adjoint();
    EXPECT_LT((pu - ppsi).norm(), 1e-6);
    EXPECT_LE(rep.max_gap, 1e-10);
}

TEST(Equivalence, DimensionMismatch)
{
    const auto s = line_source(10.0);
    const auto dec = singular_decompose(build_radiation_matrix(semicircular_arc(50.0, 40), s, wc));
    const auto eig = eigen_decompose(build_csd_matrix(semicircular_arc(50.0, 41), s, wc));
    EXPECT_THROW(equivalence_report(dec, eig, 5), ContractViolation);
}
