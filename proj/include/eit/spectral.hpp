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

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "error.hpp"
#include "geometry.hpp"
#include "kernels.hpp"
#include "parallel.hpp"
#include "source_model.hpp"

namespace eit
{

using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

/// A[m][q] = G(r_m, r'_q) sqrt(I_q w_q), rows further scaled by sqrt(obs weight) in
/// continuous mode.
struct RadiationMatrix
{
    CMatrix entries;
    bool continuous = false;

    Eigen::Index rows() const noexcept { return entries.rows(); }
    Eigen::Index cols() const noexcept { return entries.cols(); }
};

struct SpectralDecomposition
{
    RVector singular_values; ///< descending
    CMatrix left_vectors;    ///< u_n as columns (observation side)
    CMatrix right_vectors;   ///< v_n as columns (source side)
};

struct CSDEigensystem
{
    RVector eigenvalues; ///< descending
    CMatrix eigenvectors; ///< psi_n as columns
};

/// Raw Green matrix G(r_m, r'_q), no weights. Throws SingularityError with indices.
inline CMatrix green_matrix(const ObservationSet &obs, const SourceModel &src, const WaveContext &wc)
{
    obs.validate();
    CMatrix g(static_cast<Eigen::Index>(obs.size()), static_cast<Eigen::Index>(src.size()));
    parallel_for(obs.size(), [&](std::size_t m) {
        if (src.on_support(obs.points[m], near_singular_fraction * wc.wavelength))
            throw SingularityError("observation point " + std::to_string(m) + " lies on the source support", m);
        for (std::size_t q = 0; q < src.size(); ++q)
            g(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(q)) = green(obs.points[m], src.nodes[q], wc);
    });
    return g;
}

inline RadiationMatrix build_radiation_matrix(const ObservationSet &obs, const SourceModel &src,
                                              const WaveContext &wc)
{
    RadiationMatrix out;
    out.entries = green_matrix(obs, src, wc);
    out.continuous = obs.continuous();
    for (std::size_t q = 0; q < src.size(); ++q)
        out.entries.col(static_cast<Eigen::Index>(q)) *= std::sqrt(src.intensity[q] * src.weights[q]);
    if (out.continuous)
        for (std::size_t m = 0; m < obs.size(); ++m)
            out.entries.row(static_cast<Eigen::Index>(m)) *= std::sqrt(obs.weights[m]);
    if (!out.entries.allFinite())
        throw NumericalError("build_radiation_matrix: non-finite entries");
    return out;
}

/// Thin SVD, A = U diag(sigma) V^H, sigma descending.
inline SpectralDecomposition singular_decompose(const RadiationMatrix &a)
{
    if (a.entries.size() == 0)
        throw ContractViolation("singular_decompose: empty matrix");
    if (!a.entries.allFinite())
        throw ContractViolation("singular_decompose: non-finite entries");
    Eigen::BDCSVD<CMatrix> svd(a.entries, Eigen::ComputeThinU | Eigen::ComputeThinV);
    if (svd.info() != Eigen::Success)
        throw NumericalError("singular_decompose: SVD did not converge (" + std::to_string(a.rows()) + "x" +
                             std::to_string(a.cols()) + ")");
    SpectralDecomposition out{svd.singularValues(), svd.matrixU(), svd.matrixV()};
    if (!out.singular_values.allFinite() || !out.left_vectors.allFinite())
        throw NumericalError("singular_decompose: non-finite result");
    return out;
}

/// W = A A^H, Hermitian by construction (upper triangle mirrored from the lower one).
inline CMatrix build_csd_matrix(const ObservationSet &obs, const SourceModel &src, const WaveContext &wc)
{
    const RadiationMatrix a = build_radiation_matrix(obs, src, wc);
    const Eigen::Index n = a.rows();
    CMatrix w = CMatrix::Zero(n, n);
    w.selfadjointView<Eigen::Lower>().rankUpdate(a.entries);
    for (Eigen::Index j = 0; j < n; ++j)
    {
        w(j, j) = complex(w(j, j).real(), 0.0);
        for (Eigen::Index i = j + 1; i < n; ++i)
            w(j, i) = std::conj(w(i, j));
    }
    return w;
}

/// Max |W_ij - conj(W_ji)| relative to max |W_ij|.
inline double hermitian_defect(const CMatrix &w)
{
    const double scale = w.cwiseAbs().maxCoeff();
    if (scale == 0.0)
        return 0.0;
    return (w - w.adjoint()).cwiseAbs().maxCoeff() / scale;
}

inline CSDEigensystem eigen_decompose(const CMatrix &w)
{
    if (w.rows() != w.cols() || w.rows() == 0)
        throw ContractViolation("eigen_decompose: matrix must be square and non-empty");
    if (hermitian_defect(w) > 1e-12)
        throw ContractViolation("eigen_decompose: matrix is not Hermitian");
    Eigen::SelfAdjointEigenSolver<CMatrix> es(w);
    if (es.info() != Eigen::Success)
        throw NumericalError("eigen_decompose: eigensolver did not converge");
    CSDEigensystem out;
    out.eigenvalues = es.eigenvalues().reverse();
    out.eigenvectors = es.eigenvectors().rowwise().reverse();
    return out;
}

/// Number of spectrum entries >= epsilon * values[0]; tiny negative values count as 0.
inline std::size_t ndf_from_spectrum(std::span<const double> values, double epsilon = 1e-2)
{
    if (values.empty())
        throw DomainError("ndf_from_spectrum: empty spectrum");
    if (!(epsilon > 0.0 && epsilon < 1.0))
        throw DomainError("ndf_from_spectrum: epsilon must lie in (0, 1)");
    const double top = std::max(0.0, values.front());
    if (top == 0.0)
        return 0;
    return static_cast<std::size_t>(std::count_if(values.begin(), values.end(), [&](double v) {
        return std::max(0.0, v) >= epsilon * top;
    }));
}

inline std::size_t ndf_from_spectrum(const RVector &values, double epsilon = 1e-2)
{
    return ndf_from_spectrum(std::span<const double>(values.data(), static_cast<std::size_t>(values.size())), epsilon);
}

/// Per-mode comparison of the deterministic (SVD) and stochastic (CSD) pictures.
struct ModeComparison
{
    std::size_t n = 0; ///< 0-based mode index
    double sigma = 0.0;
    double lambda = 0.0;
    double gap = 0.0;       ///< |lambda_n - sigma_n^2| / sigma_1^2
    double alignment = 0.0; ///< |<u_n, psi_n>|, or cos of the largest principal angle for clusters
    bool degenerate = false;
    std::size_t cluster_size = 1;
    double principal_angle = 0.0; ///< largest principal angle [rad] between span(u) and span(psi)
};

struct EquivalenceReport
{
    std::vector<ModeComparison> modes;
    double max_gap = 0.0;
    double min_alignment = 1.0; ///< over non-degenerate modes
    double max_principal_angle = 0.0;
};

/// Eigenvalues closer than this (relative to the largest) form a degenerate cluster.
inline constexpr double degeneracy_threshold = 1e-8;

/// Largest principal angle between span(a) and span(b) (orthonormal columns, same count).
inline double largest_principal_angle(const CMatrix &a, const CMatrix &b)
{
    // sin of the largest angle = ||(I - B B^H) A||_2
    const CMatrix residual = a - b * (b.adjoint() * a);
    Eigen::JacobiSVD<CMatrix> svd(residual);
    const double s = svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
    return std::asin(std::min(1.0, s));
}

inline EquivalenceReport equivalence_report(const SpectralDecomposition &dec, const CSDEigensystem &eig,
                                            std::size_t n_modes)
{
    const auto available = static_cast<std::size_t>(std::min(dec.singular_values.size(), eig.eigenvalues.size()));
    if (dec.left_vectors.rows() != eig.eigenvectors.rows())
        throw ContractViolation("equivalence_report: observation dimensions differ");
    if (n_modes == 0 || n_modes > available)
        throw ContractViolation("equivalence_report: n_modes out of range");

    const double s1sq = dec.singular_values(0) * dec.singular_values(0);
    const double lam1 = std::max(std::abs(eig.eigenvalues(0)), s1sq);
    EquivalenceReport rep;
    rep.modes.resize(n_modes);

    std::size_t begin = 0;
    while (begin < n_modes)
    {
        std::size_t end = begin + 1;
        // Clusters may extend past n_modes so the partner of the last mode is not cut off.
        while (end < available &&
               std::abs(eig.eigenvalues(static_cast<Eigen::Index>(end)) -
                        eig.eigenvalues(static_cast<Eigen::Index>(end - 1))) <= degeneracy_threshold * lam1)
            ++end;
        const auto b = static_cast<Eigen::Index>(begin);
        const auto len = static_cast<Eigen::Index>(end - begin);
        double angle = 0.0;
        if (len > 1)
            angle = largest_principal_angle(dec.left_vectors.middleCols(b, len), eig.eigenvectors.middleCols(b, len));
        for (std::size_t n = begin; n < std::min(end, n_modes); ++n)
        {
            const auto i = static_cast<Eigen::Index>(n);
            ModeComparison &mc = rep.modes[n];
            mc.n = n;
            mc.sigma = dec.singular_values(i);
            mc.lambda = eig.eigenvalues(i);
            mc.gap = s1sq > 0.0 ? std::abs(mc.lambda - mc.sigma * mc.sigma) / s1sq : std::abs(mc.lambda);
            mc.degenerate = len > 1;
            mc.cluster_size = static_cast<std::size_t>(len);
            if (mc.degenerate)
            {
                mc.principal_angle = angle;
                mc.alignment = std::cos(angle);
            }
            else
            {
                mc.alignment = std::abs(dec.left_vectors.col(i).dot(eig.eigenvectors.col(i)));
                mc.principal_angle = std::acos(std::min(1.0, mc.alignment));
            }
            rep.max_gap = std::max(rep.max_gap, mc.gap);
            if (mc.degenerate)
                rep.max_principal_angle = std::max(rep.max_principal_angle, angle);
            else
                rep.min_alignment = std::min(rep.min_alignment, mc.alignment);
        }
        begin = end;
    }
    return rep;
}

} // namespace eit
