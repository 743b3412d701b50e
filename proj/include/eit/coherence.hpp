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
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "error.hpp"
#include "geometry.hpp"
#include "kernels.hpp"
#include "parallel.hpp"
#include "source_model.hpp"

namespace eit
{

/// Cross-spectral density W(r1, r2) = sum_q I_q w_q G(r1, r'_q) G*(r2, r'_q) of the field
/// radiated by an incoherent source. The prefactor is the one of G G*, i.e. 1/(16 pi^2).
inline complex csd_pair(const Point &r1, const Point &r2, const SourceModel &src, const WaveContext &wc)
{
    return kernel_ku(r1, r2, src, wc);
}

/// |mu| may exceed one by rounding; beyond this it is a genuine inconsistency.
inline constexpr double coherence_overshoot_tol = 1e-9;
/// Mutual information is not evaluated for |mu| >= 1 - this.
inline constexpr double mi_saturation_margin = 1e-12;

namespace detail
{
inline complex normalize_coherence(complex w12, double i1, double i2)
{
    if (!(i1 > 0.0) || !(i2 > 0.0))
        throw DomainError("degree_of_coherence: zero spectral intensity, coherence undefined");
    complex mu = w12 / std::sqrt(i1 * i2);
    const double mag = std::abs(mu);
    if (mag > 1.0 + coherence_overshoot_tol)
        throw NumericalError("degree_of_coherence: |mu| exceeds 1 beyond rounding");
    if (mag > 1.0)
        mu /= mag;
    return mu;
}
} // namespace detail

/// Spectral degree of coherence mu = W12 / sqrt(W11 W22).
inline complex degree_of_coherence(const Point &r1, const Point &r2, const SourceModel &src, const WaveContext &wc)
{
    const complex w12 = csd_pair(r1, r2, src, wc);
    const double i1 = csd_pair(r1, r1, src, wc).real();
    const double i2 = csd_pair(r2, r2, src, wc).real();
    return detail::normalize_coherence(w12, i1, i2);
}

/// Pairwise mutual information of circular Gaussian fields, -ln(1 - |mu|^2), in nats.
inline double mutual_information(complex mu)
{
    const double mag = std::abs(mu);
    if (!(mag < 1.0 - mi_saturation_margin))
        throw SaturationError("mutual_information: |mu| too close to 1 (information diverges)");
    return -std::log1p(-mag * mag);
}

inline double nats_to_bits(double nats) noexcept { return nats / std::numbers::ln2; }

struct CoherenceSample
{
    complex w12;
    double i1 = 0.0;
    double i2 = 0.0;
    complex mu;
    double mi_nats = 0.0;
};

/// Distances from two observation points to the source endpoints, and the mean-path
/// difference that carries the phase of the far-zone CSD.
struct FraunhoferGeometry
{
    double r1_plus = 0.0, r1_minus = 0.0, r2_plus = 0.0, r2_minus = 0.0;
    double phi12 = 0.0;

    static FraunhoferGeometry of(const Point &r1, const Point &r2, const LineSource &src)
    {
        FraunhoferGeometry g;
        g.r1_plus = distance(r1, src.focus_plus());
        g.r1_minus = distance(r1, src.focus_minus());
        g.r2_plus = distance(r2, src.focus_plus());
        g.r2_minus = distance(r2, src.focus_minus());
        if (!(g.r1_plus > 0.0 && g.r1_minus > 0.0 && g.r2_plus > 0.0 && g.r2_minus > 0.0))
            throw DomainError("FraunhoferGeometry: point on a source endpoint");
        g.phi12 = 0.5 * (g.r2_plus + g.r2_minus) - 0.5 * (g.r1_plus + g.r1_minus);
        return g;
    }

    double xi1() const noexcept { return r1_plus - r1_minus; }
    double xi2() const noexcept { return r2_plus - r2_minus; }
};

inline double sinc(double x) noexcept { return x == 0.0 ? 1.0 : std::sin(x) / x; }

/// Far-zone coherence magnitude |sinc(beta (xi2 - xi1) / 2)| from the linearized phase.
/// Depends on the points only through their xi values.
inline double fraunhofer_mu(const Point &r1, const Point &r2, const LineSource &src, const WaveContext &wc)
{
    const auto g = FraunhoferGeometry::of(r1, r2, src);
    return std::abs(sinc(0.5 * wc.wavenumber * (g.xi2() - g.xi1())));
}

enum class MapMask : std::uint8_t
{
    ok = 0,
    near_reference = 1, ///< within the exclusion radius of r1
    near_source = 2,    ///< within the exclusion radius of the source segment
    saturated = 3,      ///< |mu| >= 1 - 1e-12, MI undefined
    failed = 4          ///< numerical error at this point
};

struct CoherenceMap
{
    Point r1;
    std::vector<Point> points;
    std::vector<CoherenceSample> samples;
    std::vector<MapMask> mask;
    double exclusion_radius = 0.0;

    std::size_t masked_count() const
    {
        return static_cast<std::size_t>(std::count_if(mask.begin(), mask.end(), [](MapMask m) { return m != MapMask::ok; }));
    }

    /// Index of the unmasked point with the largest |mu|, if any.
    std::optional<std::size_t> argmax_abs_mu() const
    {
        std::optional<std::size_t> best;
        double best_v = -1.0;
        for (std::size_t i = 0; i < samples.size(); ++i)
            if (mask[i] == MapMask::ok && std::abs(samples[i].mu) > best_v)
            {
                best_v = std::abs(samples[i].mu);
                best = i;
            }
        return best;
    }
};

/// |mu| and mutual information between r1 and every grid point. Points within
/// exclusion_radius of r1 or of the source are masked; per-point failures are masked
/// rather than propagated.
inline CoherenceMap coherence_map(const Point &r1, const ObservationSet &grid, const SourceModel &src,
                                  const WaveContext &wc, std::optional<double> exclusion_radius = std::nullopt)
{
    const double excl = exclusion_radius.value_or(0.25 * wc.wavelength);
    require_off_support(r1, src, wc);
    const std::size_t q_count = src.size();

    std::vector<complex> g1(q_count);
    double i1 = 0.0;
    for (std::size_t q = 0; q < q_count; ++q)
    {
        g1[q] = std::sqrt(src.intensity[q] * src.weights[q]) * green(r1, src.nodes[q], wc);
        i1 += std::norm(g1[q]);
    }

    CoherenceMap out;
    out.r1 = r1;
    out.points = grid.points;
    out.exclusion_radius = excl;
    out.samples.resize(grid.size());
    out.mask.assign(grid.size(), MapMask::ok);

    parallel_for(grid.size(), [&](std::size_t i) {
        const Point &p = grid.points[i];
        if (distance(p, r1) <= excl)
        {
            out.mask[i] = MapMask::near_reference;
            return;
        }
        if (src.geometry.distance_to(p) <= excl)
        {
            out.mask[i] = MapMask::near_source;
            return;
        }
        try
        {
            CoherenceSample s;
            s.i1 = i1;
            for (std::size_t q = 0; q < q_count; ++q)
            {
                const complex g2 = std::sqrt(src.intensity[q] * src.weights[q]) * green(p, src.nodes[q], wc);
                s.w12 += g1[q] * std::conj(g2);
                s.i2 += std::norm(g2);
            }
            s.mu = detail::normalize_coherence(s.w12, s.i1, s.i2);
            if (std::abs(s.mu) >= 1.0 - mi_saturation_margin)
            {
                s.mi_nats = std::numeric_limits<double>::infinity();
                out.mask[i] = MapMask::saturated;
            }
            else
            {
                s.mi_nats = mutual_information(s.mu);
            }
            out.samples[i] = s;
        }
        catch (const Error &)
        {
            out.mask[i] = MapMask::failed;
        }
    });
    return out;
}

// ------------------------------------------------------------------------
// Helmholtz check

/// Complex field on a uniform square-cell grid in the y-z plane: values(iz, iy) at
/// (ys[iy], zs[iz]).
struct GridField
{
    std::vector<double> ys;
    std::vector<double> zs;
    Eigen::MatrixXcd values;
};

namespace detail
{
inline double uniform_spacing(const std::vector<double> &v, const char *axis)
{
    if (v.size() < 3)
        throw ContractViolation(std::string("helmholtz_residual: need >= 3 samples along ") + axis);
    const double h = (v.back() - v.front()) / static_cast<double>(v.size() - 1);
    for (std::size_t i = 1; i < v.size(); ++i)
        if (std::abs((v[i] - v[i - 1]) - h) > 1e-9 * std::abs(h))
            throw ContractViolation(std::string("helmholtz_residual: non-uniform spacing along ") + axis);
    if (!(h > 0.0))
        throw ContractViolation("helmholtz_residual: coordinates must increase");
    return h;
}

inline double grid_spacing(const GridField &f)
{
    const double hy = uniform_spacing(f.ys, "y");
    const double hz = uniform_spacing(f.zs, "z");
    if (std::abs(hy - hz) > 1e-9 * hy)
        throw ContractViolation("helmholtz_residual: y and z spacings differ");
    if (f.values.rows() != static_cast<Eigen::Index>(f.zs.size()) ||
        f.values.cols() != static_cast<Eigen::Index>(f.ys.size()))
        throw ContractViolation("helmholtz_residual: value shape does not match coordinates");
    return hy;
}
} // namespace detail

/// max over interior points of |5-point Laplacian(W) + beta^2 W| / (beta^2 max|W|).
/// Appropriate for fields that are invariant along x.
inline double helmholtz_residual(const GridField &f, const WaveContext &wc)
{
    const double h = detail::grid_spacing(f);
    const auto &w = f.values;
    const double b2 = wc.wavenumber * wc.wavenumber;
    double worst = 0.0;
    for (Eigen::Index i = 1; i + 1 < w.rows(); ++i)
        for (Eigen::Index j = 1; j + 1 < w.cols(); ++j)
        {
            const complex lap = (w(i + 1, j) + w(i - 1, j) + w(i, j + 1) + w(i, j - 1) - 4.0 * w(i, j)) / (h * h);
            worst = std::max(worst, std::abs(lap + b2 * w(i, j)));
        }
    return worst / (b2 * w.cwiseAbs().maxCoeff());
}

/// 7-point variant for 3D fields: plane x = 0 plus the planes x = -h and x = +h.
inline double helmholtz_residual(const GridField &f, const GridField &x_minus, const GridField &x_plus,
                                 const WaveContext &wc)
{
    const double h = detail::grid_spacing(f);
    if (x_minus.values.rows() != f.values.rows() || x_minus.values.cols() != f.values.cols() ||
        x_plus.values.rows() != f.values.rows() || x_plus.values.cols() != f.values.cols())
        throw ContractViolation("helmholtz_residual: out-of-plane samples have a different shape");
    const auto &w = f.values;
    const double b2 = wc.wavenumber * wc.wavenumber;
    double worst = 0.0;
    for (Eigen::Index i = 1; i + 1 < w.rows(); ++i)
        for (Eigen::Index j = 1; j + 1 < w.cols(); ++j)
        {
            const complex lap = (w(i + 1, j) + w(i - 1, j) + w(i, j + 1) + w(i, j - 1) + x_minus.values(i, j) +
                                 x_plus.values(i, j) - 6.0 * w(i, j)) /
                                (h * h);
            worst = std::max(worst, std::abs(lap + b2 * w(i, j)));
        }
    return worst / (b2 * w.cwiseAbs().maxCoeff());
}

/// Samples W(r1, r2) for r1 on an n x n grid of spacing h centred at (y0, z0) in the
/// plane x = x_offset, with r2 fixed.
inline GridField sample_csd_patch(const Point &r2, double y0, double z0, std::size_t n, double h, double x_offset,
                                  const SourceModel &src, const WaveContext &wc)
{
    GridField f;
    const double half = 0.5 * static_cast<double>(n - 1) * h;
    for (std::size_t i = 0; i < n; ++i)
    {
        f.ys.push_back(y0 - half + h * static_cast<double>(i));
        f.zs.push_back(z0 - half + h * static_cast<double>(i));
    }
    f.values.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    parallel_for(n * n, [&](std::size_t k) {
        const std::size_t iz = k / n, iy = k % n;
        const Point r1{x_offset, f.ys[iy], f.zs[iz]};
        f.values(static_cast<Eigen::Index>(iz), static_cast<Eigen::Index>(iy)) = csd_pair(r1, r2, src, wc);
    });
    return f;
}

} // namespace eit
