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
#include <numbers>
#include <vector>

#include <Eigen/Dense>

#include "error.hpp"
#include "geometry.hpp"
#include "kernels.hpp"
#include "parallel.hpp"
#include "source_model.hpp"

namespace eit
{

struct WignerOptions
{
    double window_half_width = 8.0; ///< in wavelengths when used through the CLI; meters here
    std::size_t n_k = 256;
    double k_max_factor = 1.5; ///< k grid spans [-f beta, f beta]
    std::size_t stride = 1;    ///< evaluate every stride-th curve point as a midpoint
};

/// Wigner distribution of a cross-spectral density along a curve, sampled on a
/// (midpoint arclength s, tangential wavenumber k_s) grid.
///
/// k_s is the tangential component of the propagation vector: with the e^{+j omega t}
/// phasor convention, a wave travelling toward increasing s has C(s, ds) ~ e^{-j beta ds},
/// and the transform kernel e^{+j k_s ds} places it at k_s = +beta.
struct WignerMap
{
    std::vector<double> s_values;
    std::vector<double> k_values;
    Eigen::MatrixXd values;     ///< values(i_s, i_k), real part of the transform
    std::vector<bool> truncated; ///< window clipped by the curve ends at this s
    double window_half_width = 0.0;
    double lag_step = 0.0;      ///< spacing of the separation samples
    double s_step = 0.0;        ///< spacing of the midpoints
    double k_step = 0.0;
    double max_imag_ratio = 0.0; ///< max |Im WDF| / column max |Re WDF|
};

/// Core transform. corr(col, j) returns C(s_col, j * lag_step) for |j| <= max_lag[col].
template <typename Corr>
WignerMap wdf_from_lags(std::vector<double> s_values, const std::vector<std::size_t> &max_lag, std::size_t full_lag,
                        double lag_step, double s_step, const WaveContext &wc, const WignerOptions &opt, Corr &&corr)
{
    if (opt.n_k < 2)
        throw DomainError("wdf: need at least 2 wavenumber samples");
    if (!(opt.k_max_factor >= 1.0))
        throw DomainError("wdf: k grid must cover at least [-beta, beta]");
    if (max_lag.size() != s_values.size())
        throw ContractViolation("wdf: one lag limit per midpoint expected");

    WignerMap map;
    map.s_values = std::move(s_values);
    map.lag_step = lag_step;
    map.s_step = s_step;
    map.window_half_width = static_cast<double>(full_lag) * lag_step;
    const double k_max = opt.k_max_factor * wc.wavenumber;
    map.k_step = 2.0 * k_max / static_cast<double>(opt.n_k - 1);
    for (std::size_t k = 0; k < opt.n_k; ++k)
        map.k_values.push_back(-k_max + map.k_step * static_cast<double>(k));

    const std::size_t n_lag = 2 * full_lag + 1;
    std::vector<double> taper(n_lag);
    Eigen::MatrixXcd kernel(static_cast<Eigen::Index>(n_lag), static_cast<Eigen::Index>(opt.n_k));
    for (std::size_t jj = 0; jj < n_lag; ++jj)
    {
        const double ds = (static_cast<double>(jj) - static_cast<double>(full_lag)) * lag_step;
        taper[jj] = full_lag == 0 ? 1.0 : 0.5 * (1.0 + std::cos(std::numbers::pi * ds / map.window_half_width));
        for (std::size_t k = 0; k < opt.n_k; ++k)
        {
            const double ph = map.k_values[k] * ds;
            kernel(static_cast<Eigen::Index>(jj), static_cast<Eigen::Index>(k)) = complex(std::cos(ph), std::sin(ph));
        }
    }

    const std::size_t n_s = map.s_values.size();
    map.values.resize(static_cast<Eigen::Index>(n_s), static_cast<Eigen::Index>(opt.n_k));
    map.truncated.assign(n_s, false);
    std::vector<double> imag_ratio(n_s, 0.0);

    parallel_for(n_s, [&](std::size_t col) {
        const std::size_t lag = std::min(max_lag[col], full_lag);
        Eigen::VectorXcd c = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(n_lag));
        for (std::size_t jj = full_lag - lag; jj <= full_lag + lag; ++jj)
        {
            const auto j = static_cast<long>(jj) - static_cast<long>(full_lag);
            c(static_cast<Eigen::Index>(jj)) = taper[jj] * lag_step * corr(col, j);
        }
        const Eigen::VectorXcd w = kernel.transpose() * c;
        double re_max = 0.0, im_max = 0.0;
        for (Eigen::Index k = 0; k < w.size(); ++k)
        {
            map.values(static_cast<Eigen::Index>(col), k) = w(k).real();
            re_max = std::max(re_max, std::abs(w(k).real()));
            im_max = std::max(im_max, std::abs(w(k).imag()));
        }
        imag_ratio[col] = re_max > 0.0 ? im_max / re_max : im_max;
        map.truncated[col] = lag < full_lag;
    });
    map.max_imag_ratio = *std::max_element(imag_ratio.begin(), imag_ratio.end());
    return map;
}

/// Wigner distribution of the source CSD along a uniformly sampled curve (for example
/// the output of trace_hyperbola). The separation is sampled at twice the curve step so
/// both s + ds/2 and s - ds/2 fall on curve samples; windows reaching past either end
/// of the curve are shortened and flagged.
inline WignerMap wdf_along_curve(const ObservationSet &curve, const SourceModel &src, const WaveContext &wc,
                                 const WignerOptions &opt = {})
{
    curve.validate();
    if (curve.arclength.size() != curve.size() || curve.size() < 3)
        throw ContractViolation("wdf_along_curve: curve with arclength samples required");
    const double h = (curve.arclength.back() - curve.arclength.front()) / static_cast<double>(curve.size() - 1);
    for (std::size_t i = 1; i < curve.size(); ++i)
        if (std::abs(curve.arclength[i] - curve.arclength[i - 1] - h) > 1e-9 * h)
            throw ContractViolation("wdf_along_curve: curve must be sampled at uniform arclength");
    if (!(opt.window_half_width >= 2.0 * wc.wavelength))
        throw DomainError("wdf_along_curve: window half-width must be at least 2 wavelengths");
    if (!(curve.arclength.back() - curve.arclength.front() + h >= 4.0 * opt.window_half_width))
        throw DomainError("wdf_along_curve: curve shorter than 4 window half-widths");
    if (opt.stride == 0)
        throw DomainError("wdf_along_curve: stride must be positive");

    const double lag_step = 2.0 * h;
    const auto full_lag = static_cast<std::size_t>(std::floor(opt.window_half_width / lag_step * (1.0 + 1e-12)));
    const std::size_t n = curve.size();
    const std::size_t q_count = src.size();

    // Columns are curve points: g(q, i) = sqrt(I_q w_q) G(p_i, r'_q).
    Eigen::MatrixXcd g(static_cast<Eigen::Index>(q_count), static_cast<Eigen::Index>(n));
    parallel_for(n, [&](std::size_t i) {
        require_off_support(curve.points[i], src, wc);
        for (std::size_t q = 0; q < q_count; ++q)
            g(static_cast<Eigen::Index>(q), static_cast<Eigen::Index>(i)) =
                std::sqrt(src.intensity[q] * src.weights[q]) * green(curve.points[i], src.nodes[q], wc);
    });

    std::vector<std::size_t> mids;
    for (std::size_t i = 0; i < n; i += opt.stride)
        mids.push_back(i);
    std::vector<double> s_values;
    std::vector<std::size_t> max_lag;
    for (std::size_t i : mids)
    {
        s_values.push_back(curve.arclength[i]);
        max_lag.push_back(std::min({full_lag, i, n - 1 - i}));
    }

    return wdf_from_lags(std::move(s_values), max_lag, full_lag, lag_step, h * static_cast<double>(opt.stride), wc,
                         opt, [&](std::size_t col, long j) {
                             const auto i = static_cast<long>(mids[col]);
                             // C = sum_q G(p(s + ds/2)) G*(p(s - ds/2))
                             return g.col(i - j).dot(g.col(i + j));
                         });
}

struct WignerMarginals
{
    std::vector<double> intensity_vs_s;
    std::vector<double> spectrum_vs_k;
};

inline WignerMarginals wdf_marginals(const WignerMap &map)
{
    WignerMarginals m;
    const auto n_s = map.values.rows(), n_k = map.values.cols();
    m.intensity_vs_s.assign(static_cast<std::size_t>(n_s), 0.0);
    m.spectrum_vs_k.assign(static_cast<std::size_t>(n_k), 0.0);
    for (Eigen::Index i = 0; i < n_s; ++i)
        for (Eigen::Index k = 0; k < n_k; ++k)
        {
            m.intensity_vs_s[static_cast<std::size_t>(i)] += map.values(i, k) * map.k_step / (2.0 * std::numbers::pi);
            m.spectrum_vs_k[static_cast<std::size_t>(k)] += map.values(i, k) * map.s_step;
        }
    return m;
}

inline double wdf_total_power(const WignerMap &map)
{
    return map.values.sum() * map.s_step * map.k_step / (2.0 * std::numbers::pi);
}

struct SpectralCentroid
{
    double s = 0.0;        ///< arclength of the column actually used
    double centroid = 0.0; ///< over the positive part of the column
    double spread = 0.0;   ///< standard deviation over the positive part
    double negative_mass = 0.0; ///< sum of |negative values| / sum of positive values
};

/// Centroid of the column nearest to arclength s. Negative lobes are excluded and
/// reported separately.
inline SpectralCentroid spectral_centroid(const WignerMap &map, double s)
{
    if (map.s_values.empty())
        throw DomainError("spectral_centroid: empty map");
    const double lo = map.s_values.front() - 0.5 * map.s_step, hi = map.s_values.back() + 0.5 * map.s_step;
    if (s < lo || s > hi)
        throw DomainError("spectral_centroid: s outside the map");
    std::size_t col = 0;
    for (std::size_t i = 1; i < map.s_values.size(); ++i)
        if (std::abs(map.s_values[i] - s) < std::abs(map.s_values[col] - s))
            col = i;

    double pos = 0.0, neg = 0.0, first = 0.0;
    for (std::size_t k = 0; k < map.k_values.size(); ++k)
    {
        const double v = map.values(static_cast<Eigen::Index>(col), static_cast<Eigen::Index>(k));
        if (v > 0.0)
        {
            pos += v;
            first += v * map.k_values[k];
        }
        else
        {
            neg -= v;
        }
    }
    if (!(pos > 0.0))
        throw DomainError("spectral_centroid: column has no positive values, centroid undefined");
    SpectralCentroid out;
    out.s = map.s_values[col];
    out.centroid = first / pos;
    double second = 0.0;
    for (std::size_t k = 0; k < map.k_values.size(); ++k)
    {
        const double v = map.values(static_cast<Eigen::Index>(col), static_cast<Eigen::Index>(k));
        if (v > 0.0)
            second += v * (map.k_values[k] - out.centroid) * (map.k_values[k] - out.centroid);
    }
    out.spread = std::sqrt(second / pos);
    out.negative_mass = neg / pos;
    return out;
}

} // namespace eit
