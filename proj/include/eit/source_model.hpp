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
#include <cstddef>
#include <functional>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>

#include "error.hpp"
#include "geometry.hpp"

namespace eit
{

enum class QuadratureRule
{
    midpoint,
    gauss
};

/// Spectral intensity I(y') of the source currents, y' in [-a, a].
using IntensityProfile = std::function<double(double)>;

inline IntensityProfile homogeneous_intensity(double level = 1.0)
{
    return [level](double) { return level; };
}

/// Piecewise-linear profile through equally spaced samples spanning [-a, a].
inline IntensityProfile tabulated_intensity(std::vector<double> samples, const LineSource &src)
{
    if (samples.empty())
        throw DomainError("tabulated_intensity: no samples");
    for (double v : samples)
        if (!(v >= 0.0))
            throw DomainError("tabulated_intensity: intensity must be nonnegative");
    if (samples.size() == 1)
        return homogeneous_intensity(samples.front());
    const double a = src.half_length;
    return [samples = std::move(samples), a](double y) {
        const double u = std::clamp((y + a) / (2.0 * a), 0.0, 1.0) * static_cast<double>(samples.size() - 1);
        const auto i = std::min(static_cast<std::size_t>(u), samples.size() - 2);
        const double f = u - static_cast<double>(i);
        return (1.0 - f) * samples[i] + f * samples[i + 1];
    };
}

/// Discretized incoherent line source: quadrature nodes on the segment, their weights,
/// and the spectral intensity sampled at each node.
struct SourceModel
{
    LineSource geometry;
    std::vector<Point> nodes;
    std::vector<double> weights;
    std::vector<double> intensity;

    std::size_t size() const noexcept { return nodes.size(); }

    /// True when p lies on the segment (within tol).
    bool on_support(const Point &p, double tol) const noexcept { return geometry.distance_to(p) <= tol; }

    /// Same nodes with every intensity multiplied by c >= 0.
    SourceModel scaled(double c) const
    {
        if (!(c >= 0.0))
            throw DomainError("SourceModel::scaled: factor must be nonnegative");
        SourceModel out = *this;
        for (double &v : out.intensity)
            v *= c;
        return out;
    }
};

/// Builds the quadrature for a line source.
///
/// midpoint: Q = round(l * nodes_per_wavelength / lambda) equal cells, weight l/Q each.
/// gauss:    8-point Gauss-Legendre panels; the panel count is the smallest that gives at
///           least nodes_per_wavelength nodes per wavelength, so at 8 nodes/lambda every
///           panel is one wavelength long.
inline SourceModel build_quadrature(const LineSource &src, const IntensityProfile &intensity, const WaveContext &wc,
                                    double nodes_per_wavelength, QuadratureRule rule = QuadratureRule::gauss)
{
    if (!(nodes_per_wavelength >= 4.0))
        throw ResolutionError("build_quadrature: at least 4 nodes per wavelength are required");

    SourceModel out;
    out.geometry = src;
    const double a = src.half_length;
    const double l = src.length();
    const double wavelengths = l / wc.wavelength;

    if (rule == QuadratureRule::midpoint)
    {
        const auto q = static_cast<std::size_t>(std::max(1.0, std::round(wavelengths * nodes_per_wavelength)));
        const double h = l / static_cast<double>(q);
        for (std::size_t i = 0; i < q; ++i)
        {
            out.nodes.push_back(yz(-a + (static_cast<double>(i) + 0.5) * h, 0.0));
            out.weights.push_back(h);
        }
    }
    else
    {
        using rule8 = boost::math::quadrature::gauss<double, 8>;
        const auto panels = static_cast<std::size_t>(
            std::max(1.0, std::ceil(wavelengths * nodes_per_wavelength / 8.0 * (1.0 - 1e-12))));
        const double width = l / static_cast<double>(panels);
        const auto &x = rule8::abscissa();
        const auto &w = rule8::weights();
        for (std::size_t p = 0; p < panels; ++p)
        {
            const double centre = -a + (static_cast<double>(p) + 0.5) * width;
            // abscissa() lists the positive half of the (even-order) symmetric rule.
            for (std::size_t i = x.size(); i-- > 0;)
            {
                out.nodes.push_back(yz(centre - 0.5 * width * x[i], 0.0));
                out.weights.push_back(0.5 * width * w[i]);
            }
            for (std::size_t i = 0; i < x.size(); ++i)
            {
                out.nodes.push_back(yz(centre + 0.5 * width * x[i], 0.0));
                out.weights.push_back(0.5 * width * w[i]);
            }
        }
    }

    out.intensity.reserve(out.nodes.size());
    for (const auto &p : out.nodes)
    {
        const double v = intensity(p.y);
        if (!(v >= 0.0) || !std::isfinite(v))
            throw DomainError("build_quadrature: intensity must be finite and nonnegative at every node");
        out.intensity.push_back(v);
    }
    return out;
}

} // namespace eit
