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
#include <complex>
#include <numbers>

#include "error.hpp"
#include "geometry.hpp"
#include "source_model.hpp"

namespace eit
{

using complex = std::complex<double>;

/// Observation points closer than this fraction of a wavelength to a source point are
/// flagged as near-singular.
inline constexpr double near_singular_fraction = 1e-9;

struct GreenSample
{
    complex value;
    double distance = 0.0;
    bool near_singular = false;
};

/// Free-space scalar Green's function exp(-j beta R) / (4 pi R), time convention e^{+j omega t}.
inline GreenSample green_sample(const Point &r, const Point &r_src, const WaveContext &wc)
{
    const double dist = distance(r, r_src);
    if (!(dist > 0.0))
        throw SingularityError("green: observation point coincides with the source point");
    const double phase = -wc.wavenumber * dist;
    const double mag = 1.0 / (4.0 * std::numbers::pi * dist);
    return GreenSample{complex(mag * std::cos(phase), mag * std::sin(phase)), dist,
                       dist < near_singular_fraction * wc.wavelength};
}

inline complex green(const Point &r, const Point &r_src, const WaveContext &wc)
{
    return green_sample(r, r_src, wc).value;
}

/// Kernel of the intensity-weighted radiation operator, G(r, r') sqrt(I(r')).
inline complex weighted_green(const Point &r, const Point &r_src, double intensity, const WaveContext &wc)
{
    if (!(intensity >= 0.0))
        throw DomainError("weighted_green: intensity must be nonnegative");
    return green(r, r_src, wc) * std::sqrt(intensity);
}

/// Throws SingularityError if p is on the source segment.
inline void require_off_support(const Point &p, const SourceModel &src, const WaveContext &wc)
{
    if (src.on_support(p, near_singular_fraction * wc.wavelength))
        throw SingularityError("observation point lies on the source support");
}

/// K(r1, r2) = sum_q I_q w_q G(r1, r'_q) G*(r2, r'_q).
///
/// With I = 1 this is the kernel whose eigenfunctions are the left singular functions of
/// the radiation operator; with a general I it is the cross-spectral density of the field
/// radiated by an incoherent source.
inline complex kernel_ku(const Point &r1, const Point &r2, const SourceModel &src, const WaveContext &wc)
{
    require_off_support(r1, src, wc);
    require_off_support(r2, src, wc);
    complex acc(0.0, 0.0);
    for (std::size_t q = 0; q < src.size(); ++q)
    {
        const double iw = src.intensity[q] * src.weights[q];
        if (iw == 0.0)
            continue;
        acc += iw * (green(r1, src.nodes[q], wc) * std::conj(green(r2, src.nodes[q], wc)));
    }
    return acc;
}

/// Closed form of K(r, r) for a homogeneous (I = 1) line source and r = (0, z) on the
/// perpendicular bisector: integral of dy' / (16 pi^2 (z^2 + y'^2)) = atan(a/z) / (8 pi^2 z).
inline double on_axis_intensity_closed_form(double z, const LineSource &src)
{
    return std::atan(src.half_length / z) / (8.0 * std::numbers::pi * std::numbers::pi * z);
}

} // namespace eit
