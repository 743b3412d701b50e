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
#include <numbers>

#include "error.hpp"
#include "geometry.hpp"

namespace eit
{

// Closed-form degree-of-freedom counts. All return reals; rounding is up to the caller.
// Scalar fields throughout: the count doubles when both polarizations are used.

struct PhaseSpaceDescriptor
{
    int n_dims = 1;     ///< spatial dimensions of the field domain (1 or 2)
    double volume = 0.0; ///< phase-space volume [m^n (rad/m)^n]
};

/// Line source of length l observed over the z > 0 half-plane: the tangential wavenumber
/// covers [-beta, beta] over the source extent, volume 2 beta l.
inline PhaseSpaceDescriptor line_source_phase_space(const LineSource &src, const WaveContext &wc)
{
    return PhaseSpaceDescriptor{1, 2.0 * wc.wavenumber * src.length()};
}

/// Number of (2 pi)^n cells in the phase-space volume.
inline double ndf_phase_space(const PhaseSpaceDescriptor &d)
{
    if (d.n_dims != 1 && d.n_dims != 2)
        throw DomainError("ndf_phase_space: n_dims must be 1 or 2");
    if (!(d.volume > 0.0))
        throw DomainError("ndf_phase_space: volume must be positive");
    return d.volume / std::pow(2.0 * std::numbers::pi, d.n_dims);
}

/// pi A_S / lambda^2 for a source enclosed by a distant observation surface.
inline double ndf_sphere(double source_area, const WaveContext &wc)
{
    if (!(source_area > 0.0))
        throw DomainError("ndf_sphere: source area must be positive");
    return std::numbers::pi * source_area / (wc.wavelength * wc.wavelength);
}

/// Projected solid angle of a cone of half-angle theta_max about the surface normal,
/// pi sin^2(theta_max).
inline double projected_solid_angle(double theta_max)
{
    if (!(theta_max >= 0.0 && theta_max <= 0.5 * std::numbers::pi))
        throw DomainError("projected_solid_angle: theta_max must lie in [0, pi/2]");
    const double s = std::sin(theta_max);
    return std::numbers::pi * s * s;
}

/// Direction mask on the unit disk of normalized transverse wavenumbers
/// (kx/beta, ky/beta); true where the direction belongs to the emission domain.
using AngularMask = std::function<bool(double, double)>;

/// Omega' = (1/beta^2) * area of the masked part of the visible disk |k_t| <= beta,
/// in polar coordinates. Along each azimuth the mask is scanned on n_radial samples and
/// every transition is located by bisection, so the radial integral of rho d rho is
/// exact up to the bisection tolerance; the azimuthal integral is the periodic
/// trapezoidal rule.
inline double projected_solid_angle(const AngularMask &mask, std::size_t n_phi = 720, std::size_t n_radial = 256)
{
    if (n_phi < 4 || n_radial < 2)
        throw DomainError("projected_solid_angle: quadrature too coarse");
    const double dphi = 2.0 * std::numbers::pi / static_cast<double>(n_phi);
    double total = 0.0;
    for (std::size_t ip = 0; ip < n_phi; ++ip)
    {
        const double phi = dphi * static_cast<double>(ip);
        const double c = std::cos(phi), s = std::sin(phi);
        auto inside = [&](double rho) { return mask(rho * c, rho * s); };
        double ray = 0.0;
        double start = 0.0;
        bool state = inside(0.0);
        double prev = 0.0;
        for (std::size_t ir = 1; ir < n_radial; ++ir)
        {
            const double rho = static_cast<double>(ir) / static_cast<double>(n_radial - 1);
            const bool now = inside(rho);
            if (now != state)
            {
                double lo = prev, hi = rho;
                for (int it = 0; it < 60 && hi - lo > 1e-15; ++it)
                {
                    const double mid = 0.5 * (lo + hi);
                    (inside(mid) == state ? lo : hi) = mid;
                }
                const double edge = 0.5 * (lo + hi);
                if (state)
                    ray += 0.5 * (edge * edge - start * start);
                else
                    start = edge;
                state = now;
            }
            prev = rho;
        }
        if (state)
            ray += 0.5 * (1.0 - start * start);
        total += ray * dphi;
    }
    return total;
}

struct RadiometricEstimate
{
    double source_area = 0.0;
    double projected_solid_angle = 0.0;
    double etendue = 0.0; ///< A_S Omega'
    double cell = 0.0;    ///< (2 pi)^2 / beta^2 = lambda^2
    double n_cells = 0.0;
    /// A_S Omega' assumes every part of the source is visible from every direction;
    /// non-convex or self-occluding sources are overestimated. No correction is applied.
    bool assumes_full_visibility = true;
};

inline RadiometricEstimate ndf_radiometric(double source_area, double omega_prime, const WaveContext &wc)
{
    if (!(source_area >= 0.0))
        throw DomainError("ndf_radiometric: source area must be nonnegative");
    if (!(omega_prime >= 0.0 && omega_prime <= std::numbers::pi))
        throw DomainError("ndf_radiometric: projected solid angle must lie in [0, pi]");
    RadiometricEstimate e;
    e.source_area = source_area;
    e.projected_solid_angle = omega_prime;
    e.etendue = source_area * omega_prime;
    e.cell = wc.wavelength * wc.wavelength;
    e.n_cells = e.etendue / e.cell;
    return e;
}

} // namespace eit
