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
#include <complex>
#include <cstddef>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "error.hpp"

namespace eit
{

/// Cartesian position in meters. The line-source problems live in the x = 0 (y-z) plane,
/// but the Green's function is the 3D one, so x is kept.
struct Point
{
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    friend bool operator==(const Point &, const Point &) = default;
};

/// Point in the y-z plane.
inline constexpr Point yz(double y, double z) noexcept { return Point{0.0, y, z}; }

inline double distance(const Point &a, const Point &b) noexcept
{
    return std::sqrt((a.x - b.x) * (a.x - b.x) + (a.y - b.y) * (a.y - b.y) + (a.z - b.z) * (a.z - b.z));
}

/// Monochromatic wave at the analysis frequency.
struct WaveContext
{
    double wavelength = 1.0; ///< lambda [m]
    double wavenumber = 2.0 * std::numbers::pi; ///< beta = 2 pi / lambda [rad/m]
    double omega_bar = 0.0; ///< informational only [rad/s]

    static WaveContext from_wavelength(double wavelength, double omega_bar = 0.0)
    {
        if (!(wavelength > 0.0) || !std::isfinite(wavelength))
            throw DomainError("WaveContext: wavelength must be positive and finite");
        return WaveContext{wavelength, 2.0 * std::numbers::pi / wavelength, omega_bar};
    }
};

/// Segment of length 2a on the y-axis, centered at the origin.
struct LineSource
{
    double half_length = 1.0;

    static LineSource with_length(double length)
    {
        if (!(length > 0.0) || !std::isfinite(length))
            throw DomainError("LineSource: length must be positive and finite");
        return LineSource{0.5 * length};
    }

    double length() const noexcept { return 2.0 * half_length; }

    /// Endpoint at y = -a. Distances to it are called R+ (R+ = sqrt(z^2 + (y + a)^2)).
    Point focus_plus() const noexcept { return yz(-half_length, 0.0); }
    /// Endpoint at y = +a; distances to it are R-.
    Point focus_minus() const noexcept { return yz(half_length, 0.0); }

    /// Euclidean distance from p to the segment.
    double distance_to(const Point &p) const noexcept
    {
        const double dy = std::max(0.0, std::abs(p.y) - half_length);
        return std::sqrt(p.x * p.x + dy * dy + p.z * p.z);
    }
};

enum class ObservationKind
{
    grid,
    curve,
    closed_curve
};

/// Ordered observation points.
///
/// weights holds the quadrature measure of each point on the observation manifold
/// (arclength for curves, area for grids). When it is non-empty, discretized operators
/// are Nystrom approximations of the continuous eigenproblem; when empty every point
/// carries unit weight (point-set mode).
struct ObservationSet
{
    std::vector<Point> points;
    ObservationKind kind = ObservationKind::curve;
    std::vector<double> weights;
    std::vector<double> arclength; ///< curves only, strictly increasing
    std::size_t ny = 0; ///< grids only: points per row (y fastest)
    std::size_t nz = 0;

    std::size_t size() const noexcept { return points.size(); }
    bool continuous() const noexcept { return !weights.empty(); }

    /// Copy in point-set mode (unit weights).
    ObservationSet as_point_set() const
    {
        ObservationSet out = *this;
        out.weights.clear();
        return out;
    }

    void validate() const
    {
        if (points.empty())
            throw ContractViolation("ObservationSet: no points");
        if (!weights.empty() && weights.size() != points.size())
            throw ContractViolation("ObservationSet: weight count does not match point count");
        for (double w : weights)
            if (!(w > 0.0))
                throw ContractViolation("ObservationSet: weights must be positive");
        if (kind == ObservationKind::curve && !arclength.empty())
        {
            if (arclength.size() != points.size())
                throw ContractViolation("ObservationSet: arclength count does not match point count");
            for (std::size_t i = 1; i < arclength.size(); ++i)
                if (!(arclength[i] > arclength[i - 1]))
                    throw ContractViolation("ObservationSet: arclength must be strictly increasing");
        }
        if (kind == ObservationKind::grid && ny * nz != points.size())
            throw ContractViolation("ObservationSet: grid shape does not match point count");
    }
};

// ------------------------------------------------------------------------
// constant-xi geometry

/// xi = R+ - R-, with R+ the distance to y = -a and R- the distance to y = +a.
/// On the segment between the foci xi = 2 y0, and xi -> +l next to the endpoint y = +a.
inline double xi_of_point(const Point &p, const LineSource &src)
{
    const double r_plus = distance(p, src.focus_plus());
    const double r_minus = distance(p, src.focus_minus());
    const double tol = 1e-12 * src.half_length;
    if (r_plus <= tol || r_minus <= tol)
        throw DomainError("xi_of_point: point coincides with a source endpoint");
    const double l = src.length();
    return std::clamp(r_plus - r_minus, -l, l);
}

/// xi = n lambda for every integer n with |n lambda| <= 2a, ascending. These are the
/// hyperbolas crossing the source at lambda/2 spacing (y0 = n lambda / 2).
inline std::vector<double> q_xi_set(const LineSource &src, const WaveContext &wc)
{
    const auto n_max = static_cast<long>(std::floor(src.length() / wc.wavelength * (1.0 + 1e-12)));
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(2 * n_max + 1));
    for (long n = -n_max; n <= n_max; ++n)
        out.push_back(static_cast<double>(n) * wc.wavelength);
    return out;
}

/// Branch of the confocal hyperbola xi = const lying in z >= 0, parameterized by the
/// eccentric parameter t >= 0:  y = (xi/2) cosh t,  z = b sinh t,  b = sqrt(a^2 - xi^2/4).
/// t = 0 is the vertex on the source segment.
class Hyperbola
{
public:
    Hyperbola(double xi, const LineSource &src) : xi_(xi), src_(src)
    {
        if (!(std::abs(xi) < src.length()))
            throw DomainError("Hyperbola: |xi| must be strictly below the source length (degenerate ray)");
        semi_major_ = 0.5 * xi;
        semi_minor_ = std::sqrt(src.half_length * src.half_length - semi_major_ * semi_major_);
    }

    double xi() const noexcept { return xi_; }
    const LineSource &source() const noexcept { return src_; }

    Point at(double t) const noexcept { return yz(semi_major_ * std::cosh(t), semi_minor_ * std::sinh(t)); }

    /// |dp/dt|
    double speed(double t) const noexcept
    {
        const double sy = semi_major_ * std::sinh(t);
        const double sz = semi_minor_ * std::cosh(t);
        return std::sqrt(sy * sy + sz * sz);
    }

    /// Arclength between parameters t0 < t1 (8-point Gauss-Legendre; the speed is smooth).
    double arclength(double t0, double t1) const noexcept
    {
        static constexpr double x[4] = {0.1834346424956498, 0.5255324099163290, 0.7966664774136267,
                                        0.9602898564975363};
        static constexpr double w[4] = {0.3626837833783620, 0.3137066458778873, 0.2223810344533745,
                                        0.1012285362903763};
        const double c = 0.5 * (t0 + t1);
        const double h = 0.5 * (t1 - t0);
        double acc = 0.0;
        for (int i = 0; i < 4; ++i)
            acc += w[i] * (speed(c - h * x[i]) + speed(c + h * x[i]));
        return h * acc;
    }

    /// Angle between the asymptote of this branch and the +y axis.
    double asymptote_angle() const noexcept { return std::acos(xi_ / src_.length()); }

private:
    double xi_;
    LineSource src_;
    double semi_major_ = 0.0;
    double semi_minor_ = 0.0;
};

/// Samples of the xi hyperbola at arclength s = ds, 2 ds, ..., <= s_max measured from the
/// vertex on the source axis. The vertex itself lies on the source and is not emitted, so
/// every point has z > 0. Weights are ds (continuous mode).
inline ObservationSet trace_hyperbola(double xi, const LineSource &src, double s_max, double ds)
{
    if (!(ds > 0.0))
        throw DomainError("trace_hyperbola: ds must be positive");
    const Hyperbola h(xi, src);
    const auto n = static_cast<std::size_t>(std::floor(s_max / ds * (1.0 + 1e-12)));

    ObservationSet out;
    out.kind = ObservationKind::curve;
    out.points.reserve(n);
    out.arclength.reserve(n);
    out.weights.assign(n, ds);

    double t_prev = 0.0;
    double s_prev = 0.0;
    for (std::size_t k = 1; k <= n; ++k)
    {
        const double target = static_cast<double>(k) * ds;
        // Newton on S(t) - target, with S(t) = s_prev + integral from t_prev.
        double t = t_prev + (target - s_prev) / h.speed(t_prev);
        for (int it = 0; it < 60; ++it)
        {
            const double residual = s_prev + h.arclength(t_prev, t) - target;
            const double step = residual / h.speed(t);
            t -= step;
            if (std::abs(step) <= 1e-15 * std::max(1.0, t))
                break;
        }
        s_prev = s_prev + h.arclength(t_prev, t);
        t_prev = t;
        out.points.push_back(h.at(t));
        out.arclength.push_back(target);
    }
    return out;
}

/// The degenerate xi = +-2a "hyperbola": the part of the y-axis beyond the endpoint
/// (y = +-(a + s), z = 0). Provided so the full Q_xi family can be exported.
inline ObservationSet trace_degenerate_ray(double xi, const LineSource &src, double s_max, double ds)
{
    if (std::abs(std::abs(xi) - src.length()) > 1e-12 * src.length())
        throw DomainError("trace_degenerate_ray: xi must equal +-2a");
    if (!(ds > 0.0))
        throw DomainError("trace_degenerate_ray: ds must be positive");
    const double sign = xi > 0.0 ? 1.0 : -1.0;
    const auto n = static_cast<std::size_t>(std::floor(s_max / ds * (1.0 + 1e-12)));
    ObservationSet out;
    out.kind = ObservationKind::curve;
    for (std::size_t k = 1; k <= n; ++k)
    {
        const double s = static_cast<double>(k) * ds;
        out.points.push_back(yz(sign * (src.half_length + s), 0.0));
        out.arclength.push_back(s);
        out.weights.push_back(ds);
    }
    return out;
}

/// Conformal warp of the z > 0 half-plane, w = arccosh((y - i z) / a) on the principal
/// branch. Im(w) is constant along each xi hyperbola (xi = 2a cos Im w) and Re(w) is
/// constant along the confocal ellipses, so the hyperbola family maps to straight lines.
inline std::complex<double> warp(const Point &p, const LineSource &src)
{
    if (!(p.z > 0.0))
        throw DomainError("warp: defined only for z > 0 (branch cut on the source axis)");
    return std::acosh(std::complex<double>(p.y, -p.z) / src.half_length);
}

/// xi of the hyperbola through a warped point.
inline double xi_from_warp(std::complex<double> w, const LineSource &src)
{
    return src.length() * std::cos(w.imag());
}

// ------------------------------------------------------------------------
// observation manifolds

/// n points at the midpoints of equal angular cells of the semicircle z > 0 of given
/// radius, ordered from theta ~ 0 (+y) to theta ~ pi; weights are the arclength cells.
inline ObservationSet semicircular_arc(double radius, std::size_t n)
{
    if (!(radius > 0.0) || n == 0)
        throw DomainError("semicircular_arc: radius must be positive and n >= 1");
    ObservationSet out;
    out.kind = ObservationKind::curve;
    const double dtheta = std::numbers::pi / static_cast<double>(n);
    for (std::size_t k = 0; k < n; ++k)
    {
        const double theta = (static_cast<double>(k) + 0.5) * dtheta;
        out.points.push_back(yz(radius * std::cos(theta), radius * std::sin(theta)));
        out.arclength.push_back(radius * theta);
        out.weights.push_back(radius * dtheta);
    }
    return out;
}

/// Uniform ny x nz grid in the y-z plane including both ends of each range, y fastest.
/// Weights are the cell areas.
inline ObservationSet planar_grid(double y_min, double y_max, std::size_t ny, double z_min, double z_max,
                                  std::size_t nz)
{
    if (ny < 2 || nz < 2 || !(y_max > y_min) || !(z_max > z_min))
        throw DomainError("planar_grid: need at least 2x2 points and increasing bounds");
    ObservationSet out;
    out.kind = ObservationKind::grid;
    out.ny = ny;
    out.nz = nz;
    const double dy = (y_max - y_min) / static_cast<double>(ny - 1);
    const double dz = (z_max - z_min) / static_cast<double>(nz - 1);
    out.points.reserve(ny * nz);
    for (std::size_t iz = 0; iz < nz; ++iz)
        for (std::size_t iy = 0; iy < ny; ++iy)
            out.points.push_back(yz(y_min + dy * static_cast<double>(iy), z_min + dz * static_cast<double>(iz)));
    out.weights.assign(ny * nz, dy * dz);
    return out;
}

/// True when the xi hyperbola passes through the block of grid cells around point
/// `index` (its 3x3 neighbourhood, clipped at the grid edge): xi lies between the
/// smallest and largest xi sampled on that block.
inline bool hyperbola_within_one_cell(const ObservationSet &grid, std::size_t index, double xi, const LineSource &src)
{
    if (grid.kind != ObservationKind::grid || grid.ny * grid.nz != grid.size() || index >= grid.size())
        throw ContractViolation("hyperbola_within_one_cell: grid point required");
    const std::size_t iy = index % grid.ny, iz = index / grid.ny;
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (std::size_t z = iz > 0 ? iz - 1 : 0; z <= std::min(iz + 1, grid.nz - 1); ++z)
        for (std::size_t y = iy > 0 ? iy - 1 : 0; y <= std::min(iy + 1, grid.ny - 1); ++y)
        {
            const double v = xi_of_point(grid.points[z * grid.ny + y], src);
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    return xi >= lo && xi <= hi;
}

} // namespace eit
