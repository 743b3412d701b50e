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

// Tangential wavenumber centroid of the Wigner distribution along a hyperbola,
// moving away from the source.

#include <cstdio>

#include "eit/eit.hpp"

int main()
{
    using namespace eit;
    const auto wc = WaveContext::from_wavelength(1.0);
    const auto line = LineSource::with_length(8.0);
    const auto src = build_quadrature(line, homogeneous_intensity(), wc, 20.0);
    const auto curve = trace_hyperbola(xi_of_point(yz(20.0, 16.0), line), line, 300.0, 0.05);
    WignerOptions opt;
    opt.stride = 100;
    const auto map = wdf_along_curve(curve, src, wc, opt);
    std::printf("%8s %12s %12s %10s\n", "s", "centroid/b", "spread/b", "truncated");
    for (std::size_t i = 0; i < map.s_values.size(); ++i)
    {
        const auto c = spectral_centroid(map, map.s_values[i]);
        std::printf("%8.1f %12.4f %12.4f %10s\n", c.s, c.centroid / wc.wavenumber, c.spread / wc.wavenumber,
                    map.truncated[i] ? "yes" : "no");
    }
}
