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

// |mu| between a fixed point and points along its own hyperbola and the next one.

#include <cstdio>

#include "eit/eit.hpp"

int main()
{
    using namespace eit;
    const auto wc = WaveContext::from_wavelength(1.0);
    const auto line = LineSource::with_length(8.0);
    const auto src = build_quadrature(line, homogeneous_intensity(), wc, 20.0);
    const Point r1 = yz(20.0, 16.0);
    const double xi = xi_of_point(r1, line);
    const auto same = trace_hyperbola(xi, line, 300.0, 20.0);
    const auto next = trace_hyperbola(xi - 1.0, line, 300.0, 20.0);
    std::printf("xi(r1) = %.4f lambda\n%8s %10s %10s %10s\n", xi, "s", "z", "same", "adjacent");
    for (std::size_t i = 0; i < same.size(); ++i)
        std::printf("%8.1f %10.2f %10.4f %10.4f\n", same.arclength[i], same.points[i].z,
                    std::abs(degree_of_coherence(r1, same.points[i], src, wc)),
                    std::abs(degree_of_coherence(r1, next.points[i], src, wc)));
}
