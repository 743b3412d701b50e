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

// Normalized singular values of line sources of several lengths seen from a far arc.
// The knee sits near 2L/lambda.

#include <cstdio>

#include "eit/eit.hpp"

int main()
{
    using namespace eit;
    const auto wc = WaveContext::from_wavelength(1.0);
    const auto obs = semicircular_arc(200.0, 720);
    for (double length : {4.0, 8.0, 16.0})
    {
        const auto line = LineSource::with_length(length);
        const auto src = build_quadrature(line, homogeneous_intensity(), wc, 10.0);
        const auto dec = singular_decompose(build_radiation_matrix(obs, src, wc));
        std::vector<double> lam(static_cast<std::size_t>(dec.singular_values.size()));
        for (std::size_t i = 0; i < lam.size(); ++i)
            lam[i] = dec.singular_values(static_cast<Eigen::Index>(i)) * dec.singular_values(static_cast<Eigen::Index>(i));
        std::printf("L = %4.1f lambda  NDF = %zu  (2L/lambda = %.0f)\n", length, ndf_from_spectrum(lam), 2.0 * length);
        for (std::size_t n = 0; n < std::min<std::size_t>(lam.size(), static_cast<std::size_t>(2.5 * length)); ++n)
            std::printf("  %3zu  %.4e\n", n + 1, dec.singular_values(static_cast<Eigen::Index>(n)) /
                                                     dec.singular_values(0));
    }
}
