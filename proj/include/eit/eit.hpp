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

#include "coherence.hpp"
#include "error.hpp"
#include "geometry.hpp"
#include "kernels.hpp"
#include "ndf_estimators.hpp"
#include "parallel.hpp"
#include "source_model.hpp"
#include "spectral.hpp"
#include "stochastic.hpp"
#include "wigner.hpp"
