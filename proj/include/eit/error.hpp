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

#include <cstddef>
#include <stdexcept>
#include <string>

namespace eit
{

/// Base class of every error raised by the library.
class Error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// An argument lies outside the mathematical domain of an operation.
class DomainError : public Error
{
public:
    using Error::Error;
};

/// Mutual information requested at |mu| -> 1, where it diverges.
class SaturationError : public DomainError
{
public:
    using DomainError::DomainError;
};

/// A Green's function was evaluated at (or on) its source point.
class SingularityError : public Error
{
public:
    SingularityError(const std::string &what, std::size_t obs_index = npos, std::size_t src_index = npos)
        : Error(what), obs_index_(obs_index), src_index_(src_index) {}

    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

    std::size_t obs_index() const noexcept { return obs_index_; }
    std::size_t src_index() const noexcept { return src_index_; }

private:
    std::size_t obs_index_;
    std::size_t src_index_;
};

/// Numerical failure: non-convergence, non-finite output, or a violated consistency bound.
class NumericalError : public Error
{
public:
    using Error::Error;
};

/// Caller broke a documented precondition (shapes, Hermiticity, uniform grids).
class ContractViolation : public Error
{
public:
    using Error::Error;
};

class RangeError : public Error
{
public:
    using Error::Error;
};

/// Quadrature too coarse for the wavelength.
class ResolutionError : public Error
{
public:
    using Error::Error;
};

class IoError : public Error
{
public:
    using Error::Error;
};

/// Configuration error; carries the offending key and 1-based line (0 when not line-bound).
class ParseError : public Error
{
public:
    ParseError(const std::string &what, std::string key, std::size_t line)
        : Error(what), key_(std::move(key)), line_(line) {}

    const std::string &key() const noexcept { return key_; }
    std::size_t line() const noexcept { return line_; }

private:
    std::string key_;
    std::size_t line_;
};

} // namespace eit
