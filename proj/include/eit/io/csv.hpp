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

#include <charconv>
#include <cmath>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "../error.hpp"

namespace eit::io
{

/// Shortest round-trip decimal form, locale independent. Non-finite values are written
/// as nan, inf, -inf.
inline std::string format_double(double v)
{
    if (std::isnan(v))
        return "nan";
    if (std::isinf(v))
        return v > 0.0 ? "inf" : "-inf";
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

/// Comma-separated table with a fixed header; every row must match the header width.
class CsvTable
{
public:
    explicit CsvTable(std::vector<std::string> header) : width_(header.size())
    {
        if (header.empty())
            throw ContractViolation("CsvTable: empty header");
        for (std::size_t i = 0; i < header.size(); ++i)
        {
            if (i)
                text_ += ',';
            text_ += header[i];
        }
        text_ += '\n';
    }

    void row(std::span<const double> values)
    {
        if (values.size() != width_)
            throw ContractViolation("CsvTable: row width does not match header");
        for (std::size_t i = 0; i < values.size(); ++i)
        {
            if (i)
                text_ += ',';
            text_ += format_double(values[i]);
        }
        text_ += '\n';
        ++rows_;
    }

    void row(std::initializer_list<double> values) { row(std::span<const double>(values.begin(), values.size())); }

    const std::string &str() const noexcept { return text_; }
    std::size_t rows() const noexcept { return rows_; }

private:
    std::size_t width_;
    std::size_t rows_ = 0;
    std::string text_;
};

} // namespace eit::io
