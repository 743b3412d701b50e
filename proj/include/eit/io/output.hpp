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

#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>

#include <Eigen/Dense>
#include <openssl/evp.h>

#include "../error.hpp"
#include "json.hpp"

namespace eit::io
{

inline std::string sha256_hex(std::string_view data)
{
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1)
        throw IoError("sha256: digest failed");
    static constexpr char hex[] = "0123456789abcdef";
    std::string out;
    out.reserve(2 * len);
    for (unsigned int i = 0; i < len; ++i)
    {
        out += hex[md[i] >> 4];
        out += hex[md[i] & 0xf];
    }
    return out;
}

/// Row-major little-endian float64 pairs (re, im).
inline std::string encode_matrix(const Eigen::MatrixXcd &m)
{
    std::string out;
    out.reserve(static_cast<std::size_t>(m.size()) * 16);
    auto put = [&out](double v) {
        auto bits = std::bit_cast<std::uint64_t>(v);
        if constexpr (std::endian::native == std::endian::big)
            bits = __builtin_bswap64(bits);
        char b[8];
        std::memcpy(b, &bits, 8);
        out.append(b, 8);
    };
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j)
        {
            put(m(i, j).real());
            put(m(i, j).imag());
        }
    return out;
}

/// All artifacts of one run. Files are written only through this object, only inside
/// the root directory, and each one is recorded with its size and SHA-256.
class OutputDir
{
public:
    explicit OutputDir(std::filesystem::path root) : root_(std::move(root))
    {
        std::error_code ec;
        std::filesystem::create_directories(root_, ec);
        if (ec || !std::filesystem::is_directory(root_))
            throw IoError("cannot create output directory '" + root_.string() + "'");
    }

    const std::filesystem::path &root() const noexcept { return root_; }

    void write(const std::string &name, std::string_view content)
    {
        if (name.empty() || name.find('/') != std::string::npos || name.find('\\') != std::string::npos ||
            name == "." || name == "..")
            throw ContractViolation("OutputDir: file names must be plain");
        const auto path = root_ / name;
        std::ofstream f(path, std::ios::binary | std::ios::trunc);
        if (!f)
            throw IoError("cannot open '" + path.string() + "' for writing");
        f.write(content.data(), static_cast<std::streamsize>(content.size()));
        f.close();
        if (!f)
            throw IoError("write to '" + path.string() + "' failed");
        files_[name] = {{"bytes", content.size()}, {"sha256", sha256_hex(content)}};
    }

    void write_matrix(const std::string &stem, const Eigen::MatrixXcd &m)
    {
        write(stem + ".bin", encode_matrix(m));
        const nlohmann::json side = {{"rows", m.rows()},
                                     {"cols", m.cols()},
                                     {"layout", "row-major, little-endian float64 (re, im) pairs"}};
        write(stem + ".json", side.dump(2) + "\n");
    }

    /// Writes manifest.json with the file table appended; the manifest is not listed in
    /// itself.
    void write_manifest(nlohmann::json manifest)
    {
        manifest["files"] = files_;
        const std::string text = manifest.dump(2) + "\n";
        const auto path = root_ / "manifest.json";
        std::ofstream f(path, std::ios::binary | std::ios::trunc);
        if (!f || !f.write(text.data(), static_cast<std::streamsize>(text.size())))
            throw IoError("cannot write '" + path.string() + "'");
    }

    const nlohmann::json &files() const noexcept { return files_; }

private:
    std::filesystem::path root_;
    nlohmann::json files_ = nlohmann::json::object();
};

} // namespace eit::io
