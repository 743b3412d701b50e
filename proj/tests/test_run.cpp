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

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "eit/io/run.hpp"

using namespace eit;
using namespace eit::io;
namespace fs = std::filesystem;

namespace
{
std::string slurp(const fs::path &p)
{
    std::ifstream f(p, std::ios::binary);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

std::vector<std::vector<std::string>> read_csv(const fs::path &p)
{
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(slurp(p));
    for (std::string line; std::getline(in, line);)
    {
        std::vector<std::string> cells;
        std::istringstream ls(line);
        for (std::string c; std::getline(ls, c, ',');)
            cells.push_back(c);
        rows.push_back(cells);
    }
    return rows;
}

class RunTest : public ::testing::Test
{
protected:
    void SetUp() override
    {
        const auto *info = ::testing::UnitTest::GetInstance()->current_test_info();
        root_ = fs::temp_directory_path() / (std::string("eit_run_") + info->name());
        fs::remove_all(root_);
        fs::create_directories(root_);
    }
    void TearDown() override { fs::remove_all(root_); }

    RunReport run(const std::string &text, const std::string &sub, RunOptions opt = {})
    {
        opt.out_dir = root_ / sub;
        return run_scenario(parse_scenario(text), opt);
    }

    fs::path root_;
};

const std::string far_arc = "wave.lambda = 1\nsource.length = 8\nsource.nodes_per_wavelength = 10\n"
                            "observation.radius = 100\nobservation.points = 240\n";
const std::string small_grid = "wave.lambda = 1\nsource.length = 8\n[observation]\nkind = grid\ny_min = 0\n"
                               "y_max = 30\nz_min = 2\nz_max = 32\nny = 31\nnz = 31\n";
} // namespace

TEST(Csv, NumberFormatting)
{
    EXPECT_EQ(format_double(0.1), "0.1");
    EXPECT_EQ(format_double(17.0), "17");
    EXPECT_EQ(format_double(-2.5e-300), "-2.5e-300");
    EXPECT_EQ(format_double(std::numeric_limits<double>::quiet_NaN()), "nan");
    EXPECT_EQ(format_double(-std::numeric_limits<double>::infinity()), "-inf");
    const double third = 1.0 / 3.0;
    EXPECT_EQ(std::stod(format_double(third)), third);

    CsvTable t({"a", "b"});
    t.row({1.0, 0.5});
    EXPECT_EQ(t.str(), "a,b\n1,0.5\n");
    EXPECT_THROW(t.row({1.0}), ContractViolation);
}

TEST(Output, Sha256AndMatrixEncoding)
{
    EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    Eigen::MatrixXcd m(1, 2);
    m << complex(1.0, -2.0), complex(0.5, 0.0);
    const auto bytes = encode_matrix(m);
    ASSERT_EQ(bytes.size(), 32u);
    EXPECT_EQ(bytes.substr(0, 8), std::string("\x00\x00\x00\x00\x00\x00\xf0\x3f", 8));
    EXPECT_EQ(bytes.substr(8, 8), std::string("\x00\x00\x00\x00\x00\x00\x00\xc0", 8));
    EXPECT_EQ(bytes.substr(16, 8), std::string("\x00\x00\x00\x00\x00\x00\xe0\x3f", 8));
}

TEST_F(RunTest, EquivalenceSpectraAndManifest)
{
    const auto rep = run("task = equivalence\noutput.dump_matrix = true\n" + far_arc, "eq");
    ASSERT_EQ(rep.exit_code, exit_code::ok) << rep.diagnostic;
    const auto rows = read_csv(root_ / "eq" / "spectra.csv");
    ASSERT_EQ(rows.front(), (std::vector<std::string>{"n", "sigma_n", "lambda_n", "gap", "alignment"}));
    ASSERT_EQ(rows.size(), 81u); // 80 source nodes
    for (std::size_t i = 1; i < rows.size(); ++i)
        EXPECT_LE(std::stod(rows[i][3]), 1e-10);
    for (std::size_t i = 1; i <= 20; ++i)
        EXPECT_GE(std::stod(rows[i][4]), 1.0 - 1e-8);
    EXPECT_EQ(rows[21][4], "nan");

    const auto manifest = nlohmann::json::parse(slurp(root_ / "eq" / "manifest.json"));
    EXPECT_EQ(manifest["task"], "equivalence");
    EXPECT_EQ(manifest["scenario"]["spectrum.epsilon"]["default"], true);
    EXPECT_EQ(manifest["scenario"]["source.nodes_per_wavelength"]["value"], "10");
    std::set<std::string> listed;
    for (const auto &[name, meta] : manifest["files"].items())
    {
        listed.insert(name);
        EXPECT_EQ(meta["sha256"], sha256_hex(slurp(root_ / "eq" / name))) << name;
    }
    std::set<std::string> on_disk;
    for (const auto &e : fs::directory_iterator(root_ / "eq"))
        if (e.path().filename() != "manifest.json")
            on_disk.insert(e.path().filename().string());
    EXPECT_EQ(listed, on_disk);
    EXPECT_TRUE(listed.count("csd_matrix.bin"));
    EXPECT_EQ(fs::file_size(root_ / "eq" / "csd_matrix.bin"), 240u * 240u * 16u);
    const auto side = nlohmann::json::parse(slurp(root_ / "eq" / "radiation_matrix.json"));
    EXPECT_EQ(side["rows"], 240);
    EXPECT_EQ(side["cols"], 80);
}

TEST_F(RunTest, HyperbolasHaveSeventeenGroups)
{
    const auto rep = run("task = hyperbolas\nwave.lambda = 1\nsource.length = 8\nobservation.s_max = 20\n"
                         "observation.ds = 0.5\n",
                         "hyp");
    ASSERT_EQ(rep.exit_code, exit_code::ok) << rep.diagnostic;
    const auto rows = read_csv(root_ / "hyp" / "hyperbolas.csv");
    ASSERT_EQ(rows.front(), (std::vector<std::string>{"s", "y", "z", "xi"}));
    std::set<double> groups;
    for (std::size_t i = 1; i < rows.size(); ++i)
        groups.insert(std::stod(rows[i][3]));
    EXPECT_EQ(groups.size(), 17u);
    EXPECT_EQ(rows.size(), 1u + 17u * 40u);
    EXPECT_EQ(*groups.begin(), -8.0);
    EXPECT_EQ(*groups.rbegin(), 8.0);
}

TEST_F(RunTest, RerunIsByteIdenticalAcrossThreadCounts)
{
    const std::string text = "task = mi-map\n" + small_grid;
    const unsigned saved = thread_count();
    set_thread_count(1);
    ASSERT_EQ(run(text, "a").exit_code, exit_code::ok);
    set_thread_count(4);
    ASSERT_EQ(run(text, "b").exit_code, exit_code::ok);
    set_thread_count(saved);
    for (const char *f : {"map.csv", "overlay.csv", "manifest.json"})
        EXPECT_EQ(slurp(root_ / "a" / f), slurp(root_ / "b" / f)) << f;
}

TEST_F(RunTest, MapColumnsMaskAndBits)
{
    RunOptions opt;
    opt.log_bits = true;
    const auto rep = run("task = csd-map\n" + small_grid + "[coherence]\nr1_y = 10\nr1_z = 10\nexclusion = 1.5\n",
                         "map", opt);
    ASSERT_EQ(rep.exit_code, exit_code::ok) << rep.diagnostic;
    const auto rows = read_csv(root_ / "map" / "map.csv");
    ASSERT_EQ(rows.front(), (std::vector<std::string>{"y", "z", "abs_mu", "mi_bits", "mask"}));
    ASSERT_EQ(rows.size(), 1u + 31u * 31u);
    std::size_t masked = 0;
    for (std::size_t i = 1; i < rows.size(); ++i)
        if (rows[i][4] != "0")
        {
            ++masked;
            EXPECT_EQ(rows[i][2], "nan");
        }
    EXPECT_EQ(masked, 9u); // (10, 10) and its four axis and four diagonal neighbours
    EXPECT_EQ(rep.results["masked"], 9);
    EXPECT_TRUE(fs::exists(root_ / "map" / "csd.csv"));
    EXPECT_TRUE(rep.results["argmax"]["within_one_cell_of_xi_r1"].get<bool>());
}

TEST_F(RunTest, WignerAndMonteCarlo)
{
    const auto w = run("task = wigner\nwave.lambda = 1\nsource.length = 8\nobservation.s_max = 60\n"
                       "observation.ds = 0.1\nwigner.n_k = 64\nwigner.stride = 20\n",
                       "w");
    ASSERT_EQ(w.exit_code, exit_code::ok) << w.diagnostic;
    const auto rows = read_csv(root_ / "w" / "wigner.csv");
    EXPECT_EQ(rows.front(), (std::vector<std::string>{"s", "k_s", "wdf"}));
    EXPECT_EQ(rows.size(), 1u + 30u * 64u);
    EXPECT_NEAR(w.results["outer_column"]["centroid_over_beta"].get<double>(), 1.0, 0.05);

    const auto mc = run("task = monte-carlo\n" + far_arc + "monte_carlo.realizations = 2000\nmonte_carlo.modes = 5\n",
                        "mc");
    ASSERT_EQ(mc.exit_code, exit_code::ok) << mc.diagnostic;
    const auto spec = read_csv(root_ / "mc" / "mc_spectrum.csv");
    EXPECT_EQ(spec.front(), (std::vector<std::string>{"n", "lambda_empirical", "lambda_analytic"}));
    EXPECT_EQ(spec.size(), 6u);
    const auto manifest = nlohmann::json::parse(slurp(root_ / "mc" / "manifest.json"));
    EXPECT_EQ(manifest["results"]["rng_algorithm"], std::string(rng_algorithm));
    EXPECT_EQ(manifest["results"]["seed"], 1);
    EXPECT_LT(manifest["results"]["max_diagonal_deviation_in_sigma"].get<double>(), 5.0);
}

TEST_F(RunTest, NdfPrintsJson)
{
    std::ostringstream out;
    RunOptions opt;
    opt.out = &out;
    const auto rep = run("task = ndf\nwave.lambda = 1\nsource.length = 8\nndf.estimator = sphere\nndf.sphere_radius = 2\n",
                         "ndf", opt);
    ASSERT_EQ(rep.exit_code, exit_code::ok) << rep.diagnostic;
    const auto doc = nlohmann::json::parse(out.str());
    EXPECT_EQ(doc["estimator"], "sphere");
    EXPECT_NEAR(doc["value"].get<double>(), 16.0 * std::numbers::pi * std::numbers::pi, 1e-9);
    EXPECT_TRUE(doc.contains("inputs"));
}

TEST_F(RunTest, ExitCodes)
{
    // Output directory below a regular file cannot be created.
    std::ofstream(root_ / "blocker") << "x";
    RunOptions opt;
    opt.out_dir = root_ / "blocker" / "sub";
    const auto io = run_scenario(parse_scenario("task = ndf\nwave.lambda = 1\nsource.length = 8\n"), opt);
    EXPECT_EQ(io.exit_code, exit_code::io);

    const auto num = run("task = wigner\nwave.lambda = 1\nsource.length = 8\nwigner.window_half_width = 1\n", "num");
    EXPECT_EQ(num.exit_code, exit_code::numerical);
    EXPECT_NE(num.diagnostic.find("window"), std::string::npos);

    const auto on_source = run("task = mi-map\n" + small_grid + "coherence.r1_y = 1\ncoherence.r1_z = 0\n", "src");
    EXPECT_EQ(on_source.exit_code, exit_code::numerical);

    const auto shape = run("task = csd-map\nwave.lambda = 1\nsource.length = 8\nobservation.kind = arc\n", "shape");
    EXPECT_EQ(shape.exit_code, exit_code::usage);
}
