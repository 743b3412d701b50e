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

// eit <task> --config <file> [--out <dir>] [--threads N] [--log-bits]

#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "eit/io/run.hpp"

int main(int argc, char **argv)
{
    using namespace eit::io;

    CLI::App app{"Field degrees of freedom, coherence and Wigner analysis of incoherent line sources"};
    app.require_subcommand(1, 1);
    app.set_version_flag("--version", std::string(tool_version));

    std::string config;
    std::string out_dir;
    unsigned threads = 0;
    bool log_bits = false;

    for (auto name : task_names)
    {
        auto *sub = app.add_subcommand(std::string(name), "run the " + std::string(name) + " task");
        sub->add_option("--config", config, "scenario file")->required()->check(CLI::ExistingFile);
        sub->add_option("--out", out_dir, "output directory (overrides output.dir)");
        sub->add_option("--threads", threads, "worker threads (0 = hardware concurrency)")->check(CLI::Range(0u, 4096u));
        sub->add_flag("--log-bits", log_bits, "report mutual information in bits");
    }

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError &e)
    {
        const int rc = app.exit(e);
        return rc == 0 ? exit_code::ok : exit_code::usage;
    }

    const auto task = task_from_name(app.get_subcommands().front()->get_name());
    eit::set_thread_count(threads);

    Scenario sc;
    try
    {
        sc = load_scenario(config, task);
    }
    catch (const eit::ParseError &e)
    {
        std::cerr << "eit: " << config << ": " << e.what() << '\n';
        return exit_code::usage;
    }
    catch (const eit::IoError &e)
    {
        std::cerr << "eit: " << e.what() << '\n';
        return exit_code::io;
    }
    catch (const eit::Error &e)
    {
        std::cerr << "eit: " << config << ": " << e.what() << '\n';
        return exit_code::usage;
    }

    RunOptions opt;
    if (!out_dir.empty())
        opt.out_dir = out_dir;
    opt.log_bits = log_bits;
    const auto report = run_scenario(sc, opt);
    if (report.exit_code != exit_code::ok)
        std::cerr << "eit: " << task_name(sc.task) << ": " << report.diagnostic << '\n';
    return report.exit_code;
}
