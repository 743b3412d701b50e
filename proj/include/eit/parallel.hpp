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
#include <atomic>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace eit
{

namespace detail
{
inline std::atomic<unsigned> &thread_setting()
{
    static std::atomic<unsigned> n{0};
    return n;
}
} // namespace detail

/// Number of worker threads used by parallel loops. 0 restores the hardware default.
inline void set_thread_count(unsigned n) { detail::thread_setting().store(n); }

inline unsigned thread_count()
{
    unsigned n = detail::thread_setting().load();
    if (n == 0)
        n = std::max(1u, std::thread::hardware_concurrency());
    return n;
}

// Static block partition of [0, n). Each index is visited exactly once, so results
// written per index do not depend on the thread count. If several blocks throw, the
// exception of the lowest block is rethrown.
template <typename Fn>
void parallel_for(std::size_t n, Fn &&fn)
{
    const std::size_t workers = std::min<std::size_t>(thread_count(), n);
    if (workers <= 1)
    {
        for (std::size_t i = 0; i < n; ++i)
            fn(i);
        return;
    }

    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w)
    {
        const std::size_t begin = n * w / workers;
        const std::size_t end = n * (w + 1) / workers;
        pool.emplace_back([&, begin, end, w] {
            try
            {
                for (std::size_t i = begin; i < end; ++i)
                    fn(i);
            }
            catch (...)
            {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto &t : pool)
        t.join();
    for (auto &e : errors)
        if (e)
            std::rethrow_exception(e);
}

} // namespace eit
