// SPDX-License-Identifier: Apache-2.0
//
// vlcsim - multi-user indoor visible light communication simulator
// Copyright (C) 2026 The vlcsim authors
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

#include "vlc/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace vlc
{

WorkerPool::WorkerPool(std::size_t workers)
    : workers_(workers == 0 ? std::max(1u, std::thread::hardware_concurrency()) : workers)
{
}

void WorkerPool::parallel_for(std::size_t n, const std::function<void(std::size_t)> &fn) const
{
    const std::size_t nthreads = std::min(workers_, n);
    if (nthreads <= 1)
    {
        for (std::size_t i = 0; i < n; ++i)
            fn(i);
        return;
    }

    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;

    auto worker = [&] {
        for (;;)
        {
            const std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
            if (i >= n)
                return;
            try
            {
                fn(i);
            }
            catch (...)
            {
                std::lock_guard lock(error_mutex);
                if (!first_error)
                    first_error = std::current_exception();
                next.store(n);
                return;
            }
        }
    };

    {
        std::vector<std::jthread> threads;
        threads.reserve(nthreads);
        for (std::size_t t = 0; t < nthreads; ++t)
            threads.emplace_back(worker);
    }
    if (first_error)
        std::rethrow_exception(first_error);
}

const WorkerPool &serial_pool()
{
    static const WorkerPool pool(1);
    return pool;
}

} // namespace vlc
