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

#ifndef VLC_PARALLEL_HPP
#define VLC_PARALLEL_HPP

#include <cstddef>
#include <functional>

namespace vlc
{

// Runs index-parallel loops on a fixed number of workers. Each index is handed to
// exactly one worker; callers write results by index, so the outcome never depends
// on the worker count or on scheduling.
class WorkerPool
{
  public:
    // 0 selects std::thread::hardware_concurrency().
    explicit WorkerPool(std::size_t workers = 1);

    std::size_t size() const { return workers_; }

    void parallel_for(std::size_t n, const std::function<void(std::size_t)> &fn) const;

  private:
    std::size_t workers_;
};

// Pool used when a caller does not supply one.
const WorkerPool &serial_pool();

} // namespace vlc

#endif
