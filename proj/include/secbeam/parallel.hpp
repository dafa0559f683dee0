// SPDX-License-Identifier: Apache-2.0
//
// secbeam - movable-antenna analog beamforming for multicast secrecy
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

#include <atomic>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace secbeam
{

// Runs fn(i) for i in [0, count) on a worker pool. Tasks own their state;
// results must be written to task-indexed slots so completion order never
// matters. The first exception thrown by any task is rethrown.
inline void parallel_for(int count, int workers, const std::function<void(int)>& fn)
{
    if (workers <= 0)
        workers = int(std::thread::hardware_concurrency());
    workers = std::max(1, std::min(workers, count));
    if (workers == 1)
    {
        for (int i = 0; i < count; ++i)
            fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(size_t(workers));
    for (int t = 0; t < workers; ++t)
        pool.emplace_back([&] {
            for (;;)
            {
                int i = next.fetch_add(1);
                if (i >= count || failed.load())
                    return;
                try
                {
                    fn(i);
                }
                catch (...)
                {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!failed.exchange(true))
                        error = std::current_exception();
                    return;
                }
            }
        });
    for (auto& th : pool)
        th.join();
    if (error)
        std::rethrow_exception(error);
}

} // namespace secbeam
