// Copyright 2026 The hflow Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cstdlib>
#include <thread>
#include <vector>

namespace hflow::detail {

/// Worker cap from HFLOW_THREADS (default: hardware concurrency).
inline int assembly_threads() {
    static const int n = [] {
        int hw = static_cast<int>(std::thread::hardware_concurrency());
        if (hw < 1) hw = 1;
        if (const char* env = std::getenv("HFLOW_THREADS")) {
            const int v = std::atoi(env);
            if (v >= 1) return std::min(v, hw);
        }
        return hw;
    }();
    return n;
}

/// Runs body(i) for i in [0, n). Results must be written to per-item slots;
/// callers reduce sequentially afterwards, so output never depends on the
/// thread count.
template <class Body>
void parallel_for(std::size_t n, Body&& body) {
    const int threads = assembly_threads();
    if (threads <= 1 || n < 4096) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    const std::size_t chunk = (n + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
        const std::size_t b = t * chunk, e = std::min(n, b + chunk);
        if (b >= e) break;
        pool.emplace_back([&body, b, e] {
            for (std::size_t i = b; i < e; ++i) body(i);
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace hflow::detail
