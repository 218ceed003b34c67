#ifndef SCLDPC_PARALLEL_HPP
#define SCLDPC_PARALLEL_HPP

#include <algorithm>
#include <functional>
#include <thread>
#include <vector>

namespace scldpc {

// default worker count for analyses; 0 picks the hardware value
int default_workers();
void set_default_workers(int n);

// static partition of [0, n) over workers; fn(index, worker). Each worker
// owns a contiguous range, so writes to per-index slots never collide and
// results cannot depend on the worker count.
inline void parallel_for(int n, int workers, const std::function<void(int, int)>& fn) {
    workers = std::max(1, std::min(workers, n));
    if (workers == 1) {
        for (int i = 0; i < n; ++i) fn(i, 0);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
        int lo = static_cast<int>(static_cast<long long>(n) * w / workers);
        int hi = static_cast<int>(static_cast<long long>(n) * (w + 1) / workers);
        pool.emplace_back([=, &fn] {
            for (int i = lo; i < hi; ++i) fn(i, w);
        });
    }
    for (auto& t : pool) t.join();
}

}  // namespace scldpc

#endif
