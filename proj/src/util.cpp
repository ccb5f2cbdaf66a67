#include "opconvex/util.hpp"

#include <algorithm>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace opconvex {

int thread_budget() {
    const char* env = std::getenv("OPCONVEX_THREADS");
    if (!env || !*env) return 1;
    int want = 1;
    try {
        want = std::stoi(env);
    } catch (const std::exception&) {
        return 1;
    }
    const int hw = static_cast<int>(std::thread::hardware_concurrency());
    const int cap = hw > 0 ? hw : 1;
    if (want < 1) return 1;
    return want < cap ? want : cap;
}

void parallel_for(long n, const std::function<void(long)>& fn) {
    if (n <= 0) return;
    const int workers = thread_budget();
    if (workers <= 1 || n == 1) {
        for (long i = 0; i < n; ++i) fn(i);
        return;
    }
    const long chunk = (n + workers - 1) / workers;
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) {
        const long lo = w * chunk;
        const long hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &fn] {
            for (long i = lo; i < hi; ++i) fn(i);
        });
    }
    for (std::thread& t : pool) t.join();
}

} // namespace opconvex
