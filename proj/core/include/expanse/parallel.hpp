#pragma once

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace expanse {

/// Worker count for the pair-scan kernels. Results never depend on it.
struct Parallelism {
    unsigned workers = 1;

    static Parallelism hardware() {
        return {std::max(1u, std::thread::hardware_concurrency())};
    }
};

/// Runs `body(worker, worker_count)` on `workers` threads and folds the
/// per-worker partials with `combine` in worker order. `combine` must be
/// associative and commutative (min/max) for the result to be independent of
/// the worker count.
template <class T, class Body, class Combine>
T parallel_reduce(unsigned workers, T identity, Body body, Combine combine) {
    workers = std::max(1u, workers);
    if (workers == 1) {
        return combine(identity, body(0u, 1u));
    }
    std::vector<T> partial(workers, identity);
    {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] { partial[w] = body(w, workers); });
        }
    }
    T acc = identity;
    for (const T& p : partial) acc = combine(acc, p);
    return acc;
}

}  // namespace expanse
