#pragma once

#include <condition_variable>
#include <cstddef>
#include <exception>
#include <map>
#include <mutex>
#include <optional>
#include <thread>
#include <type_traits>
#include <vector>

namespace totient {

// Worker count from an explicit request, else TOTIENT_THREADS, else the
// hardware concurrency.
unsigned resolve_threads(std::optional<unsigned> requested);

// Runs map(i) for i in [begin, end) on `threads` workers and feeds the
// results to reduce(i, result) on the calling thread in ascending i.
// At most 2 * threads results are buffered. The first exception from either
// side stops the pool and is rethrown.
template <class Map, class Reduce>
void ordered_parallel_for(std::size_t begin, std::size_t end, unsigned threads, Map map, Reduce reduce) {
    using T = std::invoke_result_t<Map&, std::size_t>;
    if (threads <= 1 || end - begin <= 1) {
        for (std::size_t i = begin; i < end; ++i) reduce(i, map(i));
        return;
    }

    std::mutex mu;
    std::condition_variable cv;
    std::map<std::size_t, T> ready;
    std::size_t next_claim = begin;
    std::size_t next_reduce = begin;
    const std::size_t cap = std::size_t{threads} * 2;
    std::exception_ptr error;
    bool stop = false;

    auto fail = [&](std::exception_ptr e) {
        std::lock_guard lk(mu);
        if (!error) error = e;
        stop = true;
    };

    auto worker = [&] {
        for (;;) {
            std::size_t i;
            {
                std::unique_lock lk(mu);
                cv.wait(lk, [&] { return stop || next_claim >= end || next_claim < next_reduce + cap; });
                if (stop || next_claim >= end) return;
                i = next_claim++;
            }
            try {
                T value = map(i);
                std::lock_guard lk(mu);
                ready.emplace(i, std::move(value));
            } catch (...) {
                fail(std::current_exception());
            }
            cv.notify_all();
        }
    };

    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);

    for (std::size_t i = begin; i < end; ++i) {
        std::optional<T> value;
        {
            std::unique_lock lk(mu);
            cv.wait(lk, [&] { return stop || ready.count(i) != 0; });
            if (stop) break;
            auto it = ready.find(i);
            value.emplace(std::move(it->second));
            ready.erase(it);
            next_reduce = i + 1;
        }
        cv.notify_all();
        try {
            reduce(i, std::move(*value));
        } catch (...) {
            fail(std::current_exception());
            cv.notify_all();
            break;
        }
    }
    {
        std::lock_guard lk(mu);
        stop = true;
    }
    cv.notify_all();
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace totient
