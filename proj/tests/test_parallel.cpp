#include <doctest.h>

#include <vector>

#include "bsvi/parallel.hpp"
#include "bsvi/errors.hpp"

using namespace bsvi;

TEST_CASE("parallel_for covers every index exactly once at any width") {
    const std::size_t n = 1013;
    std::vector<int> counts;
    for (const std::size_t w : {1u, 3u, 8u}) {
        set_thread_count(w);
        counts.assign(n, 0);
        parallel_for(0, n, [&](std::size_t i) { counts[i] += 1; });
        for (int c : counts) CHECK(c == 1);
    }
    set_thread_count(1);
}

TEST_CASE("per-index outputs do not depend on the worker count") {
    const std::size_t n = 5000;
    std::vector<double> a(n), b(n);
    set_thread_count(1);
    parallel_for(0, n, [&](std::size_t i) { a[i] = static_cast<double>(i * i) * 0.5; });
    set_thread_count(8);
    parallel_for(0, n, [&](std::size_t i) { b[i] = static_cast<double>(i * i) * 0.5; });
    set_thread_count(1);
    CHECK(a == b);
}

TEST_CASE("exceptions propagate out of workers") {
    set_thread_count(4);
    CHECK_THROWS_AS(parallel_for(0, 100,
                                 [](std::size_t i) {
                                     if (i == 57) throw DivergedError("boom");
                                 }),
                    DivergedError);
    set_thread_count(1);
}
