#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "fnt/rng.hpp"

using namespace fnt;

TEST_CASE("rng streams are deterministic per seed") {
    Rng a(42);
    Rng b(42);
    for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
    Rng c(43);
    Rng d(42);
    bool all_equal = true;
    for (int i = 0; i < 10; ++i) all_equal &= (c.next_u64() == d.next_u64());
    CHECK_FALSE(all_equal);
}

TEST_CASE("uniform stays in range") {
    Rng rng(7);
    for (int i = 0; i < 10000; ++i) {
        const double u = rng.uniform();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
        const double v = rng.uniform(-2.0, 3.0);
        CHECK(v >= -2.0);
        CHECK(v <= 3.0);
        const std::size_t k = rng.uniform_index(17);
        CHECK(k < 17);
    }
}

TEST_CASE("gaussian has roughly standard moments") {
    Rng rng(11);
    const int n = 200000;
    double mean = 0.0;
    double var = 0.0;
    std::vector<double> draws(n);
    for (int i = 0; i < n; ++i) {
        draws[i] = rng.gaussian();
        mean += draws[i];
    }
    mean /= n;
    for (double x : draws) var += (x - mean) * (x - mean);
    var /= n;
    CHECK(std::fabs(mean) < 0.02);
    CHECK(std::fabs(var - 1.0) < 0.03);
}

TEST_CASE("derive_seed separates streams") {
    const std::uint64_t master = 99;
    CHECK(derive_seed(master, 0, 0) != derive_seed(master, 0, 1));
    CHECK(derive_seed(master, 0, 0) != derive_seed(master, 1, 0));
    CHECK(derive_seed(master, 2, 3) == derive_seed(master, 2, 3));
    CHECK(derive_seed(master, 2, 3) != derive_seed(master + 1, 2, 3));
}

TEST_CASE("shuffle is a seed-deterministic permutation") {
    std::vector<int> v1{0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
    std::vector<int> v2 = v1;
    Rng r1(5);
    Rng r2(5);
    shuffle(v1, r1);
    shuffle(v2, r2);
    CHECK(v1 == v2);
    std::vector<int> sorted = v1;
    std::sort(sorted.begin(), sorted.end());
    CHECK(sorted == std::vector<int>{0, 1, 2, 3, 4, 5, 6, 7, 8, 9});
}
