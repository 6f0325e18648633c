#include <doctest.h>

#include <cstdint>
#include <set>
#include <vector>

#include "gloa/rng.hpp"

using gloa::SplitRng;

TEST_SUITE("rng") {

TEST_CASE("same seed reproduces the same sequence") {
    SplitRng a(12345), b(12345);
    for (int i = 0; i < 1000; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("different seeds diverge") {
    SplitRng a(1), b(2);
    int equal = 0;
    for (int i = 0; i < 64; ++i)
        if (a.next_u64() == b.next_u64()) ++equal;
    CHECK(equal == 0);
}

TEST_CASE("substreams do not depend on parent consumption") {
    SplitRng parent(99);
    SplitRng early = parent.substream(5);
    for (int i = 0; i < 100; ++i) parent.next_u64();
    SplitRng late = parent.substream(5);
    for (int i = 0; i < 100; ++i) CHECK(early.next_u64() == late.next_u64());
}

TEST_CASE("substreams with different ids are distinct") {
    SplitRng parent(99);
    SplitRng a = parent.substream(0);
    SplitRng b = parent.substream(1);
    int equal = 0;
    for (int i = 0; i < 64; ++i)
        if (a.next_u64() == b.next_u64()) ++equal;
    CHECK(equal == 0);
}

TEST_CASE("next_double lies in [0, 1) and fills the range") {
    SplitRng rng(7);
    double lo = 1.0, hi = 0.0, sum = 0.0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
        const double v = rng.next_double();
        CHECK(v >= 0.0);
        CHECK(v < 1.0);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
        sum += v;
    }
    CHECK(lo < 0.001);
    CHECK(hi > 0.999);
    CHECK(sum / n == doctest::Approx(0.5).epsilon(0.01));
}

TEST_CASE("uniform covers its interval and degenerates exactly") {
    SplitRng rng(3);
    for (int i = 0; i < 10000; ++i) {
        const double v = rng.uniform(-2.5, 4.0);
        CHECK(v >= -2.5);
        CHECK(v < 4.0);
    }
    CHECK(rng.uniform(1.5, 1.5) == 1.5);
    CHECK(rng.uniform(-7.25, -7.25) == -7.25);
}

TEST_CASE("uniform_int is inclusive on both ends") {
    SplitRng rng(11);
    std::set<int> seen;
    for (int i = 0; i < 1000; ++i) {
        const int v = rng.uniform_int(0, 3);
        CHECK(v >= 0);
        CHECK(v <= 3);
        seen.insert(v);
    }
    CHECK(seen.size() == 4);
    CHECK(rng.uniform_int(5, 5) == 5);
    CHECK(rng.uniform_int(-2, -2) == -2);
}

TEST_CASE("uniform_int is roughly uniform") {
    SplitRng rng(17);
    std::vector<int> counts(10, 0);
    const int n = 100000;
    for (int i = 0; i < n; ++i) ++counts[static_cast<std::size_t>(rng.uniform_int(0, 9))];
    for (int c : counts) {
        CHECK(c > n / 10 - n / 50);
        CHECK(c < n / 10 + n / 50);
    }
}

TEST_CASE("mix64 separates nearby inputs") {
    std::set<std::uint64_t> out;
    for (std::uint64_t i = 0; i < 1000; ++i) out.insert(gloa::detail::mix64(i));
    CHECK(out.size() == 1000);
}

} // TEST_SUITE
