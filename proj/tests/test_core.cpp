#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "hindsum/core.hpp"
#include "hindsum/errors.hpp"

using namespace hindsum;

namespace {

// Independent reference: enumerate all 2^len subsets directly.
std::vector<Nat> brute_fs_values(const std::vector<Nat>& xs, std::size_t start, Nat bound) {
    std::vector<bool> seen(bound, false);
    const std::size_t n = xs.size() - start;
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n); ++mask) {
        Nat sum = 0;
        for (std::size_t i = 0; i < n; ++i)
            if (mask >> i & 1) sum += xs[start + i];
        if (sum < bound) seen[sum] = true;
    }
    std::vector<Nat> out;
    for (Nat v = 0; v < bound; ++v)
        if (seen[v]) out.push_back(v);
    return out;
}

}  // namespace

TEST_CASE("bitset basics") {
    Bitset b(100);
    CHECK(b.none());
    b.set(0);
    b.set(63);
    b.set(64);
    b.set(99);
    CHECK(b.count() == 4);
    CHECK(b.test(63));
    CHECK(!b.test(62));
    CHECK(b.find_first() == 0);
    CHECK(b.find_first(1) == 63);
    CHECK(b.find_first(65) == 99);
    CHECK(b.find_first(100) == Bitset::npos);
    CHECK(b.find_last() == 99);
    CHECK(b.values() == std::vector<Nat>{0, 63, 64, 99});

    // Out-of-range literals are silently dropped.
    Bitset c = Bitset::from_values(10, {3, 7, 10, 500});
    CHECK(c.values() == std::vector<Nat>{3, 7});

    Bitset f = Bitset::full(70);
    CHECK(f.count() == 70);
    CHECK((~f).none());
    CHECK((~c).count() == 8);
    CHECK(c.is_subset_of(Bitset::full(10)));
    CHECK(!Bitset::full(10).is_subset_of(c));
    CHECK(c.intersects(Bitset::from_values(10, {7})));
    CHECK(!c.intersects(Bitset::from_values(10, {4})));
}

TEST_CASE("bitset shifts truncate at the universe edge") {
    Bitset b = Bitset::from_values(10, {2, 5, 9});
    CHECK(b.shifted_down(2).values() == std::vector<Nat>{0, 3, 7});
    CHECK(b.shifted_up(2).values() == std::vector<Nat>{4, 7});  // 9+2 falls off
    CHECK(b.shifted_down(10).none());
    CHECK(b.shifted_up(10).none());

    // Shifts crossing word boundaries.
    Bitset w = Bitset::from_values(200, {0, 63, 64, 130, 199});
    CHECK(w.shifted_up(65).values() == std::vector<Nat>{65, 128, 129, 195});
    CHECK(w.shifted_down(64).values() == std::vector<Nat>{0, 66, 135});

    std::mt19937_64 rng(11);
    for (int iter = 0; iter < 200; ++iter) {
        std::size_t size = 1 + rng() % 300;
        Bitset x(size);
        for (std::size_t i = 0; i < size; ++i)
            if (rng() & 1) x.set(i);
        Nat n = rng() % (size + 5);
        Bitset up = x.shifted_up(n);
        Bitset down = x.shifted_down(n);
        for (std::size_t i = 0; i < size; ++i) {
            CHECK(up.test(i) == (i >= n && x.test(i - n)));
            CHECK(down.test(i) == (i + n < size && x.test(i + n)));
        }
    }
}

TEST_CASE("ascending sequence validation") {
    CHECK_THROWS_AS(AscendingSeq({0, 1}), Error);
    CHECK_THROWS_AS(AscendingSeq({3, 3}), Error);
    CHECK_THROWS_AS(AscendingSeq({5, 2}), Error);
    AscendingSeq s({2, 4, 6});
    CHECK(s.size() == 3);
    CHECK(s[1] == 4);
    CHECK(s.tail(1) == AscendingSeq({4, 6}));
    CHECK(s.tail(3).empty());
    CHECK(AscendingSeq::range(1, 5) == AscendingSeq({1, 2, 3, 4, 5}));
}

TEST_CASE("fs values: pinned examples") {
    CHECK(fs_values(AscendingSeq({3, 5, 9}), 0, 20).values() ==
          std::vector<Nat>{3, 5, 8, 9, 12, 14, 17});
    CHECK(fs_values(AscendingSeq({1, 2, 4}), 0, 100).values() ==
          std::vector<Nat>{1, 2, 3, 4, 5, 6, 7});
    CHECK(fs_values(AscendingSeq({5}), 0, 4).none());
    CHECK(fs_values(AscendingSeq({2, 4, 6}), 0, 13).values() ==
          std::vector<Nat>{2, 4, 6, 8, 10, 12});
}

TEST_CASE("fs_bounded: explicit blocks, (value, block) order") {
    auto sums = fs_bounded(AscendingSeq({1, 2}), 0, 100);
    REQUIRE(sums.size() == 3);
    CHECK(sums[0] == BlockSum{1, {0}});
    CHECK(sums[1] == BlockSum{2, {1}});
    CHECK(sums[2] == BlockSum{3, {0, 1}});

    // Equal values break ties on the smaller block: 3 = x0 = 1+2.
    auto tie = fs_bounded(AscendingSeq({3, 4, 7}), 0, 100);
    std::vector<BlockSum> expect = {
        {3, {0}}, {4, {1}}, {7, {0, 1}}, {7, {2}},
        {10, {0, 2}}, {11, {1, 2}}, {14, {0, 1, 2}},
    };
    CHECK(tie == expect);

    // Bound cuts blocks, not just values.
    auto cut = fs_bounded(AscendingSeq({3, 4, 7}), 0, 8);
    std::vector<BlockSum> expect_cut = {{3, {0}}, {4, {1}}, {7, {0, 1}}, {7, {2}}};
    CHECK(cut == expect_cut);

    // Start offset restricts usable indices.
    auto off = fs_bounded(AscendingSeq({3, 4, 7}), 1, 100);
    std::vector<BlockSum> expect_off = {{4, {1}}, {7, {2}}, {11, {1, 2}}};
    CHECK(off == expect_off);
}

TEST_CASE("fs dual-route law: fs_values == values of fs_bounded") {
    std::mt19937_64 rng(7);
    for (int iter = 0; iter < 100; ++iter) {
        std::size_t len = 1 + rng() % 10;
        std::vector<Nat> xs;
        Nat v = 0;
        for (std::size_t i = 0; i < len; ++i) {
            v += 1 + rng() % 20;
            xs.push_back(v);
        }
        Nat bound = 1 + rng() % 200;
        std::size_t start = rng() % len;
        AscendingSeq seq(xs);

        Bitset dp = fs_values(seq, start, bound);
        std::vector<Nat> from_blocks;
        Nat last = 0;
        bool first = true;
        for (const auto& bs : fs_bounded(seq, start, bound)) {
            if (first || bs.value != last) from_blocks.push_back(bs.value);
            first = false;
            last = bs.value;
        }
        CHECK(dp.values() == from_blocks);
        CHECK(dp.values() == brute_fs_values(xs, start, bound));
    }
}

TEST_CASE("fs monotone in the start index") {
    std::mt19937_64 rng(13);
    for (int iter = 0; iter < 50; ++iter) {
        std::size_t len = 2 + rng() % 8;
        std::vector<Nat> xs;
        Nat v = 0;
        for (std::size_t i = 0; i < len; ++i) {
            v += 1 + rng() % 15;
            xs.push_back(v);
        }
        AscendingSeq seq(xs);
        for (std::size_t start = 0; start + 1 < len; ++start)
            CHECK(fs_values(seq, start + 1, 128).is_subset_of(fs_values(seq, start, 128)));
    }
}

TEST_CASE("translate_down composes and matches membership") {
    Bitset x = Bitset::from_values(50, {10, 11, 25, 49});
    CHECK(translate_down(x, 0) == x);
    CHECK(translate_down(translate_down(x, 3), 4) == translate_down(x, 7));
    Bitset t = translate_down(x, 10);
    for (std::size_t i = 0; i < 50; ++i)
        CHECK(t.test(i) == (i + 10 < 50 && x.test(i + 10)));
}
