#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>
#include <string>

#include <hindsum/eliminate.hpp>
#include <hindsum/errors.hpp>
#include <hindsum/expr.hpp>
#include <hindsum/summable.hpp>

using namespace hindsum;

namespace {

Bitset threshold_bits(Nat c, Nat bound) {
    Bitset b(bound);
    for (Nat n = c; n < bound; ++n) b.set(static_cast<std::size_t>(n));
    return b;
}

Bitset residue_bits(Nat rem, Nat mod, Nat bound) {
    Bitset b(bound);
    for (Nat n = rem; n < bound; n += mod) b.set(static_cast<std::size_t>(n));
    return b;
}

ElimConfig small_cfg() {
    ElimConfig cfg;
    cfg.h = Horizon{4096, 1};
    cfg.trans_bound = 1;
    cfg.param_range = 1;
    return cfg;
}

const AlgebraCatalog::Entry* find_entry(const AlgebraCatalog& cat, const std::string& name) {
    for (const auto& e : cat.entries)
        if (e.name == name) return &e;
    return nullptr;
}

}  // namespace

TEST_CASE("hat_monotone forces strict increase") {
    CHECK(hat_monotone({{5, 1, 7}}) == Enumeration{{5, 6, 7}});
    CHECK(hat_monotone({{0, 0, 0}}) == Enumeration{{0, 1, 2}});
    // strictly increasing input is a fixpoint
    CHECK(hat_monotone({{1, 3, 9}}) == Enumeration{{1, 3, 9}});
    CHECK(hat_monotone({}) == Enumeration{});
}

TEST_CASE("hat_monotone properties on random tables") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 100; ++trial) {
        Enumeration f;
        const std::size_t len = rng() % 12;
        for (std::size_t i = 0; i < len; ++i) f.values.push_back(rng() % 50);

        const Enumeration g = hat_monotone(f);
        REQUIRE(g.values.size() == f.values.size());
        for (std::size_t i = 0; i + 1 < g.values.size(); ++i)
            CHECK(g.values[i] < g.values[i + 1]);
        for (std::size_t i = 0; i < g.values.size(); ++i) CHECK(g.values[i] >= f.values[i]);
        CHECK(hat_monotone(g) == g);  // idempotent
        if (std::is_sorted(f.values.begin(), f.values.end(),
                           [](Nat a, Nat b) { return a <= b; }))
            CHECK(g == f);  // strictly increasing input unchanged
    }
}

TEST_CASE("extract_generators finds the least tail inside the set") {
    const FfsFilter f{AscendingSeq{{1, 10, 100, 1000}}, Horizon{4096, 1}, -1};

    // {n >= 50}: the 0- and 1-tails are blocked by the values 1 and 10, the
    // 2-tail {100, 1000, 1100} fits.
    const auto ex = extract_generators(f, threshold_bits(50, 4096));
    REQUIRE(ex.has_value());
    CHECK(ex->m == 2);
    CHECK(ex->tail == AscendingSeq{{100, 1000}});
    // minimality cross-check: the tail one step earlier escapes the set
    CHECK_FALSE(fs_values(f.generators, 1, 4096).is_subset_of(threshold_bits(50, 4096)));
    // soundness: every finite sum of the returned tail lies inside the set
    CHECK(fs_values(f.generators, ex->m, 4096).is_subset_of(threshold_bits(50, 4096)));

    SUBCASE("full set takes every generator") {
        const auto all = extract_generators(f, Bitset::full(4096));
        REQUIRE(all.has_value());
        CHECK(all->m == 0);
        CHECK(all->tail == f.generators);
    }
    SUBCASE("sets outside the filter yield the zero sequence") {
        CHECK_FALSE(extract_generators(f, Bitset(4096)).has_value());  // empty set is Out
        // undecided under min_tail 2: {1000} alone is no longer a legal witness tail
        const FfsFilter strict{AscendingSeq{{1, 10, 100, 1000}}, Horizon{4096, 2}, -1};
        CHECK_FALSE(extract_generators(strict, threshold_bits(200, 4096)).has_value());
    }
}

TEST_CASE("index_functional picks the earliest deciding stage") {
    // min_tail 2 keeps the base stage honest: no singleton tail decides parity
    ElimConfig cfg = small_cfg();
    cfg.h = Horizon{4096, 2};
    const Program prog = parse_program("t0(j) = { n : n % 2 == 0 }\ngoal = U(t0(0))");
    const ElimResult r = eliminate(prog.terms, prog.goal, cfg);
    REQUIRE(r.ctx.stages.size() == 2);

    const Bitset evens = residue_bits(0, 2, 4096);
    CHECK(index_functional(r.ctx.stages, evens) == 1);  // first held by the refined stage
    CHECK(index_functional(r.ctx.stages, Bitset::full(4096)) == 0);
    CHECK_FALSE(index_functional(r.ctx.stages, Bitset(4096)).has_value());

    // consistency: a set both stages contain reports the earlier position
    // (threshold 8 keeps even the refined filter's two-element tail inside)
    const Bitset cofinite = threshold_bits(8, 4096);
    CHECK(ffs_member(r.ctx.stages[0], cofinite).polarity == Verdict::In);
    CHECK(ffs_member(r.ctx.stages[1], cofinite).polarity == Verdict::In);
    CHECK(index_functional(r.ctx.stages, cofinite) == 0);
}

TEST_CASE("eliminate_ss re-inserts the extracted finite-sum set") {
    const Program prog = parse_program("t0(j) = { n : n % 2 == 0 }\ngoal = U(t0(0))");
    const SsResult r = eliminate_ss(prog.terms, prog.goal, small_cfg());

    CHECK(r.elim.goal == GoalValue{GoalValue::Kind::VerdictKind, Verdict::In, 0});
    // two program entries reserve room for one finite-sum insert: target 5
    CHECK(r.elim.final.generators == AscendingSeq{{2, 4, 6, 8, 10}});

    REQUIRE(r.tails.size() == 1);  // only the In entry is extracted, not its translate
    const TailRecord& t = r.tails[0];
    CHECK(t.entry == "t0[j=0]");
    CHECK(t.stage == 0);
    CHECK(t.m == 0);
    CHECK(t.tail == r.elim.final.generators);
    CHECK(t.fs_entry == "fs(t0[j=0])");
    // min_tail 1 artifact: the base stage already holds the evens through its
    // final singleton tail, so the earliest containing position is 0
    CHECK(t.first_in == 0);

    REQUIRE(r.elim.catalog.entries.size() == 3);
    const auto* fs = find_entry(r.elim.catalog, "fs(t0[j=0])");
    REQUIRE(fs != nullptr);
    REQUIRE(fs->recorded.has_value());
    CHECK(fs->recorded->polarity == Verdict::In);
    // the inserted set is exactly the subset sums of the even generators
    const Bitset want =
        Bitset::from_values(4096, {2, 4, 6, 8, 10, 12, 14, 16, 18, 20, 22, 24, 26, 28, 30});
    CHECK(evaluate_entry(*fs, r.elim.ctx, 4096) == want);
    CHECK(ffs_member(r.elim.final, want).polarity == Verdict::In);

    SUBCASE("the plain run lacks the finite-sum entry") {
        const ElimResult plain = eliminate(prog.terms, prog.goal, small_cfg());
        CHECK(plain.catalog.entries.size() == 2);
        CHECK(find_entry(plain.catalog, "fs(t0[j=0])") == nullptr);
    }
    SUBCASE("the extended catalog still passes the axiom checks") {
        const Report pnu = check_pnu(r.elim.final, r.elim.catalog, r.elim.ctx, 100);
        CHECK(pnu.ok());
        CHECK(pnu.complete);
        CHECK(check_dta(r.elim.final, r.elim.catalog, r.elim.ctx).ok());
        CHECK(check_stability(r.elim.traces, r.elim.ctx).ok());
    }
}

TEST_CASE("eliminate_ss carries inserts through later stages") {
    const Program prog = parse_program(
        "t0(j) = { n : n % 2 == 0 }\n"
        "t1(j) = { n : n % 2 == U(t0(0)) }\n"
        "goal = U(t1(0))");
    const SsResult r = eliminate_ss(prog.terms, prog.goal, small_cfg());

    CHECK(r.elim.goal.verdict == Verdict::In);
    REQUIRE(r.tails.size() == 2);
    CHECK(r.tails[0].entry == "t0[j=0]");
    CHECK(r.tails[0].stage == 0);
    CHECK(r.tails[1].entry == "t1[j=0]");
    CHECK(r.tails[1].stage == 1);

    // stage 0 ran at target 10, stage 1 at target 8
    CHECK(r.elim.traces[0].generators_after.size() == 10);
    CHECK(r.elim.final.generators == AscendingSeq{{2, 4, 6, 8, 10, 12, 14, 16}});

    // 2 program entries per stage plus one insert each
    CHECK(r.elim.catalog.entries.size() == 6);

    // the stage-0 insert (sums of 2..20) survives the stage-1 refinement: the
    // final tail's sums reach only 72, comfortably inside
    for (const TailRecord& t : r.tails) {
        const auto* fs = find_entry(r.elim.catalog, t.fs_entry);
        REQUIRE(fs != nullptr);
        const Bitset sums = evaluate_entry(*fs, r.elim.ctx, 4096);
        CHECK(ffs_member(r.elim.final, sums).polarity == Verdict::In);
    }
    const auto* fs0 = find_entry(r.elim.catalog, "fs(t0[j=0])");
    const Bitset sums0 = evaluate_entry(*fs0, r.elim.ctx, 4096);
    CHECK(sums0.count() == 55);  // even values 2..110
    CHECK(sums0.test(110));
    CHECK_FALSE(sums0.test(112));

    CHECK(check_stability(r.elim.traces, r.elim.ctx).ok());
    CHECK(check_pnu(r.elim.final, r.elim.catalog, r.elim.ctx, 100).ok());
    CHECK(check_dta(r.elim.final, r.elim.catalog, r.elim.ctx).ok());
}

TEST_CASE("eliminate_ss on a termless program matches eliminate") {
    const Program prog = parse_program("goal = mu({ n : n >= 7 })");
    const SsResult ss = eliminate_ss(prog.terms, prog.goal, small_cfg());
    const ElimResult plain = eliminate(prog.terms, prog.goal, small_cfg());

    CHECK(ss.tails.empty());
    CHECK(ss.elim.goal == plain.goal);
    CHECK(ss.elim.goal.number == 7);
    CHECK(ss.elim.final.generators == plain.final.generators);
    CHECK(ss.elim.catalog.entries.size() == plain.catalog.entries.size());
}
