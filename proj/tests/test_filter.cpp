#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <string>

#include <hindsum/errors.hpp>
#include <hindsum/expr.hpp>
#include <hindsum/filter.hpp>

using namespace hindsum;

namespace {

Bitset residue_bits(Nat rem, Nat mod, Nat bound) {
    Bitset b(bound);
    for (Nat n = rem; n < bound; n += mod) b.set(static_cast<std::size_t>(n));
    return b;
}

OracleContext bare_ctx(Nat bound) {
    OracleContext ctx;
    ctx.terms = std::make_shared<std::vector<ProgramTerm>>();
    ctx.h = Horizon{bound, 1};
    return ctx;
}

AlgebraCatalog::Entry entry_of(std::string name, ExprPtr e) {
    return {std::move(name), std::move(e), 0, std::nullopt};
}

}  // namespace

TEST_CASE("frechet base filter takes generators up to the square root") {
    FfsFilter f = frechet(Horizon{100, 1});
    CHECK(f.generators == AscendingSeq::range(1, 10));
    CHECK(f.stage == -1);
    CHECK(frechet(Horizon{4, 1}).generators == AscendingSeq::range(1, 2));
    CHECK_THROWS_AS(frechet(Horizon{1, 1}), Error);
    CHECK_THROWS_AS(frechet(Horizon{0, 1}), Error);
}

TEST_CASE("filter validation rejects malformed shapes") {
    CHECK_THROWS_AS(validate_filter({AscendingSeq({1, 2}), Horizon{64, 0}, 0}), Error);
    CHECK_THROWS_AS(validate_filter({AscendingSeq({1}), Horizon{64, 2}, 0}), Error);
    CHECK_THROWS_AS(validate_filter({AscendingSeq({1, 64}), Horizon{64, 1}, 0}), Error);
    CHECK_NOTHROW(validate_filter({AscendingSeq({1, 63}), Horizon{64, 1}, 0}));
}

TEST_CASE("membership verdicts carry the deciding tail index") {
    FfsFilter pow2{AscendingSeq({1, 2, 4, 8, 16, 32, 64, 128}), Horizon{256, 1}, 0};
    Bitset high = Bitset::full(256).shifted_up(16);
    CHECK(ffs_member(pow2, high) == VerdictRecord{Verdict::In, 4});
    CHECK(ffs_member(pow2, ~high) == VerdictRecord{Verdict::Out, 4});

    FfsFilter f{AscendingSeq({2, 4, 8}), Horizon{64, 1}, 0};
    CHECK(ffs_member(f, residue_bits(0, 2, 64)) == VerdictRecord{Verdict::In, 0});
    CHECK(ffs_member(f, residue_bits(1, 2, 64)) == VerdictRecord{Verdict::Out, 0});
    CHECK(ffs_member(f, Bitset(64)) == VerdictRecord{Verdict::Out, 0});
    CHECK(ffs_member(f, Bitset::full(64)) == VerdictRecord{Verdict::In, 0});

    // Every tail of (1,2,3) long enough for min_tail 2 mixes parities.
    FfsFilter mixed{AscendingSeq({1, 2, 3}), Horizon{64, 2}, 0};
    CHECK(ffs_member(mixed, residue_bits(0, 2, 64)).polarity == Verdict::Undecided);
    CHECK(ffs_member(mixed, residue_bits(1, 2, 64)).polarity == Verdict::Undecided);
    // With min_tail 1 the singleton tail {3} settles both.
    FfsFilter loose{AscendingSeq({1, 2, 3}), Horizon{64, 1}, 0};
    CHECK(ffs_member(loose, residue_bits(1, 2, 64)) == VerdictRecord{Verdict::In, 2});
    CHECK(ffs_member(loose, residue_bits(0, 2, 64)) == VerdictRecord{Verdict::Out, 2});

    CHECK_THROWS_AS(ffs_member(f, Bitset(32)), Error);  // universe mismatch
}

TEST_CASE("next-member lookup") {
    Bitset evens = residue_bits(0, 2, 64);
    CHECK(k_prime(3, evens) == 4);
    CHECK(k_prime(4, evens) == 6);
    CHECK(k_prime(10, Bitset::from_values(64, {1, 2, 3})) == 0);
    CHECK(k_prime(0, residue_bits(1, 2, 64)) == 1);
    CHECK(k_prime(62, evens) == 0);
    CHECK(k_prime(100, evens) == 0);  // n beyond the universe
}

TEST_CASE("star set keeps the points whose translate stays in the filter") {
    FfsFilter f{AscendingSeq({1, 10, 100}), Horizon{1000, 1}, 0};
    Bitset x = Bitset::from_values(1000, {10, 100, 110});
    CHECK(star_set(f, x) == Bitset::from_values(1000, {10}));

    // The star is defined for any set, In or not: translating the odds by an
    // odd point gives a truncated copy of the evens, which the filter holds.
    FfsFilter par{AscendingSeq({2, 4, 6}), Horizon{512, 1}, 0};
    Bitset ostar = star_set(par, residue_bits(1, 2, 512));
    CHECK(ostar.is_subset_of(residue_bits(1, 2, 512)));
    CHECK(ostar.test(1));
    CHECK(ostar.test(505));
    CHECK_FALSE(ostar.test(507));
    Bitset estar = star_set(par, residue_bits(0, 2, 512));
    CHECK(estar.is_subset_of(residue_bits(0, 2, 512)));
    CHECK(estar.test(0));
    CHECK(estar.test(504));
    CHECK_FALSE(estar.test(506));  // the singleton tail {6} no longer fits
    CHECK(estar.count() == 253);
}

TEST_CASE("translates of a star set stay in the filter") {
    FfsFilter f{AscendingSeq({2, 4, 6}), Horizon{512, 1}, 0};
    Bitset x = residue_bits(0, 2, 512);
    Bitset star = star_set(f, x);
    const Nat tail_max = 12;  // largest full-tail sum of (2,4,6)
    for (Nat n : {Nat{0}, Nat{2}, Nat{100}, Nat{250}}) {
        REQUIRE(star.test(static_cast<std::size_t>(n)));
        if (n + tail_max >= 512) continue;
        CHECK(ffs_member(f, star.shifted_down(n)).polarity == Verdict::In);
    }
}

TEST_CASE("membership survives one oracle round trip") {
    // D = { n : X - n is In } should itself be In when X is — the finite
    // shadow of idempotence.
    FfsFilter f{AscendingSeq({2, 4, 6}), Horizon{512, 1}, 0};
    Bitset x = residue_bits(0, 2, 512);
    Bitset d(512);
    for (Nat n = 0; n < 512; ++n)
        if (ffs_member(f, x.shifted_down(n)).polarity == Verdict::In)
            d.set(static_cast<std::size_t>(n));
    CHECK(ffs_member(f, d).polarity == Verdict::In);
}

TEST_CASE("axiom checker passes a healthy catalog") {
    auto ctx = bare_ctx(100);
    FfsFilter f = frechet(Horizon{100, 1});
    AlgebraCatalog cat;
    cat.entries.push_back(entry_of("high", make_threshold(5)));
    cat.entries.push_back(entry_of("low", make_complement(make_threshold(5))));
    Report rep = check_pnu(f, cat, ctx, 1000);
    CHECK(rep.ok());
    CHECK(rep.complete);

    auto ctx64 = bare_ctx(64);
    FfsFilter par{AscendingSeq({2, 4, 8}), Horizon{64, 1}, 0};
    AlgebraCatalog cat2;
    cat2.entries.push_back(entry_of("evens", make_residue(0, 2)));
    cat2.entries.push_back(entry_of("odds", make_residue(1, 2)));
    cat2.entries.push_back(entry_of("all", make_threshold(0)));
    CHECK(check_pnu(par, cat2, ctx64, 1000).ok());
}

TEST_CASE("axiom checker flags an undecided entry") {
    auto ctx = bare_ctx(64);
    FfsFilter mixed{AscendingSeq({1, 2, 3}), Horizon{64, 2}, 0};
    AlgebraCatalog cat;
    cat.entries.push_back(entry_of("evens", make_residue(0, 2)));
    Report rep = check_pnu(mixed, cat, ctx, 1000);
    REQUIRE(rep.violations.size() == 1);
    CHECK(rep.violations[0].axiom == "decidedness");
    CHECK(rep.violations[0].entry == "evens");
}

TEST_CASE("axiom checker reports an exhausted pair budget") {
    auto ctx = bare_ctx(64);
    FfsFilter par{AscendingSeq({2, 4, 8}), Horizon{64, 1}, 0};
    AlgebraCatalog cat;
    cat.entries.push_back(entry_of("evens", make_residue(0, 2)));
    cat.entries.push_back(entry_of("all", make_threshold(0)));
    cat.entries.push_back(entry_of("four", make_residue(0, 4)));
    Report rep = check_pnu(par, cat, ctx, 1);
    CHECK_FALSE(rep.complete);
    CHECK(check_pnu(par, cat, ctx, 3).complete);
}

TEST_CASE("translate check passes a faithful claim and spots a forged one") {
    auto ctx = bare_ctx(4096);
    FfsFilter f{AscendingSeq({1, 10, 100, 1000}), Horizon{4096, 1}, 0};

    AlgebraCatalog honest;
    honest.entries.push_back(
        entry_of("closure", make_literal(fs_values(f.generators, 0, 4096).values())));
    honest.entries.push_back(entry_of("all", make_threshold(0)));
    CHECK(check_dta(f, honest, ctx).ok());

    // The bare generators form an In-looking set only if someone lies about
    // the verdict; the 1-translate escapes immediately.
    AlgebraCatalog forged;
    forged.entries.push_back(entry_of("gens", make_literal({1, 10, 100, 1000})));
    forged.entries.back().recorded = VerdictRecord{Verdict::In, 0};
    Report rep = check_dta(f, forged, ctx);
    REQUIRE_FALSE(rep.violations.empty());
    CHECK(rep.violations[0].axiom == "dta");
    CHECK(rep.violations[0].point == 1);
    CHECK(rep.violations[0].detail.find("escapes at 11") != std::string::npos);
}

TEST_CASE("extending a filter decides a parity catalog") {
    auto ctx = bare_ctx(4096);
    FfsFilter ground{AscendingSeq::range(1, 12), Horizon{4096, 1}, -1};
    AlgebraCatalog cat;
    ExtendResult r = extend_filter(ground, {entry_of("evens", make_residue(0, 2))}, cat, ctx,
                                   SearchBudget{});
    CHECK(r.filter.generators == AscendingSeq({2, 4, 6}));
    CHECK(r.filter.stage == 0);
    CHECK(r.catalog_before == 0);
    CHECK(r.catalog_after == 1);
    REQUIRE(cat.entries.size() == 1);
    REQUIRE(cat.entries[0].recorded.has_value());
    CHECK(cat.entries[0].recorded->polarity == Verdict::In);

    // Extending again pins the evens verdict; odds land Out on the same
    // generators, since every tail sum is even.
    ExtendResult r2 = extend_filter(r.filter, {entry_of("odds", make_residue(1, 2))}, cat, ctx,
                                    SearchBudget{}, 3);
    CHECK(r2.filter.generators == AscendingSeq({2, 4, 6}));
    CHECK(r2.filter.stage == 1);
    CHECK(cat.entries[0].recorded->polarity == Verdict::In);
    REQUIRE(cat.entries[1].recorded.has_value());
    CHECK(cat.entries[1].recorded->polarity == Verdict::Out);
}

TEST_CASE("extension materializes downward translations of new entries") {
    auto ctx = bare_ctx(4096);
    FfsFilter ground{AscendingSeq::range(1, 12), Horizon{4096, 1}, -1};
    AlgebraCatalog cat;
    cat.trans_bound = 1;
    ExtendResult r =
        extend_filter(ground, {entry_of("res3", make_residue(0, 3))}, cat, ctx, SearchBudget{});
    REQUIRE(cat.entries.size() == 2);
    CHECK(cat.entries[1].name == "res3-t1");
    for (const auto& e : cat.entries) {
        REQUIRE(e.recorded.has_value());
        CHECK(e.recorded->polarity != Verdict::Undecided);
    }
    // The refined filter satisfies both checkers on the whole catalog.
    CHECK(check_pnu(r.filter, cat, ctx, 1000).ok());
    CHECK(check_dta(r.filter, cat, ctx).ok());
    // Recorded verdicts match a fresh recomputation.
    for (const auto& e : cat.entries)
        CHECK(ffs_member(r.filter, evaluate_entry(e, ctx, 4096)) == *e.recorded);
}

TEST_CASE("extension failures name the stage they died at") {
    auto ctx = bare_ctx(64);
    FfsFilter tiny{AscendingSeq({1, 2}), Horizon{64, 1}, -1};
    AlgebraCatalog cat;
    try {
        extend_filter(tiny, {entry_of("evens", make_residue(0, 2))}, cat, ctx, SearchBudget{});
        FAIL("expected a refinement failure");
    } catch (const RefinementFailedError& e) {
        CHECK(e.stage == 0);
        CHECK(std::string(e.what()).find("no homogeneous refinement") != std::string::npos);
    }

    auto ctx2 = bare_ctx(4096);
    FfsFilter ground{AscendingSeq::range(1, 12), Horizon{4096, 1}, -1};
    AlgebraCatalog cat2;
    try {
        extend_filter(ground, {entry_of("evens", make_residue(0, 2))}, cat2, ctx2,
                      SearchBudget{1, BudgetPolicy::Fail});
        FAIL("expected a budget failure");
    } catch (const RefinementFailedError& e) {
        CHECK(e.stage == 0);
        CHECK(std::string(e.what()).find("budget") != std::string::npos);
    }
}

TEST_CASE("sequence builder walks down the star sets") {
    FfsFilter f{AscendingSeq({2, 4, 6}), Horizon{512, 1}, 0};
    std::vector<Coloring> cs{Coloring::residue_zero(2, {0}, 512)};
    AscendingSeq xs = build_fs_sequence_from_filter(cs, f, 4);
    CHECK(xs == AscendingSeq({2, 4, 6, 8}));
    // Every block sum of the result is even.
    Bitset evens = residue_bits(0, 2, 512);
    CHECK(fs_values(xs, 0, 512).is_subset_of(evens));

    // No colorings: the builder free-runs through consecutive integers.
    CHECK(build_fs_sequence_from_filter({}, f, 3) == AscendingSeq({1, 2, 3}));
    CHECK(build_fs_sequence_from_filter({}, f, 0).empty());

    // Constant colour 0 admits everything.
    std::vector<Coloring> all0{Coloring::constant(0, 512)};
    CHECK(build_fs_sequence_from_filter(all0, f, 4) == AscendingSeq({1, 2, 3, 4}));
}

TEST_CASE("sequence builder reports dead ends and bad colourings") {
    FfsFilter small{AscendingSeq({2, 4, 6}), Horizon{16, 1}, 0};
    std::vector<Coloring> cs{Coloring::residue_zero(2, {0}, 16)};
    CHECK(build_fs_sequence_from_filter(cs, small, 2) == AscendingSeq({2, 4}));
    CHECK_THROWS_AS(build_fs_sequence_from_filter(cs, small, 3), EmptyIntersectionError);

    FfsFilter f{AscendingSeq({2, 4, 6}), Horizon{512, 1}, 0};
    // Colour class 0 is empty: nothing for the filter to hold on to.
    std::vector<Coloring> ones{Coloring::constant(1, 512)};
    CHECK_THROWS_AS(build_fs_sequence_from_filter(ones, f, 2), Error);
    // A colouring over a smaller domain cannot cover the horizon.
    std::vector<Coloring> narrow{Coloring::residue_zero(2, {0}, 16)};
    CHECK_THROWS_AS(build_fs_sequence_from_filter(narrow, f, 2), Error);
}
