#include "hindsum/filter.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hindsum/errors.hpp"
#include "hindsum/expr.hpp"

namespace hindsum {

void validate_filter(const FfsFilter& f) {
    if (f.h.min_tail < 1) throw Error("min_tail must be at least 1");
    if (f.generators.size() < f.h.min_tail)
        throw Error("filter needs at least min_tail generators");
    for (Nat g : f.generators)
        if (g >= f.h.bound) throw Error("generator at or beyond the horizon");
}

FfsFilter frechet(const Horizon& h) {
    if (h.bound < 2) throw Error("horizon too small for a Fréchet base");
    const Nat L = static_cast<Nat>(std::sqrt(static_cast<double>(h.bound)));
    FfsFilter f{AscendingSeq::range(1, L), h, -1};
    validate_filter(f);
    return f;
}

namespace {

// tails[m] = FS values of generators[m..] below the horizon.
std::vector<Bitset> tail_fs_table(const FfsFilter& f) {
    const std::size_t len = f.generators.size();
    std::vector<Bitset> tails(len + 1, Bitset(f.h.bound));
    for (std::size_t m = len; m-- > 0;) {
        Bitset t = tails[m + 1];
        const Nat g = f.generators[m];
        t |= t.shifted_up(g);
        t.set(static_cast<std::size_t>(g));
        tails[m] = std::move(t);
    }
    return tails;
}

VerdictRecord member_from_tails(const std::vector<Bitset>& tails, const FfsFilter& f,
                                const Bitset& x) {
    const std::size_t last = f.generators.size() - f.h.min_tail;
    for (std::size_t m = 0; m <= last; ++m)
        if (tails[m].is_subset_of(x)) return {Verdict::In, m};
    for (std::size_t m = 0; m <= last; ++m)
        if (!tails[m].intersects(x)) return {Verdict::Out, m};
    return {Verdict::Undecided, 0};
}

}  // namespace

VerdictRecord ffs_member(const FfsFilter& f, const Bitset& x) {
    validate_filter(f);
    if (x.size() != f.h.bound) throw Error("set universe does not match the horizon");
    return member_from_tails(tail_fs_table(f), f, x);
}

Nat k_prime(Nat n, const Bitset& x) {
    const std::size_t k =
        n + 1 >= x.size() ? Bitset::npos : x.find_first(static_cast<std::size_t>(n + 1));
    return k == Bitset::npos ? 0 : k;
}

Bitset star_set(const FfsFilter& f, const Bitset& x) {
    validate_filter(f);
    if (x.size() != f.h.bound) throw Error("set universe does not match the horizon");
    const auto tails = tail_fs_table(f);
    Bitset out(f.h.bound);
    for (std::size_t n = x.find_first(); n != Bitset::npos; n = x.find_first(n + 1)) {
        const VerdictRecord v = member_from_tails(tails, f, x.shifted_down(n));
        if (v.polarity == Verdict::In) out.set(n);
    }
    return out;
}

Report check_pnu(const FfsFilter& f, const AlgebraCatalog& cat, const OracleContext& ctx,
                 std::size_t pair_budget) {
    validate_filter(f);
    const Nat H = f.h.bound;
    Report rep;

    std::vector<Bitset> bits;
    std::vector<VerdictRecord> verdicts;
    bits.reserve(cat.entries.size());
    for (const auto& entry : cat.entries) {
        bits.push_back(evaluate_entry(entry, ctx, H));
        verdicts.push_back(ffs_member(f, bits.back()));
        if (verdicts.back().polarity == Verdict::Undecided)
            rep.violations.push_back({entry.name, "decidedness", 0, "no tail witness either way"});
    }

    const auto tails = tail_fs_table(f);

    // Superset law and intersection closure over entry pairs.
    std::size_t pairs = 0;
    for (std::size_t i = 0; i < cat.entries.size() && rep.complete; ++i) {
        for (std::size_t k = i + 1; k < cat.entries.size(); ++k) {
            if (pairs++ >= pair_budget) {
                rep.complete = false;
                break;
            }
            const Bitset both = bits[i] & bits[k];
            const VerdictRecord vb = ffs_member(f, both);
            const bool in_i = verdicts[i].polarity == Verdict::In;
            const bool in_k = verdicts[k].polarity == Verdict::In;
            if (vb.polarity == Verdict::In && !(in_i && in_k))
                rep.violations.push_back(
                    {cat.entries[i].name + " & " + cat.entries[k].name, "superset", 0,
                     "intersection is In but a superset is not"});
            if (in_i && in_k && vb.polarity != Verdict::In)
                rep.violations.push_back(
                    {cat.entries[i].name + " & " + cat.entries[k].name, "intersection", 0,
                     "both In but the intersection is not"});
        }
    }

    // Unboundedness: an In set must keep appearing up to the horizon, with
    // slack the largest step of its witness tail (extended by 0 and H).
    for (std::size_t i = 0; i < cat.entries.size(); ++i) {
        if (verdicts[i].polarity != Verdict::In) continue;
        const Bitset& tail = tails[verdicts[i].witness];
        Nat gap = 0, prev = 0;
        for (std::size_t v = tail.find_first(); v != Bitset::npos; v = tail.find_first(v + 1)) {
            gap = std::max(gap, v - prev);
            prev = v;
        }
        gap = std::max(gap, H - prev);
        const std::size_t top = bits[i].find_last();
        if (top == Bitset::npos || top + gap < H)
            rep.violations.push_back({cat.entries[i].name, "unbounded",
                                      top == Bitset::npos ? 0 : top,
                                      "set stops short of the horizon"});
    }
    return rep;
}

Report check_dta(const FfsFilter& f, const AlgebraCatalog& cat, const OracleContext& ctx) {
    validate_filter(f);
    const Nat H = f.h.bound;
    const std::size_t len = f.generators.size();
    Report rep;
    const auto tails = tail_fs_table(f);

    for (const auto& entry : cat.entries) {
        const Bitset x = evaluate_entry(entry, ctx, H);
        const VerdictRecord v = entry.recorded ? *entry.recorded : ffs_member(f, x);
        if (v.polarity != Verdict::In) continue;
        const std::size_t m = v.witness;
        const std::size_t vmax = tails[m].find_last();
        if (vmax == Bitset::npos) continue;  // degenerate: empty tail
        const Nat h_prime = H - vmax;  // keeps every shifted tail value below H
        for (const auto& n : fs_bounded(f.generators, m, h_prime)) {
            const std::size_t l = n.block.back() + 1;
            if (l + f.h.min_tail > len) continue;  // witness tail would be too short
            const Bitset shifted = tails[l].shifted_up(n.value);
            if (!shifted.is_subset_of(x)) {
                const Bitset outside = shifted & ~x;
                rep.violations.push_back(
                    {entry.name, "dta", n.value,
                     "translate by " + std::to_string(n.value) + " escapes at " +
                         std::to_string(outside.find_first()) + " (witness tail " +
                         std::to_string(l) + ")"});
            }
        }
    }
    return rep;
}

ExtendResult extend_filter(const FfsFilter& f,
                           const std::vector<AlgebraCatalog::Entry>& new_entries,
                           AlgebraCatalog& cat, const OracleContext& ctx,
                           const SearchBudget& budget, std::size_t target_len) {
    validate_filter(f);
    const Nat H = f.h.bound;
    ExtendResult result;
    result.catalog_before = cat.entries.size();

    for (const auto& e : new_entries) {
        cat.entries.push_back(e);
        cat.entries.back().recorded.reset();
        for (Nat t = 1; t <= cat.trans_bound; ++t)
            cat.entries.push_back({e.name + "-t" + std::to_string(t),
                                   make_translate_down(e.expr, t), e.j, std::nullopt});
    }
    result.catalog_after = cat.entries.size();

    // A new entry the current filter already decides — a cofinite threshold
    // under the base filter, say — carries that verdict in as a commitment:
    // refinement may narrow the generators but never flip a settled polarity.
    // Verdicts witnessed only by the final singleton tail are exempt: at
    // min_tail 1 that tail decides *every* set, and pinning such horizon
    // noise would sterilize the search (a residue class, say, would inherit
    // Out from a lone top generator and block its own In refinement).
    for (std::size_t i = result.catalog_before; i < cat.entries.size(); ++i) {
        const VerdictRecord v = ffs_member(f, evaluate_entry(cat.entries[i], ctx, H));
        if (v.polarity == Verdict::Undecided) continue;
        if (v.witness + 2 > f.generators.size()) continue;  // singleton-tail witness
        cat.entries[i].recorded = v;
    }

    // One two-coloring per entry, colour 0 on the entry itself; decided
    // entries are pinned so the refinement cannot flip their polarity.
    std::vector<Coloring> colorings;
    std::vector<std::optional<int>> committed;
    colorings.reserve(cat.entries.size());
    for (const auto& entry : cat.entries) {
        colorings.push_back(Coloring::from_zero_class(evaluate_entry(entry, ctx, H)));
        if (entry.recorded && entry.recorded->polarity != Verdict::Undecided)
            committed.push_back(entry.recorded->polarity == Verdict::In ? 0 : 1);
        else
            committed.push_back(std::nullopt);
    }

    if (target_len == 0) target_len = cat.entries.size() + f.h.min_tail + 1;
    const int next_stage = f.stage + 1;
    SolveResult solved = solve_iht(colorings, f.generators, target_len, f.h, budget, committed);
    result.nodes = solved.nodes;
    if (solved.status == SolveStatus::BudgetExhausted)
        throw RefinementFailedError(next_stage, "search budget exhausted");
    if (solved.status != SolveStatus::Found)
        throw RefinementFailedError(next_stage, "no homogeneous refinement at this horizon");

    std::vector<Nat> values;
    values.reserve(solved.solution->ys.size());
    for (const auto& y : solved.solution->ys) values.push_back(y.value);
    FfsFilter refined{AscendingSeq(std::move(values)), f.h, next_stage};
    validate_filter(refined);

    for (auto& entry : cat.entries) {
        const VerdictRecord v = ffs_member(refined, evaluate_entry(entry, ctx, H));
        if (v.polarity == Verdict::Undecided)
            throw std::logic_error("refined filter left a catalog entry undecided");
        if (entry.recorded && entry.recorded->polarity != v.polarity)
            throw std::logic_error("refinement flipped a recorded verdict");
        entry.recorded = v;
    }
    result.filter = std::move(refined);
    return result;
}

AscendingSeq build_fs_sequence_from_filter(const std::vector<Coloring>& cs, const FfsFilter& f,
                                           std::size_t length) {
    validate_filter(f);
    const Nat H = f.h.bound;

    // A_i = the zero class of c_i, clipped to the horizon; must be In.
    std::vector<Bitset> classes, stars;
    for (const auto& c : cs) {
        if (c.domain_bound < H) throw Error("coloring does not cover the horizon");
        Bitset a(H);
        for (Nat n = 0; n < H; ++n)
            if (!c.ones.test(static_cast<std::size_t>(n))) a.set(static_cast<std::size_t>(n));
        if (ffs_member(f, a).polarity != Verdict::In)
            throw Error("colour class is not In for this filter");
        stars.push_back(star_set(f, a));
        classes.push_back(std::move(a));
    }

    std::vector<Nat> xs;
    Nat prev = 0;
    for (std::size_t pos = 0; pos < length; ++pos) {
        Bitset inter = Bitset::full(H);
        for (std::size_t i = 0; i < cs.size() && i <= pos; ++i) {
            Bitset b = stars[i];  // the n = 0 factor
            if (xs.size() > i) {
                AscendingSeq picked(std::vector<Nat>(xs.begin() + i, xs.end()));
                const Bitset sums = fs_values(picked, 0, H);
                for (std::size_t n = sums.find_first(); n != Bitset::npos;
                     n = sums.find_first(n + 1))
                    b &= stars[i].shifted_down(n);
            }
            inter &= b;
        }
        const std::size_t next = inter.find_first(static_cast<std::size_t>(prev) + 1);
        if (next == Bitset::npos)
            throw EmptyIntersectionError("no admissible element above " + std::to_string(prev) +
                                         " at position " + std::to_string(pos));
        xs.push_back(next);
        prev = next;
    }

    AscendingSeq out(xs);
    for (std::size_t i = 0; i < cs.size() && i < out.size(); ++i)
        if (!fs_values(out, i, H).is_subset_of(classes[i]))
            throw std::logic_error("constructed sequence escapes its colour class");
    return out;
}

}  // namespace hindsum
