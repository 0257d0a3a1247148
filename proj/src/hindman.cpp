#include "hindsum/hindman.hpp"

#include <algorithm>
#include <cassert>

#include "hindsum/errors.hpp"

namespace hindsum {

Coloring Coloring::constant(int color, Nat domain_bound) {
    if (color != 0 && color != 1) throw Error("colour must be 0 or 1");
    Coloring c;
    c.domain_bound = domain_bound;
    c.ones = color == 1 ? Bitset::full(domain_bound) : Bitset(domain_bound);
    return c;
}

Coloring Coloring::residue_zero(Nat mod, const std::vector<Nat>& zero_residues, Nat domain_bound) {
    if (mod == 0) throw Error("residue coloring needs mod >= 1");
    Coloring c;
    c.domain_bound = domain_bound;
    c.ones = Bitset::full(domain_bound);
    for (Nat r : zero_residues)
        for (Nat n = r % mod; n < domain_bound; n += mod) c.ones.set(n, false);
    return c;
}

Coloring Coloring::from_table(const std::vector<int>& table) {
    Coloring c;
    c.domain_bound = table.size();
    c.ones = Bitset(table.size());
    for (std::size_t n = 0; n < table.size(); ++n) {
        if (table[n] != 0 && table[n] != 1) throw Error("colour table entries must be 0 or 1");
        if (table[n]) c.ones.set(n);
    }
    return c;
}

Coloring Coloring::from_zero_class(const Bitset& zeros) {
    Coloring c;
    c.domain_bound = zeros.size();
    c.ones = ~zeros;
    return c;
}

int Coloring::at(Nat n) const {
    if (n >= domain_bound)
        throw ColoringPartialError("coloring undefined at " + std::to_string(n) +
                                   " (domain bound " + std::to_string(domain_bound) + ")");
    return ones.test(n) ? 1 : 0;
}

bool solution_less(const IhtSolution& a, const IhtSolution& b) {
    auto values = [](const IhtSolution& s) {
        std::vector<Nat> v;
        v.reserve(s.ys.size());
        for (const auto& y : s.ys) v.push_back(y.value);
        return v;
    };
    auto va = values(a), vb = values(b);
    if (va != vb) return va < vb;
    std::vector<std::vector<std::size_t>> ba, bb;
    for (const auto& y : a.ys) ba.push_back(y.block);
    for (const auto& y : b.ys) bb.push_back(y.block);
    return ba < bb;
}

namespace {

struct StopSearch {};

struct Searcher {
    const std::vector<Coloring>& cs;
    const AscendingSeq& ground;
    std::size_t len;
    Nat bound;
    std::uint64_t max_nodes;

    std::uint64_t nodes = 0;
    std::vector<BlockSum> ys;
    std::vector<Bitset> reach;  // FS values of ys[k..] so far, per coloring k
    std::vector<int> color;     // committed class per coloring, -1 while open
    std::vector<Bitset> defined;
    std::vector<Bitset> cls[2];   // defined members of colour class 0 / 1
    std::vector<Bitset> spill[2]; // complement of cls, for the dead-end check
    std::vector<bool> used;
    std::optional<IhtSolution> best;
    std::uint64_t best_gen = 0;

    Searcher(const std::vector<Coloring>& cs_, const AscendingSeq& ground_, std::size_t len_,
             Nat bound_, std::uint64_t max_nodes_, const std::vector<std::optional<int>>& committed)
        : cs(cs_), ground(ground_), len(len_), bound(bound_), max_nodes(max_nodes_) {
        used.assign(ground.size(), false);
        reach.assign(cs.size(), Bitset(bound));
        color.assign(cs.size(), -1);
        for (std::size_t k = 0; k < committed.size() && k < cs.size(); ++k)
            if (committed[k]) {
                if (*committed[k] != 0 && *committed[k] != 1)
                    throw Error("committed colour must be 0 or 1");
                color[k] = *committed[k];
            }
        for (const auto& c : cs) {
            Bitset def(bound);
            Bitset one(bound);
            const Nat top = std::min<Nat>(c.domain_bound, bound);
            for (Nat n = 0; n < top; ++n) def.set(static_cast<std::size_t>(n));
            for (Nat n = c.ones.find_first(); n != Bitset::npos && n < bound;
                 n = c.ones.find_first(n + 1))
                one.set(static_cast<std::size_t>(n));
            cls[1].push_back(def & one);
            cls[0].push_back(def & ~one);
            spill[1].push_back(~cls[1].back());
            spill[0].push_back(~cls[0].back());
            defined.push_back(std::move(def));
        }
    }

    // Subset sums of the unused ground values, below the horizon.
    Bitset available_sums() const {
        Bitset r(bound);
        for (std::size_t i = ground.size(); i-- > 0;) {
            if (used[i] || ground[i] >= bound) continue;
            r |= r.shifted_up(ground[i]);
            r.set(static_cast<std::size_t>(ground[i]));
        }
        return r;
    }

    struct Saved {
        std::vector<Bitset> reach;
        std::vector<int> color;
    };

    // Check every in-scope coloring against the sums that placing value v at
    // position r would create; commit reach/colour updates when all accept.
    std::optional<Saved> try_value(std::size_t r, Nat v) {
        std::vector<std::pair<int, Bitset>> plan;  // per k <= r: colour, added sums
        for (std::size_t k = 0; k < cs.size() && k <= r; ++k) {
            Bitset add = reach[k].shifted_up(v);
            add.set(static_cast<std::size_t>(v));
            if (!add.is_subset_of(defined[k]))
                throw ColoringPartialError("coloring " + std::to_string(k) +
                                           " undefined on a reachable sum");
            int c = color[k];
            if (c < 0) c = cs[k].ones.test(static_cast<std::size_t>(v)) ? 1 : 0;
            if (!add.is_subset_of(cls[c][k])) return std::nullopt;
            plan.emplace_back(c, std::move(add));
        }
        Saved s{reach, color};
        for (std::size_t k = 0; k < plan.size(); ++k) {
            color[k] = plan[k].first;
            reach[k] |= plan[k].second;
        }
        return s;
    }

    // Total committed-sum weight up to which the dead-end check below runs.
    // The conflicts worth certifying live near the root, where reach is still
    // narrow; wider states are left to the ordinary search.
    static constexpr std::size_t kLookaheadCap = 64;

    // With the sums through position r committed, could the colorings accept
    // any value at position r + 1?  A "no" certifies every block assignment
    // for position r as a dead end before a single block is enumerated — the
    // saving that matters when a conflict only materialises two elements
    // later, where each decomposition of the current value would otherwise be
    // walked in vain.  Conservative by construction: `avail` ignores the
    // indices the current value will consume, and an over-wide or partially
    // colored state simply reports viable.
    bool has_viable_next(std::size_t r, Nat v, const Bitset& avail) const {
        std::size_t weight = 0;
        for (std::size_t k = 0; k < cs.size() && k <= r + 1; ++k) weight += reach[k].count();
        if (weight > kLookaheadCap) return true;
        Bitset ok = avail;
        for (std::size_t k = 0; k < cs.size() && k <= r + 1; ++k) {
            // A candidate beyond a coloring's domain must not be pruned away:
            // reaching it is an error the search itself reports.
            if (!ok.is_subset_of(defined[k])) return true;
            Bitset accept(bound);
            for (int c = 0; c < 2; ++c) {
                if (color[k] >= 0 && color[k] != c) continue;
                Bitset w = cls[c][k];
                // A candidate is barred by constraint s exactly when s + w
                // lands below the horizon and outside the class; sums past
                // the horizon are out of scope.
                for (Nat s : reach[k].values()) w &= ~spill[c][k].shifted_down(s);
                accept |= w;
            }
            ok &= accept;
            if (ok.none()) return false;
        }
        const std::size_t w = ok.find_first(v + 1);
        return w != Bitset::npos && w + (len - r - 2) < bound;
    }

    // Walk subsets of unused indices with value-sum `target` in lexicographic
    // index order; fn returns false to stop early.
    template <class F>
    void for_each_block(Nat target, const F& fn) {
        const std::size_t n = ground.size();
        std::vector<Nat> suffix(n + 1, 0);
        for (std::size_t i = n; i-- > 0;)
            suffix[i] = suffix[i + 1] + (used[i] ? 0 : ground[i]);
        std::vector<std::size_t> blk;
        auto rec = [&](auto&& self, std::size_t i, Nat remaining) -> bool {
            if (remaining == 0) return fn(blk);
            if (i >= n || suffix[i] < remaining) return true;
            for (std::size_t j = i; j < n; ++j) {
                if (used[j]) continue;
                if (ground[j] > remaining) break;
                blk.push_back(j);
                bool go = self(self, j + 1, remaining - ground[j]);
                blk.pop_back();
                if (!go) return false;
            }
            return true;
        };
        rec(rec, 0, target);
    }

    void complete() {
        IhtSolution sol;
        sol.ys = ys;
        sol.colors.reserve(cs.size());
        for (int c : color) sol.colors.push_back(c < 0 ? 0 : c);
        if (!best || solution_less(sol, *best)) {
            best = std::move(sol);
            ++best_gen;
        }
    }

    // tied: does ys[0..r) match best's value prefix exactly?  While it does,
    // candidate values beyond best's next value cannot improve on it.
    void dfs(std::size_t r, Nat prev, bool tied) {
        if (r == len) {
            complete();
            return;
        }
        Bitset avail = available_sums();
        for (std::size_t v = avail.find_first(prev + 1); v != Bitset::npos;
             v = avail.find_first(v + 1)) {
            if (v + (len - r - 1) >= bound) break;  // ascending completion cannot fit
            if (best && tied && v > best->ys[r].value) break;
            auto saved = try_value(r, v);
            if (!saved) continue;
            if (r + 1 < len && !has_viable_next(r, v, avail)) {
                reach = std::move(saved->reach);
                color = std::move(saved->color);
                continue;
            }
            for_each_block(v, [&](const std::vector<std::size_t>& blk) {
                if (++nodes > max_nodes) throw StopSearch{};
                ys.push_back({v, blk});
                for (auto i : blk) used[i] = true;
                const std::uint64_t gen0 = best_gen;
                dfs(r + 1, v, tied && best && v == best->ys[r].value);
                if (best_gen != gen0) tied = true;  // new best extends this prefix
                for (auto i : blk) used[i] = false;
                ys.pop_back();
                return true;
            });
            reach = std::move(saved->reach);
            color = std::move(saved->color);
        }
    }
};

std::uint64_t count_blocks_capped(const AscendingSeq& ground, Nat bound, std::uint64_t cap) {
    std::vector<std::uint64_t> ways(static_cast<std::size_t>(bound), 0);
    std::uint64_t total = 0;
    for (Nat g : ground) {
        if (g >= bound) continue;
        for (std::size_t s = static_cast<std::size_t>(bound); s-- > static_cast<std::size_t>(g);) {
            std::uint64_t add = ways[s - static_cast<std::size_t>(g)] + (s == g ? 1 : 0);
            ways[s] += add;
            total += add;
            if (total > cap) return total;
        }
    }
    return total;
}

}  // namespace

SolveResult solve_iht(const std::vector<Coloring>& cs, const AscendingSeq& ground,
                      std::size_t target_len, const Horizon& h, const SearchBudget& budget,
                      const std::vector<std::optional<int>>& committed) {
    if (budget.max_nodes < 1) throw Error("search budget must allow at least one node");
    Searcher s(cs, ground, target_len, h.bound, budget.max_nodes, committed);
    SolveResult res;
    try {
        s.dfs(0, 0, true);
    } catch (const StopSearch&) {
        res.status = SolveStatus::BudgetExhausted;
        res.nodes = s.nodes;
        if (budget.policy == BudgetPolicy::BestEffort) res.solution = std::move(s.best);
        return res;
    }
    res.nodes = s.nodes;
    if (s.best) {
        res.status = SolveStatus::Found;
        res.solution = std::move(s.best);
    } else {
        res.status = SolveStatus::NotFound;
    }
    return res;
}

SolveResult solve_ht(const Coloring& c, const AscendingSeq& ground, std::size_t target_len,
                     const Horizon& h, const SearchBudget& budget) {
    return solve_iht({c}, ground, target_len, h, budget);
}

std::vector<IhtSolution> brute_force_iht(const std::vector<Coloring>& cs,
                                         const AscendingSeq& ground, std::size_t target_len,
                                         const Horizon& h) {
    constexpr std::uint64_t kCap = std::uint64_t{1} << 20;
    if (ground.size() > 20) {
        if (h.bound > (Nat{1} << 22))
            throw SpaceTooLargeError("candidate block space too large to enumerate");
        if (count_blocks_capped(ground, h.bound, kCap) > kCap)
            throw SpaceTooLargeError("candidate block space exceeds 2^20");
    }
    const auto candidates = fs_bounded(ground, 0, h.bound);
    if (candidates.size() > kCap) throw SpaceTooLargeError("candidate block space exceeds 2^20");

    std::vector<IhtSolution> out;
    std::vector<const BlockSum*> pick;
    std::vector<bool> used(ground.size(), false);

    auto homogeneous = [&]() -> std::optional<std::vector<int>> {
        std::vector<Nat> vals;
        vals.reserve(pick.size());
        for (auto* p : pick) vals.push_back(p->value);
        AscendingSeq yseq(vals);
        std::vector<int> colors(cs.size(), 0);
        for (std::size_t k = 0; k < cs.size(); ++k) {
            bool first = true;
            for (const auto& s : fs_bounded(yseq, k, h.bound)) {
                int c = cs[k].at(s.value);
                if (first) colors[k] = c;
                else if (c != colors[k]) return std::nullopt;
                first = false;
            }
        }
        return colors;
    };

    auto rec = [&](auto&& self, std::size_t from, Nat prev) -> void {
        if (pick.size() == target_len) {
            if (auto colors = homogeneous()) {
                IhtSolution sol;
                for (auto* p : pick) sol.ys.push_back(*p);
                sol.colors = std::move(*colors);
                out.push_back(std::move(sol));
            }
            return;
        }
        for (std::size_t i = from; i < candidates.size(); ++i) {
            const auto& c = candidates[i];
            if (c.value <= prev) continue;
            bool clash = false;
            for (auto idx : c.block)
                if (used[idx]) {
                    clash = true;
                    break;
                }
            if (clash) continue;
            for (auto idx : c.block) used[idx] = true;
            pick.push_back(&c);
            self(self, i + 1, c.value);
            pick.pop_back();
            for (auto idx : c.block) used[idx] = false;
        }
    };
    rec(rec, 0, 0);
    std::sort(out.begin(), out.end(), solution_less);
    return out;
}

std::optional<std::string> check_solution(const std::vector<Coloring>& cs,
                                          const AscendingSeq& ground, const IhtSolution& sol,
                                          const Horizon& h) {
    std::vector<bool> seen(ground.size(), false);
    Nat prev = 0;
    for (const auto& y : sol.ys) {
        if (y.block.empty()) return "empty block";
        Nat sum = 0;
        std::size_t last = 0;
        bool first_idx = true;
        for (auto idx : y.block) {
            if (idx >= ground.size()) return "block index out of range";
            if (!first_idx && idx <= last) return "block indices not strictly increasing";
            if (seen[idx]) return "blocks not pairwise disjoint";
            seen[idx] = true;
            sum += ground[idx];
            last = idx;
            first_idx = false;
        }
        if (sum != y.value) return "block sum does not match value";
        if (y.value >= h.bound) return "value beyond horizon";
        if (!sol.ys.empty() && &y != &sol.ys.front() && y.value <= prev)
            return "values not strictly increasing";
        prev = y.value;
    }
    if (sol.colors.size() != cs.size()) return "colour count mismatch";
    std::vector<Nat> vals;
    for (const auto& y : sol.ys) vals.push_back(y.value);
    AscendingSeq yseq(vals);
    for (std::size_t k = 0; k < cs.size(); ++k) {
        if (sol.colors[k] != 0 && sol.colors[k] != 1) return "colour out of range";
        for (const auto& s : fs_bounded(yseq, k, h.bound))
            if (cs[k].at(s.value) != sol.colors[k])
                return "tail " + std::to_string(k) + " not homogeneous at sum " +
                       std::to_string(s.value);
    }
    return std::nullopt;
}

}  // namespace hindsum
