#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "hindsum/core.hpp"
#include "hindsum/hindman.hpp"

namespace hindsum {

struct SetExpr;
struct OracleContext;

// Partial ultrafilter approximation: the sets "in" the filter are those that
// contain a whole FS-tail of the generator sequence below the horizon.
struct FfsFilter {
    AscendingSeq generators;
    Horizon h;
    int stage = -1;  // refinement provenance; -1 is the Fréchet base
};

// Throws unless generators are nonempty, below the horizon, and long enough
// to host a min_tail witness.
void validate_filter(const FfsFilter& f);

struct VerdictRecord {
    Verdict polarity = Verdict::Undecided;
    std::size_t witness = 0;  // tail start index m; meaningless for Undecided

    bool operator==(const VerdictRecord& other) const = default;
};

// Fréchet base filter: generators (1..L) with L = ⌊√H⌋, so the full FS set
// stays below the horizon.
FfsFilter frechet(const Horizon& h);

// In(m) with the least m whose whole FS-tail (below H) lies inside X, if one
// exists with at least min_tail generators; else Out(m) against the
// complement; else Undecided.
VerdictRecord ffs_member(const FfsFilter& f, const Bitset& x);

// Least k > n with k in X, 0 when there is none below the horizon.
Nat k_prime(Nat n, const Bitset& x);

// {n in X | X - n is In} — the star operator.
Bitset star_set(const FfsFilter& f, const Bitset& x);

// Named set expressions whose membership the filter is asked to decide,
// closed under recorded downward translations up to trans_bound.
struct AlgebraCatalog {
    struct Entry {
        std::string name;
        std::shared_ptr<const SetExpr> expr;
        Nat j = 0;  // parameter value the family is instantiated at
        std::optional<VerdictRecord> recorded;
    };
    std::vector<Entry> entries;
    Nat trans_bound = 0;
};

struct Report {
    struct Violation {
        std::string entry;
        std::string axiom;  // decidedness | superset | intersection | unbounded | dta
        Nat point = 0;
        std::string detail;
    };
    std::vector<Violation> violations;
    bool complete = true;  // false when the pair budget truncated the scan

    bool ok() const { return violations.empty(); }
};

// Ultrafilter axioms over the catalog: decidedness of every entry, the
// superset law and intersection closure over entry pairs (up to pair_budget
// pairs), and unboundedness of every In entry.  Verdicts are recomputed from
// the filter, so a corrupted filter shows up here.
Report check_pnu(const FfsFilter& f, const AlgebraCatalog& cat, const OracleContext& ctx,
                 std::size_t pair_budget);

// Downward-translation law: for each entry decided In(m), every tail sum n
// below H' admits the witness l = max block index + 1, i.e. the l-tail
// shifted up by n stays inside the entry.  Recorded verdicts are trusted
// here, so a corrupted claim shows up as a violation.
Report check_dta(const FfsFilter& f, const AlgebraCatalog& cat, const OracleContext& ctx);

struct ExtendResult {
    FfsFilter filter;
    std::uint64_t nodes = 0;  // solver work, for audit traces
    std::size_t catalog_before = 0;
    std::size_t catalog_after = 0;
};

// Refine f so that every catalog entry becomes decided: appends new_entries
// and their downward translations (1..trans_bound) to the catalog, colours
// each entry (0 = member), and solves for a homogeneous disjoint-block
// refinement of the generators.  Already-recorded verdicts are pinned as
// colour commitments so refinement never flips a decided entry.  All entries
// end up with recorded verdicts against the returned filter.
//
// target_len 0 picks the minimal decidable length (#entries + min_tail + 1);
// staged runs pass a longer target so later extensions still have generators
// to consume.
ExtendResult extend_filter(const FfsFilter& f,
                           const std::vector<AlgebraCatalog::Entry>& new_entries,
                           AlgebraCatalog& cat, const OracleContext& ctx,
                           const SearchBudget& budget, std::size_t target_len = 0);

// Greedy sequence from the star sets of the zero class of each coloring:
// picks each next element from the intersection of the translated star sets,
// so every FS sum below the horizon of the i-tail lands in class i.
AscendingSeq build_fs_sequence_from_filter(const std::vector<Coloring>& cs, const FfsFilter& f,
                                           std::size_t length);

}  // namespace hindsum
