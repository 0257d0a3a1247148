#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hindsum/eliminate.hpp"
#include "hindsum/filter.hpp"

namespace hindsum {

// A finite table of a function on [0, size): values[i] is the value at i.
struct Enumeration {
    std::vector<Nat> values;

    bool operator==(const Enumeration&) const = default;
};

// Smallest pointwise-≥ strictly increasing table: g(0) = f(0),
// g(i) = max(f(i), g(i-1) + 1).  Fixpoint exactly on strictly increasing
// input, hence idempotent.
Enumeration hat_monotone(const Enumeration& f);

// The maximal generator tail of f whose finite sums (below the horizon) all
// lie inside x, together with its least start index m.
struct TailExtraction {
    AscendingSeq tail;
    std::size_t m = 0;
};

// nullopt when x is not in the filter — the distinguished "zero sequence"
// result, deliberately not a valid AscendingSeq.
std::optional<TailExtraction> extract_generators(const FfsFilter& f, const Bitset& x);

// Least position in the staged chain whose filter contains x; nullopt when no
// stage does.
std::optional<std::size_t> index_functional(const std::vector<FfsFilter>& filters,
                                            const Bitset& x);

// One strongly-summable witness: the tail extracted for an In-decided entry,
// and the catalog entry that now holds the tail's finite-sum set.
struct TailRecord {
    std::string entry;        // catalog entry the tail was extracted for
    std::size_t stage = 0;    // stage whose filter supplied the tail
    std::size_t m = 0;        // first generator index of the tail
    AscendingSeq tail;        // the tail itself
    std::string fs_entry;     // name of the appended finite-sum entry
    std::size_t first_in = 0; // earliest chain position already containing the set
};

struct SsResult {
    ElimResult elim;
    std::vector<TailRecord> tails;
};

// Staged elimination that additionally, after every stage, inserts into the
// catalog the finite-sum set of the tail extracted for each entry that stage
// decided In.  Those sets enter pre-recorded as In, so every later refinement
// keeps them; the final filter therefore contains a finite-sum subset of each
// of its catalog members — the strongly summable clause at finite scale.
SsResult eliminate_ss(const std::vector<ProgramTerm>& terms, const ExprPtr& goal,
                      const ElimConfig& cfg);

}  // namespace hindsum
