#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hindsum/core.hpp"

namespace hindsum {

// Two-coloring of [0, domain_bound).  Queries outside the domain throw
// ColoringPartialError: a short table is allowed as long as the search never
// reaches past it.
struct Coloring {
    Bitset ones;  // members coloured 1; universe size == domain_bound
    Nat domain_bound = 0;

    static Coloring constant(int color, Nat domain_bound);
    // color 0 exactly on {n | n % mod is listed}; everything else colour 1.
    static Coloring residue_zero(Nat mod, const std::vector<Nat>& zero_residues, Nat domain_bound);
    static Coloring from_table(const std::vector<int>& table);
    // color 0 exactly on the given set; domain = its universe.
    static Coloring from_zero_class(const Bitset& zeros);

    int at(Nat n) const;
};

// A length-K instance solution: block sums over the ground sequence with
// pairwise disjoint blocks and strictly increasing values, plus the committed
// colour of each tail (colour of FS(ys[k..]) under coloring k).
struct IhtSolution {
    std::vector<BlockSum> ys;
    std::vector<int> colors;

    bool operator==(const IhtSolution& other) const = default;
};

enum class SolveStatus { Found, NotFound, BudgetExhausted };
enum class BudgetPolicy { Fail, BestEffort };

struct SearchBudget {
    std::uint64_t max_nodes = 200000;  // nodes = candidate (value, block) applications
    BudgetPolicy policy = BudgetPolicy::Fail;
};

struct SolveResult {
    SolveStatus status = SolveStatus::NotFound;
    std::optional<IhtSolution> solution;  // on BudgetExhausted: best-so-far iff policy BestEffort
    std::uint64_t nodes = 0;
};

// Canonical order on solutions: value sequence first, then block encoding.
bool solution_less(const IhtSolution& a, const IhtSolution& b);

// Find the canonically least ys of length target_len such that for every
// coloring k, all FS sums of ys[k..] below h.bound share one colour.
// `committed` optionally pins the colour of tail k before the search starts.
// NotFound means the space was exhausted; BudgetExhausted means it was not.
SolveResult solve_iht(const std::vector<Coloring>& cs, const AscendingSeq& ground,
                      std::size_t target_len, const Horizon& h, const SearchBudget& budget,
                      const std::vector<std::optional<int>>& committed = {});

// Single-coloring case.
SolveResult solve_ht(const Coloring& c, const AscendingSeq& ground, std::size_t target_len,
                     const Horizon& h, const SearchBudget& budget);

// Exhaustively enumerate ALL solutions in canonical order.  Testing oracle;
// refuses instances whose candidate-block space exceeds 2^20.
std::vector<IhtSolution> brute_force_iht(const std::vector<Coloring>& cs,
                                         const AscendingSeq& ground, std::size_t target_len,
                                         const Horizon& h);

// Independent validity check: block structure, disjointness, ascending values,
// homogeneity re-walked over fs_bounded.  Returns an explanation, or nullopt.
std::optional<std::string> check_solution(const std::vector<Coloring>& cs,
                                          const AscendingSeq& ground, const IhtSolution& sol,
                                          const Horizon& h);

}  // namespace hindsum
