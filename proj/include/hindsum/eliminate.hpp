#pragma once

#include <string>
#include <vector>

#include "hindsum/expr.hpp"
#include "hindsum/filter.hpp"
#include "hindsum/hindman.hpp"

namespace hindsum {

// Audit record for one staged refinement.
struct StageTrace {
    int stage = 0;
    std::size_t catalog_before = 0;
    std::size_t catalog_after = 0;
    std::vector<Nat> generators_before;
    std::vector<Nat> generators_after;
    // (term index, parameter value, verdict) for each entry staged here.
    std::vector<std::tuple<std::size_t, Nat, VerdictRecord>> verdicts;
    std::uint64_t nodes = 0;
};

struct ElimConfig {
    Horizon h{4096, 1};
    Nat trans_bound = 1;   // down-translations materialized per new entry
    Nat param_range = 1;   // each family is instantiated for j < param_range
    SearchBudget budget{};
};

void validate_config(const ElimConfig& cfg);

// What a program run ultimately reports: a membership verdict for set-valued
// and oracle goals, a plain number for arithmetic ones.
struct GoalValue {
    enum class Kind { VerdictKind, NumberKind };
    Kind kind = Kind::NumberKind;
    Verdict verdict = Verdict::Undecided;
    Nat number = 0;
    bool operator==(const GoalValue&) const = default;
};

std::string to_string(const GoalValue& g);

struct Program {
    std::vector<ProgramTerm> terms;
    ExprPtr goal;
};

// Parses the line-oriented program syntax.  Term definitions look like
// "t0(j) = { n : n % 2 == j }" and may only reference earlier terms; the
// run target is "goal = ..." holding either a set query or a U/K/mu value.
Program parse_program(const std::string& text);

// Parses one bare set expression (the printed form of a catalog entry).  Term
// references are rejected — nothing is in scope — so only closed shapes parse.
ExprPtr parse_set_expr(const std::string& text);

// Reorders terms so references only point backwards, keeping input order
// among independent terms, and renumbers references accordingly.
std::vector<ProgramTerm> validate_subterm_order(std::vector<ProgramTerm> terms);

struct ElimResult {
    FfsFilter final;
    std::vector<StageTrace> traces;
    GoalValue goal;
    AlgebraCatalog catalog;  // every staged entry with its recorded verdict
    OracleContext ctx;       // terms, per-stage filters, and decisions
};

// Extension seam for variants of the staged construction.  after_stage runs
// once a stage has refined the filter and recorded its entries; it may append
// further already-recorded catalog entries, which the next stage then pins as
// colour commitments like any other decided entry.  planned_extra reserves
// generator-target room for those future appends up front.
class StageObserver {
public:
    virtual ~StageObserver() = default;
    virtual std::size_t planned_extra(std::size_t) const { return 0; }
    virtual void after_stage(const StageTrace&, const FfsFilter&, AlgebraCatalog&,
                             OracleContext&) {}
};

// Runs the staged construction: start from the Fréchet base, instantiate one
// term family per stage with its oracles answered by the previous filter,
// refine so every new entry is decided, and evaluate the goal at the end.
ElimResult eliminate(const std::vector<ProgramTerm>& terms, const ExprPtr& goal,
                     const ElimConfig& cfg, StageObserver* observer = nullptr);

// Re-materializes every staged (term, j) under each later filter and reports
// any change in its characteristic function on [0, H).
Report check_stability(const std::vector<StageTrace>& traces, const OracleContext& ctx);

}  // namespace hindsum
