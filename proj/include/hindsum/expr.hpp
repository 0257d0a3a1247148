#pragma once

#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "hindsum/core.hpp"
#include "hindsum/filter.hpp"

namespace hindsum {

// One AST, two sorts.  Set-sorted nodes denote subsets of [0, H); num-sorted
// nodes denote naturals.  The evaluator rejects sort mismatches.
struct SetExpr {
    enum class Kind {
        // set-sorted
        Literal,        // finite set of naturals (clipped at the horizon)
        Residue,        // {n | n % mod == rem}; rem >= mod denotes the empty set
        Threshold,      // {n | n >= c}
        Complement,
        Union,
        Intersection,
        TranslateDown,  // x - amount, truncated at the horizon
        TermRef,        // family term_index applied at parameter x (num-sorted)
        // num-sorted
        Param,          // the family parameter j
        Const,
        OracleU,        // 0 when the filter answers In on the TermRef argument, 1 on Out
        OracleK,        // k_prime(x, set denoted by y)
        BoundedMu,      // least member of x below the horizon, 0 if none
        Arith,
        Compare,        // 0/1
    };
    enum class ArithOp { Add, Sub, Mul, Mod };  // Sub saturates at 0
    enum class CmpOp { Eq, Ne, Lt, Le, Gt, Ge };

    Kind kind;
    std::vector<Nat> literal;                      // Literal
    Nat value = 0;                                 // Const; TranslateDown amount
    std::size_t term_index = 0;                    // TermRef
    ArithOp arith_op = ArithOp::Add;
    CmpOp cmp_op = CmpOp::Eq;
    std::shared_ptr<const SetExpr> x, y;

    bool is_set_sorted() const {
        return kind == Kind::Literal || kind == Kind::Residue || kind == Kind::Threshold ||
               kind == Kind::Complement || kind == Kind::Union || kind == Kind::Intersection ||
               kind == Kind::TranslateDown || kind == Kind::TermRef;
    }
};

using ExprPtr = std::shared_ptr<const SetExpr>;

ExprPtr make_literal(std::vector<Nat> values);
ExprPtr make_residue(ExprPtr rem, ExprPtr mod);
ExprPtr make_residue(Nat rem, Nat mod);
ExprPtr make_threshold(ExprPtr c);
ExprPtr make_threshold(Nat c);
ExprPtr make_complement(ExprPtr e);
ExprPtr make_union(ExprPtr a, ExprPtr b);
ExprPtr make_intersection(ExprPtr a, ExprPtr b);
ExprPtr make_translate_down(ExprPtr e, Nat amount);
ExprPtr make_term_ref(std::size_t term_index, ExprPtr arg);
ExprPtr make_param();
ExprPtr make_const(Nat v);
ExprPtr make_oracle_u(ExprPtr term_ref);
ExprPtr make_oracle_k(ExprPtr n, ExprPtr term_ref);
ExprPtr make_bounded_mu(ExprPtr set);
ExprPtr make_arith(SetExpr::ArithOp op, ExprPtr a, ExprPtr b);
ExprPtr make_compare(SetExpr::CmpOp op, ExprPtr a, ExprPtr b);

// λj family from a normalized program, in subterm order after validation.
struct ProgramTerm {
    std::size_t index = 0;
    ExprPtr family;  // Param free inside
    std::string name;
};

// How oracle calls are answered during evaluation.  Exactly one mode per
// context: staged runs record decisions and later evaluations replay them
// (memo mode); direct mode asks a single filter live.  Mixing modes in one
// context would let the two disagree silently.
struct OracleContext {
    std::shared_ptr<const std::vector<ProgramTerm>> terms;
    Horizon h;
    std::map<std::pair<std::size_t, Nat>, VerdictRecord> decisions;  // memo mode
    std::vector<FfsFilter> stages;              // audit: filter chain of the run
    const FfsFilter* direct_filter = nullptr;   // set => direct mode

    mutable std::map<std::pair<std::size_t, Nat>, Bitset> cache;
};

// Membership bitset of a set-sorted expression with Param := j.
Bitset evaluate_bits(const SetExpr& e, Nat j, const OracleContext& ctx, Nat bound);
// Value of a num-sorted expression.
Nat evaluate_num(const SetExpr& e, Nat j, const OracleContext& ctx, Nat bound);
// Point membership, the one-shot form.
bool eval_set(const SetExpr& e, Nat j, Nat point, const OracleContext& ctx, const Horizon& h);

Bitset evaluate_entry(const AlgebraCatalog::Entry& entry, const OracleContext& ctx, Nat bound);

// Fold every num-sorted node to Const and inline TermRefs, yielding a closed
// expression that evaluates to the same bitset but needs no context.
ExprPtr resolve_closed(const SetExpr& e, Nat j, const OracleContext& ctx, Nat bound);

// Program-syntax rendering; parseable back to an equal-denotation AST.
// `terms` supplies names for TermRef nodes (may be empty for closed exprs).
std::string print_expr(const SetExpr& e, const std::vector<ProgramTerm>& terms);

}  // namespace hindsum
