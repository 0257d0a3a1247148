#include "hindsum/expr.hpp"

#include <algorithm>

#include "hindsum/errors.hpp"

namespace hindsum {

namespace {

std::shared_ptr<SetExpr> node(SetExpr::Kind k) {
    auto e = std::make_shared<SetExpr>();
    e->kind = k;
    return e;
}

}  // namespace

ExprPtr make_literal(std::vector<Nat> values) {
    auto e = node(SetExpr::Kind::Literal);
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    e->literal = std::move(values);
    return e;
}

ExprPtr make_residue(ExprPtr rem, ExprPtr mod) {
    auto e = node(SetExpr::Kind::Residue);
    e->x = std::move(rem);
    e->y = std::move(mod);
    return e;
}

ExprPtr make_residue(Nat rem, Nat mod) { return make_residue(make_const(rem), make_const(mod)); }

ExprPtr make_threshold(ExprPtr c) {
    auto e = node(SetExpr::Kind::Threshold);
    e->x = std::move(c);
    return e;
}

ExprPtr make_threshold(Nat c) { return make_threshold(make_const(c)); }

ExprPtr make_complement(ExprPtr child) {
    auto e = node(SetExpr::Kind::Complement);
    e->x = std::move(child);
    return e;
}

ExprPtr make_union(ExprPtr a, ExprPtr b) {
    auto e = node(SetExpr::Kind::Union);
    e->x = std::move(a);
    e->y = std::move(b);
    return e;
}

ExprPtr make_intersection(ExprPtr a, ExprPtr b) {
    auto e = node(SetExpr::Kind::Intersection);
    e->x = std::move(a);
    e->y = std::move(b);
    return e;
}

ExprPtr make_translate_down(ExprPtr child, Nat amount) {
    auto e = node(SetExpr::Kind::TranslateDown);
    e->x = std::move(child);
    e->value = amount;
    return e;
}

ExprPtr make_term_ref(std::size_t term_index, ExprPtr arg) {
    auto e = node(SetExpr::Kind::TermRef);
    e->term_index = term_index;
    e->x = std::move(arg);
    return e;
}

ExprPtr make_param() { return node(SetExpr::Kind::Param); }

ExprPtr make_const(Nat v) {
    auto e = node(SetExpr::Kind::Const);
    e->value = v;
    return e;
}

ExprPtr make_oracle_u(ExprPtr term_ref) {
    if (!term_ref || term_ref->kind != SetExpr::Kind::TermRef)
        throw Error("U() takes a term reference");
    auto e = node(SetExpr::Kind::OracleU);
    e->x = std::move(term_ref);
    return e;
}

ExprPtr make_oracle_k(ExprPtr n, ExprPtr term_ref) {
    if (!term_ref || term_ref->kind != SetExpr::Kind::TermRef)
        throw Error("K() takes a term reference as its set argument");
    auto e = node(SetExpr::Kind::OracleK);
    e->x = std::move(n);
    e->y = std::move(term_ref);
    return e;
}

ExprPtr make_bounded_mu(ExprPtr set) {
    auto e = node(SetExpr::Kind::BoundedMu);
    e->x = std::move(set);
    return e;
}

ExprPtr make_arith(SetExpr::ArithOp op, ExprPtr a, ExprPtr b) {
    auto e = node(SetExpr::Kind::Arith);
    e->arith_op = op;
    e->x = std::move(a);
    e->y = std::move(b);
    return e;
}

ExprPtr make_compare(SetExpr::CmpOp op, ExprPtr a, ExprPtr b) {
    auto e = node(SetExpr::Kind::Compare);
    e->cmp_op = op;
    e->x = std::move(a);
    e->y = std::move(b);
    return e;
}

namespace {

const ProgramTerm& term_at(const OracleContext& ctx, std::size_t index) {
    if (!ctx.terms || index >= ctx.terms->size())
        throw EvalError("term reference t" + std::to_string(index) + " outside the program");
    return (*ctx.terms)[index];
}

// (term, j) bits with per-context memoisation; the cache is keyed on the
// horizon via the stored bitset size so a context reused at another bound
// recomputes instead of lying.
Bitset term_bits(const OracleContext& ctx, std::size_t index, Nat jv, Nat bound) {
    const auto key = std::make_pair(index, jv);
    auto it = ctx.cache.find(key);
    if (it != ctx.cache.end() && it->second.size() == bound) return it->second;
    Bitset bits = evaluate_bits(*term_at(ctx, index).family, jv, ctx, bound);
    ctx.cache[key] = bits;
    return bits;
}

}  // namespace

Bitset evaluate_bits(const SetExpr& e, Nat j, const OracleContext& ctx, Nat bound) {
    using K = SetExpr::Kind;
    switch (e.kind) {
        case K::Literal:
            return Bitset::from_values(bound, e.literal);
        case K::Residue: {
            const Nat rem = evaluate_num(*e.x, j, ctx, bound);
            const Nat mod = evaluate_num(*e.y, j, ctx, bound);
            if (mod == 0) throw EvalError("residue modulus 0");
            Bitset b(bound);
            if (rem >= mod) return b;  // n % mod < mod always: empty
            for (Nat n = rem; n < bound; n += mod) b.set(static_cast<std::size_t>(n));
            return b;
        }
        case K::Threshold:
            return Bitset::full(bound).shifted_up(evaluate_num(*e.x, j, ctx, bound));
        case K::Complement:
            return ~evaluate_bits(*e.x, j, ctx, bound);
        case K::Union:
            return evaluate_bits(*e.x, j, ctx, bound) | evaluate_bits(*e.y, j, ctx, bound);
        case K::Intersection:
            return evaluate_bits(*e.x, j, ctx, bound) & evaluate_bits(*e.y, j, ctx, bound);
        case K::TranslateDown:
            return evaluate_bits(*e.x, j, ctx, bound).shifted_down(e.value);
        case K::TermRef:
            return term_bits(ctx, e.term_index, evaluate_num(*e.x, j, ctx, bound), bound);
        default:
            throw EvalError("expected a set expression");
    }
}

Nat evaluate_num(const SetExpr& e, Nat j, const OracleContext& ctx, Nat bound) {
    using K = SetExpr::Kind;
    switch (e.kind) {
        case K::Param:
            return j;
        case K::Const:
            return e.value;
        case K::OracleU: {
            const SetExpr& ref = *e.x;
            const Nat jv = evaluate_num(*ref.x, j, ctx, bound);
            if (ctx.direct_filter) {
                Bitset bits = term_bits(ctx, ref.term_index, jv, bound);
                VerdictRecord v = ffs_member(*ctx.direct_filter, bits);
                if (v.polarity == Verdict::Undecided)
                    throw UndecidedOracleError("filter cannot decide " +
                                               term_at(ctx, ref.term_index).name + "[j=" +
                                               std::to_string(jv) + "]");
                return v.polarity == Verdict::In ? 0 : 1;
            }
            auto it = ctx.decisions.find({ref.term_index, jv});
            if (it == ctx.decisions.end())
                throw UnresolvedOracleError("no staged decision for " +
                                            term_at(ctx, ref.term_index).name + "[j=" +
                                            std::to_string(jv) + "]");
            if (it->second.polarity == Verdict::Undecided)
                throw UndecidedOracleError("staged decision for " +
                                           term_at(ctx, ref.term_index).name + " is undecided");
            return it->second.polarity == Verdict::In ? 0 : 1;
        }
        case K::OracleK: {
            const Nat n = evaluate_num(*e.x, j, ctx, bound);
            Bitset bits = evaluate_bits(*e.y, j, ctx, bound);
            return k_prime(n, bits);
        }
        case K::BoundedMu: {
            const std::size_t first = evaluate_bits(*e.x, j, ctx, bound).find_first();
            return first == Bitset::npos ? 0 : first;
        }
        case K::Arith: {
            const Nat a = evaluate_num(*e.x, j, ctx, bound);
            const Nat b = evaluate_num(*e.y, j, ctx, bound);
            switch (e.arith_op) {
                case SetExpr::ArithOp::Add: return a + b;
                case SetExpr::ArithOp::Sub: return a < b ? 0 : a - b;
                case SetExpr::ArithOp::Mul: return a * b;
                case SetExpr::ArithOp::Mod:
                    if (b == 0) throw EvalError("modulus 0");
                    return a % b;
            }
            throw EvalError("bad arithmetic op");
        }
        case K::Compare: {
            const Nat a = evaluate_num(*e.x, j, ctx, bound);
            const Nat b = evaluate_num(*e.y, j, ctx, bound);
            switch (e.cmp_op) {
                case SetExpr::CmpOp::Eq: return a == b ? 1 : 0;
                case SetExpr::CmpOp::Ne: return a != b ? 1 : 0;
                case SetExpr::CmpOp::Lt: return a < b ? 1 : 0;
                case SetExpr::CmpOp::Le: return a <= b ? 1 : 0;
                case SetExpr::CmpOp::Gt: return a > b ? 1 : 0;
                case SetExpr::CmpOp::Ge: return a >= b ? 1 : 0;
            }
            throw EvalError("bad comparison op");
        }
        default:
            throw EvalError("expected a numeric expression");
    }
}

bool eval_set(const SetExpr& e, Nat j, Nat point, const OracleContext& ctx, const Horizon& h) {
    if (point >= h.bound) throw EvalError("point beyond the horizon");
    return evaluate_bits(e, j, ctx, h.bound).test(static_cast<std::size_t>(point));
}

Bitset evaluate_entry(const AlgebraCatalog::Entry& entry, const OracleContext& ctx, Nat bound) {
    return evaluate_bits(*entry.expr, entry.j, ctx, bound);
}

ExprPtr resolve_closed(const SetExpr& e, Nat j, const OracleContext& ctx, Nat bound) {
    using K = SetExpr::Kind;
    if (!e.is_set_sorted()) return make_const(evaluate_num(e, j, ctx, bound));
    switch (e.kind) {
        case K::Literal:
            return make_literal(e.literal);
        case K::Residue:
            return make_residue(resolve_closed(*e.x, j, ctx, bound),
                                resolve_closed(*e.y, j, ctx, bound));
        case K::Threshold:
            return make_threshold(resolve_closed(*e.x, j, ctx, bound));
        case K::Complement:
            return make_complement(resolve_closed(*e.x, j, ctx, bound));
        case K::Union:
            return make_union(resolve_closed(*e.x, j, ctx, bound),
                              resolve_closed(*e.y, j, ctx, bound));
        case K::Intersection:
            return make_intersection(resolve_closed(*e.x, j, ctx, bound),
                                     resolve_closed(*e.y, j, ctx, bound));
        case K::TranslateDown:
            return make_translate_down(resolve_closed(*e.x, j, ctx, bound), e.value);
        case K::TermRef: {
            const Nat jv = evaluate_num(*e.x, j, ctx, bound);
            return resolve_closed(*term_at(ctx, e.term_index).family, jv, ctx, bound);
        }
        default:
            throw EvalError("unexpected expression kind");
    }
}

namespace {

std::string cmp_str(SetExpr::CmpOp op) {
    switch (op) {
        case SetExpr::CmpOp::Eq: return "==";
        case SetExpr::CmpOp::Ne: return "!=";
        case SetExpr::CmpOp::Lt: return "<";
        case SetExpr::CmpOp::Le: return "<=";
        case SetExpr::CmpOp::Gt: return ">";
        case SetExpr::CmpOp::Ge: return ">=";
    }
    return "?";
}

SetExpr::CmpOp cmp_negate(SetExpr::CmpOp op) {
    switch (op) {
        case SetExpr::CmpOp::Eq: return SetExpr::CmpOp::Ne;
        case SetExpr::CmpOp::Ne: return SetExpr::CmpOp::Eq;
        case SetExpr::CmpOp::Lt: return SetExpr::CmpOp::Ge;
        case SetExpr::CmpOp::Le: return SetExpr::CmpOp::Gt;
        case SetExpr::CmpOp::Gt: return SetExpr::CmpOp::Le;
        case SetExpr::CmpOp::Ge: return SetExpr::CmpOp::Lt;
    }
    return op;
}

std::string arith_str(SetExpr::ArithOp op) {
    switch (op) {
        case SetExpr::ArithOp::Add: return "+";
        case SetExpr::ArithOp::Sub: return "-";
        case SetExpr::ArithOp::Mul: return "*";
        case SetExpr::ArithOp::Mod: return "%";
    }
    return "?";
}

std::string print_num(const SetExpr& e, const std::vector<ProgramTerm>& terms);

std::string term_ref_str(const SetExpr& e, const std::vector<ProgramTerm>& terms) {
    const std::string name = e.term_index < terms.size() ? terms[e.term_index].name
                                                         : "t" + std::to_string(e.term_index);
    return name + "(" + print_num(*e.x, terms) + ")";
}

std::string print_set(const SetExpr& e, const std::vector<ProgramTerm>& terms) {
    using K = SetExpr::Kind;
    switch (e.kind) {
        case K::Literal: {
            std::string out = "{";
            for (std::size_t i = 0; i < e.literal.size(); ++i) {
                if (i) out += ",";
                out += std::to_string(e.literal[i]);
            }
            return out + "}";
        }
        case K::Residue:
            // An n-free truth value is stored as residue-mod-1 of a negated
            // comparison; print it back as the comparison it came from.
            if (e.y->kind == K::Const && e.y->value == 1 && e.x->kind == K::Compare)
                return "{ n : " + print_num(*e.x->x, terms) + " " +
                       cmp_str(cmp_negate(e.x->cmp_op)) + " " + print_num(*e.x->y, terms) + " }";
            return "{ n : n % " + print_num(*e.y, terms) + " == " + print_num(*e.x, terms) + " }";
        case K::Threshold:
            return "{ n : n >= " + print_num(*e.x, terms) + " }";
        case K::Complement:
            return "!" + print_set(*e.x, terms);
        case K::Union:
            return "(" + print_set(*e.x, terms) + " | " + print_set(*e.y, terms) + ")";
        case K::Intersection:
            return "(" + print_set(*e.x, terms) + " & " + print_set(*e.y, terms) + ")";
        case K::TranslateDown:
            return "(" + print_set(*e.x, terms) + " - " + std::to_string(e.value) + ")";
        case K::TermRef:
            return term_ref_str(e, terms);
        default:
            throw EvalError("expected a set expression");
    }
}

std::string print_num(const SetExpr& e, const std::vector<ProgramTerm>& terms) {
    using K = SetExpr::Kind;
    switch (e.kind) {
        case K::Param:
            return "j";
        case K::Const:
            return std::to_string(e.value);
        case K::OracleU:
            return "U(" + term_ref_str(*e.x, terms) + ")";
        case K::OracleK:
            return "K(" + print_num(*e.x, terms) + ", " + term_ref_str(*e.y, terms) + ")";
        case K::BoundedMu:
            return "mu(" + print_set(*e.x, terms) + ")";
        case K::Arith:
            return "(" + print_num(*e.x, terms) + " " + arith_str(e.arith_op) + " " +
                   print_num(*e.y, terms) + ")";
        case K::Compare:
            return "(" + print_num(*e.x, terms) + " " + cmp_str(e.cmp_op) + " " +
                   print_num(*e.y, terms) + ")";
        default:
            throw EvalError("expected a numeric expression");
    }
}

}  // namespace

std::string print_expr(const SetExpr& e, const std::vector<ProgramTerm>& terms) {
    return e.is_set_sorted() ? print_set(e, terms) : print_num(e, terms);
}

}  // namespace hindsum
