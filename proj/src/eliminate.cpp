#include "hindsum/eliminate.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <queue>
#include <set>

#include "hindsum/errors.hpp"

namespace hindsum {

namespace {

// How many generator indices a later stage may consume beyond the strict
// minimum.  Each refinement can merge or skip a few positions, so earlier
// stages keep their targets this much longer per remaining stage.  Search
// cost grows steeply with target length, so the slack is kept tight and
// extend_filter floors any target that falls short of its catalog.
constexpr std::size_t kStageSlack = 2;

struct Token {
    enum class Type { Ident, Number, Punct, End };
    Type type = Type::End;
    std::string text;
    Nat num = 0;
    std::size_t line = 1;
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

std::vector<Token> lex(const std::string& text) {
    std::vector<Token> out;
    std::size_t line = 1, i = 0;
    const std::size_t n = text.size();
    while (i < n) {
        const char c = text[i];
        if (c == '\n') {
            ++line;
            ++i;
            continue;
        }
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        if (c == '#') {
            while (i < n && text[i] != '\n') ++i;
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t j = i;
            while (j < n && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
            const std::string digits = text.substr(i, j - i);
            try {
                out.push_back({Token::Type::Number, digits, std::stoull(digits), line});
            } catch (const std::out_of_range&) {
                throw ParseError("number out of range: " + digits, line);
            }
            i = j;
            continue;
        }
        if (ident_start(c)) {
            std::size_t j = i;
            while (j < n && ident_char(text[j])) ++j;
            out.push_back({Token::Type::Ident, text.substr(i, j - i), 0, line});
            i = j;
            continue;
        }
        static const char* const two[] = {"==", "!=", "<=", ">=", "&&", "||"};
        const char* matched = nullptr;
        for (const char* op : two)
            if (i + 1 < n && c == op[0] && text[i + 1] == op[1]) {
                matched = op;
                break;
            }
        if (matched) {
            out.push_back({Token::Type::Punct, matched, 0, line});
            i += 2;
            continue;
        }
        static const std::string singles = "(){},;:=%&|!+*-<>";
        if (singles.find(c) == std::string::npos)
            throw ParseError(std::string("unexpected character '") + c + "'", line);
        out.push_back({Token::Type::Punct, std::string(1, c), 0, line});
        ++i;
    }
    out.push_back({Token::Type::End, "", 0, line});
    return out;
}

bool reserved(const std::string& s) {
    return s == "goal" || s == "U" || s == "K" || s == "mu" || s == "j" || s == "n";
}

SetExpr::CmpOp cmp_of(const Token& t) {
    if (t.text == "==") return SetExpr::CmpOp::Eq;
    if (t.text == "!=") return SetExpr::CmpOp::Ne;
    if (t.text == "<") return SetExpr::CmpOp::Lt;
    if (t.text == "<=") return SetExpr::CmpOp::Le;
    if (t.text == ">") return SetExpr::CmpOp::Gt;
    if (t.text == ">=") return SetExpr::CmpOp::Ge;
    throw ParseError("expected a comparison, found '" + t.text + "'", t.line);
}

SetExpr::CmpOp cmp_flip(SetExpr::CmpOp op) {
    using Op = SetExpr::CmpOp;
    switch (op) {
        case Op::Lt: return Op::Gt;
        case Op::Le: return Op::Ge;
        case Op::Gt: return Op::Lt;
        case Op::Ge: return Op::Le;
        default: return op;
    }
}

SetExpr::CmpOp cmp_not(SetExpr::CmpOp op) {
    using Op = SetExpr::CmpOp;
    switch (op) {
        case Op::Eq: return Op::Ne;
        case Op::Ne: return Op::Eq;
        case Op::Lt: return Op::Ge;
        case Op::Le: return Op::Gt;
        case Op::Gt: return Op::Le;
        case Op::Ge: return Op::Lt;
    }
    return op;
}

ExprPtr plus_one(ExprPtr c) {
    if (c->kind == SetExpr::Kind::Const) return make_const(c->value + 1);
    return make_arith(SetExpr::ArithOp::Add, std::move(c), make_const(1));
}

// "n OP c" as a set of n.
ExprPtr lower_threshold(SetExpr::CmpOp op, ExprPtr c) {
    using Op = SetExpr::CmpOp;
    switch (op) {
        case Op::Ge: return make_threshold(std::move(c));
        case Op::Gt: return make_threshold(plus_one(std::move(c)));
        case Op::Lt: return make_complement(make_threshold(std::move(c)));
        case Op::Le: return make_complement(make_threshold(plus_one(std::move(c))));
        case Op::Eq: {
            ExprPtr lo = make_threshold(c);
            ExprPtr hi = make_complement(make_threshold(plus_one(std::move(c))));
            return make_intersection(std::move(lo), std::move(hi));
        }
        case Op::Ne: {
            ExprPtr lo = make_threshold(c);
            ExprPtr hi = make_complement(make_threshold(plus_one(std::move(c))));
            return make_complement(make_intersection(std::move(lo), std::move(hi)));
        }
    }
    throw ParseError("unsupported comparison", 0);
}

class Parser {
public:
    explicit Parser(const std::string& text) : toks_(lex(text)) {}

    // One bare set expression, the whole input: the deserialization path for
    // catalog entries coming back from a trace document.
    ExprPtr single_set() {
        ExprPtr e = parse_set();
        if (peek().type != Token::Type::End)
            throw ParseError("trailing input after expression: '" + peek().text + "'",
                             peek().line);
        return e;
    }

    Program run() {
        Program prog;
        while (peek().type != Token::Type::End) {
            if (accept_punct(";")) continue;
            if (peek().type == Token::Type::Ident && peek().text == "goal") {
                const Token g = next();
                expect_punct("=");
                if (prog.goal) throw ParseError("duplicate goal", g.line);
                prog.goal = parse_goal();
                continue;
            }
            parse_term_def(prog);
        }
        if (!prog.goal) throw ParseError("program has no goal", toks_.back().line);
        return prog;
    }

private:
    const Token& peek() const { return toks_[pos_]; }
    Token next() { return toks_[pos_++]; }

    bool accept_punct(const std::string& p) {
        if (peek().type == Token::Type::Punct && peek().text == p) {
            ++pos_;
            return true;
        }
        return false;
    }
    void expect_punct(const std::string& p) {
        if (!accept_punct(p))
            throw ParseError("expected '" + p + "', found '" + peek().text + "'", peek().line);
    }
    Token expect_ident() {
        if (peek().type != Token::Type::Ident)
            throw ParseError("expected a name, found '" + peek().text + "'", peek().line);
        return next();
    }
    Token expect_number() {
        if (peek().type != Token::Type::Number)
            throw ParseError("expected a number, found '" + peek().text + "'", peek().line);
        return next();
    }
    bool peek_keyword(const std::string& kw) const {
        return peek().type == Token::Type::Ident && peek().text == kw;
    }
    void expect_keyword(const std::string& kw) {
        if (!peek_keyword(kw))
            throw ParseError("expected '" + kw + "', found '" + peek().text + "'", peek().line);
        ++pos_;
    }
    Token expect_cmp() {
        static const std::set<std::string> cmps{"==", "!=", "<", "<=", ">", ">="};
        if (peek().type != Token::Type::Punct || !cmps.count(peek().text))
            throw ParseError("expected a comparison, found '" + peek().text + "'", peek().line);
        return next();
    }

    void parse_term_def(Program& prog) {
        const Token t = expect_ident();
        if (reserved(t.text)) throw ParseError("'" + t.text + "' is reserved", t.line);
        if (names_.count(t.text))
            throw ParseError("term '" + t.text + "' defined twice", t.line);
        expect_punct("(");
        expect_keyword("j");
        expect_punct(")");
        expect_punct("=");
        ExprPtr family = parse_set();
        const std::size_t idx = prog.terms.size();
        names_[t.text] = idx;  // visible only after its body: references point backwards
        prog.terms.push_back({idx, std::move(family), t.text});
    }

    ExprPtr parse_goal() {
        const Token& t = peek();
        if (t.type == Token::Type::Number) return parse_num();
        if (t.type == Token::Type::Ident &&
            (t.text == "U" || t.text == "K" || t.text == "mu" || t.text == "j"))
            return parse_num();
        return parse_set();
    }

    ExprPtr parse_set() {
        ExprPtr e = parse_set_inter();
        while (accept_punct("|")) e = make_union(std::move(e), parse_set_inter());
        return e;
    }
    ExprPtr parse_set_inter() {
        ExprPtr e = parse_set_trans();
        while (accept_punct("&")) e = make_intersection(std::move(e), parse_set_trans());
        return e;
    }
    ExprPtr parse_set_trans() {
        ExprPtr e = parse_set_prefix();
        while (accept_punct("-")) e = make_translate_down(std::move(e), expect_number().num);
        return e;
    }
    ExprPtr parse_set_prefix() {
        if (accept_punct("!")) return make_complement(parse_set_prefix());
        return parse_set_atom();
    }
    ExprPtr parse_set_atom() {
        if (accept_punct("(")) {
            ExprPtr e = parse_set();
            expect_punct(")");
            return e;
        }
        if (peek().type == Token::Type::Punct && peek().text == "{") return parse_braces();
        // A 0/1 value in set position denotes the full set when it is 0 and
        // the empty set otherwise, via a degenerate residue.
        if (peek().type == Token::Type::Ident &&
            (peek().text == "U" || peek().text == "K" || peek().text == "mu"))
            return make_residue(parse_num_factor(), make_const(1));
        const Token t = expect_ident();
        if (reserved(t.text))
            throw ParseError("expected a set, found '" + t.text + "'", t.line);
        return parse_term_suffix(t);
    }
    ExprPtr parse_term_suffix(const Token& name) {
        auto it = names_.find(name.text);
        if (it == names_.end()) throw ForwardReferenceError(name.text, name.line);
        expect_punct("(");
        ExprPtr arg = parse_num();
        expect_punct(")");
        return make_term_ref(it->second, std::move(arg));
    }

    ExprPtr parse_braces() {
        expect_punct("{");
        if (accept_punct("}")) return make_literal({});
        if (peek().type == Token::Type::Number) {
            std::vector<Nat> vals{expect_number().num};
            while (accept_punct(",")) vals.push_back(expect_number().num);
            expect_punct("}");
            return make_literal(std::move(vals));
        }
        expect_keyword("n");
        expect_punct(":");
        ExprPtr e = parse_pred();
        expect_punct("}");
        return e;
    }

    ExprPtr parse_pred() {
        ExprPtr e = parse_pred_and();
        while (accept_punct("||") || accept_punct("|"))
            e = make_union(std::move(e), parse_pred_and());
        return e;
    }
    ExprPtr parse_pred_and() {
        ExprPtr e = parse_pred_not();
        while (accept_punct("&&") || accept_punct("&"))
            e = make_intersection(std::move(e), parse_pred_not());
        return e;
    }
    ExprPtr parse_pred_not() {
        if (accept_punct("!")) return make_complement(parse_pred_not());
        if (accept_punct("(")) {
            ExprPtr e = parse_pred();
            expect_punct(")");
            return e;
        }
        return parse_pred_atom();
    }
    ExprPtr parse_pred_atom() {
        if (peek_keyword("n")) {
            ++pos_;
            if (accept_punct("%")) {
                ExprPtr mod = parse_num();
                const Token op = expect_cmp();
                if (op.text != "==" && op.text != "!=")
                    throw ParseError("a residue shape needs == or !=", op.line);
                ExprPtr res = make_residue(parse_num(), std::move(mod));
                return op.text == "==" ? res : make_complement(std::move(res));
            }
            const Token op = expect_cmp();  // parse the operator before its operand
            return lower_threshold(cmp_of(op), parse_num());
        }
        ExprPtr lhs = parse_num();
        const Token op = expect_cmp();
        if (peek_keyword("n")) {
            ++pos_;
            return lower_threshold(cmp_flip(cmp_of(op)), std::move(lhs));
        }
        // No n at all: the predicate is a constant truth value, stored as a
        // degenerate residue so it stays a set.
        return make_residue(make_compare(cmp_not(cmp_of(op)), std::move(lhs), parse_num()),
                            make_const(1));
    }

    ExprPtr parse_num() {
        ExprPtr e = parse_num_prod();
        while (true) {
            if (accept_punct("+"))
                e = make_arith(SetExpr::ArithOp::Add, std::move(e), parse_num_prod());
            else if (accept_punct("-"))
                e = make_arith(SetExpr::ArithOp::Sub, std::move(e), parse_num_prod());
            else
                return e;
        }
    }
    ExprPtr parse_num_prod() {
        ExprPtr e = parse_num_factor();
        while (true) {
            if (accept_punct("*"))
                e = make_arith(SetExpr::ArithOp::Mul, std::move(e), parse_num_factor());
            else if (accept_punct("%"))
                e = make_arith(SetExpr::ArithOp::Mod, std::move(e), parse_num_factor());
            else
                return e;
        }
    }
    ExprPtr parse_num_factor() {
        const Token t = peek();
        if (t.type == Token::Type::Number) {
            ++pos_;
            return make_const(t.num);
        }
        if (accept_punct("(")) {
            ExprPtr e = parse_num();
            expect_punct(")");
            return e;
        }
        if (t.type == Token::Type::Ident) {
            if (t.text == "j") {
                ++pos_;
                return make_param();
            }
            if (t.text == "U") {
                ++pos_;
                expect_punct("(");
                ExprPtr ref = parse_term_suffix(expect_ident());
                expect_punct(")");
                return make_oracle_u(std::move(ref));
            }
            if (t.text == "K") {
                ++pos_;
                expect_punct("(");
                ExprPtr nn = parse_num();
                expect_punct(",");
                ExprPtr ref = parse_term_suffix(expect_ident());
                expect_punct(")");
                return make_oracle_k(std::move(nn), std::move(ref));
            }
            if (t.text == "mu") {
                ++pos_;
                expect_punct("(");
                ExprPtr s = parse_set();
                expect_punct(")");
                return make_bounded_mu(std::move(s));
            }
            if (t.text == "n")
                throw ParseError("'n' only binds inside a set comprehension", t.line);
            throw ParseError("unexpected name '" + t.text + "' in a numeric position", t.line);
        }
        throw ParseError("expected a numeric expression, found '" + t.text + "'", t.line);
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
    std::map<std::string, std::size_t> names_;
};

void collect_refs(const SetExpr& e, std::set<std::size_t>& out) {
    if (e.kind == SetExpr::Kind::TermRef) out.insert(e.term_index);
    if (e.x) collect_refs(*e.x, out);
    if (e.y) collect_refs(*e.y, out);
}

ExprPtr remap_refs(const ExprPtr& e, const std::vector<std::size_t>& remap) {
    if (!e) return e;
    ExprPtr nx = remap_refs(e->x, remap);
    ExprPtr ny = remap_refs(e->y, remap);
    if (nx == e->x && ny == e->y && e->kind != SetExpr::Kind::TermRef) return e;
    auto n = std::make_shared<SetExpr>(*e);
    n->x = std::move(nx);
    n->y = std::move(ny);
    if (n->kind == SetExpr::Kind::TermRef) n->term_index = remap[n->term_index];
    return n;
}

}  // namespace

Program parse_program(const std::string& text) { return Parser(text).run(); }

ExprPtr parse_set_expr(const std::string& text) { return Parser(text).single_set(); }

std::vector<ProgramTerm> validate_subterm_order(std::vector<ProgramTerm> terms) {
    const std::size_t n = terms.size();
    std::vector<std::set<std::size_t>> deps(n);
    for (std::size_t i = 0; i < n; ++i) {
        collect_refs(*terms[i].family, deps[i]);
        for (std::size_t d : deps[i]) {
            if (d >= n) throw Error("term '" + terms[i].name + "' references an unknown term");
            if (d == i)
                throw CyclicReferenceError("term '" + terms[i].name + "' refers to itself");
        }
    }

    std::vector<std::size_t> indeg(n, 0);
    std::vector<std::vector<std::size_t>> users(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t d : deps[i]) {
            users[d].push_back(i);
            ++indeg[i];
        }
    // Smallest original index first keeps independent terms in input order.
    std::priority_queue<std::size_t, std::vector<std::size_t>, std::greater<>> ready;
    for (std::size_t i = 0; i < n; ++i)
        if (indeg[i] == 0) ready.push(i);
    std::vector<std::size_t> order;
    while (!ready.empty()) {
        const std::size_t i = ready.top();
        ready.pop();
        order.push_back(i);
        for (std::size_t u : users[i])
            if (--indeg[u] == 0) ready.push(u);
    }
    if (order.size() < n)
        for (std::size_t i = 0; i < n; ++i)
            if (indeg[i] > 0)
                throw CyclicReferenceError("cyclic reference through term '" + terms[i].name +
                                           "'");

    std::vector<std::size_t> remap(n);
    for (std::size_t pos = 0; pos < n; ++pos) remap[order[pos]] = pos;
    std::vector<ProgramTerm> out(n);
    for (std::size_t pos = 0; pos < n; ++pos) {
        const auto& src = terms[order[pos]];
        out[pos] = {pos, remap_refs(src.family, remap), src.name};
    }
    return out;
}

void validate_config(const ElimConfig& cfg) {
    if (cfg.h.bound < 2) throw Error("horizon must be at least 2");
    if (cfg.h.min_tail < 1) throw Error("min_tail must be at least 1");
    if (cfg.param_range < 1) throw Error("parameter range must be at least 1");
}

std::string to_string(const GoalValue& g) {
    return g.kind == GoalValue::Kind::VerdictKind ? to_string(g.verdict)
                                                  : std::to_string(g.number);
}

ElimResult eliminate(const std::vector<ProgramTerm>& terms, const ExprPtr& goal,
                     const ElimConfig& cfg, StageObserver* observer) {
    validate_config(cfg);
    if (!goal) throw Error("program has no goal");
    for (std::size_t i = 0; i < terms.size(); ++i) {
        std::set<std::size_t> refs;
        collect_refs(*terms[i].family, refs);
        for (std::size_t d : refs)
            if (d >= i)
                throw ForwardReferenceError(d < terms.size() ? terms[d].name
                                                             : "t" + std::to_string(d),
                                            0);
    }

    ElimResult res;
    res.ctx.terms = std::make_shared<std::vector<ProgramTerm>>(terms);
    res.ctx.h = cfg.h;
    res.catalog.trans_bound = cfg.trans_bound;

    FfsFilter f = frechet(cfg.h);
    res.ctx.stages.push_back(f);

    const std::size_t n = terms.size();
    const std::size_t per_entry = 1 + static_cast<std::size_t>(cfg.trans_bound);
    const std::size_t total = n * static_cast<std::size_t>(cfg.param_range) * per_entry;
    const std::size_t reserve = total + (observer ? observer->planned_extra(total) : 0);

    for (std::size_t i = 0; i < n; ++i) {
        // Oracles inside this family are answered by the previous filter.
        OracleContext stage_ctx = res.ctx;
        stage_ctx.direct_filter = &f;
        stage_ctx.cache.clear();

        std::vector<AlgebraCatalog::Entry> entries;
        for (Nat jv = 0; jv < cfg.param_range; ++jv)
            entries.push_back({terms[i].name + "[j=" + std::to_string(jv) + "]",
                               resolve_closed(*terms[i].family, jv, stage_ctx, cfg.h.bound), jv,
                               std::nullopt});

        // Reserve extra length for the stages still to come, so their own
        // refinements have generators left to merge or drop — but never less
        // than the grown catalog needs for its witness tails, in case an
        // observer inserted more entries than the reserve allowed for.
        const std::size_t floor = res.catalog.entries.size() + entries.size() *
                                      (1 + static_cast<std::size_t>(cfg.trans_bound)) +
                                  cfg.h.min_tail + 1;
        const std::size_t target = std::max(
            floor, reserve + cfg.h.min_tail + 1 + kStageSlack * (n - 1 - i));

        StageTrace tr;
        tr.stage = static_cast<int>(i);
        tr.generators_before = f.generators.values();
        ExtendResult r = extend_filter(f, entries, res.catalog, res.ctx, cfg.budget, target);
        tr.catalog_before = r.catalog_before;
        tr.catalog_after = r.catalog_after;
        tr.nodes = r.nodes;
        f = std::move(r.filter);
        tr.generators_after = f.generators.values();
        for (Nat jv = 0; jv < cfg.param_range; ++jv) {
            const auto& rec =
                *res.catalog.entries[r.catalog_before + jv * per_entry].recorded;
            tr.verdicts.emplace_back(i, jv, rec);
            res.ctx.decisions[{i, jv}] = rec;
        }
        res.traces.push_back(std::move(tr));
        res.ctx.stages.push_back(f);
        if (observer) observer->after_stage(res.traces.back(), f, res.catalog, res.ctx);
    }

    OracleContext goal_ctx = res.ctx;
    goal_ctx.direct_filter = &f;
    goal_ctx.cache.clear();
    try {
        if (goal->is_set_sorted()) {
            const VerdictRecord v = ffs_member(f, evaluate_bits(*goal, 0, goal_ctx, cfg.h.bound));
            if (v.polarity == Verdict::Undecided)
                throw UndecidedGoalError(
                    "the final filter cannot decide the goal set; stage it as a last term");
            res.goal = {GoalValue::Kind::VerdictKind, v.polarity, 0};
        } else if (goal->kind == SetExpr::Kind::OracleU) {
            const Nat u = evaluate_num(*goal, 0, goal_ctx, cfg.h.bound);
            res.goal = {GoalValue::Kind::VerdictKind, u == 0 ? Verdict::In : Verdict::Out, 0};
        } else {
            res.goal = {GoalValue::Kind::NumberKind, Verdict::Undecided,
                        evaluate_num(*goal, 0, goal_ctx, cfg.h.bound)};
        }
    } catch (const UndecidedOracleError& e) {
        throw UndecidedGoalError(std::string(e.what()) +
                                 "; stage the queried set as a last term");
    }

    res.final = std::move(f);
    return res;
}

Report check_stability(const std::vector<StageTrace>& traces, const OracleContext& ctx) {
    if (!ctx.terms) throw Error("oracle context carries no terms");
    const Nat H = ctx.h.bound;
    Report rep;
    for (const auto& tr : traces) {
        const std::size_t i = static_cast<std::size_t>(tr.stage);
        if (i + 1 >= ctx.stages.size()) continue;
        for (const auto& [term, jv, rec] : tr.verdicts) {
            (void)rec;
            const auto& family = *(*ctx.terms)[term].family;
            const std::string label =
                (*ctx.terms)[term].name + "[j=" + std::to_string(jv) + "]";

            OracleContext base = ctx;
            base.direct_filter = &ctx.stages[i];  // the filter this stage saw
            base.cache.clear();
            const Bitset want = evaluate_bits(family, jv, base, H);

            for (std::size_t s = i + 1; s < ctx.stages.size(); ++s) {
                OracleContext later = ctx;
                later.direct_filter = &ctx.stages[s];
                later.cache.clear();
                const std::string at_stage = "stage " + std::to_string(static_cast<int>(s) - 1);
                try {
                    const Bitset got = evaluate_bits(family, jv, later, H);
                    if (got != want) {
                        const Bitset gained = got & ~want, lost = want & ~got;
                        const std::size_t p1 = gained.find_first(), p2 = lost.find_first();
                        const Nat point =
                            std::min(p1 == Bitset::npos ? H : p1, p2 == Bitset::npos ? H : p2);
                        rep.violations.push_back({label, "stability", point,
                                                  at_stage + " filter changes the set at " +
                                                      std::to_string(point)});
                        break;
                    }
                } catch (const UndecidedOracleError&) {
                    rep.violations.push_back(
                        {label, "stability", 0,
                         at_stage + " filter cannot answer an oracle call"});
                    break;
                }
            }
        }
    }
    return rep;
}

}  // namespace hindsum
