#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "hindsum/eliminate.hpp"
#include "hindsum/errors.hpp"
#include "hindsum/json_io.hpp"
#include "hindsum/summable.hpp"

using namespace hindsum;

namespace {

// Exit codes are a stable contract: 0 found/passed, 1 negative answer,
// 2 search budget or refinement exhausted, 3 usage/parse/schema trouble.
constexpr int kOk = 0;
constexpr int kNegative = 1;
constexpr int kExhausted = 2;
constexpr int kUsage = 3;

// pnu pair-scan cap; catalogs at CLI scale stay far below this
constexpr std::size_t kPairBudget = 10000;

struct Opts {
    Nat horizon = 4096;
    std::size_t min_tail = 1;
    Nat trans_bound = 1;
    Nat param_range = 1;
    std::uint64_t budget = 200000;
    std::uint64_t seed = 1;
    std::string ground = "1..64";
    std::size_t len = 3;
    std::string file;
    std::string out;
    std::string format = "json";
};

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw Error("cannot write " + out_path);
    out << text;
}

AscendingSeq parse_ground(const std::string& spec) {
    const auto dots = spec.find("..");
    try {
        if (dots != std::string::npos) {
            const Nat lo = std::stoull(spec.substr(0, dots));
            const Nat hi = std::stoull(spec.substr(dots + 2));
            return AscendingSeq::range(lo, hi);
        }
    } catch (const std::logic_error&) {
    }
    throw Error("ground must look like LO..HI, got '" + spec + "'");
}

std::string join(const std::vector<Nat>& vs) {
    std::string s;
    for (const Nat v : vs) {
        if (!s.empty()) s += ' ';
        s += std::to_string(v);
    }
    return s;
}

std::string solve_text(const SolveResult& r) {
    std::string s = "status: ";
    s += r.status == SolveStatus::Found        ? "found"
         : r.status == SolveStatus::NotFound   ? "not_found"
                                               : "budget_exhausted";
    s += "\nnodes: " + std::to_string(r.nodes) + "\n";
    if (r.solution) {
        std::string values, blocks;
        for (const auto& y : r.solution->ys) {
            if (!values.empty()) values += ' ';
            values += std::to_string(y.value);
            if (!blocks.empty()) blocks += ' ';
            blocks += '[';
            for (std::size_t i = 0; i < y.block.size(); ++i)
                blocks += (i ? "," : "") + std::to_string(y.block[i]);
            blocks += ']';
        }
        std::string colors;
        for (const int c : r.solution->colors) {
            if (!colors.empty()) colors += ' ';
            colors += std::to_string(c);
        }
        s += "values: " + values + "\nblocks: " + blocks + "\ncolors: " + colors + "\n";
    }
    return s;
}

void report_text(std::string& s, const std::string& name, const Report& rep) {
    s += name;
    s += rep.ok() ? " ok" : " FAIL";
    if (!rep.complete) s += " (truncated)";
    s += "\n";
    for (const auto& v : rep.violations)
        s += "  " + v.axiom + " '" + v.entry + "' at " + std::to_string(v.point) + ": " +
             v.detail + "\n";
}

std::string trace_text(const ElimResult& r, const RunReports& reports,
                       const std::vector<TailRecord>* tails) {
    std::string s = "goal: " + to_string(r.goal) + "\n";
    for (const auto& tr : r.traces)
        s += "stage " + std::to_string(tr.stage) + ": catalog " +
             std::to_string(tr.catalog_before) + ".." + std::to_string(tr.catalog_after) +
             ", generators " + std::to_string(tr.generators_before.size()) + " -> " +
             std::to_string(tr.generators_after.size()) + ", nodes " +
             std::to_string(tr.nodes) + "\n";
    s += "final generators: " + join(r.final.generators.values()) + "\n";
    if (tails) {
        s += "tails:\n";
        for (const auto& t : *tails)
            s += "  " + t.entry + ": stage " + std::to_string(t.stage) + ", m " +
                 std::to_string(t.m) + ", tail " + join(t.tail.values()) + "\n";
    }
    report_text(s, "pnu:", reports.pnu);
    report_text(s, "dta:", reports.dta);
    report_text(s, "stability:", reports.stability);
    return s;
}

int run_solve(const Opts& o, bool iterated) {
    const std::vector<Coloring> cs = parse_colorings(slurp(o.file), o.horizon, o.seed);
    if (!iterated && cs.size() != 1)
        throw Error("solve-ht takes exactly one coloring, got " + std::to_string(cs.size()));
    const Horizon h{o.horizon, o.min_tail};
    const SearchBudget budget{o.budget, BudgetPolicy::Fail};
    const AscendingSeq ground = parse_ground(o.ground);
    const SolveResult r = iterated ? solve_iht(cs, ground, o.len, h, budget)
                                   : solve_ht(cs[0], ground, o.len, h, budget);
    emit(o.format == "json" ? solve_json(r) : solve_text(r), o.out);
    return r.status == SolveStatus::Found      ? kOk
           : r.status == SolveStatus::NotFound ? kNegative
                                               : kExhausted;
}

int run_eliminate(const Opts& o, bool strongly_summable) {
    const Program prog = parse_program(slurp(o.file));
    ElimConfig cfg;
    cfg.h = Horizon{o.horizon, o.min_tail};
    cfg.trans_bound = o.trans_bound;
    cfg.param_range = o.param_range;
    cfg.budget = SearchBudget{o.budget, BudgetPolicy::Fail};

    ElimResult r;
    std::vector<TailRecord> tails;
    bool has_tails = false;
    if (strongly_summable) {
        SsResult ss = eliminate_ss(prog.terms, prog.goal, cfg);
        r = std::move(ss.elim);
        tails = std::move(ss.tails);
        has_tails = true;
    } else {
        r = eliminate(prog.terms, prog.goal, cfg);
    }

    RunReports reports{check_pnu(r.final, r.catalog, r.ctx, kPairBudget),
                       check_dta(r.final, r.catalog, r.ctx),
                       check_stability(r.traces, r.ctx)};

    if (o.format == "json") {
        if (has_tails)
            emit(trace_json(SsResult{r, tails}, cfg, reports), o.out);
        else
            emit(trace_json(r, cfg, reports), o.out);
    } else {
        emit(trace_text(r, reports, has_tails ? &tails : nullptr), o.out);
    }
    const bool ok = reports.pnu.ok() && reports.dta.ok() && reports.stability.ok();
    return ok ? kOk : kNegative;
}

int run_verify(const Opts& o) {
    const FilterDoc doc = parse_filter_doc(slurp(o.file));
    OracleContext ctx;
    ctx.h = doc.filter.h;
    const Report pnu = check_pnu(doc.filter, doc.catalog, ctx, kPairBudget);
    const Report dta = check_dta(doc.filter, doc.catalog, ctx);
    if (o.format == "json") {
        emit(verify_json(pnu, dta), o.out);
    } else {
        std::string s;
        report_text(s, "pnu:", pnu);
        report_text(s, "dta:", dta);
        emit(s, o.out);
    }
    return pnu.ok() && dta.ok() ? kOk : kNegative;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"finite approximations of idempotent ultrafilters on the naturals"};
    app.require_subcommand(1);

    Opts o;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--horizon", o.horizon, "evaluation bound H")->capture_default_str();
        sub->add_option("--min-tail", o.min_tail, "generators a witness tail must keep")
            ->capture_default_str();
        sub->add_option("--budget", o.budget, "search node budget")->capture_default_str();
        sub->add_option("--out", o.out, "write the result here instead of stdout");
        sub->add_option("--format", o.format, "output format")
            ->check(CLI::IsMember({"json", "text"}))
            ->capture_default_str();
    };

    CLI::App* ht = app.add_subcommand("solve-ht", "homogeneous FS refinement, one coloring");
    CLI::App* iht = app.add_subcommand("solve-iht", "iterated refinement, one coloring per tail");
    for (CLI::App* sub : {ht, iht}) {
        add_common(sub);
        sub->add_option("coloring", o.file, "coloring spec (JSON)")->required();
        sub->add_option("--ground", o.ground, "ground sequence LO..HI")->capture_default_str();
        sub->add_option("--len", o.len, "solution length")->capture_default_str();
        sub->add_option("--seed", o.seed, "base seed for random coloring specs")
            ->capture_default_str();
    }

    CLI::App* elim = app.add_subcommand("eliminate", "staged elimination run of a program");
    CLI::App* elim_ss =
        app.add_subcommand("eliminate-ss", "elimination with finite-sum set re-insertion");
    for (CLI::App* sub : {elim, elim_ss}) {
        add_common(sub);
        sub->add_option("program", o.file, "program file")->required();
        sub->add_option("--trans-bound", o.trans_bound, "down-translations per entry")
            ->capture_default_str();
        sub->add_option("--param-range", o.param_range, "instantiate each family for j < R")
            ->capture_default_str();
    }

    CLI::App* verify = app.add_subcommand("verify", "re-check axioms of a serialized filter");
    add_common(verify);
    verify->add_option("filter", o.file, "filter/catalog document (JSON)")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kUsage;
    }

    try {
        if (ht->parsed()) return run_solve(o, false);
        if (iht->parsed()) return run_solve(o, true);
        if (elim->parsed()) return run_eliminate(o, false);
        if (elim_ss->parsed()) return run_eliminate(o, true);
        return run_verify(o);
    } catch (const RefinementFailedError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExhausted;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    }
}
