#include "hindsum/json_io.hpp"

#include <random>

#include <json.hpp>

#include "hindsum/errors.hpp"
#include "hindsum/expr.hpp"

namespace hindsum {

namespace {

using json = nlohmann::ordered_json;

const char* status_name(SolveStatus s) {
    switch (s) {
        case SolveStatus::Found: return "found";
        case SolveStatus::NotFound: return "not_found";
        default: return "budget_exhausted";
    }
}

json verdict_fields(const VerdictRecord& v) {
    return {{"polarity", to_string(v.polarity)}, {"witness", v.witness}};
}

json report_to_json(const Report& rep) {
    json out{{"ok", rep.ok()}, {"complete", rep.complete}, {"violations", json::array()}};
    for (const auto& v : rep.violations)
        out["violations"].push_back(
            {{"entry", v.entry}, {"axiom", v.axiom}, {"point", v.point}, {"detail", v.detail}});
    return out;
}

json catalog_to_json(const AlgebraCatalog& cat) {
    json entries = json::array();
    for (const auto& e : cat.entries) {
        json item{{"name", e.name}, {"expr", print_expr(*e.expr, {})}, {"j", e.j}};
        if (e.recorded) item.update(verdict_fields(*e.recorded));
        entries.push_back(std::move(item));
    }
    return entries;
}

json final_to_json(const FfsFilter& f, const AlgebraCatalog& cat) {
    return {{"generators", f.generators.values()},
            {"horizon", f.h.bound},
            {"min_tail", f.h.min_tail},
            {"stage", f.stage},
            {"trans_bound", cat.trans_bound},
            {"catalog", catalog_to_json(cat)}};
}

json goal_to_json(const GoalValue& g) {
    if (g.kind == GoalValue::Kind::VerdictKind)
        return {{"kind", "verdict"}, {"value", to_string(g.verdict)}};
    return {{"kind", "number"}, {"value", g.number}};
}

json trace_to_json(const ElimResult& r, const ElimConfig& cfg, const RunReports& reports) {
    json doc;
    doc["config"] = {
        {"horizon", cfg.h.bound},
        {"min_tail", cfg.h.min_tail},
        {"trans_bound", cfg.trans_bound},
        {"param_range", cfg.param_range},
        {"budget",
         {{"max_nodes", cfg.budget.max_nodes},
          {"policy", cfg.budget.policy == BudgetPolicy::Fail ? "fail" : "best_effort"}}}};
    doc["stages"] = json::array();
    for (const auto& tr : r.traces) {
        json verdicts = json::array();
        for (const auto& [term, jv, rec] : tr.verdicts) {
            json v{{"term", term}, {"j", jv}};
            v.update(verdict_fields(rec));
            verdicts.push_back(std::move(v));
        }
        doc["stages"].push_back({{"stage", tr.stage},
                                 {"catalog_before", tr.catalog_before},
                                 {"catalog_after", tr.catalog_after},
                                 {"generators_before", tr.generators_before},
                                 {"generators_after", tr.generators_after},
                                 {"verdicts", std::move(verdicts)},
                                 {"nodes", tr.nodes}});
    }
    doc["final"] = final_to_json(r.final, r.catalog);
    doc["goal"] = goal_to_json(r.goal);
    doc["reports"] = {{"pnu", report_to_json(reports.pnu)},
                      {"dta", report_to_json(reports.dta)},
                      {"stability", report_to_json(reports.stability)}};
    return doc;
}

std::string dump(const json& doc) { return doc.dump(2) + "\n"; }

// json.at with SchemaError instead of nlohmann's own exceptions
const json& field(const json& obj, const char* key, const char* where) {
    if (!obj.is_object() || !obj.contains(key))
        throw SchemaError(std::string(where) + ": missing field \"" + key + "\"");
    return obj[key];
}

Nat nat_field(const json& obj, const char* key, const char* where) {
    const json& v = field(obj, key, where);
    if (!v.is_number_unsigned())
        throw SchemaError(std::string(where) + ": field \"" + key + "\" must be a natural");
    return v.get<Nat>();
}

std::vector<Nat> nat_array(const json& v, const char* where) {
    if (!v.is_array()) throw SchemaError(std::string(where) + " must be an array");
    std::vector<Nat> out;
    for (const json& item : v) {
        if (!item.is_number_unsigned())
            throw SchemaError(std::string(where) + " must hold naturals");
        out.push_back(item.get<Nat>());
    }
    return out;
}

json parse_text(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw SchemaError(std::string("not valid JSON: ") + e.what());
    }
}

}  // namespace

std::string solve_json(const SolveResult& r) {
    json doc{{"status", status_name(r.status)}, {"nodes", r.nodes}};
    if (r.solution) {
        json values = json::array(), blocks = json::array();
        for (const auto& y : r.solution->ys) {
            values.push_back(y.value);
            blocks.push_back(y.block);
        }
        doc["solution"] = {
            {"values", std::move(values)},
            {"blocks", std::move(blocks)},
            {"colors", r.solution->colors}};
    } else {
        doc["solution"] = nullptr;
    }
    return dump(doc);
}

std::string trace_json(const ElimResult& r, const ElimConfig& cfg, const RunReports& reports) {
    return dump(trace_to_json(r, cfg, reports));
}

std::string trace_json(const SsResult& r, const ElimConfig& cfg, const RunReports& reports) {
    json doc = trace_to_json(r.elim, cfg, reports);
    json tails = json::array();
    for (const auto& t : r.tails)
        tails.push_back({{"entry", t.entry},
                         {"stage", t.stage},
                         {"m", t.m},
                         {"tail", t.tail.values()},
                         {"fs_entry", t.fs_entry},
                         {"first_in", t.first_in}});
    doc["tails"] = std::move(tails);
    return dump(doc);
}

std::string filter_json(const FfsFilter& f, const AlgebraCatalog& cat) {
    return dump(final_to_json(f, cat));
}

std::string verify_json(const Report& pnu, const Report& dta) {
    return dump(json{{"pnu", report_to_json(pnu)}, {"dta", report_to_json(dta)}});
}

FilterDoc parse_filter_doc(const std::string& text) {
    json doc = parse_text(text);
    if (doc.is_object() && doc.contains("final")) doc = doc["final"];
    if (!doc.is_object()) throw SchemaError("filter document must be an object");

    FilterDoc out;
    const Nat bound = nat_field(doc, "horizon", "filter document");
    const Nat min_tail = doc.contains("min_tail")
                             ? nat_field(doc, "min_tail", "filter document")
                             : 1;
    try {
        out.filter.generators =
            AscendingSeq(nat_array(field(doc, "generators", "filter document"), "generators"));
        out.filter.h = Horizon{bound, static_cast<std::size_t>(min_tail)};
        if (doc.contains("stage")) {
            if (!doc["stage"].is_number_integer())
                throw SchemaError("filter document: field \"stage\" must be an integer");
            out.filter.stage = doc["stage"].get<int>();
        }
        validate_filter(out.filter);
    } catch (const SchemaError&) {
        throw;
    } catch (const std::exception& e) {
        throw SchemaError(std::string("filter document does not describe a filter: ") +
                          e.what());
    }

    if (doc.contains("trans_bound"))
        out.catalog.trans_bound = nat_field(doc, "trans_bound", "filter document");
    if (doc.contains("catalog")) {
        const json& cat = doc["catalog"];
        if (!cat.is_array()) throw SchemaError("\"catalog\" must be an array");
        for (const json& item : cat) {
            AlgebraCatalog::Entry e;
            const json& name = field(item, "name", "catalog entry");
            if (!name.is_string()) throw SchemaError("catalog entry: \"name\" must be a string");
            e.name = name.get<std::string>();
            const json& expr = field(item, "expr", "catalog entry");
            if (!expr.is_string()) throw SchemaError("catalog entry: \"expr\" must be a string");
            try {
                e.expr = parse_set_expr(expr.get<std::string>());
            } catch (const Error& err) {
                throw SchemaError("catalog entry \"" + e.name + "\": " + err.what());
            }
            if (item.contains("j")) e.j = nat_field(item, "j", "catalog entry");
            if (item.contains("polarity")) {
                const json& p = item["polarity"];
                Verdict verdict;
                if (p == "in")
                    verdict = Verdict::In;
                else if (p == "out")
                    verdict = Verdict::Out;
                else if (p == "undecided")
                    verdict = Verdict::Undecided;
                else
                    throw SchemaError("catalog entry \"" + e.name + "\": unknown polarity");
                e.recorded = VerdictRecord{
                    verdict, static_cast<std::size_t>(
                                 item.contains("witness")
                                     ? nat_field(item, "witness", "catalog entry")
                                     : 0)};
            }
            out.catalog.entries.push_back(std::move(e));
        }
    }
    return out;
}

std::vector<Coloring> parse_colorings(const std::string& text, Nat domain_bound,
                                      std::uint64_t base_seed) {
    json doc = parse_text(text);
    std::vector<json> items;
    if (doc.is_array())
        items.assign(doc.begin(), doc.end());
    else
        items.push_back(std::move(doc));

    std::vector<Coloring> out;
    for (std::size_t idx = 0; idx < items.size(); ++idx) {
        const json& item = items[idx];
        const json& kind = field(item, "kind", "coloring spec");
        if (kind == "residue") {
            const Nat mod = nat_field(item, "mod", "residue coloring");
            std::vector<Nat> zeros{0};
            if (item.contains("zeros")) zeros = nat_array(item["zeros"], "\"zeros\"");
            out.push_back(Coloring::residue_zero(mod, zeros, domain_bound));
        } else if (kind == "table") {
            std::vector<int> table;
            for (const Nat c : nat_array(field(item, "colors", "table coloring"), "\"colors\""))
                table.push_back(static_cast<int>(c != 0));
            out.push_back(Coloring::from_table(table));
        } else if (kind == "constant") {
            const Nat c = nat_field(item, "color", "constant coloring");
            out.push_back(Coloring::constant(static_cast<int>(c != 0), domain_bound));
        } else if (kind == "random") {
            const std::uint64_t seed = item.contains("seed")
                                           ? nat_field(item, "seed", "random coloring")
                                           : base_seed + idx;
            std::mt19937_64 rng(seed);
            std::vector<int> table(static_cast<std::size_t>(domain_bound));
            for (int& c : table) c = static_cast<int>(rng() & 1);
            out.push_back(Coloring::from_table(table));
        } else {
            throw SchemaError("unknown coloring kind: " + kind.dump());
        }
    }
    return out;
}

}  // namespace hindsum
