#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

#include <hindsum/core.hpp>
#include <hindsum/eliminate.hpp>
#include <hindsum/errors.hpp>
#include <hindsum/filter.hpp>
#include <hindsum/hindman.hpp>
#include <hindsum/json_io.hpp>
#include <hindsum/summable.hpp>

namespace py = pybind11;
using namespace hindsum;

namespace {

Bitset set_of(const std::vector<Nat>& values, Nat bound) {
    return Bitset::from_values(static_cast<std::size_t>(bound), values);
}

py::dict solve_dict(const SolveResult& r) {
    py::dict d;
    switch (r.status) {
        case SolveStatus::Found: d["status"] = "found"; break;
        case SolveStatus::NotFound: d["status"] = "not_found"; break;
        case SolveStatus::BudgetExhausted: d["status"] = "budget_exhausted"; break;
    }
    d["nodes"] = r.nodes;
    if (r.solution) {
        std::vector<Nat> values;
        std::vector<std::vector<std::size_t>> blocks;
        for (const auto& y : r.solution->ys) {
            values.push_back(y.value);
            blocks.push_back(y.block);
        }
        d["values"] = values;
        d["blocks"] = blocks;
        d["colors"] = r.solution->colors;
    }
    return d;
}

ElimConfig config_of(Nat horizon, Nat min_tail, Nat trans_bound, Nat param_range,
                     std::uint64_t max_nodes) {
    ElimConfig cfg;
    cfg.h = Horizon{horizon, min_tail};
    cfg.trans_bound = trans_bound;
    cfg.param_range = param_range;
    cfg.budget.max_nodes = max_nodes;
    return cfg;
}

constexpr std::size_t kPairBudget = 10000;

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "finite approximations of idempotent ultrafilters on the naturals";

    py::enum_<Verdict>(m, "Verdict")
        .value("IN", Verdict::In)
        .value("OUT", Verdict::Out)
        .value("UNDECIDED", Verdict::Undecided);

    py::class_<Horizon>(m, "Horizon")
        .def(py::init([](Nat bound, Nat min_tail) {
                 return Horizon{bound, min_tail};
             }),
             py::arg("bound") = 4096, py::arg("min_tail") = 1)
        .def_readwrite("bound", &Horizon::bound)
        .def_readwrite("min_tail", &Horizon::min_tail)
        .def("__repr__", [](const Horizon& h) {
            return "Horizon(bound=" + std::to_string(h.bound) +
                   ", min_tail=" + std::to_string(h.min_tail) + ")";
        });

    py::class_<VerdictRecord>(m, "VerdictRecord")
        .def_readonly("polarity", &VerdictRecord::polarity)
        .def_readonly("witness", &VerdictRecord::witness)
        .def("__repr__", [](const VerdictRecord& v) {
            const char* p = v.polarity == Verdict::In ? "IN"
                            : v.polarity == Verdict::Out ? "OUT"
                                                         : "UNDECIDED";
            return std::string("VerdictRecord(") + p + ", witness=" +
                   std::to_string(v.witness) + ")";
        });

    py::class_<FfsFilter>(m, "Filter")
        .def(py::init([](const std::vector<Nat>& generators, const Horizon& h, int stage) {
                 FfsFilter f{AscendingSeq(generators), h, stage};
                 validate_filter(f);
                 return f;
             }),
             py::arg("generators"), py::arg("horizon") = Horizon{}, py::arg("stage") = -1)
        .def_property_readonly("generators",
                               [](const FfsFilter& f) { return f.generators.values(); })
        .def_property_readonly("horizon", [](const FfsFilter& f) { return f.h; })
        .def_readonly("stage", &FfsFilter::stage)
        .def("__repr__", [](const FfsFilter& f) {
            return "Filter(" + std::to_string(f.generators.size()) + " generators, stage " +
                   std::to_string(f.stage) + ")";
        });

    m.def("frechet", &frechet, py::arg("horizon") = Horizon{},
          "base filter: generators 1..floor(sqrt(bound))");

    m.def(
        "member",
        [](const FfsFilter& f, const std::vector<Nat>& values) {
            return ffs_member(f, set_of(values, f.h.bound));
        },
        py::arg("filter"), py::arg("values"),
        "tail-membership verdict of the set within the filter's horizon");

    m.def(
        "star_set",
        [](const FfsFilter& f, const std::vector<Nat>& values) {
            return star_set(f, set_of(values, f.h.bound)).values();
        },
        py::arg("filter"), py::arg("values"),
        "members n of the set whose downward translate by n stays in the filter");

    m.def(
        "k_prime",
        [](Nat n, const std::vector<Nat>& values, Nat bound) {
            return k_prime(n, set_of(values, bound));
        },
        py::arg("n"), py::arg("values"), py::arg("bound") = 4096,
        "least member above n, or 0");

    m.def(
        "fs_sums",
        [](const std::vector<Nat>& values, std::size_t start, Nat bound) {
            return fs_values(AscendingSeq(values), start, bound).values();
        },
        py::arg("values"), py::arg("start") = 0, py::arg("bound") = 4096,
        "all finite sums of distinct elements from position start, below bound");

    m.def(
        "translate_down",
        [](const std::vector<Nat>& values, Nat amount, Nat bound) {
            return translate_down(set_of(values, bound), amount).values();
        },
        py::arg("values"), py::arg("amount"), py::arg("bound") = 4096,
        "the set { n : n + amount is a member }");

    m.def(
        "hat_monotone",
        [](const std::vector<Nat>& values) { return hat_monotone({values}).values; },
        py::arg("values"), "least strictly increasing pointwise upper bound");

    m.def(
        "extract_tail",
        [](const FfsFilter& f, const std::vector<Nat>& values) -> py::object {
            const auto ex = extract_generators(f, set_of(values, f.h.bound));
            if (!ex) return py::none();
            return py::make_tuple(ex->m, ex->tail.values());
        },
        py::arg("filter"), py::arg("values"),
        "least tail whose finite sums stay inside the set, as (m, tail), or None");

    py::class_<Coloring>(m, "Coloring")
        .def_static(
            "residue",
            [](Nat mod, const std::vector<Nat>& zeros, Nat bound) {
                return Coloring::residue_zero(mod, zeros, bound);
            },
            py::arg("mod"), py::arg("zeros") = std::vector<Nat>{0}, py::arg("bound") = 4096)
        .def_static("table", [](const std::vector<int>& t) { return Coloring::from_table(t); },
                    py::arg("colors"))
        .def_static("constant", &Coloring::constant, py::arg("color"), py::arg("bound") = 4096)
        .def("at", &Coloring::at, py::arg("n"));

    m.def(
        "solve_ht",
        [](const Coloring& c, const std::vector<Nat>& ground, std::size_t length, Nat horizon,
           std::uint64_t max_nodes) {
            SearchBudget budget;
            budget.max_nodes = max_nodes;
            return solve_dict(solve_ht(c, AscendingSeq(ground), length, Horizon{horizon, 1},
                                       budget));
        },
        py::arg("coloring"), py::arg("ground"), py::arg("length"), py::arg("horizon") = 4096,
        py::arg("max_nodes") = std::uint64_t{200000},
        "canonical least homogeneous refinement for one coloring");

    m.def(
        "solve_iht",
        [](const std::vector<Coloring>& cs, const std::vector<Nat>& ground, std::size_t length,
           Nat horizon, std::uint64_t max_nodes) {
            SearchBudget budget;
            budget.max_nodes = max_nodes;
            return solve_dict(solve_iht(cs, AscendingSeq(ground), length, Horizon{horizon, 1},
                                        budget));
        },
        py::arg("colorings"), py::arg("ground"), py::arg("length"), py::arg("horizon") = 4096,
        py::arg("max_nodes") = std::uint64_t{200000},
        "iterated refinement: coloring k constrains the sums of the k-tail");

    m.def(
        "run_program_json",
        [](const std::string& text, bool ss, Nat horizon, Nat min_tail, Nat trans_bound,
           Nat param_range, std::uint64_t max_nodes) {
            const Program prog = parse_program(text);
            const ElimConfig cfg =
                config_of(horizon, min_tail, trans_bound, param_range, max_nodes);
            if (ss) {
                SsResult r = eliminate_ss(prog.terms, prog.goal, cfg);
                RunReports reports{
                    check_pnu(r.elim.final, r.elim.catalog, r.elim.ctx, kPairBudget),
                    check_dta(r.elim.final, r.elim.catalog, r.elim.ctx),
                    check_stability(r.elim.traces, r.elim.ctx)};
                return trace_json(r, cfg, reports);
            }
            ElimResult r = eliminate(prog.terms, prog.goal, cfg);
            RunReports reports{check_pnu(r.final, r.catalog, r.ctx, kPairBudget),
                               check_dta(r.final, r.catalog, r.ctx),
                               check_stability(r.traces, r.ctx)};
            return trace_json(r, cfg, reports);
        },
        py::arg("text"), py::arg("ss") = false, py::arg("horizon") = 4096,
        py::arg("min_tail") = 1, py::arg("trans_bound") = 1, py::arg("param_range") = 1,
        py::arg("max_nodes") = std::uint64_t{200000},
        "staged elimination of a program text; returns the trace document as JSON");

    py::register_exception<Error>(m, "EngineError");
}
