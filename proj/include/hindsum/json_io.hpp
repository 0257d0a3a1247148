#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hindsum/eliminate.hpp"
#include "hindsum/filter.hpp"
#include "hindsum/hindman.hpp"
#include "hindsum/summable.hpp"

namespace hindsum {

// Post-hoc axiom reports embedded alongside a run's trace.
struct RunReports {
    Report pnu;
    Report dta;
    Report stability;
};

// Every emitter below prints two-space-indented JSON with key order fixed at
// construction, so identical runs serialize byte-for-byte identically.

std::string solve_json(const SolveResult& r);

// One self-contained document for a staged run: config echo, per-stage
// records, final filter with its catalog, goal value, and the embedded
// reports.  The ss overload appends the "tails" section.
std::string trace_json(const ElimResult& r, const ElimConfig& cfg, const RunReports& reports);
std::string trace_json(const SsResult& r, const ElimConfig& cfg, const RunReports& reports);

// The "final" object of a trace as a standalone document: enough to re-check
// the axioms offline.
std::string filter_json(const FfsFilter& f, const AlgebraCatalog& cat);

// The standalone re-check report of the verify command.
std::string verify_json(const Report& pnu, const Report& dta);

// Inverse of filter_json.  Also accepts a whole trace document, descending
// into its "final" object.  Throws SchemaError on anything malformed.
struct FilterDoc {
    FfsFilter filter;
    AlgebraCatalog catalog;
};
FilterDoc parse_filter_doc(const std::string& text);

// Coloring specs for the solver commands: one object or an array of them.
//   {"kind":"residue","mod":M}            colour 0 on n % M == 0
//   {"kind":"residue","mod":M,"zeros":[..]} colour 0 on the listed residues
//   {"kind":"table","colors":[0,1,...]}   explicit table, domain = its length
//   {"kind":"constant","color":c}
//   {"kind":"random"}                     seeded from base_seed + position
//   {"kind":"random","seed":s}            explicit seed wins
std::vector<Coloring> parse_colorings(const std::string& text, Nat domain_bound,
                                      std::uint64_t base_seed);

}  // namespace hindsum
