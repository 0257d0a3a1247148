#include "hindsum/summable.hpp"

#include <algorithm>
#include <stdexcept>
#include <utility>

#include "hindsum/expr.hpp"

namespace hindsum {

Enumeration hat_monotone(const Enumeration& f) {
    Enumeration g;
    g.values.reserve(f.values.size());
    for (const Nat v : f.values) {
        const Nat floor = g.values.empty() ? 0 : g.values.back() + 1;
        g.values.push_back(std::max(v, floor));
    }
    return g;
}

std::optional<TailExtraction> extract_generators(const FfsFilter& f, const Bitset& x) {
    const VerdictRecord v = ffs_member(f, x);
    if (v.polarity != Verdict::In) return std::nullopt;
    // ffs_member scans tail starts from 0 upward, so the witness is already
    // the least index whose whole finite-sum tail fits inside x.
    return TailExtraction{f.generators.tail(v.witness), v.witness};
}

std::optional<std::size_t> index_functional(const std::vector<FfsFilter>& filters,
                                            const Bitset& x) {
    for (std::size_t j = 0; j < filters.size(); ++j)
        if (ffs_member(filters[j], x).polarity == Verdict::In) return j;
    return std::nullopt;
}

namespace {

// Appends, after every stage, the finite-sum set of the tail extracted for
// each entry the stage decided In.  The appended entry arrives pre-recorded
// (In, with its own tail as witness), so the next extend_filter call pins it
// as a colour commitment and refinement cannot leave it.
class SsObserver : public StageObserver {
public:
    std::vector<TailRecord> tails;

    std::size_t planned_extra(std::size_t program_total) const override {
        // One finite-sum insert per In entry.  Half the catalog is a sound
        // working estimate — each set rides with its translates, which as a
        // rule land Out — and extend_filter floors any stage the estimate
        // undershoots once the real inserts are in the catalog.
        return (program_total + 1) / 2;
    }

    void after_stage(const StageTrace& tr, const FfsFilter& f, AlgebraCatalog& cat,
                     OracleContext& ctx) override {
        const Nat bound = f.h.bound;
        for (std::size_t k = tr.catalog_before; k < tr.catalog_after; ++k) {
            const AlgebraCatalog::Entry entry = cat.entries[k];  // push_back below reallocates
            if (!entry.recorded || entry.recorded->polarity != Verdict::In) continue;

            const Bitset x = evaluate_entry(entry, ctx, bound);
            const auto ex = extract_generators(f, x);
            if (!ex) throw std::logic_error("recorded In entry failed tail extraction");
            const Bitset sums = fs_values(f.generators, ex->m, bound);

            TailRecord rec;
            rec.entry = entry.name;
            rec.stage = static_cast<std::size_t>(tr.stage);
            rec.m = ex->m;
            rec.tail = ex->tail;
            rec.fs_entry = "fs(" + entry.name + ")";
            rec.first_in = *index_functional(ctx.stages, x);

            AlgebraCatalog::Entry fs;
            fs.name = rec.fs_entry;
            fs.expr = make_literal(sums.values());
            fs.j = entry.j;
            fs.recorded = ffs_member(f, sums);  // In: the set is its own tail
            cat.entries.push_back(std::move(fs));
            tails.push_back(std::move(rec));
        }
    }
};

}  // namespace

SsResult eliminate_ss(const std::vector<ProgramTerm>& terms, const ExprPtr& goal,
                      const ElimConfig& cfg) {
    SsObserver obs;
    SsResult res;
    res.elim = eliminate(terms, goal, cfg, &obs);
    res.tails = std::move(obs.tails);
    return res;
}

}  // namespace hindsum
