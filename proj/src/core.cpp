#include "hindsum/core.hpp"

#include <algorithm>
#include <stdexcept>

#include "hindsum/errors.hpp"

namespace hindsum {

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::In: return "in";
        case Verdict::Out: return "out";
        case Verdict::Undecided: return "undecided";
    }
    return "?";
}

AscendingSeq::AscendingSeq(std::vector<Nat> values) : values_(std::move(values)) {
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (values_[i] == 0)
            throw Error("sequence entries must be positive");
        if (i > 0 && values_[i] <= values_[i - 1])
            throw Error("sequence must be strictly increasing");
    }
}

AscendingSeq AscendingSeq::range(Nat lo, Nat hi) {
    if (lo == 0 || hi < lo) throw Error("bad range");
    std::vector<Nat> v;
    v.reserve(hi - lo + 1);
    for (Nat n = lo; n <= hi; ++n) v.push_back(n);
    return AscendingSeq(std::move(v));
}

AscendingSeq AscendingSeq::tail(std::size_t m) const {
    if (m > values_.size()) throw Error("tail start out of range");
    AscendingSeq t;
    t.values_.assign(values_.begin() + static_cast<std::ptrdiff_t>(m), values_.end());
    return t;
}

std::vector<BlockSum> fs_bounded(const AscendingSeq& seq, std::size_t start, Nat bound) {
    std::vector<BlockSum> out;
    std::vector<std::size_t> block;
    // Depth-first over index blocks; order fixed afterwards by a single sort.
    auto rec = [&](auto&& self, std::size_t next, Nat sum) -> void {
        for (std::size_t i = next; i < seq.size(); ++i) {
            Nat v = sum + seq[i];
            if (v >= bound) break;  // entries ascend, so later i only grow
            block.push_back(i);
            out.push_back({v, block});
            self(self, i + 1, v);
            block.pop_back();
        }
    };
    rec(rec, start, 0);
    std::sort(out.begin(), out.end(), [](const BlockSum& a, const BlockSum& b) {
        if (a.value != b.value) return a.value < b.value;
        return a.block < b.block;
    });
    return out;
}

Bitset fs_values(const AscendingSeq& seq, std::size_t start, Nat bound) {
    Bitset reach(bound);
    for (std::size_t i = seq.size(); i-- > start;) {
        Nat g = seq[i];
        if (g >= bound) continue;
        reach |= reach.shifted_up(g);
        reach.set(static_cast<std::size_t>(g));
    }
    return reach;
}

Bitset translate_down(const Bitset& x, Nat n) {
    return x.shifted_down(n);
}

}  // namespace hindsum
