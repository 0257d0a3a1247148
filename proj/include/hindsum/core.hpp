#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hindsum/bitset.hpp"

namespace hindsum {

using Nat = std::uint64_t;

// Finite horizon: all set computations live in [0, bound).  min_tail is the
// number of trailing generators a membership witness must leave untouched.
struct Horizon {
    Nat bound = 4096;
    std::size_t min_tail = 1;
};

enum class Verdict { In, Out, Undecided };

std::string to_string(Verdict v);

// Strictly increasing sequence of positive naturals.
class AscendingSeq {
public:
    AscendingSeq() = default;
    explicit AscendingSeq(std::vector<Nat> values);

    // (lo, lo+1, ..., hi).
    static AscendingSeq range(Nat lo, Nat hi);

    std::size_t size() const { return values_.size(); }
    bool empty() const { return values_.empty(); }
    Nat operator[](std::size_t i) const { return values_[i]; }
    const std::vector<Nat>& values() const { return values_; }

    // The suffix starting at index m.
    AscendingSeq tail(std::size_t m) const;

    bool operator==(const AscendingSeq& other) const = default;

    auto begin() const { return values_.begin(); }
    auto end() const { return values_.end(); }

private:
    std::vector<Nat> values_;
};

// One finite sum of distinct sequence entries: the summed value plus the
// index block that produced it (strictly increasing indices).
struct BlockSum {
    Nat value = 0;
    std::vector<std::size_t> block;

    bool operator==(const BlockSum& other) const = default;
};

// All sums of nonempty index blocks drawn from seq[start..], with value < bound.
// Sorted by (value, block lexicographically).
std::vector<BlockSum> fs_bounded(const AscendingSeq& seq, std::size_t start, Nat bound);

// Same value set as fs_bounded, computed by subset-sum DP without
// materialising blocks.
Bitset fs_values(const AscendingSeq& seq, std::size_t start, Nat bound);

// {x - n | x in X, x >= n}, truncated to X's universe.
Bitset translate_down(const Bitset& x, Nat n);

}  // namespace hindsum
