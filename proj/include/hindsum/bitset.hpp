#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace hindsum {

// Subset of [0, size) backed by 64-bit words.  All binary operations require
// both operands to share the same universe size.
class Bitset {
public:
    static constexpr std::size_t npos = ~std::size_t{0};

    Bitset() = default;
    explicit Bitset(std::size_t size) : size_(size), words_((size + 63) / 64, 0) {}

    static Bitset full(std::size_t size);
    // Values >= size are ignored: a literal set is truncated at the horizon.
    static Bitset from_values(std::size_t size, const std::vector<std::uint64_t>& values);

    std::size_t size() const { return size_; }

    bool test(std::size_t i) const {
        return i < size_ && (words_[i >> 6] >> (i & 63)) & 1;
    }
    void set(std::size_t i, bool value = true);

    std::size_t count() const;
    bool any() const;
    bool none() const { return !any(); }

    bool is_subset_of(const Bitset& other) const;
    bool intersects(const Bitset& other) const;

    // First member >= from, or npos.
    std::size_t find_first(std::size_t from = 0) const;
    // Largest member, or npos when empty.
    std::size_t find_last() const;

    Bitset& operator&=(const Bitset& other);
    Bitset& operator|=(const Bitset& other);
    Bitset operator&(const Bitset& other) const;
    Bitset operator|(const Bitset& other) const;
    // Complement within the universe.
    Bitset operator~() const;

    // {i | i + n is a member}: the downward translate X - n.
    Bitset shifted_down(std::uint64_t n) const;
    // {i + n | i is a member, i + n < size}.
    Bitset shifted_up(std::uint64_t n) const;

    std::vector<std::uint64_t> values() const;

    bool operator==(const Bitset& other) const = default;

private:
    std::size_t size_ = 0;
    std::vector<std::uint64_t> words_;

    void trim();
};

}  // namespace hindsum
