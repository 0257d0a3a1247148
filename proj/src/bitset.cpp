#include "hindsum/bitset.hpp"

#include <bit>
#include <cassert>

namespace hindsum {

Bitset Bitset::full(std::size_t size) {
    Bitset b(size);
    for (auto& w : b.words_) w = ~std::uint64_t{0};
    b.trim();
    return b;
}

Bitset Bitset::from_values(std::size_t size, const std::vector<std::uint64_t>& values) {
    Bitset b(size);
    for (auto v : values)
        if (v < size) b.words_[v >> 6] |= std::uint64_t{1} << (v & 63);
    return b;
}

void Bitset::set(std::size_t i, bool value) {
    assert(i < size_);
    if (value)
        words_[i >> 6] |= std::uint64_t{1} << (i & 63);
    else
        words_[i >> 6] &= ~(std::uint64_t{1} << (i & 63));
}

std::size_t Bitset::count() const {
    std::size_t n = 0;
    for (auto w : words_) n += std::popcount(w);
    return n;
}

bool Bitset::any() const {
    for (auto w : words_)
        if (w) return true;
    return false;
}

bool Bitset::is_subset_of(const Bitset& other) const {
    assert(size_ == other.size_);
    for (std::size_t k = 0; k < words_.size(); ++k)
        if (words_[k] & ~other.words_[k]) return false;
    return true;
}

bool Bitset::intersects(const Bitset& other) const {
    assert(size_ == other.size_);
    for (std::size_t k = 0; k < words_.size(); ++k)
        if (words_[k] & other.words_[k]) return true;
    return false;
}

std::size_t Bitset::find_first(std::size_t from) const {
    if (from >= size_) return npos;
    std::size_t k = from >> 6;
    std::uint64_t w = words_[k] & (~std::uint64_t{0} << (from & 63));
    while (true) {
        if (w) return (k << 6) + std::countr_zero(w);
        if (++k == words_.size()) return npos;
        w = words_[k];
    }
}

std::size_t Bitset::find_last() const {
    for (std::size_t k = words_.size(); k-- > 0;)
        if (words_[k]) return (k << 6) + 63 - std::countl_zero(words_[k]);
    return npos;
}

Bitset& Bitset::operator&=(const Bitset& other) {
    assert(size_ == other.size_);
    for (std::size_t k = 0; k < words_.size(); ++k) words_[k] &= other.words_[k];
    return *this;
}

Bitset& Bitset::operator|=(const Bitset& other) {
    assert(size_ == other.size_);
    for (std::size_t k = 0; k < words_.size(); ++k) words_[k] |= other.words_[k];
    return *this;
}

Bitset Bitset::operator&(const Bitset& other) const {
    Bitset r = *this;
    r &= other;
    return r;
}

Bitset Bitset::operator|(const Bitset& other) const {
    Bitset r = *this;
    r |= other;
    return r;
}

Bitset Bitset::operator~() const {
    Bitset r = *this;
    for (auto& w : r.words_) w = ~w;
    r.trim();
    return r;
}

Bitset Bitset::shifted_down(std::uint64_t n) const {
    Bitset r(size_);
    if (n >= size_) return r;
    const std::size_t word_shift = n >> 6;
    const unsigned bit_shift = n & 63;
    for (std::size_t k = 0; k + word_shift < words_.size(); ++k) {
        std::uint64_t w = words_[k + word_shift] >> bit_shift;
        if (bit_shift && k + word_shift + 1 < words_.size())
            w |= words_[k + word_shift + 1] << (64 - bit_shift);
        r.words_[k] = w;
    }
    return r;
}

Bitset Bitset::shifted_up(std::uint64_t n) const {
    Bitset r(size_);
    if (n >= size_) return r;
    const std::size_t word_shift = n >> 6;
    const unsigned bit_shift = n & 63;
    for (std::size_t k = words_.size(); k-- > word_shift;) {
        std::uint64_t w = words_[k - word_shift] << bit_shift;
        if (bit_shift && k > word_shift)
            w |= words_[k - word_shift - 1] >> (64 - bit_shift);
        r.words_[k] = w;
    }
    r.trim();
    return r;
}

std::vector<std::uint64_t> Bitset::values() const {
    std::vector<std::uint64_t> out;
    for (std::size_t i = find_first(); i != npos; i = find_first(i + 1)) out.push_back(i);
    return out;
}

void Bitset::trim() {
    if (size_ & 63) words_.back() &= (~std::uint64_t{0}) >> (64 - (size_ & 63));
}

}  // namespace hindsum
