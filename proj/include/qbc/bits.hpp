#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "qbc/rng.hpp"

namespace qbc {

using Bits = std::vector<std::uint8_t>;

// Scalar product modulo 2 of two equal-length bitstrings: the parity of
// the bitwise AND.
inline int parity(const Bits& r, const Bits& s) {
    if (r.size() != s.size())
        throw std::invalid_argument("parity: length mismatch");
    int acc = 0;
    for (std::size_t i = 0; i < r.size(); ++i) acc ^= (r[i] & s[i]);
    return acc;
}

// Copy of `s` with position `x` removed, order preserved.
template <typename Seq>
Seq exclude(const Seq& s, int x) {
    if (x < 0 || static_cast<std::size_t>(x) >= s.size())
        throw std::out_of_range("exclude: position out of range");
    Seq out;
    out.reserve(s.size() - 1);
    for (std::size_t i = 0; i < s.size(); ++i)
        if (static_cast<int>(i) != x) out.push_back(s[i]);
    return out;
}

inline int weight(const Bits& s) {
    int w = 0;
    for (auto b : s) w += b;
    return w;
}

inline Bits random_bits(int n, Rng& rng) {
    Bits out(n);
    for (auto& b : out) b = static_cast<std::uint8_t>(rng.coin());
    return out;
}

// Uniform n-bit string of Hamming weight exactly k (partial Fisher-Yates).
inline Bits random_bits_of_weight(int n, int k, Rng& rng) {
    if (k < 0 || k > n)
        throw std::invalid_argument("random_bits_of_weight: bad weight");
    std::vector<int> pos(n);
    for (int i = 0; i < n; ++i) pos[i] = i;
    Bits out(n, 0);
    for (int i = 0; i < k; ++i) {
        const int j = i + static_cast<int>(rng.uniform_int(n - i));
        std::swap(pos[i], pos[j]);
        out[pos[i]] = 1;
    }
    return out;
}

inline std::string to_string(const Bits& s) {
    std::string out;
    out.reserve(s.size());
    for (auto b : s) out.push_back(b ? '1' : '0');
    return out;
}

inline Bits bits_from_string(std::string_view text) {
    Bits out;
    out.reserve(text.size());
    for (char c : text) {
        if (c != '0' && c != '1')
            throw std::invalid_argument("bits_from_string: expected 0/1");
        out.push_back(c == '1');
    }
    return out;
}

// Big-endian: bit 0 of the string is the most significant index bit.
inline std::uint64_t bits_to_index(const Bits& s) {
    std::uint64_t idx = 0;
    for (auto b : s) idx = (idx << 1) | b;
    return idx;
}

inline Bits index_to_bits(std::uint64_t idx, int n) {
    Bits out(n);
    for (int i = 0; i < n; ++i) out[i] = (idx >> (n - 1 - i)) & 1;
    return out;
}

}  // namespace qbc
