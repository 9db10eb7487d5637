// Copyright 2026 The pmrsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <array>
#include <bit>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>

#include "pmrsim/errors.hpp"

namespace pmrsim {

/// Fixed-capacity qubit bitmask. Bit j is qubit j. Dense routines only ever
/// look at the low word; the extra words exist for large model Hamiltonians
/// (e.g. 2N spin-orbitals) that are only costed, never densified.
class BitMask {
   public:
    static constexpr std::size_t kWords = 4;
    static constexpr std::size_t kMaxQubits = 64 * kWords;

    constexpr BitMask() = default;
    constexpr explicit BitMask(std::uint64_t low) { words_[0] = low; }

    static BitMask single(std::size_t bit) {
        BitMask m;
        m.set(bit);
        return m;
    }

    constexpr bool test(std::size_t bit) const { return (words_[bit >> 6] >> (bit & 63)) & 1u; }
    constexpr void set(std::size_t bit, bool value = true) {
        std::uint64_t b = std::uint64_t{1} << (bit & 63);
        if (value) {
            words_[bit >> 6] |= b;
        } else {
            words_[bit >> 6] &= ~b;
        }
    }
    constexpr void flip(std::size_t bit) { words_[bit >> 6] ^= std::uint64_t{1} << (bit & 63); }

    constexpr int popcount() const {
        int c = 0;
        for (auto w : words_) c += std::popcount(w);
        return c;
    }
    constexpr bool parity() const { return popcount() & 1; }
    constexpr bool any() const {
        for (auto w : words_)
            if (w) return true;
        return false;
    }
    constexpr bool none() const { return !any(); }

    /// Index of the highest set bit, or -1 if empty.
    constexpr int highest() const {
        for (int w = static_cast<int>(kWords) - 1; w >= 0; --w)
            if (words_[w]) return 64 * w + 63 - std::countl_zero(words_[w]);
        return -1;
    }

    constexpr bool fits(std::size_t n) const { return highest() < static_cast<int>(n); }

    constexpr std::uint64_t low() const { return words_[0]; }
    constexpr const std::array<std::uint64_t, kWords> &words() const { return words_; }

    constexpr BitMask &operator^=(const BitMask &o) {
        for (std::size_t i = 0; i < kWords; ++i) words_[i] ^= o.words_[i];
        return *this;
    }
    constexpr BitMask &operator&=(const BitMask &o) {
        for (std::size_t i = 0; i < kWords; ++i) words_[i] &= o.words_[i];
        return *this;
    }
    constexpr BitMask &operator|=(const BitMask &o) {
        for (std::size_t i = 0; i < kWords; ++i) words_[i] |= o.words_[i];
        return *this;
    }
    friend constexpr BitMask operator^(BitMask a, const BitMask &b) { return a ^= b; }
    friend constexpr BitMask operator&(BitMask a, const BitMask &b) { return a &= b; }
    friend constexpr BitMask operator|(BitMask a, const BitMask &b) { return a |= b; }

    friend constexpr bool operator==(const BitMask &, const BitMask &) = default;
    /// Numeric order (most significant word first).
    friend constexpr std::strong_ordering operator<=>(const BitMask &a, const BitMask &b) {
        for (int w = static_cast<int>(kWords) - 1; w >= 0; --w)
            if (auto c = a.words_[w] <=> b.words_[w]; c != 0) return c;
        return std::strong_ordering::equal;
    }

    /// n-character binary string, qubit n-1 first.
    std::string to_binary(std::size_t n) const {
        std::string s(n, '0');
        for (std::size_t j = 0; j < n; ++j)
            if (test(j)) s[n - 1 - j] = '1';
        return s;
    }

    static BitMask from_binary(std::string_view s) {
        require(s.size() <= kMaxQubits, ErrorKind::Parse, "bitmask wider than " + std::to_string(kMaxQubits) + " bits");
        BitMask m;
        const std::size_t n = s.size();
        for (std::size_t p = 0; p < n; ++p) {
            if (s[p] == '1') {
                m.set(n - 1 - p);
            } else if (s[p] != '0') {
                fail(ErrorKind::Parse, "invalid character in binary mask '" + std::string(s) + "'");
            }
        }
        return m;
    }

   private:
    std::array<std::uint64_t, kWords> words_{};
};

/// (-1)^popcount(a & b) as +1/-1.
inline int parity_sign(const BitMask &a, const BitMask &b) { return (a & b).parity() ? -1 : 1; }
inline int parity_sign(std::uint64_t a, std::uint64_t b) { return (std::popcount(a & b) & 1) ? -1 : 1; }

struct BitMaskHash {
    std::size_t operator()(const BitMask &m) const noexcept {
        std::size_t h = 0;
        for (auto w : m.words()) h = h * 0x9E3779B97F4A7C15ULL ^ std::hash<std::uint64_t>{}(w);
        return h;
    }
};

}  // namespace pmrsim
