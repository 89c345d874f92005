#pragma once

#include <bit>
#include <cstdint>
#include <vector>

#include "annealab/errors.hpp"

namespace annealab {

// Basis-index convention used everywhere in this project:
//   z = sum_i b_i 2^i  (bit i belongs to spin i, little-endian),
//   s_i = 1 - 2*b_i    (bit 0 <-> spin up, s = +1).
// Booleans ride the same mapping: v_i = (1 + s_i)/2 = 1 - b_i.

struct SpinConfiguration {
  std::vector<std::uint8_t> bits;  // bits[i] in {0,1}

  static SpinConfiguration from_index(int m, std::uint64_t z) {
    SpinConfiguration c;
    c.bits.resize(m);
    for (int i = 0; i < m; ++i) c.bits[i] = static_cast<std::uint8_t>((z >> i) & 1u);
    return c;
  }

  std::uint64_t to_index() const {
    std::uint64_t z = 0;
    for (std::size_t i = 0; i < bits.size(); ++i)
      if (bits[i]) z |= (std::uint64_t{1} << i);
    return z;
  }

  int size() const { return static_cast<int>(bits.size()); }

  int spin(int i) const { return 1 - 2 * static_cast<int>(bits[i]); }

  std::vector<int> spins() const {
    std::vector<int> s(bits.size());
    for (std::size_t i = 0; i < bits.size(); ++i) s[i] = 1 - 2 * static_cast<int>(bits[i]);
    return s;
  }
};

// Number of spins set to -1 in basis state z.
inline int down_count(std::uint64_t z) { return std::popcount(z); }

// sum_i s_i for basis state z of m spins.
inline int spin_sum(int m, std::uint64_t z) { return m - 2 * std::popcount(z); }

inline int hamming_distance(const SpinConfiguration& a, const SpinConfiguration& b) {
  if (a.bits.size() != b.bits.size())
    throw DataError("hamming_distance: configurations have different sizes");
  int d = 0;
  for (std::size_t i = 0; i < a.bits.size(); ++i) d += (a.bits[i] != b.bits[i]);
  return d;
}

inline int hamming_distance(int m, std::uint64_t a, std::uint64_t b) {
  (void)m;
  return std::popcount(a ^ b);
}

}  // namespace annealab
