#pragma once

// Independent reference computations for the test suites. Nothing here
// calls into the library; vectors are raw bit masks (bit i-1 is x_i).

#include <bit>
#include <cstdint>
#include <random>
#include <vector>

namespace oracle {

inline int dot(std::uint64_t a, std::uint64_t b) { return std::popcount(a & b) & 1; }

// q as the sum of the basis values over the support; the cross terms
// 2 (x_i . x_j) vanish for i != j.
inline int q(std::uint64_t v) {
  int s = 0;
  for (int i = 0; i < 64; ++i)
    if ((v >> i) & 1) s += (i % 2 == 0) ? 1 : 3;
  return s % 4;
}

inline std::uint64_t transvect(std::uint64_t a, std::uint64_t x) { return dot(x, a) ? x ^ a : x; }

// Columns of a g x g matrix; entry (r, c) is bit r of column c.
using Cols = std::vector<std::uint64_t>;

inline std::uint64_t apply(const Cols& m, std::uint64_t v) {
  std::uint64_t out = 0;
  for (std::size_t c = 0; c < m.size(); ++c)
    if ((v >> c) & 1) out ^= m[c];
  return out;
}

inline bool invertible(Cols m) {
  int rank = 0;
  const int n = static_cast<int>(m.size());
  for (int bit = 0; bit < n; ++bit) {
    int pivot = -1;
    for (int r = rank; r < n; ++r)
      if ((m[static_cast<std::size_t>(r)] >> bit) & 1) {
        pivot = r;
        break;
      }
    if (pivot < 0) continue;
    std::swap(m[static_cast<std::size_t>(rank)], m[static_cast<std::size_t>(pivot)]);
    for (int r = 0; r < n; ++r)
      if (r != rank && ((m[static_cast<std::size_t>(r)] >> bit) & 1))
        m[static_cast<std::size_t>(r)] ^= m[static_cast<std::size_t>(rank)];
    ++rank;
  }
  return rank == n;
}

inline bool preserves_q(const Cols& m) {
  const std::uint64_t n = std::uint64_t{1} << m.size();
  for (std::uint64_t v = 0; v < n; ++v)
    if (q(apply(m, v)) != q(v)) return false;
  return true;
}

// |O_g(q)| by running over every g x g matrix. Feasible for g <= 4.
inline std::size_t brute_force_order(int g) {
  const std::size_t entries = static_cast<std::size_t>(g) * static_cast<std::size_t>(g);
  const std::uint64_t colmask = (std::uint64_t{1} << g) - 1;
  std::size_t count = 0;
  for (std::uint64_t code = 0; code < (std::uint64_t{1} << entries); ++code) {
    Cols m(static_cast<std::size_t>(g));
    for (int c = 0; c < g; ++c) m[static_cast<std::size_t>(c)] = (code >> (c * g)) & colmask;
    if (invertible(m) && preserves_q(m)) ++count;
  }
  return count;
}

// Orders of O_g(q) for g = 1..7, counted once by an external column-search
// script and frozen here.
inline constexpr std::size_t kGoldenOrders[] = {1, 1, 2, 8, 72, 1152, 40320};

inline std::mt19937_64 rng(std::uint64_t seed) { return std::mt19937_64(seed); }

}  // namespace oracle
