#pragma once

// Shared helpers for the test binaries: seeded random sets and brute-force
// oracles that share no code with the library.

#include <algorithm>
#include <array>
#include <cstdint>
#include <random>
#include <set>
#include <vector>

#include <gmpxx.h>

#include "apfree/apcore.hpp"

namespace testing_support {

using apfree::Int;
using apfree::IntSet;

inline IntSet random_set(std::mt19937_64& rng, std::size_t n, long lo, long hi) {
  std::uniform_int_distribution<long> pick(lo, hi);
  std::set<long> seen;
  while (seen.size() < n) seen.insert(pick(rng));
  std::vector<Int> values;
  for (long v : seen) values.emplace_back(v);
  return IntSet(std::move(values));
}

inline IntSet from_longs(const std::vector<long>& v) {
  std::vector<Int> values(v.begin(), v.end());
  return IntSet(std::move(values));
}

inline std::vector<long> to_longs(const IntSet& s) {
  std::vector<long> out;
  for (const auto& v : s) out.push_back(v.get_si());
  return out;
}

// Number of k-APs by trying every first element and every positive difference
// up to the span.
inline std::size_t brute_ap_count(const std::vector<long>& xs, unsigned k) {
  std::set<long> in(xs.begin(), xs.end());
  if (xs.empty()) return 0;
  const long span = *in.rbegin() - *in.begin();
  std::size_t count = 0;
  for (long a : in) {
    for (long d = 1; d * static_cast<long>(k - 1) <= span; ++d) {
      bool all = true;
      for (unsigned t = 1; t < k && all; ++t) all = in.count(a + d * static_cast<long>(t)) > 0;
      count += all;
    }
  }
  return count;
}

inline bool brute_free(const std::vector<long>& xs, unsigned k) { return brute_ap_count(xs, k) == 0; }

// Maximum k-AP-free subset size by bitmask enumeration.
inline std::size_t brute_fk(const std::vector<long>& xs, unsigned k) {
  const std::size_t n = xs.size();
  std::size_t best = 0;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    const auto bits = static_cast<std::size_t>(__builtin_popcountll(mask));
    if (bits <= best) continue;
    std::vector<long> sub;
    for (std::size_t i = 0; i < n; ++i)
      if (mask >> i & 1) sub.push_back(xs[i]);
    if (brute_free(sub, k)) best = bits;
  }
  return best;
}

inline bool is_prime_trial(std::uint64_t p) {
  if (p < 2) return false;
  for (std::uint64_t q = 2; q * q <= p; ++q)
    if (p % q == 0) return false;
  return true;
}

}  // namespace testing_support

namespace testing_support {

// Smallest span of an injective 3-AP-preserving integer assignment of X,
// found by exhaustive search over assignments into [0, span] with the minimum
// pinned to 0. Returns 0 if none exists up to `max_span`.
inline long min_compression_span(const std::vector<long>& xs, long max_span) {
  const std::size_t n = xs.size();
  std::vector<std::array<std::size_t, 3>> triples;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t l = 0; l < n; ++l)
        if (i < j && j < l && xs[i] + xs[l] == 2 * xs[j]) triples.push_back({i, j, l});
  for (long span = 1; span <= max_span; ++span) {
    std::vector<long> y(n, 0);
    for (;;) {
      std::set<long> distinct(y.begin(), y.end());
      const bool ok_shape = distinct.size() == n && *distinct.begin() == 0 && *distinct.rbegin() == span;
      bool ok = ok_shape;
      for (const auto& t : triples) {
        if (!ok) break;
        ok = y[t[0]] + y[t[2]] == 2 * y[t[1]];
      }
      if (ok) return span;
      std::size_t pos = 0;
      while (pos < n && y[pos] == span) y[pos++] = 0;
      if (pos == n) break;
      ++y[pos];
    }
  }
  return 0;
}

}  // namespace testing_support

namespace testing_support {

inline mpq_class frac(std::size_t num, std::size_t den) {
  mpq_class q(static_cast<unsigned long>(num), static_cast<unsigned long>(den));
  q.canonicalize();
  return q;
}

}  // namespace testing_support
