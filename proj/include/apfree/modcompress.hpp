#pragma once

// Compressions by reduction modulo a prime followed by keeping the residues
// that fall into one half of [0, p-1].

#include <cstddef>
#include <cstdint>
#include <vector>

#include <gmpxx.h>

#include "apfree/apcore.hpp"

namespace apfree {

struct PrimeWindow {
  std::uint64_t lo = 0;
  std::uint64_t hi = 0;
  std::vector<std::uint64_t> primes;
};

/// Segmented sieve over [lo, hi]. Requires 2 <= lo <= hi.
PrimeWindow primes_in_window(std::uint64_t lo, std::uint64_t hi);

struct NondividingPrime {
  std::uint64_t prime = 0;
  bool below_cubic_bound = false;  // prime < 2 n^3
};

/// Smallest prime dividing no pairwise difference of X (|X| >= 2).
NondividingPrime find_nondividing_prime(const IntSet& set);

/// x -> (x mod p) restricted to the more populated half of the residues and
/// re-based to start at 0. Throws precondition_violation if residues collide.
CompressionStep reduce_mod_half(const IntSet& set, std::uint64_t prime);

/// reduce_mod_half with the smallest non-dividing prime; records whether
/// floor(p/2) <= n^3.
CompressionStep compress_cubic(const IntSet& set);

/// Pair (i, j), i < j, whose difference is divisible by window prime `prime`.
struct DivisibilityTriple {
  std::size_t i;
  std::size_t j;
  std::uint64_t prime;
};

std::vector<DivisibilityTriple> divisibility_triples(const IntSet& set,
                                                     const PrimeWindow& window);

/// Prime window used by compress_almost_linear for a set of size n:
/// [2n, max(ceil(2 c n ln n), q)] where q is the ceil(c n)-th prime >= 2n,
/// searched up to ten times the nominal upper end.
struct AlmostLinearWindow {
  PrimeWindow window;
  std::uint64_t nominal_hi = 0;
  std::uint64_t required = 0;  // ceil(c n)
  bool complete = false;       // window holds at least `required` primes
};

AlmostLinearWindow almost_linear_window(std::size_t n, const mpq_class& c);

/// Prunes the elements involved with the least-used window prime, then
/// applies reduce_mod_half with that prime. Requires c > 2. Throws
/// window_exhausted when the window cannot reach ceil(c n) primes.
CompressionStep compress_almost_linear(const IntSet& set, const mpq_class& c);

}  // namespace apfree
