#pragma once

// Extremal problems for progression-free subsets: exact f_k(B) and g_k(n),
// a bounded-universe upper bound for phi_k(n), and explicit constructions
// (Behrend, greedy, block product).

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

#include "apfree/apcore.hpp"

namespace apfree {

class GCache;

enum class SearchMethod { branch_bound, naive, cached };

std::string_view to_string(SearchMethod method);

struct ExtremalResult {
  std::size_t value = 0;
  IntSet witness;
  SearchMethod method = SearchMethod::branch_bound;
  unsigned k = 3;
  std::string instance;
};

/// Exact f_k(B). The witness is the lexicographically smallest maximum
/// k-AP-free subset.
ExtremalResult max_apfree_subset(const IntSet& set, unsigned k);

/// Exhaustive subset enumeration with the same witness rule; |B| <= 20.
ExtremalResult naive_max_apfree(const IntSet& set, unsigned k);

inline constexpr std::size_t kMaxIntervalLength = 512;

/// g_k(n) for n = 1..n_max. Cached entries are reused when consistent and
/// new ones are written back to `cache` when given.
std::vector<ExtremalResult> g_table(unsigned k, std::size_t n_max, GCache* cache = nullptr);

/// First k-AP-free subset of [1, n] of size `target` in lexicographic order,
/// if one exists. Proves g_k(n) >= target without computing g_k(n).
std::optional<IntSet> interval_subset_of_size(std::size_t n, unsigned k, std::size_t target);

/// Minimum of f_k over canonical n-sets {0 = b_1 < ... < b_n <= bound}. An
/// upper bound for phi_k(n), not its exact value.
ExtremalResult phi_upper_search(std::size_t n, unsigned k, std::uint64_t universe_bound);

/// Largest Behrend sphere-shell set inside [1, N] over a small parameter grid.
IntSet behrend_set(std::uint64_t n);

/// Scan 1..N keeping each element that completes no k-AP.
IntSet greedy_apfree(std::uint64_t n, unsigned k);

/// Copy of S_b in the middle third of block i for each i in S_a; lies in
/// [1, 3ab] and has |S_a| |S_b| elements.
IntSet product_construct(const IntSet& set_a, std::uint64_t a, const IntSet& set_b,
                         std::uint64_t b, unsigned k);

/// rho_k(n) = g_k(n) / n, exactly.
mpq_class density(unsigned k, std::size_t n, GCache* cache = nullptr);

/// rho_k(3ab) >= rho_3(a) rho_k(b) / 3 with exact rationals. The left side is
/// exact when 3ab <= exact_limit; beyond that it is a certified lower bound
/// from an explicit k-AP-free subset of [1, 3ab].
struct ProductDensityCheck {
  std::size_t a = 0;
  std::size_t b = 0;
  unsigned k = 3;
  mpq_class lhs;
  mpq_class rhs;
  bool lhs_exact = false;
  bool holds = false;
};

ProductDensityCheck check_product_density(std::size_t a, std::size_t b, unsigned k,
                                          std::size_t exact_limit, GCache* cache = nullptr);

}  // namespace apfree
