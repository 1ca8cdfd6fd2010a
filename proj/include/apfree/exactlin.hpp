#pragma once

// Exact integer linear algebra for the second-difference system A y = 0:
// fraction-free elimination, kernel parametrization, and the search for a
// small integer kernel vector with pairwise distinct coordinates.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "apfree/apcore.hpp"

namespace apfree {

/// Kernel of A written as  d * x[pivot_i] = sum_j numerators[i][j] * x[free_j].
struct KernelParametrization {
  std::size_t columns = 0;
  std::vector<std::size_t> pivot_columns;
  std::vector<std::size_t> free_columns;
  /// Original indices of a maximal set of independent rows.
  std::vector<std::size_t> independent_rows;
  Int denominator = 1;                   // |det| of the pivot submatrix, > 0
  std::vector<std::vector<Int>> numerators;  // rank x free

  std::size_t rank() const noexcept { return pivot_columns.size(); }
  std::size_t freedom() const noexcept { return free_columns.size(); }

  /// d * x for the kernel vector with free coordinates z, in column order.
  std::vector<Int> scaled_solution(std::span<const Int> z) const;
  /// True iff x satisfies the parametrization identity exactly.
  bool satisfied_by(std::span<const Int> x) const;
};

KernelParametrization kernel_parametrize(const ConstraintMatrix& matrix);

/// ceil(6^(n/2)), the Hadamard bound for an n x n minor of A.
Int hadamard_bound(std::size_t n);

/// value <= 4 n^4 6^(n/2), compared exactly.
bool within_exponential_bound(std::size_t n, const Int& value);

enum class PointSearch { lexicographic, randomized };

struct PointSearchOptions {
  PointSearch mode = PointSearch::lexicographic;
  std::uint64_t seed = 0;
  std::uint64_t max_attempts = 1'000'000;  // randomized mode only
};

/// Point z in [0, side-1]^t whose scaled solution has pairwise distinct
/// coordinates. Lexicographic mode returns the smallest such point.
/// Throws infeasible when no point is found.
std::vector<Int> find_distinct_point(const KernelParametrization& param, std::uint64_t side,
                                     const PointSearchOptions& options = {});

/// Maps X onto distinct naturals in [1, 4 n^4 6^(n/2)] preserving every 3-AP.
CompressionStep compress_exponential(const IntSet& set, const PointSearchOptions& options = {});

}  // namespace apfree
