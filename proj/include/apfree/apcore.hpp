#pragma once

// Core domain types: integer sets, progressions, the second-difference
// constraint matrix, compression steps/chains and their verification.

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "apfree/error.hpp"

namespace apfree {

using Int = mpz_class;

/// Finite set of distinct integers, kept strictly increasing.
class IntSet {
 public:
  IntSet() = default;
  /// Sorts the input; throws invalid_input on duplicates.
  explicit IntSet(std::vector<Int> values);
  IntSet(std::initializer_list<long> values);

  static IntSet interval(long lo, long hi);

  std::size_t size() const noexcept { return values_.size(); }
  bool empty() const noexcept { return values_.empty(); }
  const Int& operator[](std::size_t i) const { return values_[i]; }
  const Int& min() const { return values_.front(); }
  const Int& max() const { return values_.back(); }
  auto begin() const noexcept { return values_.begin(); }
  auto end() const noexcept { return values_.end(); }
  const std::vector<Int>& values() const noexcept { return values_; }

  bool contains(const Int& v) const;
  std::optional<std::size_t> index_of(const Int& v) const;
  bool is_subset_of(const IntSet& other) const;

  IntSet translated(const Int& offset) const;

  friend bool operator==(const IntSet& a, const IntSet& b) {
    return a.values_ == b.values_;
  }

 private:
  std::vector<Int> values_;
};

std::string to_string(const IntSet& set);

/// Strict decimal parse: optional sign followed by digits. Throws invalid_input.
Int parse_int(std::string_view text);

/// k-term arithmetic progression in ascending canonical form.
struct Progression {
  std::vector<Int> values;
  Int difference;

  std::size_t length() const noexcept { return values.size(); }
  friend bool operator==(const Progression&, const Progression&) = default;
};

/// All nontrivial k-APs inside X, ordered by (difference, first value).
std::vector<Progression> enumerate_progressions(const IntSet& set, unsigned k);

bool is_progression_free(const IntSet& set, unsigned k);

/// Rows encode x_lo - 2 x_mid + x_hi = 0, columns follow the sorted order of X.
class ConstraintMatrix {
 public:
  struct Row {
    std::size_t outer_lo;
    std::size_t middle;
    std::size_t outer_hi;
  };

  ConstraintMatrix(std::size_t cols, std::vector<Row> rows);

  std::size_t rows() const noexcept { return rows_.size(); }
  std::size_t cols() const noexcept { return cols_; }
  const Row& row(std::size_t r) const { return rows_[r]; }
  int at(std::size_t r, std::size_t c) const;
  std::vector<std::vector<int>> dense() const;
  std::vector<Int> apply(const std::vector<Int>& x) const;

 private:
  std::size_t cols_;
  std::vector<Row> rows_;
};

ConstraintMatrix second_difference_matrix(const IntSet& set);

/// Partial map between integer values, sorted by source. Sources are unique;
/// injectivity is a property checked by verification, not enforced here.
class ValueMap {
 public:
  using Entry = std::pair<Int, Int>;

  ValueMap() = default;
  /// Throws malformed_certificate on repeated sources.
  explicit ValueMap(std::vector<Entry> entries);

  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }
  const std::vector<Entry>& entries() const noexcept { return entries_; }
  auto begin() const noexcept { return entries_.begin(); }
  auto end() const noexcept { return entries_.end(); }

  const Int* find(const Int& source) const;
  IntSet domain() const;
  /// Throws malformed_certificate if two sources share an image.
  IntSet image() const;
  bool is_injective() const;

  friend bool operator==(const ValueMap&, const ValueMap&) = default;

 private:
  std::vector<Entry> entries_;
};

enum class StepKind { exponential, mod_half, triple_prune_mod_half, shift_normalize };

std::string_view to_string(StepKind kind);
std::optional<StepKind> parse_step_kind(std::string_view name);

/// Kind-specific parameters; unset fields do not apply to the step's kind.
struct StepParams {
  // exponential
  std::optional<Int> determinant;
  std::optional<std::uint64_t> cube_side;
  // exponential, shift_normalize
  std::optional<Int> shift;
  // mod_half, triple_prune_mod_half
  std::optional<std::uint64_t> prime;
  std::optional<int> kept_half;
  std::optional<Int> rebase;
  std::optional<bool> target_met;
  // triple_prune_mod_half
  std::optional<std::uint64_t> window_lo;
  std::optional<std::uint64_t> window_hi;
  std::optional<std::uint64_t> window_primes;
  std::optional<std::uint64_t> required_primes;
  std::optional<std::uint64_t> triple_count;
  std::optional<std::vector<Int>> pruned;

  friend bool operator==(const StepParams&, const StepParams&) = default;
};

struct CompressionStep {
  StepKind kind;
  StepParams params;
  ValueMap map;

  IntSet output() const { return map.image(); }
};

struct CompressionChain {
  IntSet source;
  std::vector<CompressionStep> steps;
  IntSet final_set;
  ValueMap composed;
};

/// Composes step maps starting at `source`; elements dropped by any step
/// are absent from the composed map.
ValueMap compose_maps(const IntSet& source, const std::vector<CompressionStep>& steps);
CompressionChain make_chain(IntSet source, std::vector<CompressionStep> steps);

struct VerificationReport {
  bool injective = true;
  bool preserves_progressions = true;
  bool composition_consistent = true;
  std::size_t retained = 0;
  std::size_t checked_progressions = 0;
  std::optional<Int> max_output;
  std::optional<Progression> violation;
  std::vector<VerificationReport> steps;

  bool pass() const;
};

/// Replays the value map only; throws malformed_certificate if the map's
/// domain is not contained in `source`.
VerificationReport verify_compression(const IntSet& source, const ValueMap& map);
VerificationReport verify_compression(const IntSet& source, const CompressionStep& step);
VerificationReport verify_compression(const IntSet& source, const CompressionChain& chain);

}  // namespace apfree
