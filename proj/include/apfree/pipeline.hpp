#pragma once

// End-to-end compression: exponential interval -> cubic interval ->
// almost-linear interval -> [1, m], then extraction of a large k-AP-free
// subset through a shifted progression-free target set.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "apfree/apcore.hpp"
#include "apfree/exactlin.hpp"

namespace apfree {

struct PipelineConfig {
  mpq_class epsilon{4, 5};
  std::optional<mpq_class> c;  // defaults to 1 / delta
  std::uint64_t s = 2;
  unsigned k = 3;
  std::uint64_t seed = 0;
  PointSearch point_search = PointSearch::lexicographic;
  /// Largest (s+1) m for which the target set is an exact g_k witness.
  std::size_t exact_target_limit = 40;

  /// 2 epsilon - 3/2.
  mpq_class delta() const;
  mpq_class almost_linear_constant() const;
  /// Throws invalid_parameter unless epsilon in (3/4, 1), c > 2, s >= 1, k >= 3.
  void validate() const;
};

/// Parses a decimal ("0.8") or fraction ("4/5") string exactly.
mpq_class parse_rational(const std::string& text);

struct StageReport {
  std::string name;
  std::size_t input_size = 0;
  std::size_t output_size = 0;
  /// Retention the stage is guaranteed to reach under its own hypotheses.
  mpq_class nominal_retention;
  bool nominal_met = false;
  std::string note;
};

struct PipelineReport {
  std::size_t source_size = 0;
  std::size_t retained = 0;
  Int interval_length;  // final set lies in [1, interval_length]
  mpq_class loss_fraction;
  double interval_constant = 0;  // interval_length / (n ln n)
  mpq_class epsilon;
  mpq_class delta;
  mpq_class c;
  /// Loss <= epsilon is guaranteed (and checked) when every stage met its
  /// nominal retention and c >= 1 / delta.
  bool budget_applicable = false;
  bool loss_within_epsilon = false;
  std::vector<StageReport> stages;
};

struct CompressionResult {
  CompressionChain chain;
  PipelineReport report;
};

CompressionResult compress_full(const IntSet& set, const PipelineConfig& config);

/// Elements of the chain source whose image lies in `subset` (a subset of
/// the final set). Throws invalid_input otherwise.
IntSet pull_back(const CompressionChain& chain, const IntSet& subset);

struct ShiftResult {
  Int shift;
  IntSet intersection;  // (A + shift) intersected with T
};

/// Smallest shift in [lo, hi] maximizing |(A + x) ∩ T|.
ShiftResult best_shift(const IntSet& a, const IntSet& t, const Int& lo, const Int& hi);

struct ExtractionReport {
  std::size_t source_size = 0;
  std::size_t result_size = 0;
  mpq_class ratio;
  Int interval_length;
  Int shift;
  Int target_length;
  std::size_t target_size = 0;
  std::string target_method;
  bool verified_free = false;
  PipelineReport compression;
};

struct ExtractionResult {
  IntSet subset;
  CompressionChain chain;
  ExtractionReport report;
};

/// k-AP-free subset of X obtained by pulling back the best shifted overlap
/// of the compressed set with a k-AP-free target in [1, (s+1) m].
ExtractionResult extract_apfree(const IntSet& set, const PipelineConfig& config);

}  // namespace apfree
