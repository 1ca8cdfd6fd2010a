#include "apfree/pipeline.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

#include "apfree/extremal.hpp"
#include "apfree/modcompress.hpp"

namespace apfree {

mpq_class PipelineConfig::delta() const {
  mpq_class d = 2 * epsilon - mpq_class(3, 2);
  d.canonicalize();
  return d;
}

mpq_class PipelineConfig::almost_linear_constant() const {
  if (c) return *c;
  mpq_class inv = 1 / delta();
  inv.canonicalize();
  return inv;
}

void PipelineConfig::validate() const {
  if (epsilon <= mpq_class(3, 4) || epsilon >= 1) {
    throw Error(ErrorCode::invalid_parameter,
                "epsilon must lie strictly between 3/4 and 1, got " + epsilon.get_str());
  }
  if (c && *c <= 2) throw Error(ErrorCode::invalid_parameter, "c must exceed 2");
  if (s < 1) throw Error(ErrorCode::invalid_parameter, "s must be at least 1");
  if (k < 3) throw Error(ErrorCode::invalid_parameter, "k must be at least 3");
}

mpq_class parse_rational(const std::string& text) {
  const auto fail = [&] {
    return Error(ErrorCode::invalid_parameter, "not a rational number: '" + text + "'");
  };
  if (text.empty()) throw fail();
  mpq_class out;
  try {
    if (auto slash = text.find('/'); slash != std::string::npos) {
      const Int den = parse_int(text.substr(slash + 1));
      if (den == 0) throw fail();
      out = mpq_class(parse_int(text.substr(0, slash)), den);
    } else if (auto dot = text.find('.'); dot != std::string::npos) {
      const std::string digits = text.substr(0, dot) + text.substr(dot + 1);
      Int scale;
      mpz_ui_pow_ui(scale.get_mpz_t(), 10, text.size() - dot - 1);
      out = mpq_class(parse_int(digits), scale);
    } else {
      out = mpq_class(parse_int(text));
    }
  } catch (const Error&) {
    throw fail();
  }
  out.canonicalize();
  return out;
}

namespace {

CompressionStep shift_normalize(const IntSet& set) {
  CompressionStep step;
  step.kind = StepKind::shift_normalize;
  const Int shift = set.empty() ? Int(0) : Int(1 - set.min());
  std::vector<ValueMap::Entry> entries;
  for (const auto& y : set) entries.emplace_back(y, y + shift);
  step.params.shift = shift;
  step.map = ValueMap(std::move(entries));
  return step;
}

mpq_class ratio(std::size_t num, std::size_t den) {
  mpq_class q(static_cast<unsigned long>(num), static_cast<unsigned long>(den));
  q.canonicalize();
  return q;
}

}  // namespace

CompressionResult compress_full(const IntSet& set, const PipelineConfig& config) {
  config.validate();
  const std::size_t n = set.size();
  if (n < 4) throw Error(ErrorCode::invalid_input, "the pipeline needs at least 4 elements");

  const mpq_class c = config.almost_linear_constant();
  const auto stage_error = [](const char* stage, const Error& e) {
    return Error(e.code(), std::string(stage) + " stage: " + e.what());
  };

  std::vector<CompressionStep> steps;
  std::vector<StageReport> stages;

  try {
    steps.push_back(compress_exponential(set, {config.point_search, config.seed}));
  } catch (const Error& e) {
    throw stage_error("exponential", e);
  }
  const IntSet y1 = steps.back().output();
  stages.push_back({"exponential", n, y1.size(), mpq_class(1), y1.size() == n, ""});

  try {
    steps.push_back(compress_cubic(y1));
  } catch (const Error& e) {
    throw stage_error("cubic", e);
  }
  const IntSet y2 = steps.back().output();
  {
    const bool target = steps.back().params.target_met.value_or(false);
    stages.push_back({"cubic", y1.size(), y2.size(), mpq_class(1, 2),
                      2 * y2.size() >= y1.size(),
                      target ? "prime/2 <= n^3" : "prime/2 exceeds n^3"});
  }

  try {
    steps.push_back(compress_almost_linear(y2, c));
  } catch (const Error& e) {
    throw stage_error("almost-linear", e);
  }
  const IntSet y3 = steps.back().output();
  {
    const std::size_t pruned = steps.back().params.pruned ? steps.back().params.pruned->size() : 0;
    const std::size_t after_prune = y2.size() - pruned;
    const mpq_class prune_floor = (1 - 2 / c) * static_cast<unsigned long>(y2.size());
    mpq_class nominal = mpq_class(1, 2) - 1 / c;
    nominal.canonicalize();
    stages.push_back({"almost-linear", y2.size(), y3.size(), nominal,
                      mpq_class(static_cast<unsigned long>(after_prune)) >= prune_floor,
                      "pruned " + std::to_string(pruned)});
  }

  steps.push_back(shift_normalize(y3));
  stages.push_back({"shift", y3.size(), y3.size(), mpq_class(1), true, ""});

  CompressionResult out;
  out.chain = make_chain(set, std::move(steps));

  PipelineReport& r = out.report;
  r.source_size = n;
  r.retained = out.chain.final_set.size();
  r.interval_length = out.chain.final_set.empty() ? Int(0) : out.chain.final_set.max();
  r.loss_fraction = ratio(n - r.retained, n);
  r.interval_constant =
      r.interval_length.get_d() / (static_cast<double>(n) * std::log(static_cast<double>(n)));
  r.epsilon = config.epsilon;
  r.delta = config.delta();
  r.c = c;
  r.stages = std::move(stages);
  bool all_met = true;
  for (const auto& st : r.stages) all_met = all_met && st.nominal_met;
  r.budget_applicable = all_met && c * r.delta >= 1;
  r.loss_within_epsilon = r.loss_fraction <= r.epsilon;
  if (r.budget_applicable && !r.loss_within_epsilon) {
    throw std::logic_error("loss exceeds epsilon although every stage met its retention");
  }
  return out;
}

IntSet pull_back(const CompressionChain& chain, const IntSet& subset) {
  if (!subset.is_subset_of(chain.final_set)) {
    throw Error(ErrorCode::invalid_input, "pull-back target is not inside the final set");
  }
  std::vector<Int> out;
  for (const auto& [from, to] : chain.composed) {
    if (subset.contains(to)) out.push_back(from);
  }
  return IntSet(std::move(out));
}

ShiftResult best_shift(const IntSet& a, const IntSet& t, const Int& lo, const Int& hi) {
  if (hi < lo) throw Error(ErrorCode::invalid_range, "shift range is empty");
  std::map<Int, std::size_t> hits;
  Int x;
  for (const auto& ai : a) {
    for (const auto& ti : t) {
      x = ti - ai;
      if (x >= lo && x <= hi) ++hits[x];
    }
  }
  ShiftResult out{lo, {}};
  std::size_t best = 0;
  for (const auto& [shift, count] : hits) {
    if (count > best) {
      best = count;
      out.shift = shift;
    }
  }
  std::vector<Int> inter;
  if (best > 0) {
    for (const auto& ai : a) {
      Int v = ai + out.shift;
      if (t.contains(v)) inter.push_back(std::move(v));
    }
  }
  out.intersection = IntSet(std::move(inter));
  return out;
}

ExtractionResult extract_apfree(const IntSet& set, const PipelineConfig& config) {
  auto compressed = compress_full(set, config);
  ExtractionResult out;
  out.chain = std::move(compressed.chain);
  ExtractionReport& r = out.report;
  r.compression = std::move(compressed.report);
  r.source_size = set.size();
  r.interval_length = r.compression.interval_length;

  const IntSet& a = out.chain.final_set;
  const Int m = r.interval_length;
  const Int n_target = Int(static_cast<unsigned long>(config.s + 1)) * m;
  r.target_length = n_target;
  if (!n_target.fits_ulong_p() || n_target > 100'000'000) {
    throw Error(ErrorCode::budget_exceeded, "target interval too long: " + n_target.get_str());
  }
  const std::uint64_t length = n_target.get_ui();

  IntSet target;
  if (length == 0) {
    r.target_method = "empty";
  } else if (length <= config.exact_target_limit) {
    target = g_table(config.k, length).back().witness;
    r.target_method = "exact";
  } else {
    target = greedy_apfree(length, config.k);
    r.target_method = "greedy";
    if (config.k == 3) {
      IntSet behrend = behrend_set(length);
      if (behrend.size() > target.size()) {
        target = std::move(behrend);
        r.target_method = "behrend";
      }
    }
  }
  r.target_size = target.size();

  const Int max_shift = Int(static_cast<unsigned long>(config.s)) * m;
  const auto shifted = best_shift(a, target, 0, max_shift);
  r.shift = shifted.shift;
  const IntSet overlap = shifted.intersection.translated(-shifted.shift);

  out.subset = pull_back(out.chain, overlap);
  r.result_size = out.subset.size();
  r.ratio = ratio(out.subset.size(), set.size());
  r.verified_free = is_progression_free(out.subset, config.k);
  if (!r.verified_free) throw std::logic_error("pulled-back subset contains a progression");
  return out;
}

}  // namespace apfree
