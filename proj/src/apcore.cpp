#include "apfree/apcore.hpp"

#include <algorithm>
#include <sstream>

namespace apfree {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_parameter: return "invalid-parameter";
    case ErrorCode::invalid_input: return "invalid-input";
    case ErrorCode::invalid_range: return "invalid-range";
    case ErrorCode::malformed_certificate: return "malformed-certificate";
    case ErrorCode::precondition_violation: return "precondition-violation";
    case ErrorCode::infeasible: return "infeasible";
    case ErrorCode::window_exhausted: return "window-exhausted";
    case ErrorCode::budget_exceeded: return "budget-exceeded";
  }
  return "unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

// ---------------------------------------------------------------------------
// IntSet

IntSet::IntSet(std::vector<Int> values) : values_(std::move(values)) {
  std::sort(values_.begin(), values_.end());
  auto dup = std::adjacent_find(values_.begin(), values_.end());
  if (dup != values_.end()) {
    throw Error(ErrorCode::invalid_input, "duplicate element " + dup->get_str());
  }
}

IntSet::IntSet(std::initializer_list<long> values)
    : IntSet(std::vector<Int>(values.begin(), values.end())) {}

IntSet IntSet::interval(long lo, long hi) {
  std::vector<Int> v;
  for (long x = lo; x <= hi; ++x) v.emplace_back(x);
  IntSet s;
  s.values_ = std::move(v);
  return s;
}

bool IntSet::contains(const Int& v) const {
  return std::binary_search(values_.begin(), values_.end(), v);
}

std::optional<std::size_t> IntSet::index_of(const Int& v) const {
  auto it = std::lower_bound(values_.begin(), values_.end(), v);
  if (it == values_.end() || *it != v) return std::nullopt;
  return static_cast<std::size_t>(it - values_.begin());
}

bool IntSet::is_subset_of(const IntSet& other) const {
  return std::includes(other.values_.begin(), other.values_.end(), values_.begin(),
                       values_.end());
}

IntSet IntSet::translated(const Int& offset) const {
  IntSet s;
  s.values_.reserve(values_.size());
  for (const auto& v : values_) s.values_.push_back(v + offset);
  return s;
}

std::string to_string(const IntSet& set) {
  std::ostringstream os;
  os << '{';
  for (std::size_t i = 0; i < set.size(); ++i) {
    if (i) os << ',';
    os << set[i].get_str();
  }
  os << '}';
  return os.str();
}

Int parse_int(std::string_view text) {
  std::size_t pos = (!text.empty() && (text[0] == '-' || text[0] == '+')) ? 1 : 0;
  bool ok = pos < text.size();
  for (std::size_t i = pos; i < text.size() && ok; ++i) ok = text[i] >= '0' && text[i] <= '9';
  if (!ok) throw Error(ErrorCode::invalid_input, "not a decimal integer: '" + std::string(text) + "'");
  Int v(std::string(text.substr(text[0] == '+' ? 1 : 0)), 10);
  return v;
}

// ---------------------------------------------------------------------------
// Progressions

namespace {

void check_length(unsigned k) {
  if (k < 3) {
    throw Error(ErrorCode::invalid_parameter,
                "progression length must be at least 3, got " + std::to_string(k));
  }
}

// Visits every k-AP once, identified by its two smallest elements. Stops early
// when the visitor returns false.
template <typename Visitor>
void for_each_progression(const IntSet& set, unsigned k, Visitor&& visit) {
  const std::size_t n = set.size();
  Int d, next;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      d = set[j] - set[i];
      next = set[j];
      bool complete = true;
      for (unsigned t = 2; t < k; ++t) {
        next += d;
        if (!set.contains(next)) {
          complete = false;
          break;
        }
      }
      if (complete && !visit(set[i], d)) return;
    }
  }
}

}  // namespace

std::vector<Progression> enumerate_progressions(const IntSet& set, unsigned k) {
  check_length(k);
  std::vector<Progression> out;
  for_each_progression(set, k, [&](const Int& first, const Int& d) {
    Progression p;
    p.difference = d;
    p.values.reserve(k);
    Int v = first;
    for (unsigned t = 0; t < k; ++t, v += d) p.values.push_back(v);
    out.push_back(std::move(p));
    return true;
  });
  std::sort(out.begin(), out.end(), [](const Progression& a, const Progression& b) {
    if (a.difference != b.difference) return a.difference < b.difference;
    return a.values.front() < b.values.front();
  });
  return out;
}

bool is_progression_free(const IntSet& set, unsigned k) {
  check_length(k);
  bool found = false;
  for_each_progression(set, k, [&](const Int&, const Int&) {
    found = true;
    return false;
  });
  return !found;
}

// ---------------------------------------------------------------------------
// ConstraintMatrix

ConstraintMatrix::ConstraintMatrix(std::size_t cols, std::vector<Row> rows)
    : cols_(cols), rows_(std::move(rows)) {
  for (const auto& r : rows_) {
    if (r.outer_lo >= cols_ || r.middle >= cols_ || r.outer_hi >= cols_ ||
        r.outer_lo == r.middle || r.middle == r.outer_hi || r.outer_lo == r.outer_hi) {
      throw Error(ErrorCode::invalid_input, "constraint row columns out of range or repeated");
    }
  }
}

int ConstraintMatrix::at(std::size_t r, std::size_t c) const {
  const Row& row = rows_.at(r);
  if (c == row.middle) return -2;
  if (c == row.outer_lo || c == row.outer_hi) return 1;
  return 0;
}

std::vector<std::vector<int>> ConstraintMatrix::dense() const {
  std::vector<std::vector<int>> m(rows_.size(), std::vector<int>(cols_, 0));
  for (std::size_t r = 0; r < rows_.size(); ++r) {
    m[r][rows_[r].outer_lo] = 1;
    m[r][rows_[r].outer_hi] = 1;
    m[r][rows_[r].middle] = -2;
  }
  return m;
}

std::vector<Int> ConstraintMatrix::apply(const std::vector<Int>& x) const {
  if (x.size() != cols_) {
    throw Error(ErrorCode::invalid_input, "vector length does not match column count");
  }
  std::vector<Int> out;
  out.reserve(rows_.size());
  for (const auto& r : rows_) out.push_back(x[r.outer_lo] - 2 * x[r.middle] + x[r.outer_hi]);
  return out;
}

ConstraintMatrix second_difference_matrix(const IntSet& set) {
  std::vector<ConstraintMatrix::Row> rows;
  for (const auto& p : enumerate_progressions(set, 3)) {
    rows.push_back({*set.index_of(p.values[0]), *set.index_of(p.values[1]),
                    *set.index_of(p.values[2])});
  }
  return ConstraintMatrix(set.size(), std::move(rows));
}

// ---------------------------------------------------------------------------
// ValueMap

ValueMap::ValueMap(std::vector<Entry> entries) : entries_(std::move(entries)) {
  std::sort(entries_.begin(), entries_.end(),
            [](const Entry& a, const Entry& b) { return a.first < b.first; });
  for (std::size_t i = 1; i < entries_.size(); ++i) {
    if (entries_[i].first == entries_[i - 1].first) {
      throw Error(ErrorCode::malformed_certificate,
                  "value map lists source " + entries_[i].first.get_str() + " twice");
    }
  }
}

const Int* ValueMap::find(const Int& source) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), source,
                             [](const Entry& e, const Int& v) { return e.first < v; });
  if (it == entries_.end() || it->first != source) return nullptr;
  return &it->second;
}

IntSet ValueMap::domain() const {
  std::vector<Int> v;
  v.reserve(entries_.size());
  for (const auto& e : entries_) v.push_back(e.first);
  return IntSet(std::move(v));
}

IntSet ValueMap::image() const {
  std::vector<Int> v;
  v.reserve(entries_.size());
  for (const auto& e : entries_) v.push_back(e.second);
  try {
    return IntSet(std::move(v));
  } catch (const Error&) {
    throw Error(ErrorCode::malformed_certificate, "value map is not injective");
  }
}

bool ValueMap::is_injective() const {
  std::vector<Int> v;
  v.reserve(entries_.size());
  for (const auto& e : entries_) v.push_back(e.second);
  std::sort(v.begin(), v.end());
  return std::adjacent_find(v.begin(), v.end()) == v.end();
}

std::string_view to_string(StepKind kind) {
  switch (kind) {
    case StepKind::exponential: return "exponential";
    case StepKind::mod_half: return "mod_half";
    case StepKind::triple_prune_mod_half: return "triple_prune_mod_half";
    case StepKind::shift_normalize: return "shift_normalize";
  }
  return "unknown";
}

std::optional<StepKind> parse_step_kind(std::string_view name) {
  for (auto kind : {StepKind::exponential, StepKind::mod_half, StepKind::triple_prune_mod_half,
                    StepKind::shift_normalize}) {
    if (to_string(kind) == name) return kind;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Chains and verification

ValueMap compose_maps(const IntSet& source, const std::vector<CompressionStep>& steps) {
  std::vector<ValueMap::Entry> out;
  for (const auto& x : source) {
    Int y = x;
    bool alive = true;
    for (const auto& step : steps) {
      const Int* next = step.map.find(y);
      if (!next) {
        alive = false;
        break;
      }
      y = *next;
    }
    if (alive) out.emplace_back(x, std::move(y));
  }
  return ValueMap(std::move(out));
}

CompressionChain make_chain(IntSet source, std::vector<CompressionStep> steps) {
  CompressionChain chain;
  chain.composed = compose_maps(source, steps);
  chain.final_set = chain.composed.image();
  chain.source = std::move(source);
  chain.steps = std::move(steps);
  return chain;
}

bool VerificationReport::pass() const {
  if (!injective || !preserves_progressions || !composition_consistent) return false;
  return std::all_of(steps.begin(), steps.end(), [](const auto& s) { return s.pass(); });
}

VerificationReport verify_compression(const IntSet& source, const ValueMap& map) {
  VerificationReport report;
  for (const auto& [from, to] : map) {
    if (!source.contains(from)) {
      throw Error(ErrorCode::malformed_certificate,
                  "value map references " + from.get_str() + " which is not in the input set");
    }
    if (!report.max_output || to > *report.max_output) report.max_output = to;
  }
  report.retained = map.size();
  report.injective = map.is_injective();

  // A 3-AP of the source lies inside the domain iff it is a 3-AP of the domain.
  const IntSet domain = map.domain();
  for (auto& p : enumerate_progressions(domain, 3)) {
    ++report.checked_progressions;
    const Int second = *map.find(p.values[0]) - 2 * *map.find(p.values[1]) + *map.find(p.values[2]);
    if (second != 0) {
      report.preserves_progressions = false;
      report.violation = std::move(p);
      break;
    }
  }
  return report;
}

VerificationReport verify_compression(const IntSet& source, const CompressionStep& step) {
  return verify_compression(source, step.map);
}

VerificationReport verify_compression(const IntSet& source, const CompressionChain& chain) {
  if (!(source == chain.source)) {
    throw Error(ErrorCode::malformed_certificate, "chain source differs from the supplied set");
  }
  std::vector<VerificationReport> step_reports;
  IntSet input = source;
  bool replayable = true;
  for (const auto& step : chain.steps) {
    step_reports.push_back(verify_compression(input, step.map));
    if (!step.map.is_injective()) {
      replayable = false;
      break;
    }
    input = step.map.image();
  }

  VerificationReport report = verify_compression(source, chain.composed);
  report.steps = std::move(step_reports);
  if (replayable) {
    const ValueMap recomposed = compose_maps(source, chain.steps);
    report.composition_consistent =
        recomposed == chain.composed && recomposed.is_injective() &&
        chain.final_set == recomposed.image();
  } else {
    report.composition_consistent = false;
  }
  return report;
}

}  // namespace apfree
