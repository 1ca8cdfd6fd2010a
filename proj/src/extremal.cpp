#include "apfree/extremal.hpp"

#include <algorithm>
#include <bit>
#include <bitset>
#include <iostream>
#include <map>
#include <numeric>
#include <stdexcept>

#include "apfree/cache.hpp"

namespace apfree {

std::string_view to_string(SearchMethod method) {
  switch (method) {
    case SearchMethod::branch_bound: return "branch_bound";
    case SearchMethod::naive: return "naive";
    case SearchMethod::cached: return "cached";
  }
  return "unknown";
}

namespace {

void check_k(unsigned k) {
  if (k < 3) throw Error(ErrorCode::invalid_parameter, "k must be at least 3");
}

// ---------------------------------------------------------------------------
// Russian-doll branch and bound over an arbitrary finite set.

class SubsetSearch {
 public:
  SubsetSearch(const IntSet& set, unsigned k) : n_(set.size()), ending_(set.size()) {
    for (const auto& p : enumerate_progressions(set, k)) {
      std::vector<std::size_t> idx;
      for (std::size_t t = 0; t + 1 < p.values.size(); ++t) idx.push_back(*set.index_of(p.values[t]));
      ending_[*set.index_of(p.values.back())].push_back(std::move(idx));
    }
    chosen_.assign(n_, 0);
    suffix_best_.assign(n_ + 1, 0);
  }

  // Returns the chosen index mask of the lexicographically first maximum set.
  std::vector<char> solve() {
    for (std::size_t i = n_; i-- > 0;) {
      const std::size_t target = suffix_best_[i + 1] + 1;
      chosen_[i] = 1;
      suffix_best_[i] = descend(i + 1, 1, target) ? target : suffix_best_[i + 1];
      std::fill(chosen_.begin(), chosen_.end(), 0);
    }
    if (!descend(0, 0, suffix_best_[0])) throw std::logic_error("witness search lost its optimum");
    return chosen_;
  }

 private:
  bool allowed(std::size_t j) const {
    for (const auto& ap : ending_[j]) {
      if (std::all_of(ap.begin(), ap.end(), [&](std::size_t i) { return chosen_[i]; })) {
        return false;
      }
    }
    return true;
  }

  bool descend(std::size_t j, std::size_t count, std::size_t target) {
    if (count >= target) return true;
    if (j >= n_ || count + suffix_best_[j] < target) return false;
    if (allowed(j)) {
      chosen_[j] = 1;
      if (descend(j + 1, count + 1, target)) return true;
      chosen_[j] = 0;
    }
    return descend(j + 1, count, target);
  }

  std::size_t n_;
  std::vector<std::vector<std::vector<std::size_t>>> ending_;
  std::vector<char> chosen_;
  std::vector<std::size_t> suffix_best_;
};

IntSet select(const IntSet& set, const std::vector<char>& mask) {
  std::vector<Int> out;
  for (std::size_t i = 0; i < set.size(); ++i) {
    if (mask[i]) out.push_back(set[i]);
  }
  return IntSet(std::move(out));
}

// ---------------------------------------------------------------------------
// Depth-first search over subsets of [1, n] in lexicographic order with
// forward propagation of forbidden values.

using Bits = std::bitset<kMaxIntervalLength + 1>;

class IntervalSearch {
 public:
  // `g` holds g_k(L) for L < g.size() and bounds every sub-interval search.
  IntervalSearch(std::size_t n, unsigned k, const std::vector<std::size_t>& g)
      : n_(n), k_(k), g_(g), suffix_(n + 2) {
    if (n > kMaxIntervalLength) {
      throw Error(ErrorCode::budget_exceeded,
                  "interval length " + std::to_string(n) + " exceeds " +
                      std::to_string(kMaxIntervalLength));
    }
    for (std::size_t v = n; v >= 1; --v) {
      suffix_[v] = suffix_[v + 1];
      suffix_[v].set(v);
    }
  }

  std::optional<std::vector<std::size_t>> first_of_size(std::size_t target) {
    target_ = target;
    stack_.clear();
    chosen_.reset();
    if (descend(1, Bits{})) return stack_;
    return std::nullopt;
  }

 private:
  bool descend(std::size_t v, const Bits& forbidden) {
    const std::size_t count = stack_.size();
    if (count >= target_) return true;
    if (v > n_) return false;
    const std::size_t length = n_ - v + 1;
    if (length < g_.size() && count + g_[length] < target_) return false;
    if (count + (suffix_[v] & ~forbidden).count() < target_) return false;
    if (forbidden.test(v)) return descend(v + 1, forbidden);

    Bits next = forbidden;
    for (std::size_t y : stack_) {
      const std::size_t d = v - y;
      if (v + d > n_) continue;
      bool extends = true;
      for (unsigned j = 2; j + 1 < k_ && extends; ++j) {
        extends = v > j * d && chosen_.test(v - j * d);
      }
      if (extends) next.set(v + d);
    }
    stack_.push_back(v);
    chosen_.set(v);
    if (descend(v + 1, next)) return true;
    stack_.pop_back();
    chosen_.reset(v);
    return descend(v + 1, forbidden);
  }

  std::size_t n_;
  unsigned k_;
  const std::vector<std::size_t>& g_;
  std::vector<Bits> suffix_;
  std::size_t target_ = 0;
  std::vector<std::size_t> stack_;
  Bits chosen_;
};

IntSet to_intset(const std::vector<std::size_t>& values) {
  std::vector<Int> out;
  out.reserve(values.size());
  for (auto v : values) out.emplace_back(static_cast<unsigned long>(v));
  return IntSet(std::move(out));
}

std::string interval_name(std::size_t n) { return "[1," + std::to_string(n) + "]"; }

}  // namespace

ExtremalResult max_apfree_subset(const IntSet& set, unsigned k) {
  check_k(k);
  SubsetSearch search(set, k);
  IntSet witness = select(set, search.solve());
  return {witness.size(), std::move(witness), SearchMethod::branch_bound, k, to_string(set)};
}

ExtremalResult naive_max_apfree(const IntSet& set, unsigned k) {
  check_k(k);
  if (set.size() > 20) {
    throw Error(ErrorCode::budget_exceeded, "naive enumeration is limited to 20 elements");
  }
  std::vector<std::uint32_t> ap_masks;
  for (const auto& p : enumerate_progressions(set, k)) {
    std::uint32_t m = 0;
    for (const auto& v : p.values) m |= 1u << *set.index_of(v);
    ap_masks.push_back(m);
  }
  const std::uint32_t total = 1u << set.size();
  std::uint32_t best = 0;
  for (std::uint32_t mask = 1; mask < total; ++mask) {
    const bool free = std::none_of(ap_masks.begin(), ap_masks.end(),
                                   [mask](std::uint32_t ap) { return (mask & ap) == ap; });
    if (!free) continue;
    const int pc = std::popcount(mask), pb = std::popcount(best);
    // Equal sizes: the set owning the lowest differing element is smaller.
    if (pc > pb || (pc == pb && (mask & (mask ^ best) & (~(mask ^ best) + 1)))) best = mask;
  }
  std::vector<char> chosen(set.size());
  for (std::size_t i = 0; i < set.size(); ++i) chosen[i] = (best >> i) & 1u;
  IntSet witness = select(set, chosen);
  return {witness.size(), std::move(witness), SearchMethod::naive, k, to_string(set)};
}

std::optional<IntSet> interval_subset_of_size(std::size_t n, unsigned k, std::size_t target) {
  check_k(k);
  const std::vector<std::size_t> no_bounds;
  IntervalSearch search(n, k, no_bounds);
  auto found = search.first_of_size(target);
  if (!found) return std::nullopt;
  return to_intset(*found);
}

std::vector<ExtremalResult> g_table(unsigned k, std::size_t n_max, GCache* cache) {
  check_k(k);
  if (n_max < 1) throw Error(ErrorCode::invalid_parameter, "n_max must be at least 1");
  if (n_max > kMaxIntervalLength) {
    throw Error(ErrorCode::budget_exceeded, "g table is limited to n <= " +
                                                std::to_string(kMaxIntervalLength));
  }

  std::vector<ExtremalResult> out;
  std::vector<std::size_t> g{0};

  // Longest usable cached prefix.
  if (cache) {
    for (std::size_t n = 1; n <= n_max; ++n) {
      auto entry = cache->find(k, n);
      if (!entry || !is_consistent(*entry) || entry->n != n) break;
      const std::size_t prev = g.back();
      if (entry->value < prev || entry->value > prev + 1) {
        cache->warn("cached g_" + std::to_string(k) + " table is not monotone at n=" +
                    std::to_string(n) + "; recomputing");
        cache->erase(k);
        out.clear();
        g.assign(1, 0);
        break;
      }
      g.push_back(entry->value);
      out.push_back({entry->value, entry->witness, SearchMethod::cached, k, interval_name(n)});
    }
  }

  for (std::size_t n = g.size(); n <= n_max; ++n) {
    IntervalSearch search(n, k, g);
    auto found = search.first_of_size(g.back() + 1);
    if (!found) found = search.first_of_size(g.back());
    if (!found) throw std::logic_error("g table search lost a feasible size");
    IntSet witness = to_intset(*found);
    g.push_back(witness.size());
    if (cache) cache->put({k, n, witness.size(), witness});
    out.push_back({witness.size(), std::move(witness), SearchMethod::branch_bound, k,
                   interval_name(n)});
  }

  for (std::size_t i = 1; i < g.size(); ++i) {
    if (g[i] < g[i - 1] || g[i] > g[i - 1] + 1) {
      throw std::logic_error("g table is not a monotone unit-step sequence");
    }
  }
  return out;
}

ExtremalResult phi_upper_search(std::size_t n, unsigned k, std::uint64_t universe_bound) {
  check_k(k);
  if (n < 1) throw Error(ErrorCode::invalid_parameter, "n must be at least 1");
  if (universe_bound + 1 < n) {
    throw Error(ErrorCode::invalid_parameter,
                "universe bound " + std::to_string(universe_bound) + " cannot hold " +
                    std::to_string(n) + " elements");
  }

  std::optional<ExtremalResult> best;
  std::vector<std::uint64_t> chosen{0};

  const auto consider = [&] {
    std::uint64_t g = 0;
    for (auto v : chosen) g = std::gcd(g, v);
    if (n > 1 && g != 1) return;
    std::vector<std::uint64_t> gaps;
    for (std::size_t i = 1; i < chosen.size(); ++i) gaps.push_back(chosen[i] - chosen[i - 1]);
    if (std::lexicographical_compare(gaps.rbegin(), gaps.rend(), gaps.begin(), gaps.end())) return;

    std::vector<Int> values;
    for (auto v : chosen) values.emplace_back(static_cast<unsigned long>(v));
    IntSet set(std::move(values));
    auto result = max_apfree_subset(set, k);
    if (!best || result.value < best->value) {
      result.witness = set;  // the argmin set, not its AP-free subset
      result.instance = "phi upper bound over canonical sets in [0," +
                        std::to_string(universe_bound) + "]";
      best = std::move(result);
    }
  };

  const auto extend = [&](auto&& self, std::uint64_t from) -> void {
    if (chosen.size() == n) {
      consider();
      return;
    }
    const std::uint64_t needed = n - chosen.size();
    for (std::uint64_t v = from; v + needed - 1 <= universe_bound; ++v) {
      chosen.push_back(v);
      self(self, v + 1);
      chosen.pop_back();
    }
  };
  extend(extend, 1);
  return *best;
}

IntSet behrend_set(std::uint64_t n) {
  if (n < 1) throw Error(ErrorCode::invalid_parameter, "N must be at least 1");
  if (n > 100'000'000) throw Error(ErrorCode::budget_exceeded, "Behrend search limited to 1e8");

  std::vector<std::uint64_t> best;
  for (std::uint64_t base = 3; base <= 12; ++base) {
    const std::uint64_t top_digit = (base - 1) / 2;  // doubling never carries
    std::uint64_t place = 1;  // base^(digits - 1)
    for (unsigned digits = 1;; ++digits) {
      // Shells around the origin and around the centre of the digit cube; any
      // sphere meets the digit-wise midpoint relation only trivially.
      std::map<std::uint64_t, std::vector<std::uint64_t>> shells[2];
      std::vector<std::uint64_t> digit(digits, 0);
      for (;;) {
        std::uint64_t value = 0, norm = 0, centred = 0;
        for (std::size_t i = digits; i-- > 0;) {
          value = value * base + digit[i];
          norm += digit[i] * digit[i];
          const std::int64_t off = 2 * static_cast<std::int64_t>(digit[i]) - static_cast<std::int64_t>(top_digit);
          centred += static_cast<std::uint64_t>(off * off);
        }
        if (value <= n - 1) {
          shells[0][norm].push_back(value + 1);
          shells[1][centred].push_back(value + 1);
        }
        std::size_t pos = 0;
        while (pos < digits && digit[pos] == top_digit) digit[pos++] = 0;
        if (pos == digits) break;
        ++digit[pos];
      }
      for (auto& family : shells) {
        for (auto& [norm, shell] : family) {
          if (shell.size() > best.size()) best = shell;
        }
      }
      if (place > (n - 1) / base) break;
      place *= base;
    }
  }
  std::vector<Int> values;
  for (auto v : best) values.emplace_back(static_cast<unsigned long>(v));
  return IntSet(std::move(values));
}

IntSet greedy_apfree(std::uint64_t n, unsigned k) {
  check_k(k);
  std::vector<char> in(n + 1, 0);
  std::vector<std::uint64_t> kept;
  for (std::uint64_t x = 1; x <= n; ++x) {
    bool completes = false;
    for (auto y : kept) {
      const std::uint64_t d = x - y;
      bool all = true;
      for (unsigned j = 2; j < k && all; ++j) all = x > j * d && in[x - j * d];
      if (all) {
        completes = true;
        break;
      }
    }
    if (!completes) {
      kept.push_back(x);
      in[x] = 1;
    }
  }
  std::vector<Int> values;
  for (auto v : kept) values.emplace_back(static_cast<unsigned long>(v));
  return IntSet(std::move(values));
}

IntSet product_construct(const IntSet& set_a, std::uint64_t a, const IntSet& set_b,
                         std::uint64_t b, unsigned k) {
  check_k(k);
  const auto inside = [](const IntSet& s, std::uint64_t hi) {
    return s.empty() || (s.min() >= 1 && s.max() <= Int(static_cast<unsigned long>(hi)));
  };
  if (!inside(set_a, a) || !inside(set_b, b)) {
    throw Error(ErrorCode::invalid_input, "block sets must lie in [1,a] and [1,b]");
  }
  if (!is_progression_free(set_a, 3)) {
    throw Error(ErrorCode::invalid_input, "outer set contains a 3-term progression");
  }
  if (!is_progression_free(set_b, k)) {
    throw Error(ErrorCode::invalid_input,
                "inner set contains a " + std::to_string(k) + "-term progression");
  }
  const Int block = 3 * Int(static_cast<unsigned long>(b));
  std::vector<Int> out;
  for (const auto& i : set_a) {
    const Int base = (i - 1) * block + static_cast<unsigned long>(b);
    for (const auto& e : set_b) out.push_back(base + e);
  }
  return IntSet(std::move(out));
}

mpq_class density(unsigned k, std::size_t n, GCache* cache) {
  if (n < 1) throw Error(ErrorCode::invalid_parameter, "n must be at least 1");
  const auto table = g_table(k, n, cache);
  mpq_class rho(static_cast<unsigned long>(table.back().value), static_cast<unsigned long>(n));
  rho.canonicalize();
  return rho;
}

ProductDensityCheck check_product_density(std::size_t a, std::size_t b, unsigned k,
                                          std::size_t exact_limit, GCache* cache) {
  check_k(k);
  if (a < 1 || b < 1) throw Error(ErrorCode::invalid_parameter, "a and b must be positive");
  ProductDensityCheck out{a, b, k, 0, 0, false, false};
  out.rhs = density(3, a, cache) * density(k, b, cache) / 3;
  out.rhs.canonicalize();

  const std::size_t n = 3 * a * b;
  if (n <= exact_limit) {
    out.lhs = density(k, n, cache);
    out.lhs_exact = true;
    out.holds = out.lhs >= out.rhs;
    return out;
  }
  // rhs * n = g_3(a) g_k(b) is an integer; a subset of that size settles it.
  mpq_class need_q = out.rhs * static_cast<unsigned long>(n);
  need_q.canonicalize();
  const std::size_t need = need_q.get_num().get_ui();
  if (auto witness = interval_subset_of_size(n, k, need)) {
    out.lhs = mpq_class(static_cast<unsigned long>(witness->size()), static_cast<unsigned long>(n));
    out.lhs.canonicalize();
    out.holds = true;
  }
  return out;
}

}  // namespace apfree
