#include "apfree/modcompress.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace apfree {

namespace {

std::vector<std::uint64_t> simple_sieve(std::uint64_t limit) {
  std::vector<bool> composite(limit + 1, false);
  std::vector<std::uint64_t> primes;
  for (std::uint64_t i = 2; i <= limit; ++i) {
    if (composite[i]) continue;
    primes.push_back(i);
    for (std::uint64_t j = i * i; j <= limit; j += i) composite[j] = true;
  }
  return primes;
}

std::uint64_t isqrt(std::uint64_t v) {
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(v)));
  while (r * r > v) --r;
  while ((r + 1) * (r + 1) <= v) ++r;
  return r;
}

}  // namespace

PrimeWindow primes_in_window(std::uint64_t lo, std::uint64_t hi) {
  if (hi < lo) {
    throw Error(ErrorCode::invalid_range,
                "empty window [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }
  if (lo < 2) throw Error(ErrorCode::invalid_range, "window must start at 2 or above");

  PrimeWindow window{lo, hi, {}};
  const auto base = simple_sieve(isqrt(hi));
  constexpr std::uint64_t kSegment = 1 << 16;
  std::vector<bool> composite;
  for (std::uint64_t start = lo; start <= hi; start += kSegment) {
    const std::uint64_t stop = std::min(hi, start + kSegment - 1);
    composite.assign(stop - start + 1, false);
    for (std::uint64_t p : base) {
      if (p * p > stop) break;
      std::uint64_t first = std::max(p * p, (start + p - 1) / p * p);
      for (std::uint64_t m = first; m <= stop; m += p) composite[m - start] = true;
    }
    for (std::uint64_t v = start; v <= stop; ++v) {
      if (!composite[v - start]) window.primes.push_back(v);
    }
    if (stop == hi) break;
  }
  return window;
}

namespace {

// Residues of X modulo p, or nothing if two of them coincide.
std::optional<std::vector<std::uint64_t>> distinct_residues(const IntSet& set, std::uint64_t p) {
  std::vector<std::uint64_t> residues;
  residues.reserve(set.size());
  for (const auto& x : set) residues.push_back(mpz_fdiv_ui(x.get_mpz_t(), p));
  std::vector<std::uint64_t> sorted = residues;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) return std::nullopt;
  return residues;
}

Int cube(std::size_t n) {
  Int v = static_cast<unsigned long>(n);
  return v * v * v;
}

}  // namespace

NondividingPrime find_nondividing_prime(const IntSet& set) {
  if (set.size() < 2) throw Error(ErrorCode::invalid_input, "need at least two elements");
  const std::uint64_t n = set.size();
  // Primes below n always collide by pigeonhole; scan upward in blocks.
  std::uint64_t lo = 2;
  std::uint64_t hi = std::max<std::uint64_t>(1024, 2 * n);
  for (;;) {
    for (std::uint64_t p : primes_in_window(lo, hi).primes) {
      if (p < n) continue;
      if (distinct_residues(set, p)) {
        return {p, Int(static_cast<unsigned long>(p)) < 2 * cube(set.size())};
      }
    }
    lo = hi + 1;
    hi *= 2;
  }
}

CompressionStep reduce_mod_half(const IntSet& set, std::uint64_t prime) {
  if (prime < 2) throw Error(ErrorCode::invalid_parameter, "modulus must be a prime >= 2");
  CompressionStep step;
  step.kind = StepKind::mod_half;
  step.params.prime = prime;
  if (set.empty()) {
    step.params.kept_half = 1;
    step.params.rebase = 0;
    return step;
  }
  const auto residues = distinct_residues(set, prime);
  if (!residues) {
    throw Error(ErrorCode::precondition_violation,
                std::to_string(prime) + " divides a difference of the set");
  }

  const std::uint64_t split = (prime - 1) / 2;  // lower half is [0, split]
  std::size_t lower = 0;
  for (auto r : *residues) lower += r <= split;
  const bool keep_lower = 2 * lower >= set.size();

  std::uint64_t base = prime;
  for (auto r : *residues) {
    if ((r <= split) == keep_lower) base = std::min(base, r);
  }
  std::vector<ValueMap::Entry> entries;
  for (std::size_t i = 0; i < set.size(); ++i) {
    const auto r = (*residues)[i];
    if ((r <= split) == keep_lower) {
      entries.emplace_back(set[i], Int(static_cast<unsigned long>(r - base)));
    }
  }
  step.params.kept_half = keep_lower ? 1 : 2;
  step.params.rebase = static_cast<unsigned long>(base);
  step.map = ValueMap(std::move(entries));
  return step;
}

CompressionStep compress_cubic(const IntSet& set) {
  if (set.size() < 2) throw Error(ErrorCode::invalid_input, "need at least two elements");
  const auto found = find_nondividing_prime(set);
  CompressionStep step = reduce_mod_half(set, found.prime);
  step.params.target_met = Int(static_cast<unsigned long>(found.prime / 2)) <= cube(set.size());
  return step;
}

std::vector<DivisibilityTriple> divisibility_triples(const IntSet& set,
                                                     const PrimeWindow& window) {
  std::vector<DivisibilityTriple> out;
  Int diff;
  for (std::size_t i = 0; i < set.size(); ++i) {
    for (std::size_t j = i + 1; j < set.size(); ++j) {
      diff = set[j] - set[i];
      for (std::uint64_t p : window.primes) {
        if (mpz_divisible_ui_p(diff.get_mpz_t(), p)) out.push_back({i, j, p});
      }
    }
  }
  return out;
}

AlmostLinearWindow almost_linear_window(std::size_t n, const mpq_class& c) {
  AlmostLinearWindow out;
  const std::uint64_t lo = std::max<std::uint64_t>(2, 2 * n);
  const double nominal =
      std::ceil(2.0 * c.get_d() * static_cast<double>(n) * std::log(static_cast<double>(n)));
  out.nominal_hi = std::max<std::uint64_t>(lo, static_cast<std::uint64_t>(nominal));

  mpq_class cn = c * static_cast<unsigned long>(n);
  Int required;
  mpz_cdiv_q(required.get_mpz_t(), cn.get_num_mpz_t(), cn.get_den_mpz_t());
  out.required = required.get_ui();

  PrimeWindow all = primes_in_window(lo, 10 * out.nominal_hi);
  if (all.primes.size() >= out.required) {
    out.complete = true;
    const std::uint64_t hi =
        std::max(out.nominal_hi, out.required ? all.primes[out.required - 1] : lo);
    all.hi = hi;
    std::erase_if(all.primes, [hi](std::uint64_t p) { return p > hi; });
  }
  out.window = std::move(all);
  return out;
}

CompressionStep compress_almost_linear(const IntSet& set, const mpq_class& c) {
  if (c <= 2) throw Error(ErrorCode::invalid_parameter, "constant c must exceed 2");
  if (set.empty()) throw Error(ErrorCode::invalid_input, "set must be nonempty");

  if (set.size() == 1) {
    CompressionStep step;
    step.kind = StepKind::triple_prune_mod_half;
    step.params.pruned = std::vector<Int>{};
    step.map = ValueMap({{set[0], Int(0)}});
    return step;
  }

  const auto win = almost_linear_window(set.size(), c);
  if (!win.complete) {
    throw Error(ErrorCode::window_exhausted,
                "found " + std::to_string(win.window.primes.size()) + " primes in [" +
                    std::to_string(win.window.lo) + ", " + std::to_string(win.window.hi) +
                    "], need " + std::to_string(win.required));
  }

  std::map<std::uint64_t, std::vector<const DivisibilityTriple*>> by_prime;
  for (auto p : win.window.primes) by_prime[p];
  const auto triples = divisibility_triples(set, win.window);
  for (const auto& t : triples) by_prime[t.prime].push_back(&t);

  // Least-used prime; map order makes the smallest prime win ties.
  auto chosen = by_prime.begin();
  for (auto it = by_prime.begin(); it != by_prime.end(); ++it) {
    if (it->second.size() < chosen->second.size()) chosen = it;
  }

  std::vector<bool> drop(set.size(), false);
  for (const auto* t : chosen->second) drop[t->i] = drop[t->j] = true;
  std::vector<Int> kept, pruned;
  for (std::size_t i = 0; i < set.size(); ++i) (drop[i] ? pruned : kept).push_back(set[i]);

  CompressionStep step = reduce_mod_half(IntSet(std::move(kept)), chosen->first);
  step.kind = StepKind::triple_prune_mod_half;
  step.params.window_lo = win.window.lo;
  step.params.window_hi = win.window.hi;
  step.params.window_primes = win.window.primes.size();
  step.params.required_primes = win.required;
  step.params.triple_count = chosen->second.size();
  step.params.pruned = std::move(pruned);
  return step;
}

}  // namespace apfree
