#include "apfree/exactlin.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>

namespace apfree {

namespace {

using Matrix = std::vector<std::vector<Int>>;

// Exact division that must leave no remainder; anything else is a bug in
// the elimination.
void divide_exact(Int& value, const Int& divisor) {
  if (!mpz_divisible_p(value.get_mpz_t(), divisor.get_mpz_t())) {
    throw std::logic_error("fraction-free elimination produced an inexact division");
  }
  mpz_divexact(value.get_mpz_t(), value.get_mpz_t(), divisor.get_mpz_t());
}

}  // namespace

KernelParametrization kernel_parametrize(const ConstraintMatrix& matrix) {
  const std::size_t rows = matrix.rows();
  const std::size_t cols = matrix.cols();

  Matrix m(rows, std::vector<Int>(cols));
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) m[r][c] = matrix.at(r, c);
  }
  std::vector<std::size_t> row_ids(rows);
  for (std::size_t r = 0; r < rows; ++r) row_ids[r] = r;

  // Fraction-free Gauss-Jordan: every pivot row keeps the current pivot value
  // on its diagonal, and all entries stay integral minors of A.
  KernelParametrization out;
  out.columns = cols;
  Int previous = 1;
  std::size_t rank = 0;
  Int t1, t2;
  for (std::size_t c = 0; c < cols && rank < rows; ++c) {
    std::size_t pick = rank;
    while (pick < rows && m[pick][c] == 0) ++pick;
    if (pick == rows) {
      out.free_columns.push_back(c);
      continue;
    }
    std::swap(m[pick], m[rank]);
    std::swap(row_ids[pick], row_ids[rank]);

    const Int pivot = m[rank][c];
    for (std::size_t r = 0; r < rows; ++r) {
      if (r == rank) continue;
      const Int factor = m[r][c];
      for (std::size_t j = 0; j < cols; ++j) {
        if (j == c) continue;
        t1 = pivot * m[r][j];
        t2 = factor * m[rank][j];
        m[r][j] = t1 - t2;
        divide_exact(m[r][j], previous);
      }
      m[r][c] = 0;
    }
    previous = pivot;
    out.pivot_columns.push_back(c);
    ++rank;
  }
  for (std::size_t c = out.pivot_columns.empty() ? 0 : out.pivot_columns.back() + 1; c < cols;
       ++c) {
    if (std::find(out.free_columns.begin(), out.free_columns.end(), c) == out.free_columns.end()) {
      out.free_columns.push_back(c);
    }
  }

  out.independent_rows.assign(row_ids.begin(), row_ids.begin() + static_cast<long>(rank));
  const int sign = previous < 0 ? -1 : 1;
  out.denominator = rank == 0 ? Int(1) : Int(abs(previous));

  // Pivot row i reads  previous * x[pivot_i] + sum_j m[i][free_j] x[free_j] = 0.
  out.numerators.assign(rank, std::vector<Int>(out.free_columns.size()));
  for (std::size_t i = 0; i < rank; ++i) {
    for (std::size_t j = 0; j < out.free_columns.size(); ++j) {
      out.numerators[i][j] = -sign * m[i][out.free_columns[j]];
    }
  }
  return out;
}

std::vector<Int> KernelParametrization::scaled_solution(std::span<const Int> z) const {
  if (z.size() != free_columns.size()) {
    throw Error(ErrorCode::invalid_input, "free coordinate count mismatch");
  }
  std::vector<Int> x(columns);
  for (std::size_t j = 0; j < free_columns.size(); ++j) x[free_columns[j]] = denominator * z[j];
  for (std::size_t i = 0; i < pivot_columns.size(); ++i) {
    Int acc = 0;
    for (std::size_t j = 0; j < z.size(); ++j) acc += numerators[i][j] * z[j];
    x[pivot_columns[i]] = std::move(acc);
  }
  return x;
}

bool KernelParametrization::satisfied_by(std::span<const Int> x) const {
  if (x.size() != columns) return false;
  for (std::size_t i = 0; i < pivot_columns.size(); ++i) {
    Int acc = 0;
    for (std::size_t j = 0; j < free_columns.size(); ++j) {
      acc += numerators[i][j] * x[free_columns[j]];
    }
    if (denominator * x[pivot_columns[i]] != acc) return false;
  }
  return true;
}

Int hadamard_bound(std::size_t n) {
  Int power;
  mpz_ui_pow_ui(power.get_mpz_t(), 6, n);
  Int root;
  mpz_sqrt(root.get_mpz_t(), power.get_mpz_t());
  if (root * root != power) ++root;
  return root;
}

bool within_exponential_bound(std::size_t n, const Int& value) {
  if (value <= 0) return true;
  // value <= 4 n^4 sqrt(6^n)  <=>  value^2 <= 16 n^8 6^n
  Int six_pow, n_pow;
  mpz_ui_pow_ui(six_pow.get_mpz_t(), 6, n);
  mpz_ui_pow_ui(n_pow.get_mpz_t(), n, 8);
  return value * value <= 16 * n_pow * six_pow;
}

namespace {

// Linear form over z describing a difference of two solution coordinates.
struct PairConstraint {
  std::vector<Int> coef;
  std::size_t last = 0;  // highest index with a nonzero coefficient
};

class DistinctPointSearch {
 public:
  DistinctPointSearch(const KernelParametrization& param, std::uint64_t side)
      : side_(side), t_(param.freedom()), by_last_(param.freedom()) {
    // Coordinate forms in the scaled solution.
    std::vector<std::vector<Int>> forms;
    for (std::size_t j = 0; j < t_; ++j) {
      std::vector<Int> f(t_, 0);
      f[j] = param.denominator;
      forms.push_back(std::move(f));
    }
    for (const auto& row : param.numerators) forms.push_back(row);

    for (std::size_t a = 0; a < forms.size(); ++a) {
      for (std::size_t b = a + 1; b < forms.size(); ++b) {
        PairConstraint pc;
        pc.coef.resize(t_);
        bool any = false;
        for (std::size_t j = 0; j < t_; ++j) {
          pc.coef[j] = forms[a][j] - forms[b][j];
          if (pc.coef[j] != 0) {
            pc.last = j;
            any = true;
          }
        }
        // Identical forms collide for every z.
        if (!any) degenerate_ = true;
        else by_last_[pc.last].push_back(std::move(pc));
      }
    }
  }

  bool run(std::vector<Int>& z) {
    if (degenerate_ || side_ == 0) return false;
    z.assign(t_, 0);
    return descend(0, z);
  }

 private:
  bool descend(std::size_t level, std::vector<Int>& z) {
    if (level == t_) return true;
    // Each constraint ending here rules out at most one value of z[level].
    std::vector<Int> excluded;
    Int partial, root, rem;
    for (const auto& pc : by_last_[level]) {
      partial = 0;
      for (std::size_t j = 0; j < level; ++j) partial += pc.coef[j] * z[j];
      mpz_fdiv_qr(root.get_mpz_t(), rem.get_mpz_t(), Int(-partial).get_mpz_t(),
                  pc.coef[level].get_mpz_t());
      if (rem == 0 && root >= 0 && root < Int(side_)) excluded.push_back(root);
    }
    std::sort(excluded.begin(), excluded.end());
    excluded.erase(std::unique(excluded.begin(), excluded.end()), excluded.end());

    auto next_excluded = excluded.begin();
    for (std::uint64_t v = 0; v < side_; ++v) {
      if (next_excluded != excluded.end() && *next_excluded == v) {
        ++next_excluded;
        continue;
      }
      z[level] = v;
      if (descend(level + 1, z)) return true;
    }
    return false;
  }

  std::uint64_t side_;
  std::size_t t_;
  bool degenerate_ = false;
  std::vector<std::vector<PairConstraint>> by_last_;
};

bool all_distinct(std::vector<Int> values) {
  std::sort(values.begin(), values.end());
  return std::adjacent_find(values.begin(), values.end()) == values.end();
}

}  // namespace

std::vector<Int> find_distinct_point(const KernelParametrization& param, std::uint64_t side,
                                     const PointSearchOptions& options) {
  if (side == 0) throw Error(ErrorCode::invalid_parameter, "cube side must be at least 1");
  std::vector<Int> z;
  if (options.mode == PointSearch::randomized) {
    std::mt19937_64 rng(options.seed);
    std::uniform_int_distribution<std::uint64_t> pick(0, side - 1);
    z.resize(param.freedom());
    for (std::uint64_t attempt = 0; attempt < options.max_attempts; ++attempt) {
      for (auto& v : z) v = pick(rng);
      if (all_distinct(param.scaled_solution(z))) return z;
    }
    throw Error(ErrorCode::infeasible, "randomized search found no distinct point in " +
                                           std::to_string(options.max_attempts) + " attempts");
  }
  DistinctPointSearch search(param, side);
  if (!search.run(z)) {
    throw Error(ErrorCode::infeasible,
                "no point with distinct coordinates in cube of side " + std::to_string(side));
  }
  return z;
}

CompressionStep compress_exponential(const IntSet& set, const PointSearchOptions& options) {
  if (set.empty()) throw Error(ErrorCode::invalid_input, "set must be nonempty");
  const std::size_t n = set.size();
  const auto param = kernel_parametrize(second_difference_matrix(set));
  const std::uint64_t side = static_cast<std::uint64_t>(n) * n;

  const auto z = find_distinct_point(param, side, options);
  const auto y = param.scaled_solution(z);
  const Int low = *std::min_element(y.begin(), y.end());
  const Int shift = 1 - low;

  std::vector<ValueMap::Entry> entries;
  entries.reserve(n);
  for (std::size_t c = 0; c < n; ++c) entries.emplace_back(set[c], y[c] + shift);

  CompressionStep step;
  step.kind = StepKind::exponential;
  step.params.determinant = param.denominator;
  step.params.cube_side = side;
  step.params.shift = shift;
  step.map = ValueMap(std::move(entries));
  return step;
}

}  // namespace apfree
