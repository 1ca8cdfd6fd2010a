#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "apfree/exactlin.hpp"
#include "support.hpp"

using namespace apfree;
using namespace testing_support;

namespace {

// Determinant by rational Gaussian elimination with partial search for a
// nonzero pivot; independent of the fraction-free code under test.
mpq_class rational_det(std::vector<std::vector<mpq_class>> m) {
  const std::size_t n = m.size();
  mpq_class det = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && m[p][c] == 0) ++p;
    if (p == n) return 0;
    if (p != c) {
      std::swap(m[p], m[c]);
      det = -det;
    }
    det *= m[c][c];
    for (std::size_t r = c + 1; r < n; ++r) {
      const mpq_class f = m[r][c] / m[c][c];
      for (std::size_t j = c; j < n; ++j) m[r][j] -= f * m[c][j];
    }
  }
  return det;
}

std::vector<Int> ints(std::initializer_list<long> v) { return {v.begin(), v.end()}; }

std::vector<Int> sorted_values(const IntSet& s) { return s.values(); }

}  // namespace

TEST_CASE("kernel_parametrize examples") {
  const auto empty = kernel_parametrize(ConstraintMatrix(3, {}));
  CHECK(empty.rank() == 0);
  CHECK(empty.freedom() == 3);
  CHECK(empty.denominator == 1);
  CHECK(empty.numerators.empty());

  const auto one = kernel_parametrize(second_difference_matrix(IntSet{1, 2, 3}));
  CHECK(one.rank() == 1);
  CHECK(one.freedom() == 2);
  CHECK(one.pivot_columns == std::vector<std::size_t>{0});
  CHECK(one.free_columns == std::vector<std::size_t>{1, 2});
  CHECK(one.denominator == 1);
  CHECK(one.numerators == std::vector<std::vector<Int>>{ints({2, -1})});

  const auto interval5 = kernel_parametrize(second_difference_matrix(IntSet::interval(1, 5)));
  CHECK(interval5.rank() == 3);
  CHECK(interval5.freedom() == 2);
  CHECK(interval5.satisfied_by(ints({1, 2, 3, 4, 5})));
  CHECK(interval5.satisfied_by(ints({1, 1, 1, 1, 1})));
  CHECK_FALSE(interval5.satisfied_by(ints({1, 2, 3, 4, 6})));
}

TEST_CASE("hadamard_bound values") {
  CHECK(hadamard_bound(0) == 1);
  CHECK(hadamard_bound(1) == 3);
  CHECK(hadamard_bound(2) == 6);
  CHECK(hadamard_bound(3) == 15);
  CHECK(hadamard_bound(4) == 36);
  CHECK(hadamard_bound(40) == Int("3656158440062976", 10));
}

TEST_CASE("within_exponential_bound is exact at the boundary") {
  // 4 * 2^4 * 6 = 384 for n = 2
  CHECK(within_exponential_bound(2, Int(384)));
  CHECK_FALSE(within_exponential_bound(2, Int(385)));
  // n = 3: 4 * 81 * 6^{3/2} = 4761.8...
  CHECK(within_exponential_bound(3, Int(4761)));
  CHECK_FALSE(within_exponential_bound(3, Int(4762)));
}

TEST_CASE("find_distinct_point examples") {
  const auto free3 = kernel_parametrize(ConstraintMatrix(3, {}));
  CHECK(find_distinct_point(free3, 9) == ints({0, 1, 2}));
  const auto one = kernel_parametrize(second_difference_matrix(IntSet{1, 2, 3}));
  CHECK(find_distinct_point(one, 9) == ints({0, 1}));

  const auto interval5 = kernel_parametrize(second_difference_matrix(IntSet::interval(1, 5)));
  const auto z = find_distinct_point(interval5, 25);
  REQUIRE(z.size() == 2);
  const auto y = interval5.scaled_solution(z);
  CHECK(std::set<Int>(y.begin(), y.end()).size() == 5);
  for (const auto& v : z) CHECK((v >= 0 && v < 25));

  CHECK_THROWS_AS(find_distinct_point(free3, 2), Error);
}

TEST_CASE("randomized point search is seeded and valid") {
  const auto param = kernel_parametrize(second_difference_matrix(IntSet{0, 1, 2, 4, 8, 9}));
  PointSearchOptions opts{PointSearch::randomized, 42, 100000};
  const auto z1 = find_distinct_point(param, 36, opts);
  const auto z2 = find_distinct_point(param, 36, opts);
  CHECK(z1 == z2);
  const auto y = param.scaled_solution(z1);
  CHECK(std::set<Int>(y.begin(), y.end()).size() == y.size());
}

TEST_CASE("parametrization invariants on random sets") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 150; ++trial) {
    const std::size_t n = 1 + rng() % 14;
    const IntSet s = random_set(rng, n, 0, 3 * static_cast<long>(n));
    const ConstraintMatrix a = second_difference_matrix(s);
    const auto p = kernel_parametrize(a);
    CHECK(p.rank() + p.freedom() == n);
    CHECK(p.denominator > 0);

    // Kernel sanity: constants and X itself lie in the kernel.
    CHECK(p.satisfied_by(std::vector<Int>(n, Int(1))));
    CHECK(p.satisfied_by(sorted_values(s)));

    // |d| is the determinant of the pivot submatrix, within the Hadamard bound.
    std::vector<std::vector<mpq_class>> sub;
    const auto dense = a.dense();
    for (auto r : p.independent_rows) {
      std::vector<mpq_class> row;
      for (auto c : p.pivot_columns) row.emplace_back(dense[r][c]);
      sub.push_back(row);
    }
    const mpq_class det = rational_det(sub);
    CHECK(abs(det) == mpq_class(p.denominator));
    CHECK(p.denominator <= hadamard_bound(p.rank()));

    // Numerator bound |alpha| <= 2 n 6^{n/2}, compared squared.
    Int six_n;
    mpz_ui_pow_ui(six_n.get_mpz_t(), 6, n);
    for (const auto& row : p.numerators)
      for (const auto& v : row) CHECK(v * v <= 4 * Int(n * n) * six_n);

    // Every free choice gives a kernel vector.
    std::vector<Int> z;
    for (std::size_t j = 0; j < p.freedom(); ++j) z.emplace_back(static_cast<long>(rng() % 50) - 25);
    for (const auto& r : a.apply(p.scaled_solution(z))) CHECK(r == 0);
  }
}

TEST_CASE("compress_exponential examples") {
  const IntSet free{1, 2, 4};
  const auto s1 = compress_exponential(free);
  CHECK(s1.kind == StepKind::exponential);
  CHECK(s1.map.size() == 3);
  CHECK(verify_compression(free, s1).pass());
  CHECK(within_exponential_bound(3, s1.output().max()));
  CHECK(s1.output().min() == 1);

  const auto s2 = compress_exponential(IntSet{1, 2, 3});
  const auto y = s2.output();
  CHECK(y[1] - y[0] == y[2] - y[1]);
  CHECK(y[1] != y[0]);

  const IntSet doubling{0, 1, 2, 4};
  const auto s3 = compress_exponential(doubling);
  CHECK(verify_compression(doubling, s3).pass());
  const Int y0 = *s3.map.find(0), y1 = *s3.map.find(1), y2 = *s3.map.find(2), y4 = *s3.map.find(4);
  CHECK(y2 - 2 * y1 + y0 == 0);
  CHECK(y4 - 2 * y2 + y0 == 0);
  const auto out = s3.output();
  Int gap = out[1] - out[0];
  for (std::size_t i = 1; i + 1 < out.size(); ++i) gap = std::min(gap, Int(out[i + 1] - out[i]));
  CHECK(out.max() - out.min() >= 4 * gap);
}

TEST_CASE("compress_exponential on random sets") {
  std::mt19937_64 rng(22);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 1 + rng() % 14;
    const IntSet s = trial % 3 == 0 ? random_set(rng, n, 1, 2 * static_cast<long>(n))
                                    : random_set(rng, n, 0, 1'000'000);
    const auto step = compress_exponential(s);
    CHECK(step.map.size() == n);
    CHECK(verify_compression(s, step).pass());
    const auto out = step.output();
    CHECK(out.min() == 1);
    CHECK(within_exponential_bound(n, out.max()));
  }
}

TEST_CASE("no compression of {0,1,2,4,...,2^t} has span below 2^t") {
  CHECK(min_compression_span({0, 1, 2, 4}, 4) == 4);
  CHECK(min_compression_span({0, 1, 2, 4, 8}, 8) == 8);
  for (const auto& xs : {std::vector<long>{0, 1, 2, 4}, std::vector<long>{0, 1, 2, 4, 8}}) {
    const auto out = compress_exponential(from_longs(xs)).output();
    CHECK(out.max() - out.min() >= xs.back());
  }
}
