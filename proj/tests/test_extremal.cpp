#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "apfree/extremal.hpp"
#include "support.hpp"

using namespace apfree;
using namespace testing_support;

namespace {

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return ErrorCode::invalid_input;
}

// g_3(n), n = 1..24, from an independent brute-force enumeration.
const std::vector<std::size_t> kG3 = {1, 2, 2, 3, 4, 4, 4, 4, 5, 5, 6, 6,
                                      7, 8, 8, 8, 8, 8, 8, 9, 9, 9, 9, 10};

}  // namespace

TEST_CASE("max_apfree_subset examples") {
  const auto five = max_apfree_subset(IntSet::interval(1, 5), 3);
  CHECK(five.value == 4);
  CHECK(five.witness.size() == 4);
  CHECK(is_progression_free(five.witness, 3));
  CHECK(five.method == SearchMethod::branch_bound);
  CHECK(max_apfree_subset(IntSet{1, 2, 3, 4, 7}, 3).value == 3);
  CHECK(max_apfree_subset(IntSet::interval(1, 9), 3).value == 5);
}

TEST_CASE("naive_max_apfree examples") {
  CHECK(naive_max_apfree(IntSet::interval(1, 5), 3).value == 4);
  CHECK(naive_max_apfree(IntSet{1}, 3).value == 1);
  CHECK(naive_max_apfree(IntSet::interval(1, 4), 4).value == 3);
  CHECK(naive_max_apfree(IntSet::interval(1, 4), 4).method == SearchMethod::naive);
  CHECK(code_of([] { naive_max_apfree(IntSet::interval(1, 21), 3); }) == ErrorCode::budget_exceeded);
}

TEST_CASE("branch-and-bound agrees with enumeration, witness included") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 300; ++trial) {
    const IntSet b = random_set(rng, 1 + rng() % 14, 1, 14);
    for (unsigned k : {3u, 4u, 5u}) {
      const auto fast = max_apfree_subset(b, k);
      const auto slow = naive_max_apfree(b, k);
      CHECK(fast.value == slow.value);
      CHECK(fast.witness == slow.witness);
      CHECK(fast.value == brute_fk(to_longs(b), k));
      CHECK(fast.witness.is_subset_of(b));
      CHECK(is_progression_free(fast.witness, k));
    }
  }
}

TEST_CASE("f_k is affine invariant and witnesses transport") {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 60; ++trial) {
    const IntSet b = random_set(rng, 1 + rng() % 12, 0, 20);
    for (unsigned k : {3u, 4u}) {
      const auto base = max_apfree_subset(b, k);
      for (long a : {1L, 2L, 3L, -1L}) {
        for (long shift : {0L, 7L}) {
          std::vector<Int> mapped, wit;
          for (const auto& x : b) mapped.push_back(a * x + shift);
          for (const auto& x : base.witness) wit.push_back(a * x + shift);
          const IntSet image(std::move(mapped));
          const IntSet wimage(std::move(wit));
          CHECK(max_apfree_subset(image, k).value == base.value);
          CHECK(is_progression_free(wimage, k));
          CHECK(wimage.is_subset_of(image));
        }
      }
    }
  }
}

TEST_CASE("g_table examples and frozen values") {
  const auto t = g_table(3, 24);
  REQUIRE(t.size() == 24);
  for (std::size_t n = 1; n <= 24; ++n) {
    CHECK(t[n - 1].value == kG3[n - 1]);
    CHECK(t[n - 1].witness.size() == t[n - 1].value);
    CHECK(t[n - 1].witness.is_subset_of(IntSet::interval(1, static_cast<long>(n))));
    CHECK(is_progression_free(t[n - 1].witness, 3));
  }
  CHECK(g_table(4, 4).back().value == 3);
  CHECK(code_of([] { g_table(2, 4); }) == ErrorCode::invalid_parameter);
}

TEST_CASE("g_table agrees with enumeration and steps by at most one") {
  for (unsigned k : {3u, 4u, 5u}) {
    const auto t = g_table(k, 40);
    for (std::size_t n = 1; n <= 40; ++n) {
      if (n <= 16) CHECK(t[n - 1].value == brute_fk(to_longs(IntSet::interval(1, static_cast<long>(n))), k));
      if (n > 1) {
        const auto step = static_cast<long>(t[n - 1].value) - static_cast<long>(t[n - 2].value);
        CHECK((step == 0 || step == 1));
      }
    }
  }
}

TEST_CASE("interval_subset_of_size") {
  const auto hit = interval_subset_of_size(9, 3, 5);
  REQUIRE(hit);
  CHECK(hit->size() == 5);
  CHECK(is_progression_free(*hit, 3));
  CHECK_FALSE(interval_subset_of_size(9, 3, 6));
}

TEST_CASE("phi_upper_search examples") {
  const auto r = phi_upper_search(5, 3, 7);
  CHECK(r.value == 3);
  CHECK(r.witness == IntSet{0, 1, 2, 3, 6});
  CHECK(phi_upper_search(2, 3, 1).value == 2);
  CHECK(phi_upper_search(2, 3, 1).witness == IntSet{0, 1});
  CHECK(phi_upper_search(4, 3, 4).value == 3);
  CHECK(code_of([] { phi_upper_search(5, 3, 3); }) == ErrorCode::invalid_parameter);
}

TEST_CASE("phi upper bound never exceeds g") {
  for (unsigned k : {3u, 4u}) {
    const auto g = g_table(k, 7);
    for (std::size_t n = 1; n <= 7; ++n) {
      for (std::uint64_t m = n - 1; m <= 9; ++m) {
        const auto r = phi_upper_search(n, k, m);
        CHECK(r.value <= g[n - 1].value);
        CHECK(r.witness.size() == n);
        CHECK(max_apfree_subset(r.witness, k).value == r.value);
      }
    }
  }
}

TEST_CASE("behrend_set") {
  CHECK(behrend_set(1) == IntSet{1});
  CHECK(is_progression_free(behrend_set(10), 3));
  const auto hundred = behrend_set(100);
  CHECK(hundred.size() >= 10);
  CHECK(is_progression_free(hundred, 3));
  for (std::uint64_t n : {2, 3, 7, 50, 243, 1000, 5000}) {
    const auto s = behrend_set(n);
    CHECK(s.min() >= 1);
    CHECK(s.max() <= Int(static_cast<unsigned long>(n)));
    CHECK(is_progression_free(s, 3));
  }
}

TEST_CASE("greedy_apfree examples") {
  CHECK(greedy_apfree(13, 3) == IntSet{1, 2, 4, 5, 10, 11, 13});
  CHECK(greedy_apfree(3, 3) == IntSet{1, 2});
  CHECK(greedy_apfree(5, 4) == IntSet{1, 2, 3, 5});
  for (unsigned k : {3u, 4u, 5u}) CHECK(is_progression_free(greedy_apfree(300, k), k));
}

TEST_CASE("product_construct examples") {
  CHECK(product_construct(IntSet{1, 2}, 2, IntSet{1, 2}, 2, 3) == IntSet{3, 4, 9, 10});
  CHECK(product_construct(IntSet{1}, 1, IntSet{1}, 4, 4) == IntSet{5});
  CHECK(code_of([] { product_construct(IntSet{1, 2}, 3, IntSet{1, 2, 3}, 3, 3); }) ==
        ErrorCode::invalid_input);
  CHECK(code_of([] { product_construct(IntSet{1, 5}, 3, IntSet{1}, 3, 3); }) ==
        ErrorCode::invalid_input);
}

TEST_CASE("product_construct sizes and freeness") {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 200; ++trial) {
    const std::uint64_t a = 1 + rng() % 6, b = 1 + rng() % 6;
    const unsigned k = 3 + static_cast<unsigned>(rng() % 2);
    const IntSet sa = max_apfree_subset(random_set(rng, 1 + rng() % a, 1, static_cast<long>(a)), 3).witness;
    const IntSet sb = max_apfree_subset(random_set(rng, 1 + rng() % b, 1, static_cast<long>(b)), k).witness;
    const IntSet out = product_construct(sa, a, sb, b, k);
    CHECK(out.size() == sa.size() * sb.size());
    CHECK(out.min() >= 1);
    CHECK(out.max() <= Int(static_cast<unsigned long>(3 * a * b)));
    CHECK(brute_free(to_longs(out), k));
  }
}

TEST_CASE("density examples") {
  CHECK(density(3, 5) == mpq_class(4, 5));
  CHECK(density(3, 1) == 1);
  CHECK(density(3, 12) == mpq_class(1, 2));
  CHECK(density(3, 12) >= density(3, 2) * density(3, 2) / 3);
}

TEST_CASE("product density inequality for small blocks") {
  for (unsigned k : {3u, 4u}) {
    for (std::size_t a = 1; a <= 4; ++a) {
      for (std::size_t b = 1; b <= 4; ++b) {
        const auto c = check_product_density(a, b, k, 60);
        CHECK(c.lhs_exact);
        CHECK(c.holds);
        CHECK(c.lhs >= c.rhs);
      }
    }
  }
}
