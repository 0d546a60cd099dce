#include <random>

#include "doctest.h"
#include "fairshare/errors.hpp"
#include "fairshare/ordinal.hpp"
#include "support/oracles.hpp"

using namespace fairshare;

TEST_CASE("single partition family on round robin ranks") {
  const Partition rr{{{0, 2, 4}, {1, 3}}};
  CHECK(eval_family(make_valuation({3, 2, 2, 2, 1}), 2, family::Single{rr}).value == 4);
  CHECK(eval_family(make_valuation({3, 2, 2, 2, 1}), 2, family::RoundRobin{}).value == 4);
}

TEST_CASE("every family gives 0 on the all-zero valuation") {
  const Valuation z = make_valuation({0L, 0L, 0L, 0L, 0L, 0L});
  CHECK(eval_family(z, 2, family::Complete{}).value == 0);
  CHECK(eval_family(z, 2, family::RoundRobin{}).value == 0);
  CHECK(eval_family(z, 2, family::Nested{2}).value == 0);
  CHECK(eval_family(z, 2, family::Ptas2{Rational(1, 4)}).value == 0);
}

TEST_CASE("materialized families are valid partitions in a fixed order") {
  for (int m = 1; m <= 7; ++m)
    for (int n = 1; n <= 3; ++n) {
      for (const PartitionFamily& fam : {PartitionFamily{family::Complete{}}, PartitionFamily{family::RoundRobin{}},
                                          PartitionFamily{family::Nested{n}}}) {
        const auto a = materialize(fam, m, n);
        CHECK(a == materialize(fam, m, n));
        for (const auto& p : a) {
          CHECK(p.size() == static_cast<std::size_t>(n));
          CHECK_NOTHROW(check_partition(p, m));
        }
      }
    }
}

TEST_CASE("eval_family agrees with brute force over the materialized family") {
  std::mt19937_64 rng(31);
  for (int t = 0; t < 120; ++t) {
    const int m = 1 + t % 8, n = 1 + t % 4;
    const auto vals = oracle::random_values(rng, m, 0, 9);
    const Valuation v(vals);
    for (const PartitionFamily& fam : {PartitionFamily{family::Complete{}}, PartitionFamily{family::RoundRobin{}},
                                        PartitionFamily{family::Nested{1 + t % n}}}) {
      const auto all = materialize(fam, m, n);
      if (all.empty()) continue;
      CHECK(eval_family(v, n, fam).value == family_eval_bruteforce(v, all).value);
    }
  }
}

TEST_CASE("family values ignore how ties are ordered") {
  // Same multiset of values listed in different item orders.
  const Valuation a = make_valuation({2, 3, 2, 1, 3, 2});
  const Valuation b = make_valuation({3, 3, 2, 2, 2, 1});
  for (int n = 2; n <= 3; ++n) {
    CHECK(eval_family(a, n, family::Nested{n}).value == eval_family(b, n, family::Nested{n}).value);
    CHECK(eval_family(a, n, family::RoundRobin{}).value == eval_family(b, n, family::RoundRobin{}).value);
  }
}

TEST_CASE("ptas2 fixed cases") {
  std::vector<Rational> ones(10, Rational(1));
  CHECK(ptas2_share(Valuation(ones), Rational(1, 10)).value == 5);
  const Ptas2Result exact = ptas2_share(make_valuation({3, 2, 2, 2, 1}), Rational(1, 5));
  CHECK(exact.value == 5);
  CHECK(exact.branch == Ptas2Result::Branch::Exact);
  const Ptas2Result big = ptas2_share(make_valuation({10, 1, 1, 1}), Rational(3, 4));
  CHECK(big.value == 3);
  CHECK(big.branch == Ptas2Result::Branch::BigItem);
  CHECK(ptas2_k(Rational(1, 4)) == 6);
  CHECK(ptas2_k(Rational(1, 10)) == 15);
  CHECK(ptas2_k(Rational(2, 7)) == 6);
}

TEST_CASE("ptas2 matches the explicitly enumerated family") {
  std::mt19937_64 rng(32);
  for (int t = 0; t < 150; ++t) {
    const int m = 1 + t % 14;
    const Rational eps = t % 2 ? Rational(1, 4) : Rational(1, 2);
    const auto vals = oracle::random_values(rng, m, 0, 20);
    CHECK(ptas2_share(Valuation(vals), eps).value == oracle::ptas2(vals, eps));
  }
}

TEST_CASE("ptas2 sandwich, own family membership and serial agreement") {
  std::mt19937_64 rng(33);
  for (int t = 0; t < 150; ++t) {
    const int m = 4 + t % 14;
    const Rational eps = t % 3 == 0 ? Rational(1, 10) : Rational(1, 4);
    const auto vals = oracle::random_values(rng, m, 1, 30);
    const Valuation v(vals);
    const Ptas2Result r = ptas2_share(v, eps);
    const Rational mms = mms_exact(v, 2).value;
    CHECK(r.value <= mms);
    CHECK((1 - eps) * mms <= r.value);
    CHECK(min_bundle_value(v, r.best) == r.value);
    const Ptas2Result s = ptas2_share_serial(v, eps);
    CHECK(s.value == r.value);
    CHECK(s.best == r.best);
    if (r.branch == Ptas2Result::Branch::Enumerated) {
      const OrderedValuation ov = order_values(v);
      std::vector<int> rank(m);
      for (int i = 0; i < m; ++i) rank[ov.perm[i]] = i;
      Partition by_rank;
      for (const auto& b : r.best.bundles) {
        Bundle rb;
        for (int id : b) rb.push_back(rank[id]);
        std::sort(rb.begin(), rb.end());
        by_rank.bundles.push_back(rb);
      }
      CHECK(in_ptas2_family(by_rank, m, eps));
    }
  }
}

TEST_CASE("ptas2 family membership") {
  // m = 12, eps = 1/4, k = 6: top items free, the rest must be a suffix.
  CHECK(in_ptas2_family(Partition{{{0, 2, 10, 11}, {1, 3, 4, 5, 6, 7, 8, 9}}}, 12, Rational(1, 4)));
  CHECK_FALSE(in_ptas2_family(Partition{{{0, 2, 9}, {1, 3, 4, 5, 6, 7, 8, 10, 11}}}, 12, Rational(1, 4)));
}

TEST_CASE("ptas2 can fall below the mms") {
  const Valuation v = make_valuation({30, 30, 29, 24, 20, 19, 15, 14, 10, 10, 6, 5});
  CHECK(ptas2_share(v, Rational(1, 4)).value == 105);
  CHECK(mms_exact(v, 2).value == 106);
}

TEST_CASE("ptas2 allocation satisfies both agents") {
  std::vector<Rational> ones(10, Rational(1));
  const Allocation eq = ptas2_allocate(Valuation(ones), Valuation(ones), Rational(1, 10));
  CHECK(eq.bundle_of(0).size() == 5);
  CHECK(eq.bundle_of(1).size() == 5);
  const Valuation v1 = make_valuation({3, 2, 2, 2, 1}), v2 = make_valuation({1, 2, 2, 2, 3});
  const Allocation a = ptas2_allocate(v1, v2, Rational(1, 5));
  CHECK(bundle_value(v1, a.bundle_of(0)) >= 5);
  CHECK(bundle_value(v2, a.bundle_of(1)) >= 5);
  const Valuation zero = make_valuation({0L, 0L, 0L, 0L, 0L});
  CHECK_NOTHROW(ptas2_allocate(v1, zero, Rational(1, 5)));

  std::mt19937_64 rng(34);
  for (int t = 0; t < 100; ++t) {
    const int m = 2 + t % 16;
    const Valuation x(oracle::random_values(rng, m, 0, 30)), y(oracle::random_values(rng, m, 0, 30));
    const Rational eps(1, 4);
    const Allocation al = ptas2_allocate(x, y, eps);
    CHECK(bundle_value(x, al.bundle_of(0)) >= ptas2_share(x, eps).value);
    CHECK(bundle_value(y, al.bundle_of(1)) >= ptas2_share(y, eps).value);
  }
}

TEST_CASE("ptas2 rejects a nonpositive epsilon and a too large k") {
  CHECK_THROWS_AS(ptas2_share(make_valuation({1, 2}), Rational(0)), std::invalid_argument);
  std::vector<Rational> many(100, Rational(1));
  CHECK_THROWS_AS(ptas2_share(Valuation(many), Rational(1, 30)), ScaleExceeded);
}
