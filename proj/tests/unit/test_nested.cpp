#include <random>
#include <set>

#include "doctest.h"
#include "fairshare/errors.hpp"
#include "fairshare/nested.hpp"
#include "support/oracles.hpp"

using namespace fairshare;

namespace {

const Valuation kExample = make_valuation({3, 3, 2, 2, 2, 2, 2, 2, 1, 1});

std::multiset<std::multiset<long>> bundle_values(const Valuation& v, const Partition& p) {
  std::multiset<std::multiset<long>> out;
  for (const auto& b : p.bundles) {
    std::multiset<long> s;
    for (int id : b) s.insert(v[id].get_num().get_si());
    out.insert(s);
  }
  return out;
}

}  // namespace

TEST_CASE("nested share of the four-agent example is 4 for every q") {
  for (int q = 1; q <= 4; ++q) CHECK(ns_share(kExample, 4, q).value == 4);
  CHECK(mms_exact(kExample, 4).value == 5);
}

TEST_CASE("nested share fixtures") {
  CHECK(ns_share(make_valuation({3, 2, 2, 2, 1}), 2, 1).value == 4);
  CHECK(ns_share(make_valuation({4, 3, 2, 2, 1}), 2, 2).value == 5);
  CHECK(ns_share(make_valuation({3, 3, 2, 2, 2, 2, 1}), 3, 2).value == 4);
  CHECK(ns_share(make_valuation({6, 4, 3, 2, 2, 1}), 3, 3).value == 5);
  CHECK(ns_share(make_valuation({4, 4, 3, 3, 3, 3, 3, 3, 2, 2, 2}), 4, 2).value == 6);
  CHECK(ns_share(make_valuation({"6/13", "6/13", "5/13", "5/13", "5/13", "4/13", "4/13", "2/13", "2/13"}), 3, 1)
            .value == Rational(10, 13));
}

TEST_CASE("nested share with few items") {
  CHECK(ns_share(make_valuation({5, 4}), 3, 2).value == 0);
  CHECK(ns_share(make_valuation({5, 4, 1}), 3, 2).value == 1);
  CHECK_THROWS_AS(ns_share(kExample, 4, 0), std::invalid_argument);
  CHECK_THROWS_AS(ns_share(kExample, 4, 5), std::invalid_argument);
}

TEST_CASE("candidate values") {
  const auto c = ns_candidates(make_valuation({2, 1}));
  CHECK(c == std::vector<Rational>{0, 1, 2, 3});
  const auto e = ns_candidates(kExample);
  CHECK(std::count(e.begin(), e.end(), Rational(4)) == 1);
  CHECK(std::count(e.begin(), e.end(), Rational(5)) == 1);
  const auto eq = ns_candidates(make_valuation({2, 2, 2}));
  CHECK(eq == std::vector<Rational>{0, 2, 4, 6});
  std::vector<Rational> many(50, Rational(1));
  CHECK_THROWS_AS(ns_candidates(Valuation(many)), ScaleExceeded);
}

TEST_CASE("feasible partitions for the four-agent example") {
  const auto f = ns_feasible_partition(kExample, 4, 1, 4);
  REQUIRE(f.has_value());
  CHECK_NOTHROW(check_partition(f->partition, 10));
  CHECK(min_bundle_value(kExample, f->partition) >= 4);
  CHECK(bundle_values(kExample, f->partition) ==
        std::multiset<std::multiset<long>>{{3, 1}, {3, 1}, {2, 2}, {2, 2, 2, 2}});
  CHECK_FALSE(ns_feasible_partition(kExample, 4, 4, 5).has_value());
  CHECK(ns_feasible_partition(kExample, 4, 2, 0).has_value());
}

TEST_CASE("nested share equals brute force over the enumerated family") {
  std::mt19937_64 rng(41);
  for (int m = 1; m <= 9; ++m)
    for (int n = 1; n <= 4; ++n)
      for (int q = 1; q <= n; ++q)
        for (int rep = 0; rep < 3; ++rep) {
          const auto vals = oracle::random_values(rng, m, 0, 12);
          const NsResult r = ns_share(Valuation(vals), n, q);
          CHECK(r.value == oracle::ns(vals, n, q));
          if (m > n) {
            CHECK(min_bundle_value(Valuation(vals), r.witness) == r.value);
            CHECK_NOTHROW(check_partition(r.witness, m));
          }
        }
}

TEST_CASE("the library family matches the definition's enumeration") {
  for (int m = 2; m <= 8; ++m)
    for (int n = 1; n <= 4 && n < m; ++n)
      for (int q = 1; q <= n; ++q) {
        std::set<std::vector<std::vector<int>>> expected;
        for (auto b : oracle::nested_family(m, n, q)) {
          for (auto& x : b) std::sort(x.begin(), x.end());
          expected.insert(b);
        }
        std::set<std::vector<std::vector<int>>> got;
        for (const auto& p : ns_family(m, n, q)) got.insert(p.bundles);
        CHECK(got == expected);
        CHECK(ns_family(m, n, q).size() == got.size());
      }
}

TEST_CASE("integer bisection and the candidate scan agree") {
  std::mt19937_64 rng(42);
  for (int t = 0; t < 100; ++t) {
    const int m = 2 + t % 12, n = 1 + t % 5, q = 1 + t % n;
    const Valuation v(oracle::random_values(rng, m, 0, 50));
    CHECK(ns_share(v, n, q).value == ns_share_by_candidates(v, n, q).value);
  }
  const Valuation frac = make_valuation({"1/3", "1/7", "2/5", "1/2", "1/11", "3/4"});
  CHECK(ns_share(frac, 2, 2).value == ns_share_by_candidates(frac, 2, 2).value);
}

TEST_CASE("witness shapes satisfy the nesting rules") {
  std::mt19937_64 rng(43);
  for (int t = 0; t < 100; ++t) {
    const int n = 1 + t % 4, m = n + 1 + t % 8, q = 1 + t % n;
    const Valuation v(oracle::random_values(rng, m, 0, 20));
    const NsResult r = ns_share(v, n, q);
    REQUIRE(r.shape.has_value());
    CHECK_NOTHROW(r.shape->check());
    CHECK(r.shape->k > n - q);
    for (int j = 0; j < n - q; ++j) CHECK(r.shape->prefix_cuts[j] == j + 1);
    const Partition by_rank = r.shape->bundles_by_rank();
    const auto back = ns_shape_of(by_rank, m, n, q);
    REQUIRE(back.has_value());
    CHECK(back->bundles_by_rank() == by_rank);
  }
}

TEST_CASE("nested share grows with q and stays within its proven ratios") {
  std::mt19937_64 rng(44);
  for (int t = 0; t < 150; ++t) {
    const int n = 2 + t % 3, m = n + 1 + t % 7;
    const auto vals = oracle::random_values(rng, m, 1, 15);
    const Valuation v(vals);
    Rational prev = 0;
    for (int q = 1; q <= n; ++q) {
      const Rational s = ns_share(v, n, q).value;
      CHECK(s >= prev);
      prev = s;
    }
    const Rational mms = mms_exact(v, n).value;
    CHECK(ns_share(v, n, 1).value * (3 * n - 1) >= 2 * n * mms);
    if (n == 2) {
      CHECK(5 * ns_share(v, 2, 1).value >= 4 * mms);
      CHECK(6 * ns_share(v, 2, 2).value >= 5 * mms);
    }
    if (n == 3) CHECK(5 * ns_share(v, 3, 2).value >= 4 * mms);
  }
}

TEST_CASE("fully intersecting partitions") {
  const Partition rows{{{0, 1, 2}, {3, 4, 5}, {6, 7, 8}}};
  const Partition cols{{{0, 3, 6}, {1, 4, 7}, {2, 5, 8}}};
  CHECK(fully_intersecting(rows, cols));
  CHECK_FALSE(fully_intersecting(rows, rows));
  std::mt19937_64 rng(45);
  for (int t = 0; t < 300; ++t) {
    const int m = 4 + t % 9;
    auto a = oracle::sorted_desc(oracle::random_values(rng, m, 0, 20));
    auto b = oracle::sorted_desc(oracle::random_values(rng, m, 0, 20));
    // Two valuations with the same item order.
    const Partition pa = ns_share(Valuation(a), 3, 3).witness;
    const Partition pb = ns_share(Valuation(b), 3, 3).witness;
    CHECK_FALSE(fully_intersecting(pa, pb));
  }
}

TEST_CASE("three-agent base allocation") {
  const Valuation v = make_valuation({1, 1, 1});
  const Partition p{{{0}, {1}, {2}}};
  const Allocation a = ns3_base_allocate(v, v, v, p, p, p);
  for (int i = 0; i < 3; ++i) CHECK(a.bundle_of(i).size() == 1);

  std::mt19937_64 rng(46);
  for (int t = 0; t < 200; ++t) {
    const int m = 3 + t % 6;
    std::vector<oracle::Values> vs;
    std::vector<Valuation> vals;
    std::vector<Partition> ps;
    std::vector<Rational> th;
    for (int i = 0; i < 3; ++i) {
      vs.push_back(oracle::sorted_desc(oracle::random_values(rng, m, 0, 9)));
      vals.emplace_back(vs.back());
      const NsResult r = ns_share(vals.back(), 3, 3);
      ps.push_back(r.witness);
      th.push_back(r.value);
    }
    const Allocation al = ns3_base_allocate(vals[0], vals[1], vals[2], ps[0], ps[1], ps[2]);
    const Instance inst = Instance::from_valuations(vals);
    CHECK(validate_allocation(inst, al, th).acceptable);
    CHECK(oracle::allocation_exists(vs, th));
  }
}

TEST_CASE("three-agent base allocation through the cut-and-choose rule") {
  // Found by a seeded search for instances that reach this rule.
  const Valuation v1 = make_valuation({8, 5, 4, 3, 3, 3, 2, 2});
  const Valuation v2 = make_valuation({12, 11, 10, 6, 6, 1, 1, 0});
  const Valuation v3 = make_valuation({11, 7, 6, 6, 4, 3, 2, 1});
  const Partition p1 = ns_share(v1, 3, 3).witness, p2 = ns_share(v2, 3, 3).witness, p3 = ns_share(v3, 3, 3).witness;
  const Ns3Allocation r = ns3_base_allocate_traced(v1, v2, v3, p1, p2, p3);
  CHECK(r.rule == Ns3Rule::CutAndChoose);
  const Instance inst = Instance::from_valuations({v1, v2, v3});
  const std::vector<Rational> th{min_bundle_value(v1, p1), min_bundle_value(v2, p2), min_bundle_value(v3, p3)};
  CHECK(validate_allocation(inst, r.allocation, th).acceptable);
}

TEST_CASE("nested allocation on the example and simple cases") {
  const Instance ex = Instance::identical(kExample, 4);
  for (int q = 1; q <= 3; ++q) {
    const Allocation a = ns_allocate(ex, q);
    for (int i = 0; i < 4; ++i) CHECK(bundle_value(kExample, a.bundle_of(i)) >= 4);
  }
  const Allocation ones = ns_allocate(Instance::identical(make_valuation({1, 1, 1}), 3), 3);
  for (int i = 0; i < 3; ++i) CHECK(ones.bundle_of(i).size() == 1);
  CHECK_THROWS_AS(ns_allocate(ex, 4), UnsupportedShare);
}

TEST_CASE("nested allocation satisfies every agent on unordered random instances") {
  std::mt19937_64 rng(47);
  for (int t = 0; t < 150; ++t) {
    const int n = 1 + t % 5, m = 1 + t % 13, q = 1 + t % std::min(n, 3);
    std::vector<Valuation> vs;
    for (int i = 0; i < n; ++i) vs.emplace_back(oracle::random_values(rng, m, 0, 20));
    const Instance inst = Instance::from_valuations(vs);
    const Allocation a = ns_allocate(inst, q);
    std::vector<Rational> th;
    for (const auto& v : vs) th.push_back(ns_share(v, n, q).value);
    CHECK(validate_allocation(inst, a, th).acceptable);
  }
}

TEST_CASE("worst-case construction") {
  const WorstCase w1 = worstcase_instance(1);
  CHECK(w1.n == 5);
  CHECK(w1.v.size() == 15);
  CHECK(std::count(w1.v.values.begin(), w1.v.values.end(), Rational(1)) == 1);
  CHECK(std::count(w1.v.values.begin(), w1.v.values.end(), Rational(0)) == 2);
  CHECK(std::count(w1.v.values.begin(), w1.v.values.end(), Rational(1, 2)) == 12);
  CHECK(ns_share(w1.v, w1.n, 1).value == 1);
  CHECK(min_bundle_value(w1.v, w1.certified) == 1);

  const WorstCase w2 = worstcase_instance(2);
  CHECK(w2.n == 21);
  CHECK(w2.v.size() == 63);
  CHECK(ns_share(w2.v, w2.n, 1).value == 1);
  CHECK_NOTHROW(check_partition(w2.certified, 63));
  CHECK(w2.certified.size() == 21);
  CHECK(min_bundle_value(w2.v, w2.certified) == Rational(5, 4));
  CHECK_THROWS_AS(worstcase_instance(8), ScaleExceeded);
}
