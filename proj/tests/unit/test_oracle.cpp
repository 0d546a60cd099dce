#include <random>

#include "doctest.h"
#include "fairshare/errors.hpp"
#include "fairshare/oracle.hpp"
#include "support/oracles.hpp"

using namespace fairshare;

TEST_CASE("mms matches exhaustive assignment search") {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 150; ++t) {
    const int m = 1 + t % 8, n = 1 + t % 4;
    const auto vals = oracle::random_values(rng, m, 0, 12);
    const MmsResult r = mms_exact(Valuation(vals), n);
    CHECK(r.value == oracle::mms(vals, n));
    CHECK(r.witness.size() == static_cast<std::size_t>(n));
    CHECK_NOTHROW(check_partition(r.witness, m));
    CHECK(min_bundle_value(Valuation(vals), r.witness) == r.value);
  }
}

TEST_CASE("mms on fractional values") {
  const Valuation v = make_valuation({"6/13", "6/13", "5/13", "5/13", "5/13", "4/13", "4/13", "2/13", "2/13"});
  CHECK(mms_exact(v, 3).value == 1);
}

TEST_CASE("mms edge cases") {
  CHECK(mms_exact(make_valuation({5, 1}), 3).value == 0);
  CHECK(mms_exact(make_valuation({5, 1, 2}), 3).value == 1);
  CHECK(mms_exact(make_valuation({5, 1, 2}), 1).value == 8);
  CHECK(mms_exact(Valuation{}, 2).value == 0);
}

TEST_CASE("size guard throws ScaleExceeded") {
  std::vector<Rational> big(30, Rational(1));
  CHECK_THROWS_AS(mms_exact(Valuation(big), 3), ScaleExceeded);
  OracleLimits tight;
  tight.max_items = 5;
  CHECK_THROWS_AS(mms_exact(make_valuation({1, 2, 3, 4, 5, 6}), 2, tight), ScaleExceeded);
}

TEST_CASE("least acceptable bundle matches subset enumeration") {
  std::mt19937_64 rng(12);
  for (int t = 0; t < 200; ++t) {
    const int m = 1 + t % 10;
    const auto vals = oracle::random_values(rng, m, 0, 9);
    const Rational total = oracle::total(vals);
    const Rational thr = Rational(static_cast<long>(rng() % 100)) / 100 * total;
    const BundleResult r = min_acceptable_bundle(Valuation(vals), thr);
    CHECK(r.value == *oracle::min_objective_subset(vals, vals, thr));
    CHECK(bundle_value(Valuation(vals), r.bundle) >= thr);
    CHECK(bundle_value(Valuation(vals), r.bundle) == r.value);
  }
  CHECK(min_acceptable_bundle(make_valuation({1, 2}), 0).value == 0);
  CHECK_THROWS_AS(min_acceptable_bundle(make_valuation({1, 2}), 4), std::domain_error);
}

TEST_CASE("least objective bundle under another valuation's constraint") {
  std::mt19937_64 rng(13);
  for (int t = 0; t < 200; ++t) {
    const int m = 1 + t % 10;
    const auto obj = oracle::random_values(rng, m, 0, 9);
    const auto con = oracle::random_values(rng, m, 0, 9);
    const Rational thr = Rational(static_cast<long>(rng() % 100)) / 100 * oracle::total(con);
    const BundleResult r = min_objective_bundle(Valuation(obj), Valuation(con), thr);
    CHECK(r.value == *oracle::min_objective_subset(obj, con, thr));
    CHECK(bundle_value(Valuation(con), r.bundle) >= thr);
  }
}

TEST_CASE("acceptable allocation search agrees with enumeration") {
  std::mt19937_64 rng(14);
  for (int t = 0; t < 150; ++t) {
    const int m = 2 + t % 6, n = 2 + t % 2;
    std::vector<oracle::Values> vs;
    std::vector<Valuation> vals;
    std::vector<Rational> th;
    for (int i = 0; i < n; ++i) {
      vs.push_back(oracle::random_values(rng, m, 0, 6));
      vals.emplace_back(vs.back());
      // thresholds around the MMS so both outcomes occur
      th.push_back(oracle::mms(vs.back(), n) + static_cast<long>(rng() % 3));
    }
    const Instance inst = Instance::from_valuations(vals);
    const auto got = acceptable_allocation_exists(inst, th);
    CHECK(got.has_value() == oracle::allocation_exists(vs, th));
    if (got) CHECK(validate_allocation(inst, *got, th).acceptable);
  }
}

TEST_CASE("all_partitions counts set partitions into at most n blocks") {
  // Sum of Stirling numbers S(m, j) for j <= n.
  CHECK(all_partitions(4, 2).size() == 8);
  CHECK(all_partitions(5, 3).size() == 41);
  CHECK(all_partitions(6, 6).size() == 203);
  for (const auto& p : all_partitions(5, 3)) CHECK(p.size() == 3);
  CHECK_THROWS_AS(all_partitions(14, 4, 1000), ScaleExceeded);
}

TEST_CASE("family brute force over the complete family equals the mms") {
  std::mt19937_64 rng(15);
  for (int t = 0; t < 60; ++t) {
    const int m = 1 + t % 8, n = 1 + t % 4;
    const auto vals = oracle::random_values(rng, m, 0, 10);
    const auto fam = all_partitions(m, n);
    CHECK(family_eval_bruteforce(Valuation(vals), fam).value == mms_exact(Valuation(vals), n).value);
  }
}
