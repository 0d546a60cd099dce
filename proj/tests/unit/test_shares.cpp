#include <random>

#include "doctest.h"
#include "fairshare/catalog.hpp"
#include "fairshare/errors.hpp"
#include "fairshare/picking.hpp"
#include "fairshare/shares.hpp"
#include "support/oracles.hpp"

using namespace fairshare;

TEST_CASE("share values on small fixtures") {
  const Valuation v = make_valuation({3, 2, 2, 2, 1});
  CHECK(share_value(share::Proportional{}, v, 2) == 5);
  CHECK(share_value(share::Mms{}, v, 2) == 5);
  CHECK(share_value(share::RhoMms{Rational(3, 4)}, v, 2) == Rational(15, 4));
  CHECK(share_value(share::TopN{}, v, 2) == 2);
  CHECK(share_value(share::TopNMinus1{}, v, 2) == 3);
  CHECK(share_value(share::RoundRobin{}, v, 2) == 4);
  CHECK(share_value(share::Nested{1}, v, 2) == 4);
  CHECK(share_value(share::Picking{PickingOrder{2, {1, 2, 2, 1, 1}}}, v, 2) == 4);
  CHECK(share_value(share::Ptas2{Rational(1, 4)}, v, 2) == 5);
}

TEST_CASE("top-n conventions") {
  const Valuation v = make_valuation({5, 4, 1});
  CHECK(share_value(share::TopN{}, v, 4) == 0);
  CHECK(share_value(share::TopNMinus1{}, v, 4) == 0);
  CHECK(share_value(share::TopN{}, v, 3) == 1);
  CHECK(share_value(share::TopNMinus1{}, v, 3) == 1);
  // With one agent the "top n-1" part is empty and only the tail remains.
  CHECK(share_value(share::TopNMinus1{}, v, 1) == 10);
  CHECK(share_value(share::TopN{}, v, 1) == 5);
}

TEST_CASE("invalid share parameters") {
  const Valuation v = make_valuation({3, 2, 1});
  CHECK_THROWS_AS(share_value(share::Nested{3}, v, 2), std::invalid_argument);
  CHECK_THROWS_AS(share_value(share::Ptas2{Rational(1, 4)}, v, 3), UnsupportedShare);
}

TEST_CASE("proportional share guarantee") {
  const Valuation v = make_valuation({2, 1});
  CHECK(share_value(share::Proportional{}, v, 2) == Rational(3, 2));
  CHECK(share_guarantee(share::Proportional{}, v, 2) == 2);
}

TEST_CASE("guarantee is the least acceptable bundle value") {
  std::mt19937_64 rng(51);
  const std::vector<ShareSpec> specs{share::Proportional{}, share::Mms{}, share::TopN{}, share::RoundRobin{},
                                     share::Nested{1}, share::Nested{2}};
  for (int t = 0; t < 60; ++t) {
    const int m = 3 + t % 8;
    const auto vals = oracle::random_values(rng, m, 0, 15);
    const Valuation v(vals);
    for (const auto& spec : specs) {
      const ShareEvaluation e = evaluate_share(spec, v, 2);
      CHECK(e.value == share_value(spec, v, 2));
      CHECK(e.guarantee == share_guarantee(spec, v, 2));
      CHECK(e.guarantee == *oracle::min_objective_subset(vals, vals, e.value));
      CHECK(e.guarantee >= e.value);
      if (e.guarantee_bundle) CHECK(bundle_value(v, *e.guarantee_bundle) == e.guarantee);
    }
  }
}

TEST_CASE("truthful report gives back the guarantee") {
  std::mt19937_64 rng(52);
  for (int t = 0; t < 40; ++t) {
    const Valuation v(oracle::random_values(rng, 4 + t % 6, 0, 12));
    for (const ShareSpec& spec : {ShareSpec{share::Mms{}}, ShareSpec{share::Nested{2}}, ShareSpec{share::Proportional{}}})
      CHECK(implied_guarantee(spec, v, v, 3) == share_guarantee(spec, v, 3));
  }
}

TEST_CASE("implied guarantee against brute force") {
  std::mt19937_64 rng(53);
  for (int t = 0; t < 60; ++t) {
    const int m = 3 + t % 7;
    const auto tv = oracle::random_values(rng, m, 0, 10);
    const auto rv = oracle::random_values(rng, m, 0, 10);
    const Rational s = share_value(share::Mms{}, Valuation(rv), 2);
    CHECK(implied_guarantee(share::Mms{}, Valuation(tv), Valuation(rv), 2) ==
          *oracle::min_objective_subset(tv, rv, s));
  }
}

TEST_CASE("misreports that raise the implied guarantee") {
  SUBCASE("proportional share example") {
    const CatalogEntry e = catalog_entry("ps-example");
    const Valuation& v = e.instance.valuations[0];
    CHECK(share_guarantee(share::Proportional{}, v, 3) == 5);
    CHECK(implied_guarantee(share::Proportional{}, v, make_valuation({4, 4, 4, 3}), 3) == 6);
  }
  SUBCASE("proportional share, three agents") {
    const Valuation v = make_valuation({"2/3", "2/3", "2/3", "1/2", "1/2"});
    CHECK(share_guarantee(share::Proportional{}, v, 3) == 1);
    CHECK(implied_guarantee(share::Proportional{}, v, make_valuation({"5/6", "5/6", "5/6", "1/4", "1/4"}), 3) ==
          Rational(7, 6));
  }
  SUBCASE("three quarters of the MMS") {
    const Valuation v = make_valuation({"1", "3/4", "1/4"});
    const share::RhoMms s{Rational(3, 4)};
    CHECK(share_guarantee(s, v, 2) == Rational(3, 4));
    CHECK(implied_guarantee(s, v, make_valuation({"1", "1/2", "1/2"}), 2) == 1);
  }
}

TEST_CASE("probe policies") {
  CHECK(std::holds_alternative<probe::Swaps>(parse_probe_policy("swaps")));
  const auto r = std::get<probe::Random>(parse_probe_policy("random:30:7"));
  CHECK(r.count == 30);
  CHECK(r.seed == 7);
  CHECK(std::get<probe::ScaleGrid>(parse_probe_policy("scale:1/2,2")).factors == std::vector<Rational>{Rational(1, 2), 2});
  CHECK_THROWS_AS(parse_probe_policy("random:x:1"), std::invalid_argument);
  CHECK_THROWS_AS(parse_probe_policy("scale:"), std::invalid_argument);
  CHECK_THROWS_AS(parse_probe_policy("nope"), std::invalid_argument);

  const Valuation v = make_valuation({5, 4, 4, 2});
  const auto a = generate_reports(probe::Random{25, 3}, v);
  CHECK(a.size() == 25);
  CHECK(a == generate_reports(probe::Random{25, 3}, v));
  CHECK(a != generate_reports(probe::Random{25, 4}, v));
  for (const auto& rep : a) {
    CHECK(rep.size() == v.size());
    for (const auto& x : rep.values) CHECK(x >= 0);
  }
  // Pairs with different values: (5,4) twice, (5,2), (4,2) twice.
  CHECK(generate_reports(probe::Swaps{}, v).size() == 5);
  CHECK(generate_reports(probe::ScaleGrid{{Rational(1, 2), 2}}, v).size() == 8);
}

TEST_CASE("self-max probe finds the known counterexamples") {
  const Valuation v = make_valuation({"2/3", "2/3", "2/3", "1/2", "1/2"});
  const ProbeVerdict p = self_max_probe(share::Proportional{}, v, 3,
                                        probe::Explicit{{make_valuation({"5/6", "5/6", "5/6", "1/4", "1/4"})}});
  CHECK(p.improved);
  CHECK(p.baseline == 1);
  CHECK(p.best_found == Rational(7, 6));
  REQUIRE(p.witness_report.has_value());
}

TEST_CASE("self-max probe is deterministic and parallel matches serial") {
  const Valuation v = make_valuation({7, 6, 5, 3, 3, 2, 1});
  for (const ShareSpec& spec : {ShareSpec{share::Proportional{}}, ShareSpec{share::Mms{}}, ShareSpec{share::Nested{2}}}) {
    const ProbeVerdict a = self_max_probe(spec, v, 3, probe::Random{60, 11});
    const ProbeVerdict b = self_max_probe_serial(spec, v, 3, probe::Random{60, 11});
    CHECK(a.improved == b.improved);
    CHECK(a.best_found == b.best_found);
    CHECK(a.baseline == b.baseline);
    CHECK(a.reports == 60);
    CHECK(a.witness_report == b.witness_report);
  }
}

TEST_CASE("ordinal shares are never improved by a misreport") {
  std::mt19937_64 rng(54);
  for (int t = 0; t < 10; ++t) {
    const Valuation v(oracle::random_values(rng, 5 + t % 4, 1, 12));
    for (const ShareSpec& spec : {ShareSpec{share::Mms{}}, ShareSpec{share::Nested{1}}, ShareSpec{share::RoundRobin{}},
                                  ShareSpec{share::TopN{}}, ShareSpec{share::Picking{mms_picking_order(v, 3)}}})
      CHECK_FALSE(self_max_probe(spec, v, 3, probe::Swaps{}).improved);
  }
}

TEST_CASE("domination ratio") {
  const std::vector<RatioInstance> inst{{make_valuation({3, 2, 2, 2, 1}), 2},
                                        {make_valuation({4, 3, 2, 2, 1}), 2},
                                        {make_valuation({0L, 0L}), 2}};
  const DominationReport r = domination_ratio(share::Nested{1}, inst);
  REQUIRE(r.rows.size() == 3);
  CHECK(r.rows[0].ratio == Rational(4, 5));
  CHECK(r.rows[1].ratio == share_value(share::Nested{1}, inst[1].v, 2) / 6);
  CHECK(r.rows[1].ratio >= Rational(4, 5));
  CHECK(r.rows[2].ratio == 1);
  CHECK(r.min_ratio == Rational(4, 5));
  CHECK(r.argmin == 0u);
  const DominationReport none = domination_ratio(share::Mms{}, {});
  CHECK(none.min_ratio == 1);
  CHECK_FALSE(none.argmin.has_value());
}
