#include <random>

#include "doctest.h"
#include "fairshare/errors.hpp"
#include "fairshare/milp.hpp"
#include "fairshare/nested.hpp"
#include "fairshare/oracle.hpp"
#include "support/oracles.hpp"

using namespace fairshare;

namespace {

std::vector<Rational> ints(std::initializer_list<long> xs) {
  std::vector<Rational> out;
  for (long x : xs) out.emplace_back(x);
  return out;
}

const std::vector<Rational> kWitness = ints({4, 4, 2, 2, 2, 2, 1, 1, 1, 1, 0, 0, 0, 0});

}  // namespace

TEST_CASE("model shape") {
  const MilpModel m = build_model();
  CHECK(m.vars.size() == 46);
  CHECK(m.binaries().size() == 31);
  CHECK(m.index_of("y14") == -1);
  CHECK(m.index_of("z") == 14);
  CHECK(m.count("o") == 13);
  CHECK(m.count("a") == 10);
  CHECK(m.count("b") == 6);
  CHECK(m.count("c") + m.count("d") + m.count("f") == 11);
  CHECK(m.count("p") == 23);
  CHECK(m.count("n") == 9);
  CHECK(m.constraints.size() == 72);
  CHECK(m.objective == std::vector<MilpTerm>{{14, Rational(1)}});

  const MilpConstraint& a1 = m.constraint("a1");
  CHECK(a1.sense == Sense::Le);
  CHECK(a1.rhs == 5);
  CHECK(a1.terms == std::vector<MilpTerm>{{0, Rational(1)}});

  const MilpConstraint& n = m.constraint("n1312");
  CHECK(n.sense == Sense::Le);
  CHECK(n.rhs == 3);
  REQUIRE(n.terms.size() == 4);
  CHECK(m.vars[n.terms[0].var].name == "y11");
  CHECK(m.vars[n.terms[1].var].name == "y23");
  CHECK(m.vars[n.terms[2].var].name == "y31");
  CHECK(m.vars[n.terms[3].var].name == "y42");
  CHECK_THROWS(m.constraint("p14"));

  const MilpModel with = build_model({.include_p14 = true});
  CHECK(with.binaries().size() == 32);
  CHECK(with.count("p") == 24);
}

TEST_CASE("LP export") {
  const MilpModel m = build_model();
  const std::string text = export_lp(m);
  CHECK(text.find("\na0: x1 + x2 + x3 + x4 + x5 + x6 + x7 + x8 + x9 + x10 + x11 + x12 + x13 + x14 = 20\n") !=
        std::string::npos);
  CHECK(text.find("\na1: x1 <= 5\n") != std::string::npos);
  CHECK(text.find("\nn1312: y11 + y23 + y31 + y42 <= 3\n") != std::string::npos);
  CHECK(text.find("Minimize\n") != std::string::npos);
  CHECK(text.find("\nBounds\n") != std::string::npos);
  CHECK(text.find("\nBinaries\n") != std::string::npos);
  CHECK(text.ends_with("End\n"));
  CHECK(export_lp(build_model()) == text);
  CHECK(parse_lp(text) == m);
  CHECK(export_lp(parse_lp(text)) == text);
  const MilpModel with = build_model({.include_p14 = true});
  CHECK(parse_lp(export_lp(with)) == with);
}

TEST_CASE("LP parse errors") {
  CHECK_THROWS_AS(parse_lp(""), ParseError);
  CHECK_THROWS_AS(parse_lp("Minimize\nns: z\nSubject To\nr: x1 +\nEnd\n"), ParseError);
  CHECK_THROWS_AS(parse_lp("Minimize\nns: z\nSubject To\nr: x1 <= 1\n"), ParseError);
}

TEST_CASE("witness verification") {
  const MilpModel m = build_model();
  const WitnessReport ok = verify_witness(m, kWitness, 4);
  CHECK(ok.ok);
  CHECK(ok.rows.size() == m.constraints.size());
  CHECK(ok.y.size() == 31);
  // Re-checking with the binaries found gives the same verdict.
  CHECK(verify_witness(m, kWitness, 4, ok.y).ok);

  const WitnessReport low = verify_witness(m, kWitness, 3);
  CHECK_FALSE(low.ok);
  // The big-M rows can all be met by switching binaries on, which then
  // breaks the caps on how many may be on together.
  for (const auto& r : low.rows)
    if (!r.satisfied) CHECK(r.label[0] == 'n');
  std::map<std::string, bool> off;
  for (const auto& [name, _] : ok.y) off[name] = false;
  bool p_row_failed = false;
  for (const auto& r : verify_witness(m, kWitness, 3, off).rows)
    if (!r.satisfied && r.label[0] == 'p') p_row_failed = true;
  CHECK(p_row_failed);

  const WitnessReport zero = verify_witness(m, std::vector<Rational>(14, Rational(0)), 0);
  CHECK_FALSE(zero.ok);
  for (const auto& r : zero.rows)
    if (r.label == "a0") CHECK_FALSE(r.satisfied);

  CHECK_THROWS_AS(verify_witness(m, ints({1, 2}), 0), ParseError);
}

TEST_CASE("the published item values under the share functions") {
  const Valuation v(kWitness);
  CHECK(mms_exact(v, 4).value == 5);
  CHECK(ns_share(v, 4, 3).value == 5);
  CHECK(ns_share(v, 4, 1).value == 4);
}

TEST_CASE("exact simplex matches vertex enumeration") {
  std::mt19937_64 rng(61);
  std::uniform_int_distribution<int> coef(-3, 3), rhs(0, 10), cost(-5, 5), sense(0, 2);
  int optimal = 0, infeasible = 0;
  for (int t = 0; t < 300; ++t) {
    const int vars = 2 + t % 3, rows = 1 + t % 4;
    LpProblem lp{vars, {}, {}};
    oracle::Lp o;
    o.vars = vars;
    for (int j = 0; j < vars; ++j) {
      lp.cost.emplace_back(cost(rng));
      o.cost.push_back(lp.cost.back());
    }
    for (int r = 0; r < rows; ++r) {
      LpRow row;
      std::vector<Rational> dense(vars, Rational(0));
      for (int j = 0; j < vars; ++j) {
        dense[j] = coef(rng);
        if (sgn(dense[j]) != 0) row.coefs.emplace_back(j, dense[j]);
      }
      const int s = sense(rng);
      row.sense = s == 0 ? Sense::Le : s == 1 ? Sense::Ge : Sense::Eq;
      row.rhs = rhs(rng);
      lp.rows.push_back(row);
      o.a.push_back(dense);
      o.sense.push_back(s == 0 ? -1 : s == 1 ? 1 : 0);
      o.b.push_back(row.rhs);
    }
    // Box every variable so the region is bounded.
    for (int j = 0; j < vars; ++j) {
      lp.rows.push_back(LpRow{{{j, Rational(1)}}, Sense::Le, Rational(10)});
      std::vector<Rational> e(vars, Rational(0));
      e[j] = 1;
      o.a.push_back(e);
      o.sense.push_back(-1);
      o.b.push_back(10);
    }
    const LpResult got = solve_lp(lp);
    const auto want = oracle::lp_by_vertices(o);
    if (!want) {
      CHECK(got.status == LpResult::Status::Infeasible);
      ++infeasible;
      continue;
    }
    REQUIRE(got.status == LpResult::Status::Optimal);
    CHECK(got.value == *want);
    CHECK(lp_feasible(lp, got.x));
    ++optimal;
  }
  CHECK(optimal > 50);
  CHECK(infeasible > 5);
}

TEST_CASE("unbounded LP") {
  const LpProblem lp{1, {Rational(-1)}, {LpRow{{{0, Rational(1)}}, Sense::Ge, Rational(1)}}};
  CHECK(solve_lp(lp).status == LpResult::Status::Unbounded);
}

TEST_CASE("branch and bound reaches 4 and the point satisfies every row") {
  const MilpModel m = build_model();
  const MilpSolution s = solve(m, {.highest_index_first = true, .one_first = true});
  REQUIRE(s.status == MilpSolution::Status::Optimal);
  CHECK(s.objective == 4);
  CHECK(s.z == 4);
  CHECK(s.x.size() == 14);
  CHECK(s.y.size() == 31);
  std::map<std::string, bool> y;
  for (std::size_t i = 0; i < s.y.size(); ++i) y[s.y_names[i]] = s.y[i];
  CHECK(verify_witness(m, s.x, s.z, y).ok);
  CHECK(verify_witness(m, s.x, s.z).ok);
  // The rows bound z by some nested partitions only, and the a rows admit
  // points whose MMS is below 5, so only the nested value is pinned here.
  CHECK(ns_share(Valuation(s.x), 4, 3).value == 4);
  CHECK(mms_exact(Valuation(s.x), 4).value >= 4);
}

TEST_CASE("raising the floor on z moves the optimum to 5") {
  const MilpModel m = build_model();
  const MilpModel tight = with_constraint(m, {"zmin", {{m.index_of("z"), Rational(1)}}, Sense::Ge, Rational(5)});
  CHECK(tight.constraints.size() == m.constraints.size() + 1);
  const MilpSolution s = solve(tight, {.highest_index_first = true, .one_first = true});
  REQUIRE(s.status == MilpSolution::Status::Optimal);
  CHECK(s.objective == 5);
}

TEST_CASE("node limit") {
  CHECK_THROWS_AS(solve(build_model(), {.max_nodes = 3}), ScaleExceeded);
}

TEST_CASE("fourteen-item reduction") {
  std::vector<Rational> fifteen = kWitness;
  fifteen.emplace_back(0);
  const Valuation merged = fourteen_item_reduction_check(Valuation(fifteen));
  CHECK(merged.values == kWitness);
  CHECK(ns_share(merged, 4, 3).value <= ns_share(Valuation(fifteen), 4, 3).value);

  std::vector<Rational> sixteen = ints({4, 4, 2, 2, 2, 2, 1, 1, 1, 1, 0, 0, 0, 0, 0, 0});
  CHECK(fourteen_item_reduction_check(Valuation(sixteen)).values == kWitness);

  const Valuation small = make_valuation({4, 4, 2, 2, 2, 2, 1, 1, 1, 1});
  CHECK(fourteen_item_reduction_check(small) == small);

  std::vector<Rational> unsorted = fifteen;
  std::swap(unsorted[0], unsorted[2]);
  try {
    fourteen_item_reduction_check(Valuation(unsorted));
    FAIL("expected a violation");
  } catch (const ConstraintViolation& e) {
    CHECK(e.label == "o1");
  }
  std::vector<Rational> heavy = fifteen;
  heavy.front() = 5;
  try {
    fourteen_item_reduction_check(Valuation(heavy));
    FAIL("expected a violation");
  } catch (const ConstraintViolation& e) {
    CHECK(e.label == "a0");
  }
}
