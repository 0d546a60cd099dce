#pragma once

// Exact rational simplex on a dense tableau. Two phases, Bland's rule for
// both entering and leaving variables, so it never cycles.

#include <cstdint>
#include <utility>
#include <vector>

#include "fairshare/rational.hpp"

namespace fairshare {

enum class Sense { Le, Ge, Eq };

struct LpRow {
  std::vector<std::pair<int, Rational>> coefs;  // (column, coefficient)
  Sense sense = Sense::Le;
  Rational rhs;
};

/// minimize cost . x subject to rows, x >= 0.
struct LpProblem {
  int num_vars = 0;
  std::vector<Rational> cost;
  std::vector<LpRow> rows;
};

struct LpResult {
  enum class Status { Optimal, Infeasible, Unbounded };
  Status status = Status::Infeasible;
  Rational value;
  std::vector<Rational> x;
  std::uint64_t pivots = 0;
};

LpResult solve_lp(const LpProblem& lp);

/// True if x >= 0 satisfies every row exactly.
bool lp_feasible(const LpProblem& lp, const std::vector<Rational>& x);

}  // namespace fairshare
