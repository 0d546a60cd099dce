#pragma once

// The mixed-integer program for n = 4, q = 3: item values x1 >= ... >= x14
// summing to 20 with an MMS partition of four bundles of value 5, and z a
// lower bound on NS_{4,3}. Its optimum 4 certifies that NS_{4,3} is always
// at least 4/5 of the MMS. Constraints keep their printed labels and the
// big-M coefficient 20.

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "fairshare/core.hpp"
#include "fairshare/simplex.hpp"

namespace fairshare {

struct MilpVariable {
  std::string name;
  bool binary = false;

  bool operator==(const MilpVariable&) const = default;
};

struct MilpTerm {
  int var = 0;
  Rational coef;

  bool operator==(const MilpTerm&) const = default;
};

struct MilpConstraint {
  std::string label;
  std::vector<MilpTerm> terms;  // in print order
  Sense sense = Sense::Le;
  Rational rhs;

  bool operator==(const MilpConstraint&) const = default;
};

struct MilpModel {
  std::string objective_label = "ns";
  std::vector<MilpVariable> vars;  // x1..x14, z, then the binaries
  std::vector<MilpTerm> objective;  // minimized
  std::vector<MilpConstraint> constraints;

  int index_of(std::string_view name) const;  // -1 if absent
  const MilpConstraint& constraint(std::string_view label) const;
  std::vector<int> binaries() const;
  /// Number of constraints whose label starts with `prefix`.
  std::size_t count(std::string_view prefix) const;

  bool operator==(const MilpModel&) const = default;
};

struct MilpOptions {
  /// Re-enable the commented-out bundle row p14 and its binary y14.
  bool include_p14 = false;
};

MilpModel build_model(const MilpOptions& options = {});

/// CPLEX-style LP text: Minimize, Subject To, Bounds, Binaries, End.
std::string export_lp(const MilpModel& model);

/// Reads the subset of the LP format written by export_lp. Throws ParseError.
MilpModel parse_lp(std::string_view text);

struct MilpSolution {
  enum class Status { Optimal, Infeasible };
  Status status = Status::Infeasible;
  Rational objective;
  std::vector<Rational> x;  // x1..x14
  Rational z;
  std::vector<bool> y;      // in model.binaries() order
  std::vector<std::string> y_names;
  std::vector<Rational> point;  // every variable, model order
  std::uint64_t nodes = 0;
  std::uint64_t lp_solves = 0;
  std::uint64_t pivots = 0;
};

struct SolveOptions {
  /// Branch on the highest-index fractional binary instead of the lowest.
  bool highest_index_first = false;
  /// Explore the y = 1 child before y = 0.
  bool one_first = false;
  std::uint64_t max_nodes = 5'000'000;
};

/// Exact optimum by depth-first branch and bound over exact LP relaxations.
/// Throws ScaleExceeded past max_nodes.
MilpSolution solve(const MilpModel& model, const SolveOptions& options = {});

/// Extra rows on top of a model, e.g. z >= 5 for a sanity run.
MilpModel with_constraint(MilpModel model, MilpConstraint extra);

struct RowCheck {
  std::string label;
  bool satisfied = false;
  Rational lhs;  // with every variable moved left
  Rational rhs;
};

struct WitnessReport {
  bool ok = false;
  std::vector<RowCheck> rows;
  std::map<std::string, bool> y;
};

/// Checks (x, z, y) against every constraint. Without y, each binary is set
/// to 1 only when its big-M row fails at 0; any other assignment that
/// satisfies the big-M rows sets a superset of binaries, so it can only make
/// the cap rows harder. x must have 14 entries.
WitnessReport verify_witness(const MilpModel& model, const std::vector<Rational>& x, const Rational& z,
                             const std::optional<std::map<std::string, bool>>& y = std::nullopt);

/// A constraint of the extended model failed; `label` names it.
class ConstraintViolation : public std::domain_error {
 public:
  ConstraintViolation(std::string label, const std::string& what)
      : std::domain_error(what), label(std::move(label)) {}
  std::string label;
};

/// Merges e_1 with e_m while more than 14 items remain, re-checking o1, a0,
/// a1 and b1 after each merge. v must be sorted in descending order and
/// satisfy the a/b/c/d/f rows with a0 taken over all items.
Valuation fourteen_item_reduction_check(const Valuation& v);

}  // namespace fairshare
