#include "fairshare/milp.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <functional>

#include "fairshare/errors.hpp"

namespace fairshare {

namespace {

// The rows as printed, in print order. "<= z" stays on the right and is
// moved left when the row is built.
constexpr const char* kRows[] = {
    "o1: x1 >= x2", "o2: x2 >= x3", "o3: x3 >= x4", "o4: x4 >= x5", "o5: x5 >= x6", "o6: x6 >= x7",
    "o7: x7 >= x8", "o8: x8 >= x9", "o9: x9 >= x10", "o10: x10 >= x11", "o11: x11 >= x12",
    "o12: x12 >= x13", "o13: x13 >= x14",

    "a0: x1 + x2 + x3 + x4 + x5 + x6 + x7 + x8 + x9 + x10 + x11 + x12 + x13 + x14 = 20",
    "a1: x1 <= 5",
    "a2: x4 + x5 <= 5",
    "a3: x3 + x4 + x5 + x6 <= 10",
    "a4: x2 + x3 + x4 + x5 + x6 + x7 <= 15",
    "a5: x7 + x8 + x9 <= 5",
    "a6: x5 + x6 + x7 + x8 + x9 + x10 <= 10",
    "a7: x3 + x4 + x5 + x6 + x7 + x8 + x9 + x10 + x11 <= 15",
    "a8: x10 + x11 + x12 + x13 <= 5",
    "a9: x7 + x8 + x9 + x10 + x11 + x12 + x13 + x14 <= 10",

    "b1: x1 <= 4",
    "b2: x4 + x5 <= 4",
    "b3: x6 + x7 + x8 >= 4",
    "b4: x7 >= 1",
    "b5: x3 + x6 <= 5",
    "b6: x2 + x9 <= 5",

    "c1: x2 + x6 - 20*y1 <= 5",
    "c2: x5 + x6 + x9 - 20*y2 <= 5",
    "c3: x6 + x7 + x8 + x9 - 20*y3 <= 5",
    "c0: y1 + y2 + y3 <= 2",

    "d1: x2 + x7 - 20*y4 <= 5",
    "d2: x5 + x6 + x7 - 20*y5 <= 5",
    "d0: y4 + y5 <= 1",

    "f1: x2 + x8 - 20*y6 <= 5",
    "f2: x3 + x7 + x8 - 20*y7 <= 5",
    "f3: x5 + x6 + x7 + x8 - 20*y8 <= 5",
    "f0: y6 + y7 + y8 <= 2",

    "p41: x4 + x5 + x6 - 20*y41 <= z",
    "p42: x5 + x6 + x7 - 20*y42 <= z",
    "p43: x6 + x7 + x8 - 20*y43 <= z",
    "p44: x7 + x8 + x9 - 20*y44 <= z",
    "p45: x7 + x8 + x9 + x10 + x11 + x12 + x13 - 20*y45 <= z",

    "p31: x3 + x4 - 20*y31 <= z",
    "p32: x3 + x7 - 20*y32 <= z",
    "p33: x3 + x7 + x8 - 20*y33 <= z",
    "p34: x4 + x5 + x9 - 20*y34 <= z",
    "p35: x4 + x5 + x9 + x10 - 20*y35 <= z",
    "p36: x4 + x5 + x6 - 20*y36 <= z",

    "p21: x2 + x3 - 20*y21 <= z",
    "p22: x2 + x3 + x10 - 20*y22 <= z",
    "p23: x2 + x8 - 20*y23 <= z",
    "p24: x2 + x8 + x9 - 20*y24 <= z",
    "p25: x2 + x9 - 20*y25 <= z",
    "p26: x2 + x9 + x10 - 20*y26 <= z",
    "p27: x2 + x3 + x11 + x12 - 20*y27 <= z",

    "p11: x1 + x9 + x10 + x11 + x12 + x13 + x14 - 20*y11 <= z",
    "p12: x1 + x10 + x11 + x12 + x13 + x14 - 20*y12 <= z",
    "p13: x1 + x11 + x12 + x13 + x14 - 20*y13 <= z",
    "p14: x1 + x12 + x13 + x14 - 20*y14 <= z",
    "p15: x1 + x13 + x14 - 20*y15 <= z",
    "p16: x1 + x14 - 20*y16 <= z",

    "n1312: y11 + y23 + y31 + y42 <= 3",
    "n1321: y11 + y23 + y32 + y41 <= 3",
    "n2164: y12 + y21 + y36 + y44 <= 3",
    "n2412: y12 + y24 + y31 + y42 <= 3",
    "n2531: y12 + y25 + y33 + y41 <= 3",
    "n3243: y13 + y22 + y34 + y43 <= 3",
    "n3631: y13 + y26 + y33 + y41 <= 3",
    "n5753: y15 + y27 + y35 + y43 <= 3",
    "n6165: y16 + y21 + y36 + y45 <= 3",
};

constexpr int kItems = 14;

std::vector<std::string> binary_names(bool with_y14) {
  std::vector<std::string> out;
  for (int i = 1; i <= 8; ++i) out.push_back("y" + std::to_string(i));
  for (int i : {11, 12, 13, 14, 15, 16})
    if (i != 14 || with_y14) out.push_back("y" + std::to_string(i));
  for (int i = 21; i <= 27; ++i) out.push_back("y" + std::to_string(i));
  for (int i = 31; i <= 36; ++i) out.push_back("y" + std::to_string(i));
  for (int i = 41; i <= 45; ++i) out.push_back("y" + std::to_string(i));
  return out;
}

struct SideTerm {
  std::string var;  // empty for a constant
  Rational coef;
};

std::vector<SideTerm> parse_side(std::string_view s) {
  std::vector<SideTerm> out;
  std::size_t i = 0;
  auto skip = [&] {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  };
  int sign = 1;
  for (;;) {
    skip();
    if (i >= s.size()) break;
    if (s[i] == '+' || s[i] == '-') {
      sign = s[i] == '-' ? -1 : 1;
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '/' || s[j] == '.')) ++j;
    std::string tok(s.substr(i, j - i));
    i = j;
    skip();
    SideTerm t;
    if (std::isdigit(static_cast<unsigned char>(tok[0]))) {
      t.coef = parse_rational(tok);
      if (i < s.size() && s[i] == '*') {
        ++i;
        skip();
        std::size_t k = i;
        while (k < s.size() && std::isalnum(static_cast<unsigned char>(s[k]))) ++k;
        t.var = std::string(s.substr(i, k - i));
        i = k;
      }
    } else {
      t.coef = 1;
      t.var = tok;
    }
    t.coef *= sign;
    out.push_back(std::move(t));
    sign = 1;
  }
  return out;
}

MilpConstraint parse_row(const MilpModel& model, std::string_view row) {
  const std::size_t colon = row.find(':');
  MilpConstraint c;
  c.label = std::string(row.substr(0, colon));
  std::string_view body = row.substr(colon + 1);
  std::size_t op = body.find_first_of("<>=");
  std::size_t op_len = (body[op] == '=' || body[op + 1] != '=') ? 1 : 2;
  c.sense = body[op] == '<' ? Sense::Le : body[op] == '>' ? Sense::Ge : Sense::Eq;
  auto add = [&](const SideTerm& t, int side) {
    if (t.var.empty()) {
      c.rhs -= side * t.coef;
      return;
    }
    const int v = model.index_of(t.var);
    if (v < 0) throw std::logic_error("row " + c.label + " uses unknown variable " + t.var);
    c.terms.push_back({v, side * t.coef});
  };
  for (const auto& t : parse_side(body.substr(0, op))) add(t, 1);
  for (const auto& t : parse_side(body.substr(op + op_len))) add(t, -1);
  return c;
}

Rational row_lhs(const MilpConstraint& c, const std::vector<Rational>& point) {
  Rational lhs = 0;
  for (const auto& t : c.terms) lhs += t.coef * point[t.var];
  return lhs;
}

bool row_holds(const MilpConstraint& c, const Rational& lhs) {
  const int s = cmp(lhs, c.rhs);
  return c.sense == Sense::Le ? s <= 0 : c.sense == Sense::Ge ? s >= 0 : s == 0;
}

bool is_integral(const Rational& r) { return r.get_den() == 1; }

class BranchAndBound {
 public:
  BranchAndBound(const MilpModel& model, const SolveOptions& options)
      : model_(model), options_(options), bins_(model.binaries()) {
    is_bin_.assign(model.vars.size(), -1);
    for (std::size_t b = 0; b < bins_.size(); ++b) is_bin_[bins_[b]] = static_cast<int>(b);
  }

  MilpSolution run() {
    std::vector<signed char> fix(bins_.size(), -1);
    dfs(fix);
    MilpSolution s;
    s.nodes = nodes_;
    s.lp_solves = lp_solves_;
    s.pivots = pivots_;
    for (int b : bins_) s.y_names.push_back(model_.vars[b].name);
    if (!best_) return s;
    s.status = MilpSolution::Status::Optimal;
    s.point = *best_;
    s.objective = best_value_;
    for (int i = 1; i <= kItems; ++i) {
      const int v = model_.index_of("x" + std::to_string(i));
      s.x.push_back(v >= 0 ? s.point[v] : Rational(0));
    }
    const int zi = model_.index_of("z");
    if (zi >= 0) s.z = s.point[zi];
    for (int b : bins_) s.y.push_back(s.point[b] == 1);
    return s;
  }

 private:
  void dfs(std::vector<signed char>& fix) {
    if (++nodes_ > options_.max_nodes) throw ScaleExceeded("branch and bound node limit reached");
    std::vector<Rational> point;
    std::optional<Rational> value = relax(fix, point);
    if (!value) return;
    if (best_ && *value >= best_value_) return;

    int pick = -1;
    const int nb = static_cast<int>(bins_.size());
    for (int k = 0; k < nb; ++k) {
      const int b = options_.highest_index_first ? nb - 1 - k : k;
      if (fix[b] < 0 && !is_integral(point[bins_[b]])) {
        pick = b;
        break;
      }
    }
    if (pick < 0) {
      best_ = std::move(point);
      best_value_ = *value;
      return;
    }
    for (int side : options_.one_first ? std::array<int, 2>{1, 0} : std::array<int, 2>{0, 1}) {
      fix[pick] = static_cast<signed char>(side);
      dfs(fix);
    }
    fix[pick] = -1;
  }

  // LP relaxation with fixed binaries substituted out. Returns the optimum
  // or nullopt when infeasible.
  std::optional<Rational> relax(const std::vector<signed char>& fix, std::vector<Rational>& point) {
    const int nv = static_cast<int>(model_.vars.size());
    std::vector<int> col(nv, -1);
    LpProblem lp;
    for (int v = 0; v < nv; ++v)
      if (is_bin_[v] < 0 || fix[is_bin_[v]] < 0) col[v] = lp.num_vars++;
    lp.cost.assign(lp.num_vars, Rational(0));
    for (const auto& t : model_.objective) {
      if (col[t.var] < 0) throw std::logic_error("objective on a binary variable");
      lp.cost[col[t.var]] += t.coef;
    }
    for (const auto& c : model_.constraints) {
      LpRow row;
      row.sense = c.sense;
      row.rhs = c.rhs;
      for (const auto& t : c.terms) {
        if (col[t.var] >= 0)
          row.coefs.emplace_back(col[t.var], t.coef);
        else
          row.rhs -= t.coef * fix[is_bin_[t.var]];
      }
      if (row.coefs.empty()) {
        const int s = cmp(Rational(0), row.rhs);
        const bool ok = row.sense == Sense::Le ? s <= 0 : row.sense == Sense::Ge ? s >= 0 : s == 0;
        if (!ok) return std::nullopt;
        continue;
      }
      lp.rows.push_back(std::move(row));
    }
    for (std::size_t b = 0; b < bins_.size(); ++b)
      if (fix[b] < 0) lp.rows.push_back(LpRow{{{col[bins_[b]], Rational(1)}}, Sense::Le, Rational(1)});

    ++lp_solves_;
    const LpResult r = solve_lp(lp);
    pivots_ += r.pivots;
    if (r.status == LpResult::Status::Infeasible) return std::nullopt;
    if (r.status == LpResult::Status::Unbounded) throw InternalError("milp relaxation is unbounded");
    if (!lp_feasible(lp, r.x)) throw InternalError("simplex returned an infeasible point");
    point.assign(nv, Rational(0));
    for (int v = 0; v < nv; ++v) point[v] = col[v] >= 0 ? r.x[col[v]] : Rational(fix[is_bin_[v]]);
    return r.value;
  }

  const MilpModel& model_;
  SolveOptions options_;
  std::vector<int> bins_;
  std::vector<int> is_bin_;
  std::optional<std::vector<Rational>> best_;
  Rational best_value_;
  std::uint64_t nodes_ = 0, lp_solves_ = 0, pivots_ = 0;
};

// Binary -> the big-M row it relaxes (the row where it has a negative
// coefficient).
std::map<int, const MilpConstraint*> relaxed_rows(const MilpModel& model) {
  std::map<int, const MilpConstraint*> out;
  for (const auto& c : model.constraints)
    for (const auto& t : c.terms)
      if (model.vars[t.var].binary && sgn(t.coef) < 0) out[t.var] = &c;
  return out;
}

// Sets the least binaries needed by the big-M rows at `point`.
void minimal_binaries(const MilpModel& model, std::vector<Rational>& point) {
  for (const auto& [b, row] : relaxed_rows(model)) {
    point[b] = 0;
    if (!row_holds(*row, row_lhs(*row, point))) point[b] = 1;
  }
}

}  // namespace

int MilpModel::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < vars.size(); ++i)
    if (vars[i].name == name) return static_cast<int>(i);
  return -1;
}

const MilpConstraint& MilpModel::constraint(std::string_view label) const {
  for (const auto& c : constraints)
    if (c.label == label) return c;
  throw std::out_of_range("no constraint labelled " + std::string(label));
}

std::vector<int> MilpModel::binaries() const {
  std::vector<int> out;
  for (std::size_t i = 0; i < vars.size(); ++i)
    if (vars[i].binary) out.push_back(static_cast<int>(i));
  return out;
}

std::size_t MilpModel::count(std::string_view prefix) const {
  return std::count_if(constraints.begin(), constraints.end(),
                       [&](const MilpConstraint& c) { return c.label.rfind(prefix, 0) == 0; });
}

MilpModel build_model(const MilpOptions& options) {
  MilpModel m;
  for (int i = 1; i <= kItems; ++i) m.vars.push_back({"x" + std::to_string(i), false});
  m.vars.push_back({"z", false});
  for (auto& name : binary_names(options.include_p14)) m.vars.push_back({std::move(name), true});
  m.objective = {{m.index_of("z"), Rational(1)}};
  for (const char* row : kRows) {
    if (!options.include_p14 && std::string_view(row).rfind("p14:", 0) == 0) continue;
    m.constraints.push_back(parse_row(m, row));
  }
  return m;
}

MilpModel with_constraint(MilpModel model, MilpConstraint extra) {
  model.constraints.push_back(std::move(extra));
  return model;
}

MilpSolution solve(const MilpModel& model, const SolveOptions& options) {
  return BranchAndBound(model, options).run();
}

WitnessReport verify_witness(const MilpModel& model, const std::vector<Rational>& x, const Rational& z,
                             const std::optional<std::map<std::string, bool>>& y) {
  if (x.size() != kItems) throw ParseError("witness needs exactly 14 item values");
  std::vector<Rational> point(model.vars.size(), Rational(0));
  for (int i = 0; i < kItems; ++i) point[model.index_of("x" + std::to_string(i + 1))] = x[i];
  point[model.index_of("z")] = z;
  if (y) {
    for (const auto& [name, on] : *y) {
      const int v = model.index_of(name);
      if (v < 0 || !model.vars[v].binary) throw ParseError("witness sets unknown binary '" + name + "'");
      point[v] = on ? 1 : 0;
    }
  } else {
    minimal_binaries(model, point);
  }
  WitnessReport rep;
  rep.ok = true;
  for (int b : model.binaries()) rep.y[model.vars[b].name] = point[b] == 1;
  for (const auto& c : model.constraints) {
    RowCheck r{c.label, false, row_lhs(c, point), c.rhs};
    r.satisfied = row_holds(c, r.lhs);
    rep.ok = rep.ok && r.satisfied;
    rep.rows.push_back(std::move(r));
  }
  for (const auto& xi : x)
    if (sgn(xi) < 0) rep.ok = false;
  if (sgn(z) < 0) rep.ok = false;
  return rep;
}

Valuation fourteen_item_reduction_check(const Valuation& v) {
  const int m = static_cast<int>(v.size());
  if (m <= kItems) return v;

  std::vector<Rational> x = v.values;
  auto fail = [](const std::string& label, const std::string& why) {
    throw ConstraintViolation(label, "constraint " + label + " violated: " + why);
  };
  for (int i = 0; i + 1 < m; ++i)
    if (x[i] < x[i + 1]) fail("o" + std::to_string(i + 1), "items are not in descending order");
  if (sum(x) != 20) fail("a0", "item values do not sum to 20");

  // a, b, c, d, f rows only involve x1..x14 apart from a0.
  static const MilpModel model = build_model();
  std::vector<Rational> point(model.vars.size(), Rational(0));
  for (int i = 0; i < kItems; ++i) point[i] = x[i];
  minimal_binaries(model, point);
  for (const auto& c : model.constraints) {
    const char g = c.label[0];
    if (c.label == "a0" || (g != 'a' && g != 'b' && g != 'c' && g != 'd' && g != 'f')) continue;
    if (!row_holds(c, row_lhs(c, point))) fail(c.label, "precondition");
  }

  while (static_cast<int>(x.size()) > kItems) {
    x.front() += x.back();
    x.pop_back();
    if (x[0] < x[1]) fail("o1", "after merging");
    if (sum(x) != 20) fail("a0", "after merging");
    if (x[0] > 5) fail("a1", "after merging");
    if (x[0] > 4) fail("b1", "after merging");
  }
  return Valuation(std::move(x));
}

}  // namespace fairshare
