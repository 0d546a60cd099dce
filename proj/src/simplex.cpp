#include "fairshare/simplex.hpp"

#include <stdexcept>

namespace fairshare {

namespace {

struct Tableau {
  int rows = 0;
  int cols = 0;  // excluding rhs
  std::vector<std::vector<Rational>> a;  // rows x (cols + 1), rhs last
  std::vector<Rational> obj;             // reduced costs, then -value
  std::vector<int> basis;
  std::uint64_t pivots = 0;

  void pivot(int p, int q) {
    ++pivots;
    std::vector<Rational>& prow = a[p];
    const Rational inv = 1 / prow[q];
    std::vector<int> nz;
    for (int j = 0; j <= cols; ++j)
      if (sgn(prow[j]) != 0) {
        prow[j] *= inv;
        nz.push_back(j);
      }
    auto eliminate = [&](std::vector<Rational>& row) {
      if (sgn(row[q]) == 0) return;
      const Rational f = row[q];
      for (int j : nz) row[j] -= f * prow[j];
    };
    for (int i = 0; i < rows; ++i)
      if (i != p) eliminate(a[i]);
    eliminate(obj);
    basis[p] = q;
  }

  // Bland: least column with negative reduced cost, least basic index on
  // ratio ties. Returns false if unbounded.
  bool optimize(const std::vector<char>& allowed) {
    for (;;) {
      int q = -1;
      for (int j = 0; j < cols; ++j)
        if (allowed[j] && sgn(obj[j]) < 0) {
          q = j;
          break;
        }
      if (q < 0) return true;
      int p = -1;
      Rational best;
      for (int i = 0; i < rows; ++i) {
        if (sgn(a[i][q]) <= 0) continue;
        Rational ratio = a[i][cols] / a[i][q];
        if (p < 0 || ratio < best || (ratio == best && basis[i] < basis[p])) {
          p = i;
          best = std::move(ratio);
        }
      }
      if (p < 0) return false;
      pivot(p, q);
    }
  }

  void set_objective(const std::vector<Rational>& c) {
    obj.assign(cols + 1, Rational(0));
    for (int j = 0; j < cols; ++j) obj[j] = c[j];
    for (int i = 0; i < rows; ++i) {
      const Rational& cb = c[basis[i]];
      if (sgn(cb) == 0) continue;
      for (int j = 0; j <= cols; ++j)
        if (sgn(a[i][j]) != 0) obj[j] -= cb * a[i][j];
    }
  }
};

}  // namespace

LpResult solve_lp(const LpProblem& lp) {
  const int n = lp.num_vars;
  const int m = static_cast<int>(lp.rows.size());
  if (static_cast<int>(lp.cost.size()) != n) throw std::invalid_argument("cost vector has the wrong length");

  // Normalize to rhs >= 0, then count slack and artificial columns.
  std::vector<LpRow> rows = lp.rows;
  for (auto& r : rows)
    if (sgn(r.rhs) < 0) {
      r.rhs = -r.rhs;
      for (auto& [_, c] : r.coefs) c = -c;
      if (r.sense != Sense::Eq) r.sense = r.sense == Sense::Le ? Sense::Ge : Sense::Le;
    }
  int slacks = 0, artificials = 0;
  for (const auto& r : rows) {
    if (r.sense != Sense::Eq) ++slacks;
    if (r.sense != Sense::Le) ++artificials;
  }

  Tableau t;
  t.rows = m;
  t.cols = n + slacks + artificials;
  t.a.assign(m, std::vector<Rational>(t.cols + 1, Rational(0)));
  t.basis.assign(m, -1);
  int s = n, art = n + slacks;
  for (int i = 0; i < m; ++i) {
    const LpRow& r = rows[i];
    for (const auto& [j, c] : r.coefs) {
      if (j < 0 || j >= n) throw std::invalid_argument("lp row references an unknown column");
      t.a[i][j] += c;
    }
    t.a[i][t.cols] = r.rhs;
    if (r.sense == Sense::Le) {
      t.a[i][s] = 1;
      t.basis[i] = s++;
    } else {
      if (r.sense == Sense::Ge) t.a[i][s++] = -1;
      t.a[i][art] = 1;
      t.basis[i] = art++;
    }
  }

  std::vector<char> allowed(t.cols, 1);
  if (artificials > 0) {
    std::vector<Rational> c1(t.cols, Rational(0));
    for (int j = n + slacks; j < t.cols; ++j) c1[j] = 1;
    t.set_objective(c1);
    t.optimize(allowed);
    if (sgn(t.obj[t.cols]) != 0) {
      LpResult r;
      r.status = LpResult::Status::Infeasible;
      r.pivots = t.pivots;
      return r;
    }
    // Drive zero-level artificials out where possible; rows where that is
    // impossible are redundant and stay inert.
    for (int i = 0; i < m; ++i) {
      if (t.basis[i] < n + slacks) continue;
      for (int j = 0; j < n + slacks; ++j)
        if (sgn(t.a[i][j]) != 0) {
          t.pivot(i, j);
          break;
        }
    }
    for (int j = n + slacks; j < t.cols; ++j) allowed[j] = 0;
  }

  std::vector<Rational> c2(t.cols, Rational(0));
  for (int j = 0; j < n; ++j) c2[j] = lp.cost[j];
  t.set_objective(c2);
  LpResult r;
  if (!t.optimize(allowed)) {
    r.status = LpResult::Status::Unbounded;
    r.pivots = t.pivots;
    return r;
  }
  r.status = LpResult::Status::Optimal;
  r.x.assign(n, Rational(0));
  for (int i = 0; i < m; ++i)
    if (t.basis[i] < n) r.x[t.basis[i]] = t.a[i][t.cols];
  r.value = -t.obj[t.cols];
  r.pivots = t.pivots;
  return r;
}

bool lp_feasible(const LpProblem& lp, const std::vector<Rational>& x) {
  if (static_cast<int>(x.size()) != lp.num_vars) return false;
  for (const auto& xi : x)
    if (sgn(xi) < 0) return false;
  for (const auto& row : lp.rows) {
    Rational lhs = 0;
    for (const auto& [j, c] : row.coefs) lhs += c * x[j];
    const int cmp = ::cmp(lhs, row.rhs);
    if ((row.sense == Sense::Le && cmp > 0) || (row.sense == Sense::Ge && cmp < 0) ||
        (row.sense == Sense::Eq && cmp != 0))
      return false;
  }
  return true;
}

}  // namespace fairshare
