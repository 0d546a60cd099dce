#include "fairshare/nested.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#include "detail/scaled.hpp"
#include "fairshare/errors.hpp"
#include "fairshare/picking.hpp"

namespace fairshare {

namespace {

void check_q(int n, int q) {
  if (n < 1) throw std::invalid_argument("nested share needs n >= 1");
  if (q < 1 || q > n)
    throw std::invalid_argument("nested share needs 1 <= q <= n (got q=" + std::to_string(q) +
                                ", n=" + std::to_string(n) + ")");
}

// Prefix sums over sorted values; suffix sum of the last t items is
// pre[m] - pre[m - t].
template <class Int>
struct Sums {
  std::vector<Int> pre;
  int m = 0;

  explicit Sums(const std::vector<Int>& s) : m(static_cast<int>(s.size())) {
    pre.assign(s.size() + 1, Int(0));
    for (int j = 0; j < m; ++j) pre[j + 1] = pre[j] + s[j];
  }
  Int range(int a, int b) const { return pre[b] - pre[a]; }
  Int last(int t) const { return pre[m] - pre[m - t]; }
};

// Fills rows 1..n-1 of the table for threshold c and returns the column of
// row n-1 from which the middle bin reaches c, or -1.
template <class Int>
int ns_dp(const Sums<Int>& sums, int n, int q, const Int& c, NsDpTable& table) {
  const int m = sums.m;
  table.t.assign(n, std::vector<int>(m + 1, -1));
  table.from.assign(n, std::vector<int>(m + 1, -1));
  table.t[0][0] = 0;

  // Suffix sums as a nondecreasing sequence for lower_bound.
  std::vector<Int> last(m + 1);
  for (int t = 0; t <= m; ++t) last[t] = sums.last(t);

  for (int i = 1; i < n; ++i) {
    const bool diagonal = i <= n - q;
    const int jlo = diagonal ? i : 0;
    const int jhi = diagonal ? i : m;
    for (int j = jlo; j <= jhi; ++j) {
      const int plo = diagonal ? i - 1 : 0;
      const int phi = diagonal ? i - 1 : j;
      int best = -1, best_from = -1;
      for (int jp = plo; jp <= phi; ++jp) {
        const int t0 = table.t[i - 1][jp];
        if (t0 < 0 || j + t0 > m) continue;
        // Least t in [t0, m - j] with range(jp, j) + last(t) - last(t0) >= c.
        const Int need = c - sums.range(jp, j) + last[t0];
        auto it = std::lower_bound(last.begin() + t0, last.begin() + (m - j) + 1, need);
        if (it == last.begin() + (m - j) + 1) continue;
        const int t = static_cast<int>(it - last.begin());
        if (best < 0 || t < best) {
          best = t;
          best_from = jp;
        }
      }
      table.t[i][j] = best;
      table.from[i][j] = best_from;
    }
  }

  const bool diagonal = n - 1 <= n - q;
  const int jlo = diagonal ? n - 1 : 0;
  const int jhi = diagonal ? n - 1 : m;
  for (int j = jlo; j <= jhi; ++j) {
    const int t = table.t[n - 1][j];
    if (t < 0 || j + t > m) continue;
    if (m - t <= n - q) continue;  // the prefix must reach past n-q items
    if (sums.range(j, m - t) >= c) return j;
  }
  return -1;
}

NsPartitionShape shape_from_table(const NsDpTable& table, int m, int n, int q, int last_col) {
  NsPartitionShape s;
  s.n = n;
  s.q = q;
  s.m = m;
  std::vector<int> cols(n, 0), ts(n, 0);
  int j = last_col;
  for (int i = n - 1; i >= 1; --i) {
    cols[i] = j;
    ts[i] = table.t[i][j];
    j = table.from[i][j];
  }
  const int t_last = n > 1 ? ts[n - 1] : 0;
  s.k = m - t_last;
  for (int i = 1; i < n; ++i) {
    s.prefix_cuts.push_back(cols[i]);
    s.suffix_cuts.push_back(ts[i]);
  }
  s.prefix_cuts.push_back(s.k);
  s.suffix_cuts.push_back(m - s.k);
  return s;
}

// Singletons e_1..e_{n-1} and everything else in the last bin.
NsPartitionShape canonical_shape(int m, int n, int q) {
  NsPartitionShape s;
  s.n = n;
  s.q = q;
  s.m = m;
  s.k = m;
  for (int j = 1; j < n; ++j) s.prefix_cuts.push_back(std::min(j, m));
  s.prefix_cuts.push_back(m);
  s.suffix_cuts.assign(n, 0);
  return s;
}

// Bundle i gets rank i for i < m; the rest are empty.
Partition small_partition(int m, int n) {
  Partition p;
  p.bundles.resize(n);
  for (int r = 0; r < m && r < n; ++r) p.bundles[r].push_back(r);
  for (int r = n; r < m; ++r) p.bundles[n - 1].push_back(r);
  return p;
}

template <class Int>
std::optional<NsPartitionShape> feasible_scaled(const std::vector<Int>& s, int n, int q, const Int& c) {
  const int m = static_cast<int>(s.size());
  if (c <= 0) return canonical_shape(m, n, q);
  Sums<Int> sums(s);
  NsDpTable table;
  const int col = ns_dp(sums, n, q, c, table);
  if (col < 0) return std::nullopt;
  return shape_from_table(table, m, n, q, col);
}

// Largest integer c in [0, total/n] with a feasible nested partition.
template <class Int>
NsPartitionShape best_shape(const std::vector<Int>& s, int n, int q) {
  Sums<Int> sums(s);
  Int lo = 0;
  Int hi = sums.pre.back() / Int(n) + Int(1);  // infeasible: some bin <= average
  while (hi - lo > Int(1)) {
    const Int mid = lo + (hi - lo) / Int(2);
    if (feasible_scaled(s, n, q, mid)) lo = mid;
    else hi = mid;
  }
  return *feasible_scaled(s, n, q, lo);
}

std::vector<Rational> values_of(const OrderedValuation& ov) { return ov.sorted; }

NsResult result_from_shape(const Valuation& v, const OrderedValuation& ov, const NsPartitionShape& shape) {
  NsResult r;
  r.witness = to_item_ids(shape.bundles_by_rank(), ov);
  r.value = min_bundle_value(v, r.witness);
  r.shape = shape;
  return r;
}

std::optional<NsResult> small_case(const Valuation& v, const OrderedValuation& ov, int n, int q) {
  const int m = static_cast<int>(v.size());
  if (m > n) return std::nullopt;
  NsResult r;
  r.witness = to_item_ids(small_partition(m, n), ov);
  r.value = m < n ? Rational(0) : ov.sorted[n - 1];
  if (m == n) r.shape = canonical_shape(m, n, q);
  return r;
}

}  // namespace

Partition NsPartitionShape::bundles_by_rank() const {
  Partition p;
  p.bundles.resize(n);
  int pa = 0, ta = 0;
  for (int j = 0; j < n; ++j) {
    for (int r = pa; r < prefix_cuts[j]; ++r) p.bundles[j].push_back(r);
    for (int r = m - suffix_cuts[j]; r < m - ta; ++r) p.bundles[j].push_back(r);
    pa = prefix_cuts[j];
    ta = suffix_cuts[j];
  }
  return p;
}

void NsPartitionShape::check() const {
  if (static_cast<int>(prefix_cuts.size()) != n || static_cast<int>(suffix_cuts.size()) != n)
    throw std::invalid_argument("shape needs n prefix and n suffix cuts");
  if (k <= n - q || k > m) throw std::invalid_argument("prefix length k must satisfy n-q < k <= m");
  int prev = 0;
  for (int j = 0; j < n; ++j) {
    if (prefix_cuts[j] < prev) throw std::invalid_argument("prefix cuts must be nondecreasing");
    if (j < n - q && prefix_cuts[j] != j + 1)
      throw std::invalid_argument("the first n-q prefix parts must be singletons");
    prev = prefix_cuts[j];
  }
  if (prefix_cuts.back() != k) throw std::invalid_argument("last prefix cut must equal k");
  prev = 0;
  for (int j = 0; j < n; ++j) {
    if (suffix_cuts[j] < prev) throw std::invalid_argument("suffix cuts must be nondecreasing");
    prev = suffix_cuts[j];
  }
  if (suffix_cuts.back() != m - k) throw std::invalid_argument("suffix cuts must cover the m-k suffix items");
}

std::optional<NsPartitionShape> ns_shape_of(const Partition& by_rank, int m, int n, int q) {
  check_q(n, q);
  if (static_cast<int>(by_rank.size()) != n) return std::nullopt;
  Partition sorted = by_rank;
  for (auto& b : sorted.bundles) std::sort(b.begin(), b.end());
  std::vector<int> own(m, -1);
  for (int b = 0; b < n; ++b)
    for (ItemId r : by_rank.bundles[b]) {
      if (r < 0 || r >= m || own[r] >= 0) return std::nullopt;
      own[r] = b;
    }
  if (std::count(own.begin(), own.end(), -1) > 0) return std::nullopt;

  for (int k = std::max(n - q + 1, 1); k <= m; ++k) {
    bool ok = true;
    for (int r = 0; r < k && ok; ++r) {
      if (r < n - q) ok = own[r] == r;
      else if (r > 0) ok = own[r] >= own[r - 1] && own[r] >= n - q;
      else ok = true;
    }
    for (int r = k + 1; r < m && ok; ++r) ok = own[r] <= own[r - 1];
    if (!ok) continue;

    NsPartitionShape s;
    s.n = n;
    s.q = q;
    s.m = m;
    s.k = k;
    s.prefix_cuts.assign(n, 0);
    s.suffix_cuts.assign(n, 0);
    for (int j = 0; j < n; ++j) {
      int pc = j > 0 ? s.prefix_cuts[j - 1] : 0;
      while (pc < k && own[pc] == j) ++pc;
      s.prefix_cuts[j] = pc;
      int tc = j > 0 ? s.suffix_cuts[j - 1] : 0;
      while (tc < m - k && own[m - 1 - tc] == j) ++tc;
      s.suffix_cuts[j] = tc;
    }
    if (s.prefix_cuts.back() != k || s.suffix_cuts.back() != m - k) continue;
    try {
      s.check();
    } catch (const std::invalid_argument&) {
      continue;
    }
    if (s.bundles_by_rank() == sorted) return s;
  }
  return std::nullopt;
}

std::vector<Rational> ns_candidates(const Valuation& v, int max_items) {
  const int m = static_cast<int>(v.size());
  if (m > max_items)
    throw ScaleExceeded("candidate enumeration limited to " + std::to_string(max_items) + " items");
  const OrderedValuation ov = order_values(v);
  const std::vector<std::vector<Rational>> groups{ov.sorted};
  return detail::with_scaled(std::span<const std::vector<Rational>>(groups), 4, [&](const auto& sc) {
    using Int = std::decay_t<decltype(sc.groups[0][0])>;
    Sums<Int> sums(sc.groups[0]);
    std::vector<Int> all;
    // Intervals [a,b) and [c,d) with b <= c; an empty second interval is c == d == m.
    for (int a = 0; a <= m; ++a)
      for (int b = a; b <= m; ++b) {
        const Int first = sums.range(a, b);
        all.push_back(first);
        for (int c = b; c < m; ++c)
          for (int d = c + 1; d <= m; ++d) all.push_back(first + sums.range(c, d));
      }
    std::sort(all.begin(), all.end());
    all.erase(std::unique(all.begin(), all.end()), all.end());
    std::vector<Rational> out;
    out.reserve(all.size());
    for (const auto& x : all) out.push_back(unscale(detail::to_big(x), sc.scale));
    return out;
  });
}

std::optional<NsFeasible> ns_feasible_partition(const Valuation& v, int n, int q, const Rational& c) {
  check_q(n, q);
  const int m = static_cast<int>(v.size());
  const OrderedValuation ov = order_values(v);
  if (m <= n) {
    const Partition p = small_partition(m, n);
    if (min_bundle_value(Valuation(ov.sorted), p) < c) return std::nullopt;
    return NsFeasible{canonical_shape(m, n, q), to_item_ids(p, ov)};
  }
  std::vector<std::vector<Rational>> groups{ov.sorted, {c}};
  return detail::with_scaled(std::span<const std::vector<Rational>>(groups), 4,
                             [&](const auto& sc) -> std::optional<NsFeasible> {
                               const auto shape = feasible_scaled(sc.groups[0], n, q, sc.groups[1][0]);
                               if (!shape) return std::nullopt;
                               return NsFeasible{*shape, to_item_ids(shape->bundles_by_rank(), ov)};
                             });
}

NsResult ns_share(const Valuation& v, int n, int q) {
  check_q(n, q);
  const OrderedValuation ov = order_values(v);
  if (auto r = small_case(v, ov, n, q)) return *r;
  const std::vector<std::vector<Rational>> groups{values_of(ov)};
  const NsPartitionShape shape = detail::with_scaled(
      std::span<const std::vector<Rational>>(groups), 4,
      [&](const auto& sc) { return best_shape(sc.groups[0], n, q); });
  return result_from_shape(v, ov, shape);
}

NsResult ns_share_by_candidates(const Valuation& v, int n, int q) {
  check_q(n, q);
  const OrderedValuation ov = order_values(v);
  if (auto r = small_case(v, ov, n, q)) return *r;
  const std::vector<Rational> cands = ns_candidates(v);
  // cands[0] == 0 is always feasible.
  std::size_t lo = 0, hi = cands.size();
  while (hi - lo > 1) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (ns_feasible_partition(v, n, q, cands[mid])) lo = mid;
    else hi = mid;
  }
  const auto f = ns_feasible_partition(v, n, q, cands[lo]);
  return result_from_shape(v, ov, f->shape);
}

std::vector<Partition> ns_family(int m, int n, int q, std::size_t limit) {
  check_q(n, q);
  std::vector<Partition> out;
  if (m <= n) {
    out.push_back(small_partition(m, n));
    return out;
  }
  std::set<std::vector<Bundle>> seen;
  NsPartitionShape s;
  s.n = n;
  s.q = q;
  s.m = m;
  s.prefix_cuts.assign(n, 0);
  s.suffix_cuts.assign(n, 0);

  auto emit = [&] {
    Partition p = s.bundles_by_rank();
    if (seen.insert(p.bundles).second) {
      if (out.size() >= limit) throw ScaleExceeded("nested family exceeds " + std::to_string(limit) + " partitions");
      out.push_back(std::move(p));
    }
  };
  // Suffix cuts t_1..t_{n-1} over 0..m-k, t_n = m-k.
  auto suffix = [&](auto&& self, int j, int lo) -> void {
    if (j == n - 1) {
      s.suffix_cuts[j] = m - s.k;
      emit();
      return;
    }
    for (int t = lo; t <= m - s.k; ++t) {
      s.suffix_cuts[j] = t;
      self(self, j + 1, t);
    }
  };
  auto prefix = [&](auto&& self, int j, int lo) -> void {
    if (j == n - 1) {
      s.prefix_cuts[j] = s.k;
      suffix(suffix, 0, 0);
      return;
    }
    if (j < n - q) {
      s.prefix_cuts[j] = j + 1;
      self(self, j + 1, j + 1);
      return;
    }
    for (int i = lo; i <= s.k; ++i) {
      s.prefix_cuts[j] = i;
      self(self, j + 1, i);
    }
  };
  for (s.k = n - q + 1; s.k <= m; ++s.k) prefix(prefix, 0, 0);
  return out;
}

bool fully_intersecting(const Partition& p, const Partition& q) {
  if (p.size() != 3 || q.size() != 3) throw std::invalid_argument("fully_intersecting expects 3-partitions");
  for (const auto& a : p.bundles)
    for (const auto& b : q.bundles) {
      bool meet = false;
      for (ItemId x : a)
        if (std::find(b.begin(), b.end(), x) != b.end()) {
          meet = true;
          break;
        }
      if (!meet) return false;
    }
  return true;
}

namespace {

struct ThreeAgents {
  const Valuation* v[3];
  const Partition* p[3];
  Rational share[3];
  std::size_t m = 0;

  bool accepts(int agent, const Bundle& b) const { return bundle_value(*v[agent], b) >= share[agent]; }

  bool disjoint(const Bundle& a, const Bundle& b) const {
    for (ItemId x : a)
      if (std::find(b.begin(), b.end(), x) != b.end()) return false;
    return true;
  }

  Bundle rest(std::initializer_list<const Bundle*> taken) const {
    std::vector<bool> used(m, false);
    for (const Bundle* b : taken)
      for (ItemId x : *b) used[x] = true;
    Bundle out;
    for (std::size_t j = 0; j < m; ++j)
      if (!used[j]) out.push_back(static_cast<ItemId>(j));
    return out;
  }

  // Bundles per agent; unassigned items go to agent 0.
  std::optional<Allocation> attempt(std::vector<Bundle> bundles) const {
    const Bundle left = rest({&bundles[0], &bundles[1], &bundles[2]});
    bundles[0].insert(bundles[0].end(), left.begin(), left.end());
    for (int i = 0; i < 3; ++i)
      if (!accepts(i, bundles[i])) return std::nullopt;
    Allocation a = Allocation::from_agent_bundles(std::move(bundles));
    check_partition(a.partition, m);
    return a;
  }
};

}  // namespace

Ns3Allocation ns3_base_allocate_traced(const Valuation& v1, const Valuation& v2, const Valuation& v3,
                                       const Partition& p1, const Partition& p2, const Partition& p3) {
  ThreeAgents ctx{{&v1, &v2, &v3}, {&p1, &p2, &p3}, {}, v1.size()};
  for (int i = 0; i < 3; ++i) {
    if (ctx.p[i]->size() != 3) throw std::invalid_argument("each partition must have three bundles");
    check_partition(*ctx.p[i], ctx.m);
    ctx.share[i] = min_bundle_value(*ctx.v[i], *ctx.p[i]);
  }

  // Two bundles of P^b acceptable to a: c and a take acceptable ones, b the last.
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) {
      if (a == b) continue;
      const int c = 3 - a - b;
      const auto& pb = ctx.p[b]->bundles;
      for (int x = 0; x < 3; ++x) {
        if (!ctx.accepts(c, pb[x])) continue;
        for (int y = 0; y < 3; ++y) {
          if (y == x || !ctx.accepts(a, pb[y])) continue;
          int acceptable_to_a = 0;
          for (const auto& bb : pb) acceptable_to_a += ctx.accepts(a, bb);
          if (acceptable_to_a < 2) continue;
          std::vector<Bundle> out(3);
          out[c] = pb[x];
          out[a] = pb[y];
          out[b] = pb[3 - x - y];
          if (auto r = ctx.attempt(out)) return {*r, Ns3Rule::TwoAcceptable};
        }
      }
    }

  // X in P^b unacceptable to a, Y in P^a disjoint from X, R the rest.
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) {
      if (a == b) continue;
      const int c = 3 - a - b;
      for (const auto& x : ctx.p[b]->bundles) {
        if (ctx.accepts(a, x)) continue;
        for (const auto& y : ctx.p[a]->bundles) {
          if (!ctx.disjoint(x, y)) continue;
          const Bundle r = ctx.rest({&x, &y});
          std::vector<Bundle> out(3);
          const int chooser = ctx.accepts(c, x) ? b : c;
          out[chooser == b ? c : b] = x;
          const bool takes_y = bundle_value(*ctx.v[chooser], y) >= bundle_value(*ctx.v[chooser], r);
          out[chooser] = takes_y ? y : r;
          out[a] = takes_y ? r : y;
          if (auto res = ctx.attempt(out)) return {*res, Ns3Rule::CutAndChoose};
        }
      }
    }

  // Two different bundles of P^i acceptable to the two others respectively.
  for (int i = 0; i < 3; ++i) {
    const int j = (i + 1) % 3, k = (i + 2) % 3;
    const auto& pi = ctx.p[i]->bundles;
    for (int x = 0; x < 3; ++x)
      for (int y = 0; y < 3; ++y) {
        if (x == y || !ctx.accepts(j, pi[x]) || !ctx.accepts(k, pi[y])) continue;
        std::vector<Bundle> out(3);
        out[j] = pi[x];
        out[k] = pi[y];
        out[i] = pi[3 - x - y];
        if (auto r = ctx.attempt(out)) return {*r, Ns3Rule::DistinctBundles};
      }
  }

  // Each agent's bundle acceptable to both others, if pairwise disjoint.
  std::vector<Bundle> own(3);
  bool found_all = true;
  for (int i = 0; i < 3 && found_all; ++i) {
    const int j = (i + 1) % 3, k = (i + 2) % 3;
    found_all = false;
    for (const auto& b : ctx.p[i]->bundles)
      if (ctx.accepts(j, b) && ctx.accepts(k, b)) {
        own[i] = b;
        found_all = true;
        break;
      }
  }
  if (found_all && ctx.disjoint(own[0], own[1]) && ctx.disjoint(own[0], own[2]) &&
      ctx.disjoint(own[1], own[2]))
    if (auto r = ctx.attempt(own)) return {*r, Ns3Rule::OwnBundles};

  throw InternalError("case analysis exhausted");
}

Allocation ns3_base_allocate(const Valuation& v1, const Valuation& v2, const Valuation& v3,
                             const Partition& p1, const Partition& p2, const Partition& p3) {
  return ns3_base_allocate_traced(v1, v2, v3, p1, p2, p3).allocation;
}

const char* to_string(Ns3Rule r) {
  switch (r) {
    case Ns3Rule::TwoAcceptable: return "two-acceptable";
    case Ns3Rule::CutAndChoose: return "cut-and-choose";
    case Ns3Rule::DistinctBundles: return "distinct-bundles";
    case Ns3Rule::OwnBundles: return "own-bundles";
  }
  return "?";
}

namespace {

// Agent values on ranks [lo, hi) of an ordered instance.
Valuation slice(const Valuation& v, int lo, int hi) {
  return Valuation(std::vector<Rational>(v.values.begin() + lo, v.values.begin() + hi));
}

Bundle shift(const Bundle& b, int lo) {
  Bundle out;
  for (ItemId x : b) out.push_back(x + lo);
  return out;
}

Allocation ns_allocate_ordered(const Instance& ord, int q) {
  const int n = ord.n;
  std::vector<Rational> shares(n);
  for (int i = 0; i < n; ++i) shares[i] = ns_share(ord.valuations[i], n, q).value;

  std::vector<int> active(n);
  for (int i = 0; i < n; ++i) active[i] = i;
  std::vector<Bundle> bundles(n);
  int lo = 0, hi = ord.m;

  while (static_cast<int>(active.size()) > q) {
    Bundle bin;
    if (lo < hi) bin.push_back(lo);
    const int first = lo;
    int end = hi;
    int taker = -1;
    for (;;) {
      for (int a : active)
        if (bundle_value(ord.valuations[a], bin) >= shares[a]) {
          taker = a;
          break;
        }
      if (taker >= 0) break;
      if (end - 1 <= first) throw InternalError("no remaining agent desires the whole remainder");
      bin.push_back(--end);
    }
    bundles[taker] = bin;
    active.erase(std::find(active.begin(), active.end(), taker));
    lo = std::min(first + 1, end);
    hi = end;

    for (int a : active) {
      const Rational now = ns_share(slice(ord.valuations[a], lo, hi), static_cast<int>(active.size()), q).value;
      if (now < shares[a])
        throw InternalError("remaining nested share of agent " + std::to_string(a) + " dropped below the original");
    }
  }

  const int left = static_cast<int>(active.size());
  if (left == 1) {
    for (int r = lo; r < hi; ++r) bundles[active[0]].push_back(r);
  } else if (left == 2) {
    const int a = active[0], b = active[1];
    const Partition cut = ns_share(slice(ord.valuations[a], lo, hi), 2, 2).witness;
    const Bundle x = shift(cut.bundles[0], lo), y = shift(cut.bundles[1], lo);
    const bool b_takes_x = bundle_value(ord.valuations[b], x) >= bundle_value(ord.valuations[b], y);
    bundles[b] = b_takes_x ? x : y;
    bundles[a] = b_takes_x ? y : x;
  } else {
    std::vector<Valuation> sub;
    std::vector<Partition> parts;
    for (int a : active) {
      sub.push_back(slice(ord.valuations[a], lo, hi));
      parts.push_back(ns_share(sub.back(), 3, 3).witness);
    }
    const Allocation base = ns3_base_allocate(sub[0], sub[1], sub[2], parts[0], parts[1], parts[2]);
    for (int i = 0; i < 3; ++i) bundles[active[i]] = shift(base.bundle_of(i), lo);
  }
  return Allocation::from_agent_bundles(std::move(bundles));
}

}  // namespace

Allocation ns_allocate(const Instance& inst, int q) {
  inst.check();
  check_q(inst.n, q);
  if (q > 3) throw UnsupportedShare("nested share allocation is only available for q <= 3 (feasibility unproven)");

  const Allocation alloc = ordered_reduction(inst, [q](const Instance& ord) { return ns_allocate_ordered(ord, q); });

  std::vector<Rational> shares(inst.n);
  for (int i = 0; i < inst.n; ++i) shares[i] = ns_share(inst.valuations[i], inst.n, q).value;
  const AllocationReport report = validate_allocation(inst, alloc, shares);
  if (!report.acceptable) throw InternalError("nested allocation left an agent below her share");
  return alloc;
}

WorstCase worstcase_instance(int k, int max_items) {
  if (k < 1) throw std::invalid_argument("worst-case construction needs k >= 1");
  long n = 0, pow4 = 1;
  for (int a = 0; a <= k; ++a, pow4 *= 4) {
    n += pow4;
    if (3 * n > max_items)
      throw ScaleExceeded("worst-case instance for k=" + std::to_string(k) + " exceeds " +
                          std::to_string(max_items) + " items");
  }

  // Item ids: group by group, large items first.
  std::vector<Rational> values;
  std::vector<std::vector<ItemId>> large(k + 1), small(k + 1);
  pow4 = 1;
  for (int a = 0; a <= k; ++a, pow4 *= 4) {
    const Rational lo_val = Rational(a) / (2 * k), hi = 1 - lo_val;
    for (long c = 0; c < pow4; ++c) {
      large[a].push_back(static_cast<ItemId>(values.size()));
      values.push_back(hi);
    }
    for (long c = 0; c < 2 * pow4; ++c) {
      small[a].push_back(static_cast<ItemId>(values.size()));
      values.push_back(lo_val);
    }
  }
  for (auto& x : values) x.canonicalize();

  WorstCase w;
  w.v = Valuation(std::move(values));
  w.n = static_cast<int>(n);
  for (int a = 1; a <= k; ++a)
    for (std::size_t p = 0; p < small[a - 1].size(); ++p)
      w.certified.bundles.push_back({large[a][2 * p], large[a][2 * p + 1], small[a - 1][p]});
  const auto& tail = small[k];
  std::size_t t = 0;
  for (; t + 2 < tail.size(); t += 3) w.certified.bundles.push_back({tail[t], tail[t + 1], tail[t + 2]});
  Bundle last{large[0][0]};
  for (; t < tail.size(); ++t) last.push_back(tail[t]);
  w.certified.bundles.push_back(last);
  for (auto& b : w.certified.bundles) std::sort(b.begin(), b.end());
  return w;
}

}  // namespace fairshare
