#include "fairshare/ordinal.hpp"

#include <omp.h>

#include <algorithm>
#include <set>
#include <stdexcept>

#include "detail/scaled.hpp"
#include "fairshare/errors.hpp"
#include "fairshare/nested.hpp"

namespace fairshare {

namespace {

void check_epsilon(const Rational& eps) {
  if (sgn(eps) <= 0) throw std::invalid_argument("epsilon must be positive");
}

// m < 3/eps
bool exact_branch(int m, const Rational& eps) { return Rational(m) * eps < 3; }

Partition by_turns(const std::vector<int>& owner, int n) {
  Partition p;
  p.bundles.resize(n);
  for (std::size_t r = 0; r < owner.size(); ++r) p.bundles[owner[r]].push_back(static_cast<ItemId>(r));
  return p;
}

// Best prefix mask and suffix length, compared by value desc, mask asc, L asc.
template <class Int>
struct Candidate {
  Int value{};
  std::uint64_t mask = 0;
  int len = 0;
  bool set = false;

  bool better_than(const Candidate& o) const {
    if (!o.set) return set;
    if (!set) return false;
    if (value != o.value) return value > o.value;
    if (mask != o.mask) return mask < o.mask;
    return len < o.len;
  }
};

template <class Int>
struct PrefixSearch {
  std::vector<Int> top;  // k most valuable
  std::vector<Int> suf;  // suf[L] = value of the last L items of S
  Int top_total{};
  Int s_total{};
  int s_size = 0;

  Candidate<Int> evaluate(std::uint64_t mask) const {
    Int p1 = 0;
    for (std::size_t i = 0; i < top.size(); ++i)
      if (mask >> i & 1) p1 += top[i];
    const Int p2 = top_total - p1;
    // Largest L with B_1(L) <= B_2(L); B_1 - B_2 grows with L.
    auto b1 = [&](int L) -> Int { return p1 + suf[L]; };
    auto b2 = [&](int L) -> Int { return p2 + s_total - suf[L]; };
    int lo = 0, hi = s_size;
    if (b1(0) > b2(0)) {
      hi = 0;
    } else {
      while (lo < hi) {
        const int mid = (lo + hi + 1) / 2;
        if (b1(mid) <= b2(mid)) lo = mid;
        else hi = mid - 1;
      }
    }
    Candidate<Int> best;
    for (int L = lo; L <= std::min(lo + 1, s_size); ++L) {
      Candidate<Int> c{std::min(b1(L), b2(L)), mask, L, true};
      if (c.better_than(best)) best = c;
    }
    return best;
  }
};

template <class Int>
PrefixSearch<Int> make_search(const std::vector<Int>& sorted, int k) {
  PrefixSearch<Int> s;
  const int m = static_cast<int>(sorted.size());
  s.top.assign(sorted.begin(), sorted.begin() + k);
  for (const auto& x : s.top) s.top_total += x;
  s.s_size = m - k;
  s.suf.assign(s.s_size + 1, Int(0));
  for (int L = 1; L <= s.s_size; ++L) s.suf[L] = s.suf[L - 1] + sorted[m - L];
  s.s_total = s.suf[s.s_size];
  return s;
}

template <class Int>
Candidate<Int> search_serial(const PrefixSearch<Int>& s) {
  Candidate<Int> best;
  const std::uint64_t count = std::uint64_t(1) << s.top.size();
  for (std::uint64_t mask = 0; mask < count; ++mask) {
    const auto c = s.evaluate(mask);
    if (c.better_than(best)) best = c;
  }
  return best;
}

template <class Int>
Candidate<Int> search_parallel(const PrefixSearch<Int>& s) {
  const std::int64_t count = std::int64_t(1) << s.top.size();
  std::vector<Candidate<Int>> per_thread(omp_get_max_threads());
#pragma omp parallel
  {
    Candidate<Int> local;
#pragma omp for schedule(static)
    for (std::int64_t mask = 0; mask < count; ++mask) {
      const auto c = s.evaluate(static_cast<std::uint64_t>(mask));
      if (c.better_than(local)) local = c;
    }
    per_thread[omp_get_thread_num()] = local;
  }
  Candidate<Int> best;
  for (const auto& c : per_thread)
    if (c.better_than(best)) best = c;
  return best;
}

Ptas2Result ptas2_impl(const Valuation& v, const Rational& eps, const OracleLimits& limits, bool parallel) {
  check_epsilon(eps);
  const int m = static_cast<int>(v.size());
  Ptas2Result r;
  if (exact_branch(m, eps)) {
    const MmsResult mms = mms_exact(v, 2, limits);
    r.value = mms.value;
    r.best = mms.witness;
    r.branch = Ptas2Result::Branch::Exact;
    return r;
  }
  const OrderedValuation ov = order_values(v);
  const Rational total = v.total();
  if (3 * ov.sorted[0] > 2 * total) {
    r.value = total - ov.sorted[0];
    Partition p;
    p.bundles.resize(2);
    p.bundles[0].push_back(0);
    for (int j = 1; j < m; ++j) p.bundles[1].push_back(j);
    r.best = to_item_ids(p, ov);
    r.branch = Ptas2Result::Branch::BigItem;
    return r;
  }

  const int k = ptas2_k(eps);
  if (k > 40) throw ScaleExceeded("ptas2 prefix enumeration needs 2^" + std::to_string(k) + " subsets");
  const std::vector<std::vector<Rational>> groups{ov.sorted};
  const auto [mask, len] = detail::with_scaled(
      std::span<const std::vector<Rational>>(groups), 4, [&](const auto& sc) {
        const auto search = make_search(sc.groups[0], k);
        const auto best = parallel ? search_parallel(search) : search_serial(search);
        return std::pair<std::uint64_t, int>(best.mask, best.len);
      });

  Partition p;
  p.bundles.resize(2);
  for (int i = 0; i < k; ++i) p.bundles[mask >> i & 1 ? 0 : 1].push_back(i);
  for (int j = k; j < m; ++j) p.bundles[j >= m - len ? 0 : 1].push_back(j);
  for (auto& b : p.bundles) std::sort(b.begin(), b.end());
  r.best = to_item_ids(p, ov);
  r.value = min_bundle_value(v, r.best);
  r.branch = Ptas2Result::Branch::Enumerated;
  return r;
}

}  // namespace

int ptas2_k(const Rational& epsilon) {
  check_epsilon(epsilon);
  const Rational x = Rational(3) / (2 * epsilon);
  return static_cast<int>(ceil(x).get_si());
}

Ptas2Result ptas2_share(const Valuation& v, const Rational& epsilon, const OracleLimits& limits) {
  return ptas2_impl(v, epsilon, limits, true);
}

Ptas2Result ptas2_share_serial(const Valuation& v, const Rational& epsilon, const OracleLimits& limits) {
  return ptas2_impl(v, epsilon, limits, false);
}

bool in_ptas2_family(const Partition& by_rank, int m, const Rational& epsilon) {
  check_epsilon(epsilon);
  if (by_rank.size() != 2) return false;
  check_partition(by_rank, static_cast<std::size_t>(m));
  if (exact_branch(m, epsilon)) return true;
  const int k = std::min(ptas2_k(epsilon), m);
  for (const auto& b : by_rank.bundles) {
    // b intersected with ranks k..m-1 must be m-L..m-1 for some L.
    std::vector<ItemId> tail;
    for (ItemId r : b)
      if (r >= k) tail.push_back(r);
    std::sort(tail.begin(), tail.end());
    bool suffix = true;
    for (std::size_t i = 0; i < tail.size(); ++i)
      if (tail[i] != m - static_cast<int>(tail.size()) + static_cast<int>(i)) suffix = false;
    if (suffix) return true;
  }
  return false;
}

Allocation ptas2_allocate(const Valuation& v1, const Valuation& v2, const Rational& epsilon,
                          const OracleLimits& limits) {
  if (v1.size() != v2.size()) throw std::invalid_argument("valuations cover different item sets");
  const Ptas2Result cut = ptas2_share(v1, epsilon, limits);
  const Bundle& b1 = cut.best.bundles[0];
  const Bundle& b2 = cut.best.bundles[1];
  const bool two_takes_b1 = bundle_value(v2, b1) >= bundle_value(v2, b2);
  Allocation a = Allocation::from_agent_bundles({two_takes_b1 ? b2 : b1, two_takes_b1 ? b1 : b2});

  const Rational s2 = ptas2_share(v2, epsilon, limits).value;
  if (bundle_value(v1, a.bundle_of(0)) < cut.value || bundle_value(v2, a.bundle_of(1)) < s2)
    throw InternalError("ptas2 allocation left an agent below her share");
  return a;
}

const char* to_string(Ptas2Result::Branch b) {
  switch (b) {
    case Ptas2Result::Branch::Exact: return "exact";
    case Ptas2Result::Branch::BigItem: return "big-item";
    case Ptas2Result::Branch::Enumerated: return "enumerated";
  }
  return "?";
}

std::vector<Partition> materialize(const PartitionFamily& fam, int m, int n, std::size_t limit) {
  if (n < 1) throw std::invalid_argument("family needs n >= 1");
  struct Visitor {
    int m, n;
    std::size_t limit;
    std::vector<Partition> operator()(const family::Complete&) const { return all_partitions(m, n, limit); }
    std::vector<Partition> operator()(const family::Single& s) const {
      if (static_cast<int>(s.partition.size()) != n) throw std::invalid_argument("partition has the wrong bundle count");
      check_partition(s.partition, static_cast<std::size_t>(m));
      return {s.partition};
    }
    std::vector<Partition> operator()(const family::RoundRobin&) const {
      std::vector<int> owner(m);
      for (int r = 0; r < m; ++r) owner[r] = r % n;
      return {by_turns(owner, n)};
    }
    std::vector<Partition> operator()(const family::Picking& p) const {
      if (p.order.n != n) throw std::invalid_argument("picking order is for a different number of agents");
      p.order.check(static_cast<std::size_t>(m));
      std::vector<int> owner(m);
      for (int r = 0; r < m; ++r) owner[r] = p.order.turns[r] - 1;
      return {by_turns(owner, n)};
    }
    std::vector<Partition> operator()(const family::Ptas2& p) const {
      if (n != 2) throw UnsupportedShare("the ptas2 family is defined for two agents only");
      check_epsilon(p.epsilon);
      if (exact_branch(m, p.epsilon)) return all_partitions(m, n, limit);
      const int k = ptas2_k(p.epsilon);
      if (k >= 63 || (std::uint64_t(1) << k) * static_cast<std::uint64_t>(m - k + 1) > limit)
        throw ScaleExceeded("ptas2 family too large to materialize");
      std::set<std::vector<Bundle>> seen;
      std::vector<Partition> out;
      for (std::uint64_t mask = 0; mask < (std::uint64_t(1) << k); ++mask)
        for (int len = 0; len <= m - k; ++len) {
          Partition q;
          q.bundles.resize(2);
          for (int i = 0; i < k; ++i) q.bundles[mask >> i & 1 ? 0 : 1].push_back(i);
          for (int j = k; j < m; ++j) q.bundles[j >= m - len ? 0 : 1].push_back(j);
          if (seen.insert(q.bundles).second) out.push_back(std::move(q));
        }
      return out;
    }
    std::vector<Partition> operator()(const family::Nested& f) const { return ns_family(m, n, f.q, limit); }
  };
  return std::visit(Visitor{m, n, limit}, fam);
}

FamilyResult eval_family(const Valuation& v, int n, const PartitionFamily& fam, const OracleLimits& limits) {
  const int m = static_cast<int>(v.size());
  if (std::holds_alternative<family::Complete>(fam)) {
    MmsResult r = mms_exact(v, n, limits);
    return {r.value, r.witness};
  }
  if (const auto* p = std::get_if<family::Ptas2>(&fam)) {
    if (n != 2) throw UnsupportedShare("the ptas2 family is defined for two agents only");
    Ptas2Result r = ptas2_share(v, p->epsilon, limits);
    return {r.value, r.best};
  }
  if (const auto* f = std::get_if<family::Nested>(&fam)) {
    NsResult r = ns_share(v, n, f->q);
    return {r.value, r.witness};
  }
  const std::vector<Partition> parts = materialize(fam, m, n);
  return family_eval_bruteforce(v, parts);
}

}  // namespace fairshare
