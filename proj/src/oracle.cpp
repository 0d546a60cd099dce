#include "fairshare/oracle.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "detail/scaled.hpp"
#include "fairshare/errors.hpp"

namespace fairshare {

namespace {

void guard_items(std::size_t m, const OracleLimits& limits, const char* what) {
  if (m > static_cast<std::size_t>(limits.max_items))
    throw ScaleExceeded(std::string(what) + ": m=" + std::to_string(m) + " exceeds the oracle limit of " +
                        std::to_string(limits.max_items) + " items");
}

// Branch and bound over item -> bundle assignments in descending value order.
template <class Int>
class MmsSearch {
 public:
  MmsSearch(const std::vector<Int>& values, int n, std::uint64_t max_nodes)
      : values_(values), n_(n), m_(static_cast<int>(values.size())), max_nodes_(max_nodes) {
    suffix_.assign(m_ + 1, Int(0));
    for (int r = m_ - 1; r >= 0; --r) suffix_[r] = suffix_[r + 1] + values_[r];
    sums_.assign(n_, Int(0));
    assign_.assign(m_, -1);
  }

  // Returns the optimum and stores the lexicographically least optimal
  // assignment in best_assign().
  Int run() {
    Int total = suffix_[0];
    Int cap = total / Int(n_);
    best_ = greedy_lower_bound();
    mode_ = Mode::Optimize;
    if (best_ < cap) dfs(0, cap);
    const Int opt = best_;

    // Second pass: first assignment in DFS order reaching opt.
    mode_ = Mode::Witness;
    found_ = false;
    target_ = opt;
    std::fill(sums_.begin(), sums_.end(), Int(0));
    dfs(0, cap);
    if (!found_) throw InternalError("mms search lost its optimum");
    return opt;
  }

  const std::vector<int>& best_assign() const { return witness_; }

 private:
  enum class Mode { Optimize, Witness };

  Int greedy_lower_bound() const {
    std::vector<Int> s(n_, Int(0));
    for (int r = 0; r < m_; ++r) *std::min_element(s.begin(), s.end()) += values_[r];
    return *std::min_element(s.begin(), s.end());
  }

  // Largest level L with sum(max(0, L - s_i)) <= remaining.
  Int water_level(Int remaining) const {
    std::vector<Int> s = sums_;
    std::sort(s.begin(), s.end());
    Int acc = 0;
    for (int k = 1; k <= n_; ++k) {
      acc += s[k - 1];
      Int level = (remaining + acc) / Int(k);
      if (k == n_ || level <= s[k]) return level;
    }
    return s.back();
  }

  void dfs(int r, const Int& cap) {
    if (++nodes_ > max_nodes_)
      throw ScaleExceeded("mms search exceeded " + std::to_string(max_nodes_) + " nodes");
    if (r == m_) {
      Int low = *std::min_element(sums_.begin(), sums_.end());
      if (mode_ == Mode::Optimize) {
        if (low > best_) best_ = low;
      } else if (low >= target_) {
        found_ = true;
        witness_ = assign_;
      }
      return;
    }
    const Int bound = water_level(suffix_[r]);
    if (mode_ == Mode::Optimize ? bound <= best_ : bound < target_) return;

    std::vector<Int> tried;
    tried.reserve(n_);
    for (int b = 0; b < n_; ++b) {
      if (std::find(tried.begin(), tried.end(), sums_[b]) != tried.end()) continue;
      tried.push_back(sums_[b]);
      sums_[b] += values_[r];
      assign_[r] = b;
      dfs(r + 1, cap);
      sums_[b] -= values_[r];
      assign_[r] = -1;
      if (mode_ == Mode::Optimize && best_ >= cap) return;
      if (mode_ == Mode::Witness && found_) return;
    }
  }

  const std::vector<Int>& values_;
  int n_;
  int m_;
  std::uint64_t max_nodes_;
  std::uint64_t nodes_ = 0;
  std::vector<Int> suffix_;
  std::vector<Int> sums_;
  std::vector<int> assign_;
  std::vector<int> witness_;
  Int best_ = 0;
  Int target_ = 0;
  bool found_ = false;
  Mode mode_ = Mode::Optimize;
};

// Include/exclude search minimising the objective subject to reaching the
// constraint threshold.
template <class Int>
class BundleSearch {
 public:
  BundleSearch(std::vector<Int> objective, std::vector<Int> constraint, Int threshold,
               std::uint64_t max_nodes)
      : obj_(std::move(objective)), con_(std::move(constraint)), threshold_(std::move(threshold)),
        max_nodes_(max_nodes) {
    const int m = static_cast<int>(con_.size());
    con_suffix_.assign(m + 1, Int(0));
    for (int r = m - 1; r >= 0; --r) con_suffix_[r] = con_suffix_[r + 1] + con_[r];
  }

  // Returns false if no bundle reaches the threshold.
  bool run() {
    chosen_.clear();
    dfs(0, Int(0), Int(0));
    return have_best_;
  }

  const Int& best() const { return best_; }
  const std::vector<int>& best_items() const { return best_items_; }

 private:
  void dfs(int r, const Int& obj, const Int& con) {
    if (++nodes_ > max_nodes_)
      throw ScaleExceeded("bundle search exceeded " + std::to_string(max_nodes_) + " nodes");
    if (have_best_ && obj >= best_) return;
    if (con >= threshold_) {
      have_best_ = true;
      best_ = obj;
      best_items_ = chosen_;
      return;
    }
    if (r == static_cast<int>(con_.size()) || con + con_suffix_[r] < threshold_) return;
    chosen_.push_back(r);
    dfs(r + 1, obj + obj_[r], con + con_[r]);
    chosen_.pop_back();
    dfs(r + 1, obj, con);
  }

  std::vector<Int> obj_;
  std::vector<Int> con_;
  Int threshold_;
  std::uint64_t max_nodes_;
  std::uint64_t nodes_ = 0;
  std::vector<Int> con_suffix_;
  std::vector<int> chosen_;
  std::vector<int> best_items_;
  Int best_ = 0;
  bool have_best_ = false;
};

template <class Int>
class AllocationSearch {
 public:
  AllocationSearch(std::vector<std::vector<Int>> values, std::vector<Int> thresholds, std::vector<int> items,
                   std::uint64_t max_nodes)
      : values_(std::move(values)), thr_(std::move(thresholds)), items_(std::move(items)),
        max_nodes_(max_nodes) {
    n_ = static_cast<int>(values_.size());
    have_.assign(n_, Int(0));
    remaining_.assign(n_, Int(0));
    for (int i = 0; i < n_; ++i)
      for (int j : items_) remaining_[i] += values_[i][j];
    owner_.assign(items_.size(), -1);
  }

  bool run() { return dfs(0); }
  const std::vector<int>& owner() const { return owner_; }

 private:
  bool satisfied() const {
    for (int i = 0; i < n_; ++i)
      if (have_[i] < thr_[i]) return false;
    return true;
  }

  bool dfs(std::size_t k) {
    if (++nodes_ > max_nodes_)
      throw ScaleExceeded("allocation search exceeded " + std::to_string(max_nodes_) + " nodes");
    for (int i = 0; i < n_; ++i)
      if (have_[i] + remaining_[i] < thr_[i]) return false;
    if (satisfied()) {
      for (std::size_t rest = k; rest < items_.size(); ++rest) owner_[rest] = 0;
      return true;
    }
    if (k == items_.size()) return false;
    const int item = items_[k];
    for (int i = 0; i < n_; ++i) remaining_[i] -= values_[i][item];
    for (int a = 0; a < n_; ++a) {
      owner_[k] = a;
      have_[a] += values_[a][item];
      const bool ok = dfs(k + 1);
      have_[a] -= values_[a][item];
      if (ok) {
        for (int i = 0; i < n_; ++i) remaining_[i] += values_[i][item];
        return true;
      }
    }
    owner_[k] = -1;
    for (int i = 0; i < n_; ++i) remaining_[i] += values_[i][item];
    return false;
  }

  std::vector<std::vector<Int>> values_;
  std::vector<Int> thr_;
  std::vector<int> items_;
  std::uint64_t max_nodes_;
  std::uint64_t nodes_ = 0;
  int n_ = 0;
  std::vector<Int> have_;
  std::vector<Int> remaining_;
  std::vector<int> owner_;
};

}  // namespace

MmsResult mms_exact(const Valuation& v, int n, const OracleLimits& limits) {
  if (n < 1) throw std::invalid_argument("mms_exact: n must be >= 1");
  const int m = static_cast<int>(v.size());
  const OrderedValuation ov = order_values(v);
  Partition by_rank;
  by_rank.bundles.resize(n);

  if (m < n) {
    for (int r = 0; r < m; ++r) by_rank.bundles[r].push_back(r);
    return {Rational(0), to_item_ids(by_rank, ov)};
  }
  if (n == 1) {
    for (int r = 0; r < m; ++r) by_rank.bundles[0].push_back(r);
    return {v.total(), to_item_ids(by_rank, ov)};
  }
  guard_items(v.size(), limits, "mms_exact");

  const std::vector<std::vector<Rational>> groups{ov.sorted};
  return detail::with_scaled(groups, 4L * (n + 1), [&](const auto& s) -> MmsResult {
    using Int = typename std::decay_t<decltype(s.groups[0])>::value_type;
    MmsSearch<Int> search(s.groups[0], n, limits.max_nodes);
    const Int opt = search.run();
    const auto& assign = search.best_assign();
    for (int r = 0; r < m; ++r) by_rank.bundles[assign[r]].push_back(r);
    return {unscale(detail::to_big(opt), s.scale), to_item_ids(by_rank, ov)};
  });
}

BundleResult min_objective_bundle(const Valuation& objective, const Valuation& constraint,
                                  const Rational& threshold, const OracleLimits& limits) {
  if (objective.size() != constraint.size())
    throw std::invalid_argument("min_objective_bundle: valuations differ in length");
  if (sgn(threshold) <= 0) return {Rational(0), {}};
  if (threshold > constraint.total())
    throw std::domain_error("threshold " + to_string(threshold) + " exceeds the value of all items (" +
                            to_string(constraint.total()) + "): share is not realizable");
  guard_items(constraint.size(), limits, "min_acceptable_bundle");

  // Items in descending constraint order; ties by id.
  const OrderedValuation oc = order_values(constraint);
  std::vector<Rational> obj, con;
  for (ItemId id : oc.perm) {
    obj.push_back(objective[id]);
    con.push_back(constraint[id]);
  }
  const std::vector<std::vector<Rational>> groups{obj, con, {threshold}};
  return detail::with_scaled(groups, 4L, [&](const auto& s) -> BundleResult {
    using Int = typename std::decay_t<decltype(s.groups[0])>::value_type;
    BundleSearch<Int> search(s.groups[0], s.groups[1], s.groups[2][0], limits.max_nodes);
    if (!search.run()) throw InternalError("bundle search found no acceptable bundle");
    Bundle b;
    for (int r : search.best_items()) b.push_back(oc.perm[r]);
    std::sort(b.begin(), b.end());
    return {unscale(detail::to_big(search.best()), s.scale), std::move(b)};
  });
}

BundleResult min_acceptable_bundle(const Valuation& v, const Rational& threshold, const OracleLimits& limits) {
  return min_objective_bundle(v, v, threshold, limits);
}

std::optional<Allocation> acceptable_allocation_exists(const Instance& inst,
                                                       std::span<const Rational> thresholds,
                                                       const OracleLimits& limits) {
  inst.check();
  if (thresholds.size() != static_cast<std::size_t>(inst.n))
    throw std::invalid_argument("acceptable_allocation_exists: need one threshold per agent");
  guard_items(static_cast<std::size_t>(inst.m), limits, "acceptable_allocation_exists");

  // Items with the largest total value first.
  std::vector<Rational> totals(inst.m, Rational(0));
  for (const auto& v : inst.valuations)
    for (int j = 0; j < inst.m; ++j) totals[j] += v[j];
  std::vector<int> items(inst.m);
  std::iota(items.begin(), items.end(), 0);
  std::stable_sort(items.begin(), items.end(), [&](int a, int b) { return totals[a] > totals[b]; });

  std::vector<std::vector<Rational>> groups;
  for (const auto& v : inst.valuations) groups.push_back(v.values);
  groups.emplace_back(thresholds.begin(), thresholds.end());

  return detail::with_scaled(groups, 4L, [&](const auto& s) -> std::optional<Allocation> {
    using Int = typename std::decay_t<decltype(s.groups[0])>::value_type;
    std::vector<std::vector<Int>> values(s.groups.begin(), s.groups.begin() + inst.n);
    AllocationSearch<Int> search(std::move(values), s.groups[inst.n], items, limits.max_nodes);
    if (!search.run()) return std::nullopt;
    std::vector<Bundle> bundles(inst.n);
    for (std::size_t k = 0; k < items.size(); ++k) bundles[search.owner()[k]].push_back(items[k]);
    return Allocation::from_agent_bundles(std::move(bundles));
  });
}

FamilyResult family_eval_bruteforce(const Valuation& v, std::span<const Partition> family) {
  if (family.empty()) throw std::invalid_argument("family_eval_bruteforce: empty family");
  const OrderedValuation ov = order_values(v);
  const Valuation ranked(ov.sorted);
  std::size_t best = 0;
  Rational best_value = min_bundle_value(ranked, family[0]);
  for (std::size_t k = 1; k < family.size(); ++k) {
    Rational value = min_bundle_value(ranked, family[k]);
    if (value > best_value) {
      best_value = value;
      best = k;
    }
  }
  return {best_value, to_item_ids(family[best], ov)};
}

std::vector<Partition> all_partitions(int m, int n, std::size_t limit) {
  if (n < 1 || m < 0) throw std::invalid_argument("all_partitions: need n >= 1, m >= 0");
  std::vector<Partition> out;
  std::vector<int> block(m, 0);
  // Restricted growth strings with at most n distinct blocks.
  auto emit = [&] {
    if (out.size() >= limit)
      throw ScaleExceeded("complete family for m=" + std::to_string(m) + ", n=" + std::to_string(n) +
                          " exceeds " + std::to_string(limit) + " partitions");
    Partition p;
    p.bundles.resize(n);
    for (int r = 0; r < m; ++r) p.bundles[block[r]].push_back(r);
    out.push_back(std::move(p));
  };
  auto rec = [&](auto&& self, int r, int used) -> void {
    if (r == m) {
      emit();
      return;
    }
    for (int b = 0; b <= std::min(used, n - 1); ++b) {
      block[r] = b;
      self(self, r + 1, std::max(used, b + 1));
    }
  };
  rec(rec, 0, 0);
  return out;
}

}  // namespace fairshare
