#include "fairshare/core.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace fairshare {

Valuation make_valuation(std::initializer_list<long> ints) {
  std::vector<Rational> values;
  for (long x : ints) values.emplace_back(x);
  return Valuation(std::move(values));
}

Valuation make_valuation(std::initializer_list<const char*> texts) {
  std::vector<Rational> values;
  for (const char* t : texts) values.push_back(parse_rational(t));
  return Valuation(std::move(values));
}

OrderedValuation order_values(const Valuation& v) {
  OrderedValuation ov;
  ov.perm.resize(v.size());
  std::iota(ov.perm.begin(), ov.perm.end(), 0);
  std::stable_sort(ov.perm.begin(), ov.perm.end(),
                   [&](ItemId a, ItemId b) { return v[a] > v[b]; });
  ov.sorted.reserve(v.size());
  for (ItemId id : ov.perm) ov.sorted.push_back(v[id]);
  return ov;
}

Rational bundle_value(const Valuation& v, std::span<const ItemId> bundle) {
  Rational total = 0;
  for (ItemId id : bundle) {
    if (id < 0 || static_cast<std::size_t>(id) >= v.size())
      throw std::out_of_range("item id " + std::to_string(id) + " out of range (m=" +
                              std::to_string(v.size()) + ")");
    total += v[id];
  }
  return total;
}

void check_partition(const Partition& p, std::size_t m) {
  std::vector<int> seen(m, -1);
  for (std::size_t b = 0; b < p.bundles.size(); ++b) {
    for (ItemId id : p.bundles[b]) {
      if (id < 0 || static_cast<std::size_t>(id) >= m)
        throw std::invalid_argument("item " + std::to_string(id) + " out of range");
      if (seen[id] >= 0)
        throw std::invalid_argument("item " + std::to_string(id) + " appears in bundles " +
                                    std::to_string(seen[id]) + " and " + std::to_string(b));
      seen[id] = static_cast<int>(b);
    }
  }
  for (std::size_t j = 0; j < m; ++j)
    if (seen[j] < 0) throw std::invalid_argument("item " + std::to_string(j) + " is not allocated");
}

Rational min_bundle_value(const Valuation& v, const Partition& p) {
  if (p.bundles.empty()) throw std::invalid_argument("partition has no bundles");
  Rational best = bundle_value(v, p.bundles.front());
  for (std::size_t b = 1; b < p.bundles.size(); ++b) best = std::min(best, bundle_value(v, p.bundles[b]));
  return best;
}

Partition to_item_ids(const Partition& by_rank, const OrderedValuation& ov) {
  Partition out;
  out.bundles.reserve(by_rank.size());
  for (const auto& b : by_rank.bundles) {
    Bundle mapped;
    mapped.reserve(b.size());
    for (ItemId r : b) mapped.push_back(ov.perm.at(r));
    std::sort(mapped.begin(), mapped.end());
    out.bundles.push_back(std::move(mapped));
  }
  return out;
}

Allocation Allocation::from_agent_bundles(std::vector<Bundle> bundles) {
  Allocation a;
  a.owner.resize(bundles.size());
  std::iota(a.owner.begin(), a.owner.end(), 0);
  for (auto& b : bundles) std::sort(b.begin(), b.end());
  a.partition.bundles = std::move(bundles);
  return a;
}

const Bundle& Allocation::bundle_of(int agent) const {
  for (std::size_t b = 0; b < owner.size(); ++b)
    if (owner[b] == agent) return partition.bundles[b];
  throw std::out_of_range("agent " + std::to_string(agent) + " holds no bundle");
}

Instance Instance::identical(const Valuation& v, int n) {
  return from_valuations(std::vector<Valuation>(static_cast<std::size_t>(n), v));
}

Instance Instance::from_valuations(std::vector<Valuation> vs) {
  Instance inst;
  inst.n = static_cast<int>(vs.size());
  inst.m = vs.empty() ? 0 : static_cast<int>(vs.front().size());
  inst.valuations = std::move(vs);
  for (int i = 0; i < inst.n; ++i) inst.agent_ids.push_back(std::to_string(i + 1));
  inst.check();
  return inst;
}

void Instance::check() const {
  if (n < 1) throw std::invalid_argument("instance needs n >= 1 (got " + std::to_string(n) + ")");
  if (m < 0) throw std::invalid_argument("negative item count");
  if (valuations.size() != static_cast<std::size_t>(n))
    throw std::invalid_argument("expected " + std::to_string(n) + " valuations, got " +
                                std::to_string(valuations.size()));
  for (int i = 0; i < n; ++i) {
    if (valuations[i].size() != static_cast<std::size_t>(m))
      throw std::invalid_argument("agent " + std::to_string(i) + " has " +
                                  std::to_string(valuations[i].size()) + " values, expected " +
                                  std::to_string(m));
    for (int j = 0; j < m; ++j)
      if (sgn(valuations[i][j]) < 0)
        throw std::invalid_argument("agent " + std::to_string(i) + " item " + std::to_string(j) +
                                    ": negative value");
  }
  if (!agent_ids.empty() && agent_ids.size() != static_cast<std::size_t>(n))
    throw std::invalid_argument("agent id list has the wrong length");
  if (!item_labels.empty() && item_labels.size() != static_cast<std::size_t>(m))
    throw std::invalid_argument("item label list has the wrong length");
}

std::vector<int> AllocationReport::violators() const {
  std::vector<int> out;
  for (const auto& a : agents)
    if (!a.ok) out.push_back(a.agent);
  return out;
}

AllocationReport validate_allocation(const Instance& inst, const Allocation& alloc,
                                     std::span<const Rational> thresholds) {
  if (thresholds.size() != static_cast<std::size_t>(inst.n))
    throw std::invalid_argument("need one threshold per agent");
  if (alloc.owner.size() != static_cast<std::size_t>(inst.n) ||
      alloc.partition.size() != static_cast<std::size_t>(inst.n))
    throw std::invalid_argument("allocation must have exactly n bundles");
  check_partition(alloc.partition, static_cast<std::size_t>(inst.m));
  std::vector<bool> held(inst.n, false);
  for (int o : alloc.owner) {
    if (o < 0 || o >= inst.n || held[o]) throw std::invalid_argument("bundle owners are not a bijection");
    held[o] = true;
  }

  AllocationReport report;
  report.acceptable = true;
  for (int i = 0; i < inst.n; ++i) {
    AgentCheck c;
    c.agent = i;
    c.value = bundle_value(inst.valuations[i], alloc.bundle_of(i));
    c.threshold = thresholds[i];
    c.ok = c.value >= c.threshold;
    report.acceptable = report.acceptable && c.ok;
    report.agents.push_back(std::move(c));
  }
  return report;
}

PickingOrder PickingOrder::round_robin(int n, int m) {
  PickingOrder w;
  w.n = n;
  for (int t = 0; t < m; ++t) w.turns.push_back(t % n + 1);
  return w;
}

void PickingOrder::check(std::size_t m) const {
  if (turns.size() != m)
    throw std::invalid_argument("picking order has length " + std::to_string(turns.size()) +
                                ", expected " + std::to_string(m));
  for (int t : turns)
    if (t < 1 || t > n) throw std::invalid_argument("picking order entry out of range 1.." + std::to_string(n));
}

std::string describe(const ShareSpec& spec) {
  struct Visitor {
    std::string operator()(const share::Proportional&) const { return "ps"; }
    std::string operator()(const share::RhoMms& s) const { return "rho-mms(" + to_string(s.rho) + ")"; }
    std::string operator()(const share::Mms&) const { return "mms"; }
    std::string operator()(const share::TopN&) const { return "top-n"; }
    std::string operator()(const share::TopNMinus1&) const { return "top-n-minus-1"; }
    std::string operator()(const share::Picking&) const { return "picking"; }
    std::string operator()(const share::RoundRobin&) const { return "round-robin"; }
    std::string operator()(const share::Nested& s) const { return "ns(q=" + std::to_string(s.q) + ")"; }
    std::string operator()(const share::Ptas2& s) const { return "ptas2(eps=" + to_string(s.epsilon) + ")"; }
  };
  return std::visit(Visitor{}, spec);
}

}  // namespace fairshare
