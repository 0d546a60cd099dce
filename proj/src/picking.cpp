#include "fairshare/picking.hpp"

#include <algorithm>
#include <stdexcept>

#include "fairshare/errors.hpp"

namespace fairshare {

namespace {

// Favourite remaining item of valuation v; ties by lowest id.
int favourite(const Valuation& v, const std::vector<bool>& taken) {
  int best = -1;
  for (int j = 0; j < static_cast<int>(v.size()); ++j) {
    if (taken[j]) continue;
    if (best < 0 || v[j] > v[best]) best = j;
  }
  return best;
}

}  // namespace

Rational picking_share(const Valuation& v, const PickingOrder& order) {
  order.check(v.size());
  const OrderedValuation ov = order_values(v);
  std::vector<Rational> got(order.n, Rational(0));
  for (std::size_t t = 0; t < order.turns.size(); ++t) got[order.turns[t] - 1] += ov.sorted[t];
  return *std::min_element(got.begin(), got.end());
}

PickingOrder mms_picking_order(const Valuation& v, int n, const OracleLimits& limits) {
  const OrderedValuation ov = order_values(v);
  const MmsResult mms = mms_exact(v, n, limits);

  std::vector<int> rank_of(v.size());
  for (std::size_t r = 0; r < ov.perm.size(); ++r) rank_of[ov.perm[r]] = static_cast<int>(r);

  // Bundles as rank sets, numbered by their best rank; empty bundles last.
  std::vector<std::vector<int>> parts;
  for (const auto& b : mms.witness.bundles) {
    std::vector<int> ranks;
    for (ItemId id : b) ranks.push_back(rank_of[id]);
    std::sort(ranks.begin(), ranks.end());
    parts.push_back(std::move(ranks));
  }
  std::stable_sort(parts.begin(), parts.end(), [](const auto& a, const auto& b) {
    if (a.empty() || b.empty()) return !a.empty() && b.empty();
    return a.front() < b.front();
  });

  PickingOrder w;
  w.n = n;
  w.turns.assign(v.size(), 0);
  for (std::size_t j = 0; j < parts.size(); ++j)
    for (int r : parts[j]) w.turns[r] = static_cast<int>(j) + 1;
  return w;
}

Allocation picking_allocate(const Instance& inst, const PickingOrder& order) {
  inst.check();
  if (order.n != inst.n) throw std::invalid_argument("picking order is for a different number of agents");
  order.check(static_cast<std::size_t>(inst.m));
  std::vector<bool> taken(inst.m, false);
  std::vector<Bundle> bundles(inst.n);
  for (int who : order.turns) {
    const int agent = who - 1;
    const int item = favourite(inst.valuations[agent], taken);
    taken[item] = true;
    bundles[agent].push_back(item);
  }
  return Allocation::from_agent_bundles(std::move(bundles));
}

Instance ordered_companion(const Instance& inst) {
  inst.check();
  Instance out = inst;
  out.item_labels.clear();
  for (auto& v : out.valuations) v = Valuation(order_values(v).sorted);
  return out;
}

Allocation ordered_reduction(const Instance& inst, const OrderedAllocator& base) {
  const Instance ordered = ordered_companion(inst);
  const Allocation on_ranks = base(ordered);
  check_partition(on_ranks.partition, static_cast<std::size_t>(inst.m));

  std::vector<int> rank_owner(inst.m, -1);
  for (std::size_t b = 0; b < on_ranks.partition.size(); ++b)
    for (ItemId r : on_ranks.partition.bundles[b]) rank_owner[r] = on_ranks.owner[b];

  std::vector<bool> taken(inst.m, false);
  std::vector<Bundle> bundles(inst.n);
  for (int r = 0; r < inst.m; ++r) {
    const int agent = rank_owner[r];
    const int item = favourite(inst.valuations[agent], taken);
    taken[item] = true;
    bundles[agent].push_back(item);
  }
  Allocation result = Allocation::from_agent_bundles(std::move(bundles));

  for (int i = 0; i < inst.n; ++i) {
    const Rational before = bundle_value(ordered.valuations[i], on_ranks.bundle_of(i));
    const Rational after = bundle_value(inst.valuations[i], result.bundle_of(i));
    if (after < before)
      throw InternalError("ordered reduction lost value for agent " + std::to_string(i));
  }
  return result;
}

}  // namespace fairshare
