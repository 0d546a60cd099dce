#pragma once

// Domain types shared by every module: additive valuations, instances,
// partitions, allocations and share descriptors.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "fairshare/rational.hpp"

namespace fairshare {

using ItemId = int;
using Bundle = std::vector<ItemId>;  // ascending item ids

/// Additive valuation: values[j] is the value of item j. Entries are >= 0.
struct Valuation {
  std::vector<Rational> values;

  Valuation() = default;
  explicit Valuation(std::vector<Rational> v) : values(std::move(v)) {}

  std::size_t size() const { return values.size(); }
  const Rational& operator[](std::size_t j) const { return values[j]; }
  Rational total() const { return sum(values); }

  bool operator==(const Valuation&) const = default;
};

/// Convenience for tests and fixtures: integers or "p/q" / decimal strings.
Valuation make_valuation(std::initializer_list<long> ints);
Valuation make_valuation(std::initializer_list<const char*> texts);

/// Items sorted from highest to lowest value. sorted[r] == source[perm[r]].
struct OrderedValuation {
  std::vector<Rational> sorted;
  std::vector<ItemId> perm;  // rank -> original item id
};

/// Descending sort, ties broken by ascending original item id.
OrderedValuation order_values(const Valuation& v);

Rational bundle_value(const Valuation& v, std::span<const ItemId> bundle);

/// n disjoint bundles covering 0..m-1; bundles may be empty.
struct Partition {
  std::vector<Bundle> bundles;

  std::size_t size() const { return bundles.size(); }
  bool operator==(const Partition&) const = default;
};

/// Throws std::invalid_argument on overlap, missing or out-of-range items.
void check_partition(const Partition& p, std::size_t m);

/// Minimum bundle value of p under v.
Rational min_bundle_value(const Valuation& v, const Partition& p);

/// Maps a partition over ranks of `ov` back to original item ids.
Partition to_item_ids(const Partition& by_rank, const OrderedValuation& ov);

/// A partition plus the agent holding each bundle (a bijection).
struct Allocation {
  Partition partition;
  std::vector<int> owner;  // bundle index -> agent index

  /// bundles[i] goes to agent i.
  static Allocation from_agent_bundles(std::vector<Bundle> bundles);

  const Bundle& bundle_of(int agent) const;
  std::size_t agents() const { return owner.size(); }
};

struct Instance {
  int n = 0;
  int m = 0;
  std::vector<Valuation> valuations;
  std::vector<std::string> agent_ids;   // defaults to "1".."n"
  std::vector<std::string> item_labels; // optional

  /// n agents sharing one valuation.
  static Instance identical(const Valuation& v, int n);
  static Instance from_valuations(std::vector<Valuation> vs);

  /// Throws std::invalid_argument if the shape invariants do not hold.
  void check() const;
  bool operator==(const Instance&) const = default;
};

struct AgentCheck {
  int agent = 0;
  Rational value;
  Rational threshold;
  bool ok = false;
};

struct AllocationReport {
  std::vector<AgentCheck> agents;
  bool acceptable = false;

  std::vector<int> violators() const;
};

AllocationReport validate_allocation(const Instance& inst, const Allocation& alloc,
                                     std::span<const Rational> thresholds);

/// Length-m sequence of identities in 1..n; turns[t] picks at step t.
struct PickingOrder {
  int n = 0;
  std::vector<int> turns;

  static PickingOrder round_robin(int n, int m);
  void check(std::size_t m) const;
  bool operator==(const PickingOrder&) const = default;
};

namespace share {
struct Proportional {};
struct RhoMms { Rational rho; };
struct Mms {};
struct TopN {};
struct TopNMinus1 {};
struct Picking { PickingOrder order; };
struct RoundRobin {};
struct Nested { int q = 1; };
struct Ptas2 { Rational epsilon; };
}  // namespace share

using ShareSpec = std::variant<share::Proportional, share::RhoMms, share::Mms, share::TopN,
                               share::TopNMinus1, share::Picking, share::RoundRobin,
                               share::Nested, share::Ptas2>;

/// Short stable name, e.g. "ns(q=3)" or "rho-mms(3/4)".
std::string describe(const ShareSpec& spec);

}  // namespace fairshare
