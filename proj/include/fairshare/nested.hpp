#pragma once

// Nested shares NS_{n,q}.
//
// With items sorted e_1 >= ... >= e_m, a nested partition lays the items out
// as Z_1 Z_2 ... Z_n | S_n ... S_2 S_1 where the Z's are consecutive parts of
// a prefix of length k > n-q, the first n-q of them singletons, and the S's
// are consecutive parts of the remaining suffix taken from the far end.
// Bundle j is Z_j plus S_j, so bundle j+1 sits between the extreme ranks of
// bundle j. The share is the best worst-bundle value over this family.

#include <optional>
#include <vector>

#include "fairshare/core.hpp"
#include "fairshare/oracle.hpp"

namespace fairshare {

/// Cut points of a nested partition over ranks 0..m-1. Bundle j (0-based)
/// holds ranks [prefix_cuts[j-1], prefix_cuts[j]) and the ranks
/// [m - suffix_cuts[j], m - suffix_cuts[j-1]), with both cut lists starting
/// from an implicit 0. prefix_cuts.back() + suffix_cuts.back() == m.
struct NsPartitionShape {
  int n = 0;
  int q = 0;
  int m = 0;
  int k = 0;  // prefix length |Z|
  std::vector<int> prefix_cuts;  // i_1..i_n, i_n == k
  std::vector<int> suffix_cuts;  // t_1..t_n, t_n == m - k

  Partition bundles_by_rank() const;
  /// Throws std::invalid_argument naming the violated shape rule.
  void check() const;
};

/// Recovers a shape from a partition over ranks (ascending rank ids, bundle
/// order significant) or nullopt if it is not in the nested family.
std::optional<NsPartitionShape> ns_shape_of(const Partition& by_rank, int m, int n, int q);

/// Every bundle value of the form (interval) + (interval), ascending, with 0.
/// Throws ScaleExceeded beyond `max_items` items.
std::vector<Rational> ns_candidates(const Valuation& v, int max_items = 40);

/// DP table for one threshold c. row[i][j] (bins 1..i cover ranks 0..j-1 and
/// row[i][j] ranks from the end) is the least such suffix length, or -1.
/// Row n is implicit: the last bin takes every rank between the two cuts.
struct NsDpTable {
  std::vector<std::vector<int>> t;     // [i][j], i = 0..n-1
  std::vector<std::vector<int>> from;  // predecessor column
};

struct NsFeasible {
  NsPartitionShape shape;
  Partition partition;  // original item ids
};

/// A nested partition with every bundle worth at least c, or nullopt.
std::optional<NsFeasible> ns_feasible_partition(const Valuation& v, int n, int q, const Rational& c);

struct NsResult {
  Rational value;
  Partition witness;  // original item ids, bundle order as in the family
  std::optional<NsPartitionShape> shape;  // absent when m <= n
};

/// NS_{n,q}(v). Throws std::invalid_argument unless 1 <= q <= n.
NsResult ns_share(const Valuation& v, int n, int q);

/// Same value, found by a linear scan over ns_candidates instead of the
/// integer bisection. Slow; kept as a reference.
NsResult ns_share_by_candidates(const Valuation& v, int n, int q);

/// Every partition of the nested family for (m, n, q), over ranks, without
/// duplicates, in a fixed order. Throws ScaleExceeded past `limit`.
std::vector<Partition> ns_family(int m, int n, int q, std::size_t limit = 2'000'000);

/// True iff every bundle of p meets every bundle of q (3-partitions).
bool fully_intersecting(const Partition& p, const Partition& q);

/// Allocation giving agent k at least min_j v_k(P^k_j), for three agents whose
/// partitions are pairwise not fully intersecting. Throws InternalError if
/// no case of the analysis yields a valid allocation.
Allocation ns3_base_allocate(const Valuation& v1, const Valuation& v2, const Valuation& v3,
                             const Partition& p1, const Partition& p2, const Partition& p3);

/// Which rule of the case analysis produced the allocation, in the order
/// they are tried.
enum class Ns3Rule {
  TwoAcceptable,    // a accepts two bundles of P^b
  CutAndChoose,     // X in P^b rejected by a, Y in P^a disjoint from X
  DistinctBundles,  // two bundles of P^i accepted by j and k respectively
  OwnBundles,       // each agent's bundle accepted by both others
};
const char* to_string(Ns3Rule r);

struct Ns3Allocation {
  Allocation allocation;
  Ns3Rule rule;
};

Ns3Allocation ns3_base_allocate_traced(const Valuation& v1, const Valuation& v2, const Valuation& v3,
                                       const Partition& p1, const Partition& p2, const Partition& p3);

/// Allocation giving every agent at least her NS_{n,q} share. Supports
/// q <= 3; larger q throws UnsupportedShare.
Allocation ns_allocate(const Instance& inst, int q);

struct WorstCase {
  Valuation v;
  int n = 0;
  Partition certified;  // min bundle value 3/2 - 1/(2k)
};

/// Grouped instance with NS_{n,1} = 1 and MMS >= 3/2 - 1/(2k). Group a holds
/// 4^a large items of value 1 - a/(2k) and 2*4^a small ones of value a/(2k).
WorstCase worstcase_instance(int k, int max_items = 20'000);

}  // namespace fairshare
