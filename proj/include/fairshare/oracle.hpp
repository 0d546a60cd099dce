#pragma once

// Exact ground-truth searches. They double as the MMS implementation and as
// the reference every faster procedure in the library is tested against, so
// they never approximate: past their size limit they throw ScaleExceeded.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "fairshare/core.hpp"

namespace fairshare {

struct OracleLimits {
  int max_items = 24;
  std::uint64_t max_nodes = 2'000'000'000;  // per search
};

struct MmsResult {
  Rational value;
  Partition witness;  // original item ids
};

/// Maximin share: the best worst-bundle value over all n-partitions.
/// Witness is the lexicographically least optimal assignment of ranks to
/// bundles (bundles opened in order of first item).
MmsResult mms_exact(const Valuation& v, int n, const OracleLimits& limits = {});

struct BundleResult {
  Rational value;
  Bundle bundle;  // original item ids
};

/// Least value of a bundle whose value reaches `threshold`. (0, {}) when the
/// threshold is <= 0. Throws std::domain_error if threshold > v(M).
BundleResult min_acceptable_bundle(const Valuation& v, const Rational& threshold,
                                   const OracleLimits& limits = {});

/// Least `objective` value over bundles whose `constraint` value reaches
/// `threshold`. min_acceptable_bundle is the case objective == constraint.
BundleResult min_objective_bundle(const Valuation& objective, const Valuation& constraint,
                                  const Rational& threshold, const OracleLimits& limits = {});

/// Complete backtracking search for an allocation giving agent i a bundle
/// worth at least thresholds[i].
std::optional<Allocation> acceptable_allocation_exists(const Instance& inst,
                                                       std::span<const Rational> thresholds,
                                                       const OracleLimits& limits = {});

struct FamilyResult {
  Rational value;
  Partition best;  // original item ids
};

/// Max over the family of the min bundle value. Family partitions index
/// items by rank in v's descending order (rank 0 = most valuable).
FamilyResult family_eval_bruteforce(const Valuation& v, std::span<const Partition> family);

/// Every partition of ranks 0..m-1 into at most n nonempty blocks, padded
/// with empty bundles to exactly n. Throws ScaleExceeded past `limit`.
std::vector<Partition> all_partitions(int m, int n, std::size_t limit = 5'000'000);

}  // namespace fairshare
