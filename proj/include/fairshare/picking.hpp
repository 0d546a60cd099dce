#pragma once

// Picking-order shares for additive valuations.
//
// With additive values the best strategy in a picking sequence is to take
// the most valuable remaining item, whatever the other pickers do, so the
// share of identity k is the sum of the agent's values at the ranks where k
// picks; the share is the minimum over identities.

#include <functional>

#include "fairshare/core.hpp"
#include "fairshare/oracle.hpp"

namespace fairshare {

Rational picking_share(const Valuation& v, const PickingOrder& order);

/// Order whose picking share equals the MMS: identity j picks exactly at the
/// ranks of the j-th bundle of the mms_exact witness (bundles numbered by
/// their most valuable item).
PickingOrder mms_picking_order(const Valuation& v, int n, const OracleLimits& limits = {});

/// Runs the sequence with every agent taking her favourite remaining item
/// (ties: lowest item id).
Allocation picking_allocate(const Instance& inst, const PickingOrder& order);

/// Each agent's values sorted descending and laid onto rank-items 0..m-1,
/// so that all agents agree on the item order.
Instance ordered_companion(const Instance& inst);

using OrderedAllocator = std::function<Allocation(const Instance& ordered)>;

/// Runs `base` on the ordered companion and converts the result back: ranks
/// are processed in order and the owner of rank r picks her favourite
/// remaining real item. Every agent ends with at least the value she had in
/// the ordered allocation.
Allocation ordered_reduction(const Instance& inst, const OrderedAllocator& base);

}  // namespace fairshare
