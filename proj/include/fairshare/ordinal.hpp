#pragma once

// Ordinal maximin shares: the best worst-bundle value over a fixed family of
// partitions of item ranks. Items are sorted from most to least valuable
// before the family is applied, so ties in the sort never change the value.

#include <variant>
#include <vector>

#include "fairshare/core.hpp"
#include "fairshare/oracle.hpp"

namespace fairshare {

namespace family {
struct Complete {};
struct Single { Partition partition; };  // over ranks
struct RoundRobin {};
struct Picking { PickingOrder order; };
struct Ptas2 { Rational epsilon; };
struct Nested { int q = 1; };
}  // namespace family

using PartitionFamily = std::variant<family::Complete, family::Single, family::RoundRobin,
                                     family::Picking, family::Ptas2, family::Nested>;

/// Every partition of the family over ranks 0..m-1, in a fixed order.
/// Throws ScaleExceeded past `limit`.
std::vector<Partition> materialize(const PartitionFamily& fam, int m, int n,
                                   std::size_t limit = 2'000'000);

/// Best worst-bundle value over the family. Complete, Ptas2 and Nested use
/// their dedicated searches; the others are evaluated directly.
FamilyResult eval_family(const Valuation& v, int n, const PartitionFamily& fam,
                         const OracleLimits& limits = {});

/// k = ceil(3 / (2 eps)).
int ptas2_k(const Rational& epsilon);

struct Ptas2Result {
  enum class Branch { Exact, BigItem, Enumerated };
  Rational value;
  Partition best;  // original item ids; best.bundles[0] is B_1
  Branch branch = Branch::Exact;
};

/// Two-agent share with (1 - eps) MMS <= value <= MMS. Below 3/eps items it
/// is the MMS; if e_1 is worth more than 2/3 of everything it is v(M) - v(e_1);
/// otherwise B_1 is any subset of the top k items plus a suffix of the rest.
Ptas2Result ptas2_share(const Valuation& v, const Rational& epsilon, const OracleLimits& limits = {});

/// Same result with a single-threaded prefix loop.
Ptas2Result ptas2_share_serial(const Valuation& v, const Rational& epsilon, const OracleLimits& limits = {});

/// True if `by_rank` (two bundles over ranks) belongs to the family.
bool in_ptas2_family(const Partition& by_rank, int m, const Rational& epsilon);

/// Agent 1 cuts with her ptas2 partition, agent 2 takes the bundle she
/// values more (B_1 on ties).
Allocation ptas2_allocate(const Valuation& v1, const Valuation& v2, const Rational& epsilon,
                          const OracleLimits& limits = {});

const char* to_string(Ptas2Result::Branch b);

}  // namespace fairshare
