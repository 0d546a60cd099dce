#pragma once

// Share values, share guarantees, implied guarantees and the probes built on
// them.
//
// The share guarantee of s for v is the least value of a bundle worth at
// least s(v, n). The implied guarantee of a report v' for an agent whose
// true valuation is v is the least true value of a bundle that is acceptable
// under the report. A share is self-maximizing when the truthful report
// maximizes the implied guarantee.

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "fairshare/core.hpp"
#include "fairshare/oracle.hpp"

namespace fairshare {

/// Throws std::invalid_argument for NS with q outside 1..n, UnsupportedShare
/// for PTAS2 with n != 2, ScaleExceeded from the oracle.
Rational share_value(const ShareSpec& spec, const Valuation& v, int n, const OracleLimits& limits = {});

struct ShareEvaluation {
  ShareSpec spec;
  Rational value;
  Rational guarantee;
  std::optional<Partition> witness;   // partition attaining the value, if any
  std::optional<Bundle> guarantee_bundle;
};

ShareEvaluation evaluate_share(const ShareSpec& spec, const Valuation& v, int n, const OracleLimits& limits = {});

Rational share_guarantee(const ShareSpec& spec, const Valuation& v, int n, const OracleLimits& limits = {});

Rational implied_guarantee(const ShareSpec& spec, const Valuation& true_v, const Valuation& report_v, int n,
                           const OracleLimits& limits = {});

namespace probe {
struct Explicit { std::vector<Valuation> reports; };
/// Each report moves every value by a random multiple of a quarter of the
/// mean item value (clamped at 0); every fourth report also shuffles values.
struct Random { std::size_t count = 0; std::uint64_t seed = 0; };
/// Every report that swaps the values of two items with different values.
struct Swaps {};
/// Every report that multiplies one item's value by one grid factor.
struct ScaleGrid { std::vector<Rational> factors; };
}  // namespace probe

using ProbePolicy = std::variant<probe::Explicit, probe::Random, probe::Swaps, probe::ScaleGrid>;

/// "random:<count>:<seed>", "swaps", "scale:<f1>,<f2>,...", or "file:<path>"
/// where the file holds a JSON list of value lists.
ProbePolicy parse_probe_policy(const std::string& text);

std::vector<Valuation> generate_reports(const ProbePolicy& policy, const Valuation& v);

struct ProbeVerdict {
  bool improved = false;
  std::optional<Valuation> witness_report;
  Rational baseline;    // share_guarantee for the true valuation
  Rational best_found;  // best implied guarantee among the reports (baseline if none)
  std::size_t reports = 0;
};

ProbeVerdict self_max_probe(const ShareSpec& spec, const Valuation& v, int n, const ProbePolicy& policy,
                            const OracleLimits& limits = {});
ProbeVerdict self_max_probe_serial(const ShareSpec& spec, const Valuation& v, int n, const ProbePolicy& policy,
                                   const OracleLimits& limits = {});

struct RatioRow {
  Rational share;
  Rational mms;
  Rational ratio;  // 1 when mms == 0
};

struct DominationReport {
  Rational min_ratio = 1;
  std::optional<std::size_t> argmin;  // index into the instance list
  std::vector<RatioRow> rows;
};

struct RatioInstance {
  Valuation v;
  int n = 1;
};

DominationReport domination_ratio(const ShareSpec& spec, const std::vector<RatioInstance>& instances,
                                  const OracleLimits& limits = {});

}  // namespace fairshare
