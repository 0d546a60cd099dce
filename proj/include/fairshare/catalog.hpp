#pragma once

// Named fixture instances with their expected share values. Every expected
// value records where it comes from: "published" values are stated in the
// literature the fixture is taken from, "computed" values were obtained
// once from the exhaustive oracles and frozen.

#include <optional>
#include <string>
#include <vector>

#include "fairshare/core.hpp"
#include "fairshare/json_io.hpp"

namespace fairshare {

struct ExpectedValue {
  ShareSpec spec;
  Rational value;
  int agent = 0;
  std::string source;  // "published" or "computed"
  std::string quantity = "value";  // "value" or "guarantee"
};

struct CatalogEntry {
  std::string name;
  std::string description;
  Instance instance;
  std::vector<ExpectedValue> expected;
  Json meta = Json::object();  // extra data such as counterexample reports
};

/// Names in listing order.
std::vector<std::string> catalog_names();

/// Throws std::out_of_range for an unknown name. `k` applies to "worstcase".
CatalogEntry catalog_entry(const std::string& name, int k = 2);

/// The instance plus a "meta" object holding description, expected values
/// and any extra data. parse_instance reads it back and ignores "meta".
Json to_json(const CatalogEntry& entry);

struct CatalogMismatch {
  std::string entry;
  std::string share;
  int agent = 0;
  Rational expected;
  Rational actual;
};

/// Recomputes every expected value of the entry.
std::vector<CatalogMismatch> check_catalog_entry(const CatalogEntry& entry);

/// Parses a share name as used by the CLI: ps, mms, rho-mms, top-n,
/// top-n-minus-1, round-robin, picking, ns, ptas2. `param` carries rho, q or
/// epsilon where needed.
ShareSpec parse_share(const std::string& name, const std::optional<std::string>& param = std::nullopt);

}  // namespace fairshare
