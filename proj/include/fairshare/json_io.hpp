#pragma once

// JSON forms of instances, allocations and reports.
//
// Instance:   {"n": 2, "m": 5, "agents": [{"id": "1", "values": ["3", "1/2", "0.25"]}, ...]}
// Allocation: {"bundles": [{"agent": "1", "items": [0, 3]}, ...]}
//
// Values are strings holding "p", "p/q" or a finite decimal; JSON integers
// are accepted too. Rationals are always written as "p/q" (or "p").

#include <string>
#include <string_view>

#include "fairshare/core.hpp"
#include "json.hpp"

namespace fairshare {

using Json = nlohmann::ordered_json;

Instance parse_instance(std::string_view text);
Instance instance_from_json(const Json& j);
Json to_json(const Instance& inst);
std::string serialize_instance(const Instance& inst);

Json to_json(const Rational& r);
Json to_json(const Partition& p);
Json to_json(const Allocation& alloc, const Instance& inst);
Json to_json(const AllocationReport& report, const Instance& inst);
Json to_json(const PickingOrder& order);

Allocation parse_allocation(std::string_view text, const Instance& inst);
PickingOrder parse_picking_order(std::string_view text, int n);

std::string read_file(const std::string& path);

}  // namespace fairshare
