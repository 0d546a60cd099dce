#include "fairshare/json_io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "fairshare/errors.hpp"

namespace fairshare {

namespace {

Rational value_from_json(const Json& v, const std::string& where) {
  Rational r;
  try {
    if (v.is_string()) {
      r = parse_rational(v.get<std::string>());
    } else if (v.is_number_integer()) {
      r = Rational(std::to_string(v.get<long long>()));
    } else if (v.is_number_unsigned()) {
      r = Rational(std::to_string(v.get<unsigned long long>()));
    } else {
      throw ParseError(where + ": value must be a string (\"p/q\" or decimal) or an integer");
    }
  } catch (const std::invalid_argument& e) {
    throw ParseError(where + ": " + e.what());
  }
  if (sgn(r) < 0) throw ParseError(where + ": negative value " + to_string(r));
  return r;
}

const Json& require(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) throw ParseError(where + ": missing \"" + key + "\"");
  return j.at(key);
}

}  // namespace

Instance instance_from_json(const Json& j) {
  if (!j.is_object()) throw ParseError("instance: expected a JSON object");
  const Json& agents = require(j, "agents", "instance");
  if (!agents.is_array()) throw ParseError("instance: \"agents\" must be an array");

  Instance inst;
  inst.n = j.contains("n") ? j.at("n").get<int>() : static_cast<int>(agents.size());
  if (inst.n < 1) throw ParseError("instance: n must be >= 1");
  if (agents.size() != static_cast<std::size_t>(inst.n))
    throw ParseError("instance: n=" + std::to_string(inst.n) + " but " + std::to_string(agents.size()) +
                     " agents listed");

  int m = -1;
  if (j.contains("m")) {
    m = j.at("m").get<int>();
    if (m < 0) throw ParseError("instance: m must be >= 0");
  }
  for (std::size_t i = 0; i < agents.size(); ++i) {
    const std::string where = "agent " + std::to_string(i);
    const Json& a = agents[i];
    const Json& values = require(a, "values", where);
    if (!values.is_array()) throw ParseError(where + ": \"values\" must be an array");
    if (m < 0) m = static_cast<int>(values.size());
    if (values.size() != static_cast<std::size_t>(m))
      throw ParseError(where + ": has " + std::to_string(values.size()) + " values, expected " +
                       std::to_string(m));
    Valuation v;
    for (std::size_t k = 0; k < values.size(); ++k)
      v.values.push_back(value_from_json(values[k], where + " item " + std::to_string(k)));
    inst.valuations.push_back(std::move(v));
    inst.agent_ids.push_back(a.contains("id") ? a.at("id").get<std::string>() : std::to_string(i + 1));
  }
  inst.m = m < 0 ? 0 : m;
  if (j.contains("items")) inst.item_labels = j.at("items").get<std::vector<std::string>>();
  try {
    inst.check();
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("instance: ") + e.what());
  }
  return inst;
}

Instance parse_instance(std::string_view text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
  try {
    return instance_from_json(j);
  } catch (const Json::exception& e) {
    throw ParseError(std::string("instance: ") + e.what());
  }
}

Json to_json(const Rational& r) { return to_string(r); }

Json to_json(const Instance& inst) {
  Json j;
  j["n"] = inst.n;
  j["m"] = inst.m;
  Json agents = Json::array();
  for (int i = 0; i < inst.n; ++i) {
    Json a;
    a["id"] = inst.agent_ids.empty() ? std::to_string(i + 1) : inst.agent_ids[i];
    Json values = Json::array();
    for (const auto& v : inst.valuations[i].values) values.push_back(to_string(v));
    a["values"] = std::move(values);
    agents.push_back(std::move(a));
  }
  j["agents"] = std::move(agents);
  if (!inst.item_labels.empty()) j["items"] = inst.item_labels;
  return j;
}

std::string serialize_instance(const Instance& inst) { return to_json(inst).dump(); }

Json to_json(const Partition& p) {
  Json out = Json::array();
  for (const auto& b : p.bundles) out.push_back(b);
  return out;
}

Json to_json(const Allocation& alloc, const Instance& inst) {
  Json bundles = Json::array();
  for (std::size_t b = 0; b < alloc.partition.size(); ++b) {
    Json e;
    const int agent = alloc.owner[b];
    e["agent"] = inst.agent_ids.empty() ? std::to_string(agent + 1) : inst.agent_ids[agent];
    e["items"] = alloc.partition.bundles[b];
    bundles.push_back(std::move(e));
  }
  Json j;
  j["bundles"] = std::move(bundles);
  return j;
}

Json to_json(const AllocationReport& report, const Instance& inst) {
  Json agents = Json::array();
  for (const auto& a : report.agents) {
    Json e;
    e["agent"] = inst.agent_ids.empty() ? std::to_string(a.agent + 1) : inst.agent_ids[a.agent];
    e["value"] = to_string(a.value);
    e["threshold"] = to_string(a.threshold);
    e["ok"] = a.ok;
    agents.push_back(std::move(e));
  }
  Json j;
  j["agents"] = std::move(agents);
  j["verdict"] = report.acceptable ? "acceptable" : "unacceptable";
  Json bad = Json::array();
  for (int v : report.violators())
    bad.push_back(inst.agent_ids.empty() ? std::to_string(v + 1) : inst.agent_ids[v]);
  j["violators"] = std::move(bad);
  return j;
}

Json to_json(const PickingOrder& order) { return order.turns; }

Allocation parse_allocation(std::string_view text, const Instance& inst) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
  const Json& bundles = require(j, "bundles", "allocation");
  if (!bundles.is_array()) throw ParseError("allocation: \"bundles\" must be an array");
  Allocation alloc;
  try {
    for (std::size_t b = 0; b < bundles.size(); ++b) {
      const std::string where = "allocation bundle " + std::to_string(b);
      const std::string id = require(bundles[b], "agent", where).get<std::string>();
      int agent = -1;
      for (int i = 0; i < inst.n; ++i)
        if (inst.agent_ids[i] == id) agent = i;
      if (agent < 0) throw ParseError(where + ": unknown agent \"" + id + "\"");
      auto items = require(bundles[b], "items", where).get<Bundle>();
      std::sort(items.begin(), items.end());
      alloc.partition.bundles.push_back(std::move(items));
      alloc.owner.push_back(agent);
    }
  } catch (const Json::exception& e) {
    throw ParseError(std::string("allocation: ") + e.what());
  }
  return alloc;
}

PickingOrder parse_picking_order(std::string_view text, int n) {
  try {
    PickingOrder w;
    w.n = n;
    w.turns = Json::parse(text).get<std::vector<int>>();
    return w;
  } catch (const Json::exception& e) {
    throw ParseError(std::string("picking order: ") + e.what());
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace fairshare
