#include "fairshare/catalog.hpp"

#include <functional>
#include <map>
#include <stdexcept>

#include "fairshare/nested.hpp"
#include "fairshare/shares.hpp"

namespace fairshare {

namespace {

Instance identical(std::initializer_list<long> values, int n) { return Instance::identical(make_valuation(values), n); }

Instance identical_text(std::initializer_list<const char*> values, int n) {
  return Instance::identical(make_valuation(values), n);
}

ExpectedValue ev(ShareSpec spec, const char* value, const char* source, int agent = 0) {
  return ExpectedValue{std::move(spec), parse_rational(value), agent, source};
}

ExpectedValue guarantee(ShareSpec spec, const char* value, const char* source) {
  ExpectedValue e = ev(std::move(spec), value, source);
  e.quantity = "guarantee";
  return e;
}

Json report(std::initializer_list<const char*> values) {
  Json j = Json::array();
  for (const char* v : values) j.push_back(v);
  return j;
}

using Builder = std::function<CatalogEntry(int)>;

const std::vector<std::pair<std::string, Builder>>& registry() {
  static const std::vector<std::pair<std::string, Builder>> entries = {
      {"example-ns",
       [](int) {
         CatalogEntry e{"example-ns", "four agents where every nested share stays at 4 while the MMS is 5",
                        identical({3, 3, 2, 2, 2, 2, 2, 2, 1, 1}, 4), {}};
         e.expected = {ev(share::Mms{}, "5", "published")};
         for (int q = 1; q <= 4; ++q) e.expected.push_back(ev(share::Nested{q}, "4", "published"));
         return e;
       }},
      {"rho21",
       [](int) {
         CatalogEntry e{"rho21", "two agents, NS_{2,1} reaches exactly 4/5 of the MMS",
                        identical({3, 2, 2, 2, 1}, 2), {}};
         e.expected = {ev(share::Mms{}, "5", "published"), ev(share::Nested{1}, "4", "published"),
                       ev(share::TopN{}, "2", "computed"), ev(share::RoundRobin{}, "4", "computed"),
                       ev(share::Proportional{}, "5", "computed")};
         return e;
       }},
      {"rho22",
       [](int) {
         CatalogEntry e{"rho22", "two agents, NS_{2,2} reaches exactly 5/6 of the MMS",
                        identical({4, 3, 2, 2, 1}, 2), {}};
         e.expected = {ev(share::Mms{}, "6", "computed"), ev(share::Nested{2}, "5", "published")};
         return e;
       }},
      {"rho31",
       [](int) {
         CatalogEntry e{"rho31", "three agents, NS_{3,1} below 0.77 of the MMS (exact thirteenths)",
                        identical_text({"6/13", "6/13", "5/13", "5/13", "5/13", "4/13", "4/13", "2/13", "2/13"}, 3),
                        {}};
         e.expected = {ev(share::Mms{}, "1", "published"), ev(share::Nested{1}, "10/13", "computed")};
         e.meta["published_decimals"] =
             report({"0.4615", "0.4615", "0.3846", "0.3846", "0.3846", "0.3077", "0.3077", "0.1539", "0.1539"});
         return e;
       }},
      {"rho31-decimal",
       [](int) {
         CatalogEntry e{"rho31-decimal", "the rho31 fixture with the published four-digit decimals taken verbatim",
                        identical_text({"0.4615", "0.4615", "0.3846", "0.3846", "0.3846", "0.3077", "0.3077",
                                        "0.1539", "0.1539"},
                                       3),
                        {}};
         e.expected = {ev(share::Mms{}, "1", "published"), ev(share::Nested{1}, "7693/10000", "published")};
         return e;
       }},
      {"rho32",
       [](int) {
         CatalogEntry e{"rho32", "three agents, NS_{3,2} reaches exactly 4/5 of the MMS",
                        identical({3, 3, 2, 2, 2, 2, 1}, 3), {}};
         e.expected = {ev(share::Mms{}, "5", "computed"), ev(share::Nested{2}, "4", "computed"),
                       ev(share::Nested{3}, "5", "published")};
         return e;
       }},
      {"rho33",
       [](int) {
         CatalogEntry e{"rho33", "three agents, NS_{3,3} at 5/6 of the MMS", identical({6, 4, 3, 2, 2, 1}, 3), {}};
         e.expected = {ev(share::Mms{}, "6", "computed"), ev(share::Nested{3}, "5", "published")};
         return e;
       }},
      {"rho42",
       [](int) {
         CatalogEntry e{"rho42", "four agents, NS_{4,2} at 3/4 of the MMS",
                        identical({4, 4, 3, 3, 3, 3, 3, 3, 2, 2, 2}, 4), {}};
         e.expected = {ev(share::Mms{}, "8", "published"), ev(share::Nested{2}, "6", "published")};
         return e;
       }},
      {"milp-witness",
       [](int) {
         CatalogEntry e{"milp-witness", "item values produced by the n=4 mixed-integer program",
                        identical({4, 4, 2, 2, 2, 2, 1, 1, 1, 1}, 4), {}};
         e.expected = {ev(share::Mms{}, "5", "computed"), ev(share::Nested{3}, "5", "published"),
                       ev(share::Nested{2}, "5", "published"), ev(share::Nested{1}, "4", "computed")};
         return e;
       }},
      {"ps-guarantee",
       [](int) {
         CatalogEntry e{"ps-guarantee", "proportional share 3/2 whose guarantee is 2", identical({2, 1}, 2), {}};
         e.expected = {ev(share::Proportional{}, "3/2", "published"),
                       guarantee(share::Proportional{}, "2", "published")};
         return e;
       }},
      {"ps-example",
       [](int) {
         CatalogEntry e{"ps-example", "proportional share where misreporting raises the implied guarantee",
                        identical({5, 4, 4, 2}, 3), {}};
         e.expected = {ev(share::Proportional{}, "5", "published"),
                       guarantee(share::Proportional{}, "5", "published")};
         e.meta["report"] = report({"4", "4", "4", "3"});
         e.meta["implied_guarantee"] = "6";
         return e;
       }},
      {"ps-cex",
       [](int) {
         CatalogEntry e{"ps-cex", "three agents, the proportional share is not self-maximizing",
                        identical_text({"2/3", "2/3", "2/3", "1/2", "1/2"}, 3), {}};
         e.expected = {ev(share::Proportional{}, "1", "computed"), guarantee(share::Proportional{}, "1", "computed")};
         e.meta["report"] = report({"5/6", "5/6", "5/6", "1/4", "1/4"});
         e.meta["implied_guarantee"] = "7/6";
         return e;
       }},
      {"rhomms-cex",
       [](int) {
         CatalogEntry e{"rhomms-cex", "two agents, 3/4 of the MMS is not self-maximizing",
                        identical_text({"1", "3/4", "1/4"}, 2), {}};
         e.expected = {ev(share::RhoMms{Rational(3, 4)}, "3/4", "computed"),
                       guarantee(share::RhoMms{Rational(3, 4)}, "3/4", "published")};
         e.meta["rho"] = "3/4";
         e.meta["report"] = report({"1", "1/2", "1/2"});
         e.meta["implied_guarantee"] = "1";
         return e;
       }},
      {"ptas-cex",
       [](int) {
         // Found by seeded search over two-agent instances with m = 12.
         CatalogEntry e{"ptas-cex", "two agents where the eps=1/4 ptas share falls strictly below the MMS",
                        identical({30, 30, 29, 24, 20, 19, 15, 14, 10, 10, 6, 5}, 2), {}};
         e.expected = {ev(share::Mms{}, "106", "computed"), ev(share::Ptas2{Rational(1, 4)}, "105", "computed")};
         e.meta["epsilon"] = "1/4";
         return e;
       }},
      {"mms-infeasible",
       [](int) {
         // Found by seeded local search; the exhaustive allocation search
         // confirms that no allocation gives all three agents their MMS.
         CatalogEntry e{"mms-infeasible", "three agents with no allocation meeting every MMS",
                        Instance::from_valuations({make_valuation({8, 132, 180, 203, 26, 86, 100, 146, 69}),
                                                   make_valuation({7, 121, 186, 196, 27, 76, 105, 156, 82}),
                                                   make_valuation({8, 126, 179, 206, 26, 63, 105, 166, 72})}),
                        {}};
         e.expected = {ev(share::Mms{}, "315", "computed", 0), ev(share::Mms{}, "317", "computed", 1),
                       ev(share::Mms{}, "314", "computed", 2)};
         e.meta["mms_allocation_exists"] = false;
         return e;
       }},
      {"worstcase",
       [](int k) {
         const WorstCase w = worstcase_instance(k);
         CatalogEntry e{"worstcase", "grouped instance where NS_{n,1} = 1 while the MMS is at least 3/2 - 1/(2k)",
                        Instance::identical(w.v, w.n), {}};
         e.expected = {ev(share::Nested{1}, "1", "published")};
         e.meta["k"] = k;
         e.meta["certified_partition"] = to_json(w.certified);
         e.meta["certified_min_value"] = to_string(min_bundle_value(w.v, w.certified));
         return e;
       }},
  };
  return entries;
}

}  // namespace

std::vector<std::string> catalog_names() {
  std::vector<std::string> names;
  for (const auto& [name, _] : registry()) names.push_back(name);
  return names;
}

CatalogEntry catalog_entry(const std::string& name, int k) {
  for (const auto& [n, build] : registry())
    if (n == name) return build(k);
  throw std::out_of_range("unknown catalog entry '" + name + "'");
}

Json to_json(const CatalogEntry& entry) {
  Json j = to_json(entry.instance);
  Json meta = Json::object();
  meta["name"] = entry.name;
  meta["description"] = entry.description;
  Json expected = Json::array();
  for (const auto& e : entry.expected) {
    Json x;
    x["share"] = describe(e.spec);
    x["quantity"] = e.quantity;
    x["agent"] = entry.instance.agent_ids.empty() ? std::to_string(e.agent + 1) : entry.instance.agent_ids[e.agent];
    x["value"] = to_string(e.value);
    x["source"] = e.source;
    expected.push_back(std::move(x));
  }
  meta["expected"] = std::move(expected);
  for (const auto& [key, value] : entry.meta.items()) meta[key] = value;
  j["meta"] = std::move(meta);
  return j;
}

std::vector<CatalogMismatch> check_catalog_entry(const CatalogEntry& entry) {
  std::vector<CatalogMismatch> out;
  for (const auto& e : entry.expected) {
    const Valuation& v = entry.instance.valuations.at(e.agent);
    const Rational actual = e.quantity == "guarantee" ? share_guarantee(e.spec, v, entry.instance.n)
                                                      : share_value(e.spec, v, entry.instance.n);
    if (actual != e.value)
      out.push_back({entry.name, describe(e.spec) + (e.quantity == "guarantee" ? " guarantee" : ""), e.agent,
                     e.value, actual});
  }
  return out;
}

ShareSpec parse_share(const std::string& name, const std::optional<std::string>& param) {
  auto need = [&](const char* what) -> const std::string& {
    if (!param) throw std::invalid_argument("share '" + name + "' needs " + what);
    return *param;
  };
  if (name == "ps") return share::Proportional{};
  if (name == "mms") return share::Mms{};
  if (name == "top-n") return share::TopN{};
  if (name == "top-n-minus-1") return share::TopNMinus1{};
  if (name == "round-robin") return share::RoundRobin{};
  if (name == "rho-mms") return share::RhoMms{parse_rational(need("--rho"))};
  if (name == "ns") return share::Nested{std::stoi(need("--q"))};
  if (name == "ptas2") return share::Ptas2{parse_rational(param.value_or("1/10"))};
  if (name == "picking") throw std::invalid_argument("share 'picking' needs a picking order (--order)");
  throw std::invalid_argument("unknown share '" + name + "'");
}

}  // namespace fairshare
