// Command-line front end. Every command prints one JSON document on stdout
// (or a table with --pretty). Exit codes: 0 ok, 2 bad input, 3 size limit,
// 4 failed internal validation, 5 unsupported share.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "fairshare/catalog.hpp"
#include "fairshare/errors.hpp"
#include "fairshare/generators.hpp"
#include "fairshare/json_io.hpp"
#include "fairshare/milp.hpp"
#include "fairshare/nested.hpp"
#include "fairshare/oracle.hpp"
#include "fairshare/ordinal.hpp"
#include "fairshare/picking.hpp"
#include "fairshare/shares.hpp"
#include "fairshare/sweeps.hpp"

using namespace fairshare;

namespace {

struct Globals {
  std::string instance_path;
  std::string catalog;
  int k = 2;
  std::uint64_t seed = 0;
  bool pretty = false;
  bool json = false;
  int limit_m = 24;
};

struct ShareFlags {
  std::string name = "mms";
  std::optional<int> q;
  std::optional<std::string> rho;
  std::string eps = "1/10";
  std::string order = "roundrobin";
  std::string agent = "all";
};

class Unsupported : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

Json header(const Globals& g, const std::string& command) {
  Json j;
  j["tool"] = "fairshare";
  j["version"] = FAIRSHARE_VERSION;
  j["command"] = command;
  j["seed"] = g.seed;
  return j;
}

OracleLimits limits(const Globals& g) {
  OracleLimits l;
  l.max_items = g.limit_m;
  return l;
}

Instance load_instance(const Globals& g) {
  if (!g.instance_path.empty() && !g.catalog.empty())
    throw std::invalid_argument("use either --instance or --catalog, not both");
  if (!g.catalog.empty()) return catalog_entry(g.catalog, g.k).instance;
  if (g.instance_path.empty()) throw std::invalid_argument("no instance given (--instance or --catalog)");
  return parse_instance(read_file(g.instance_path));
}

PickingOrder resolve_order(const std::string& text, const Instance& inst, const OracleLimits& lim) {
  if (text == "roundrobin") return PickingOrder::round_robin(inst.n, inst.m);
  if (text == "mms") return mms_picking_order(inst.valuations.at(0), inst.n, lim);
  if (text.rfind("file:", 0) == 0) return parse_picking_order(read_file(text.substr(5)), inst.n);
  throw std::invalid_argument("--order must be roundrobin, mms or file:<path>");
}

ShareSpec resolve_share(const ShareFlags& f, const Instance& inst, const OracleLimits& lim) {
  if (f.name == "picking") return share::Picking{resolve_order(f.order, inst, lim)};
  std::optional<std::string> param;
  if (f.name == "ns" && f.q) param = std::to_string(*f.q);
  if (f.name == "rho-mms") param = f.rho;
  if (f.name == "ptas2") param = f.eps;
  return parse_share(f.name, param);
}

std::vector<int> selected_agents(const std::string& sel, const Instance& inst) {
  std::vector<int> out;
  for (int i = 0; i < inst.n; ++i)
    if (sel == "all" || inst.agent_ids[i] == sel) out.push_back(i);
  if (out.empty()) throw std::invalid_argument("no agent with id '" + sel + "'");
  return out;
}

Json shape_json(const NsPartitionShape& s) {
  Json j;
  j["k"] = s.k;
  j["prefix_cuts"] = s.prefix_cuts;
  j["suffix_cuts"] = s.suffix_cuts;
  return j;
}

// Agent bundles of an allocation, ids in agent order.
Json agents_table(const Instance& inst, const Allocation& alloc, const std::vector<Rational>& thresholds) {
  Json rows = Json::array();
  for (int a = 0; a < inst.n; ++a) {
    Json r;
    r["agent"] = inst.agent_ids[a];
    r["items"] = alloc.bundle_of(a);
    r["value"] = to_string(bundle_value(inst.valuations[a], alloc.bundle_of(a)));
    r["share"] = to_string(thresholds[a]);
    rows.push_back(std::move(r));
  }
  return rows;
}

Json cmd_compute(const Globals& g, const ShareFlags& f) {
  const Instance inst = load_instance(g);
  const OracleLimits lim = limits(g);
  const ShareSpec spec = resolve_share(f, inst, lim);
  Json out = header(g, "compute");
  out["share"] = describe(spec);
  Json rows = Json::array();
  for (int a : selected_agents(f.agent, inst)) {
    const Valuation& v = inst.valuations[a];
    const ShareEvaluation e = evaluate_share(spec, v, inst.n, lim);
    Json r;
    r["agent"] = inst.agent_ids[a];
    r["value"] = to_string(e.value);
    r["guarantee"] = to_string(e.guarantee);
    if (e.witness) r["witness"] = to_json(*e.witness);
    if (e.guarantee_bundle) r["guarantee_bundle"] = *e.guarantee_bundle;
    if (const auto* ns = std::get_if<share::Nested>(&spec)) {
      const NsResult res = ns_share(v, inst.n, ns->q);
      if (res.shape) r["shape"] = shape_json(*res.shape);
    }
    rows.push_back(std::move(r));
  }
  out["agents"] = std::move(rows);
  return out;
}

Allocation mms_cut_and_choose(const Instance& inst, const OracleLimits& lim) {
  if (inst.n > 2) throw Unsupported("an MMS allocation need not exist for three or more agents");
  if (inst.n == 1) {
    Bundle all(inst.m);
    for (int j = 0; j < inst.m; ++j) all[j] = j;
    return Allocation::from_agent_bundles({all});
  }
  const Partition p = mms_exact(inst.valuations[0], 2, lim).witness;
  const Valuation& v2 = inst.valuations[1];
  const bool first = bundle_value(v2, p.bundles[0]) >= bundle_value(v2, p.bundles[1]);
  return Allocation::from_agent_bundles(first ? std::vector{p.bundles[1], p.bundles[0]}
                                              : std::vector{p.bundles[0], p.bundles[1]});
}

Json cmd_allocate(const Globals& g, const ShareFlags& f) {
  const Instance inst = load_instance(g);
  const OracleLimits lim = limits(g);
  const ShareSpec spec = resolve_share(f, inst, lim);
  Allocation alloc;
  if (const auto* ns = std::get_if<share::Nested>(&spec)) {
    alloc = ns_allocate(inst, ns->q);
  } else if (const auto* p = std::get_if<share::Ptas2>(&spec)) {
    if (inst.n != 2) throw Unsupported("the ptas share is defined for two agents only");
    alloc = ptas2_allocate(inst.valuations[0], inst.valuations[1], p->epsilon, lim);
  } else if (const auto* pk = std::get_if<share::Picking>(&spec)) {
    alloc = picking_allocate(inst, pk->order);
  } else if (std::holds_alternative<share::RoundRobin>(spec)) {
    alloc = picking_allocate(inst, PickingOrder::round_robin(inst.n, inst.m));
  } else if (std::holds_alternative<share::Mms>(spec)) {
    alloc = mms_cut_and_choose(inst, lim);
  } else {
    throw Unsupported("no allocation procedure for share " + describe(spec));
  }
  std::vector<Rational> thresholds;
  for (const auto& v : inst.valuations) thresholds.push_back(share_value(spec, v, inst.n, lim));
  const AllocationReport rep = validate_allocation(inst, alloc, thresholds);
  if (!rep.acceptable) throw InternalError("allocation failed validation; not emitted");
  Json out = header(g, "allocate");
  out["share"] = describe(spec);
  out["allocation"] = to_json(alloc, inst);
  out["validation"] = to_json(rep, inst);
  out["agents"] = agents_table(inst, alloc, thresholds);
  return out;
}

Json cmd_verify(const Globals& g, const ShareFlags& f, const std::string& allocation_path) {
  const Instance inst = load_instance(g);
  const OracleLimits lim = limits(g);
  const ShareSpec spec = resolve_share(f, inst, lim);
  const Allocation alloc = parse_allocation(read_file(allocation_path), inst);
  std::vector<Rational> thresholds;
  for (const auto& v : inst.valuations) thresholds.push_back(share_value(spec, v, inst.n, lim));
  const AllocationReport rep = validate_allocation(inst, alloc, thresholds);
  Json out = header(g, "verify");
  out["share"] = describe(spec);
  out["acceptable"] = rep.acceptable;
  out["validation"] = to_json(rep, inst);
  out["agents"] = agents_table(inst, alloc, thresholds);
  return out;
}

Json cmd_mms(const Globals& g, const std::string& agent) {
  const Instance inst = load_instance(g);
  const OracleLimits lim = limits(g);
  Json out = header(g, "mms");
  Json rows = Json::array();
  for (int a : selected_agents(agent, inst)) {
    const MmsResult r = mms_exact(inst.valuations[a], inst.n, lim);
    Json row;
    row["agent"] = inst.agent_ids[a];
    row["mms"] = to_string(r.value);
    row["witness"] = to_json(r.witness);
    rows.push_back(std::move(row));
  }
  out["agents"] = std::move(rows);
  return out;
}

Json cmd_selfmax(const Globals& g, const ShareFlags& f, const std::string& policy_text, bool serial) {
  const Instance inst = load_instance(g);
  const OracleLimits lim = limits(g);
  const ShareSpec spec = resolve_share(f, inst, lim);
  ProbePolicy policy;
  if (policy_text == "catalog") {
    if (g.catalog.empty()) throw std::invalid_argument("--policy catalog needs --catalog");
    const CatalogEntry e = catalog_entry(g.catalog, g.k);
    if (!e.meta.contains("report")) throw std::invalid_argument("catalog entry has no stored report");
    std::vector<Rational> vals;
    for (const auto& x : e.meta["report"]) vals.push_back(parse_rational(x.get<std::string>()));
    policy = probe::Explicit{{Valuation(std::move(vals))}};
  } else {
    policy = parse_probe_policy(policy_text);
  }
  Json out = header(g, "selfmax");
  out["share"] = describe(spec);
  out["policy"] = policy_text;
  Json rows = Json::array();
  const std::string who = f.agent == "all" ? inst.agent_ids[0] : f.agent;
  for (int a : selected_agents(who, inst)) {
    const ProbeVerdict v = serial ? self_max_probe_serial(spec, inst.valuations[a], inst.n, policy, lim)
                                  : self_max_probe(spec, inst.valuations[a], inst.n, policy, lim);
    Json r;
    r["agent"] = inst.agent_ids[a];
    r["improved"] = v.improved;
    r["guarantee"] = to_string(v.baseline);
    r["best_implied_guarantee"] = to_string(v.best_found);
    r["reports"] = v.reports;
    if (v.witness_report) {
      Json w = Json::array();
      for (const auto& x : v.witness_report->values) w.push_back(to_string(x));
      r["witness_report"] = std::move(w);
    }
    rows.push_back(std::move(r));
  }
  out["agents"] = std::move(rows);
  return out;
}

Json cmd_ratio(const Globals& g, const ShareFlags& f, const std::string& generator, std::size_t trials,
               const std::string& csv_path, bool serial) {
  const GeneratorFamily fam = parse_generator(generator);
  // Picking orders depend on the instance; the sweep supports fixed specs.
  if (f.name == "picking") throw Unsupported("ratio sweeps do not support picking orders");
  const ShareSpec spec = resolve_share(f, Instance{}, limits(g));
  const SweepReport r = serial ? ratio_sweep_serial(spec, fam, trials, g.seed, limits(g))
                               : ratio_sweep(spec, fam, trials, g.seed, limits(g));
  if (!csv_path.empty()) {
    std::ofstream csv(csv_path);
    if (!csv) throw std::invalid_argument("cannot write " + csv_path);
    csv << to_csv(r);
  }
  Json out = header(g, "ratio");
  out["share"] = describe(spec);
  out["generator"] = generator;
  out["trials"] = trials;
  out["skipped"] = r.skipped;
  out["min_ratio"] = to_string(r.min_ratio);
  if (r.argmin) {
    out["argmin_trial"] = *r.argmin;
    out["witness"] = to_json(*r.witness);
  }
  Json rows = Json::array();
  for (const auto& t : r.trials) {
    Json row;
    row["trial"] = t.trial;
    row["seed"] = t.seed;
    if (t.skipped) {
      row["skipped"] = t.reason;
    } else {
      row["ratio"] = to_string(t.ratio);
      row["running_min"] = to_string(t.running_min);
    }
    rows.push_back(std::move(row));
  }
  out["per_trial"] = std::move(rows);
  return out;
}

Json solution_json(const MilpSolution& s) {
  Json j;
  j["status"] = s.status == MilpSolution::Status::Optimal ? "optimal" : "infeasible";
  if (s.status == MilpSolution::Status::Optimal) {
    j["objective"] = to_string(s.objective);
    Json x = Json::array();
    for (const auto& v : s.x) x.push_back(to_string(v));
    j["x"] = std::move(x);
    j["z"] = to_string(s.z);
    Json y = Json::object();
    for (std::size_t i = 0; i < s.y.size(); ++i) y[s.y_names[i]] = s.y[i] ? 1 : 0;
    j["y"] = std::move(y);
  }
  j["nodes"] = s.nodes;
  j["lp_solves"] = s.lp_solves;
  return j;
}

Json cmd_milp(const Globals& g, const std::string& export_path, bool do_solve, const std::string& verify_path,
              bool with_p14, const SolveOptions& solve_opts, std::string* raw_text) {
  const MilpModel model = build_model({with_p14});
  Json out = header(g, "milp");
  out["variables"] = model.vars.size();
  out["constraints"] = model.constraints.size();
  if (!export_path.empty()) {
    const std::string text = export_lp(model);
    if (export_path == "-") {
      *raw_text = text;
      return out;
    }
    std::ofstream f(export_path);
    if (!f) throw std::invalid_argument("cannot write " + export_path);
    f << text;
    out["exported"] = export_path;
  }
  if (do_solve) out["solution"] = solution_json(solve(model, solve_opts));
  if (!verify_path.empty()) {
    const Json w = Json::parse(read_file(verify_path));
    if (!w.contains("x") || !w.contains("z")) throw ParseError("witness needs \"x\" and \"z\"");
    std::vector<Rational> x;
    for (const auto& v : w["x"]) x.push_back(v.is_string() ? parse_rational(v.get<std::string>())
                                                           : parse_rational(v.dump()));
    const Rational z = w["z"].is_string() ? parse_rational(w["z"].get<std::string>()) : parse_rational(w["z"].dump());
    std::optional<std::map<std::string, bool>> y;
    if (w.contains("y")) {
      y.emplace();
      for (const auto& [name, val] : w["y"].items()) (*y)[name] = val.is_boolean() ? val.get<bool>() : val.get<int>() != 0;
    }
    const WitnessReport rep = verify_witness(model, x, z, y);
    Json v;
    v["ok"] = rep.ok;
    Json violated = Json::array();
    for (const auto& r : rep.rows)
      if (!r.satisfied) violated.push_back(r.label);
    v["violated"] = std::move(violated);
    Json ys = Json::object();
    for (const auto& [name, on] : rep.y) ys[name] = on ? 1 : 0;
    v["y"] = std::move(ys);
    out["verify"] = std::move(v);
  }
  return out;
}

Json cmd_catalog(const Globals& g, const std::string& name, bool list) {
  if (list || name.empty()) {
    Json out = header(g, "catalog");
    Json rows = Json::array();
    for (const auto& n : catalog_names()) {
      const CatalogEntry e = catalog_entry(n, n == "worstcase" ? 1 : g.k);
      Json r;
      r["name"] = n;
      r["description"] = e.description;
      Json src = Json::array();
      for (const auto& x : e.expected) src.push_back(describe(x.spec) + ": " + x.source);
      r["expected"] = std::move(src);
      rows.push_back(std::move(r));
    }
    out["entries"] = std::move(rows);
    return out;
  }
  return to_json(catalog_entry(name, g.k));
}

Json cmd_gen(const Globals& g, const std::string& generator) {
  return to_json(generate({parse_generator(generator), g.seed}));
}

std::string cell(const Json& v) {
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

// Header fields as "key: value" lines, then an "agents" (or "entries",
// "per_trial") array as an aligned table.
std::string render_pretty(const Json& j) {
  if (!j.is_object()) return j.dump(2) + "\n";
  std::ostringstream out;
  const char* table_keys[] = {"agents", "entries", "per_trial"};
  const Json* table = nullptr;
  for (const char* k : table_keys)
    if (j.contains(k) && j[k].is_array()) table = &j[k];
  for (const auto& [key, val] : j.items()) {
    if (table && &val == table) continue;
    if (val.is_primitive()) out << key << ": " << cell(val) << '\n';
    else out << key << ": " << val.dump() << '\n';
  }
  if (!table || table->empty()) return out.str();
  std::vector<std::string> cols;
  for (const auto& [k, _] : (*table)[0].items()) cols.push_back(k);
  std::vector<std::size_t> width(cols.size());
  std::vector<std::vector<std::string>> cells;
  for (std::size_t c = 0; c < cols.size(); ++c) width[c] = cols[c].size();
  for (const auto& row : *table) {
    std::vector<std::string> r;
    for (std::size_t c = 0; c < cols.size(); ++c) {
      r.push_back(row.contains(cols[c]) ? cell(row[cols[c]]) : "");
      width[c] = std::max(width[c], r.back().size());
    }
    cells.push_back(std::move(r));
  }
  auto line = [&](const std::vector<std::string>& r) {
    for (std::size_t c = 0; c < r.size(); ++c) {
      out << r[c];
      if (c + 1 < r.size()) out << std::string(width[c] - r[c].size() + 2, ' ');
    }
    out << '\n';
  };
  out << '\n';
  line(cols);
  for (const auto& r : cells) line(r);
  return out.str();
}

int fail(int code, const std::string& kind, const std::string& message) {
  Json err;
  err["error"] = {{"kind", kind}, {"message", message}, {"exit_code", code}};
  std::cout << err.dump(2) << '\n';
  std::cerr << "fairshare: " << message << '\n';
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Share values, guarantees and allocations for fair division of indivisible goods"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--instance", g.instance_path, "instance JSON file");
  app.add_option("--catalog", g.catalog, "catalog fixture name");
  app.add_option("--k", g.k, "parameter of the worstcase fixture");
  app.add_option("--seed", g.seed, "seed for generators and sweeps");
  app.add_flag("--json", g.json, "JSON output (default)");
  app.add_flag("--pretty", g.pretty, "render tables");
  app.add_option("--limit-m", g.limit_m, "item limit of the exact searches");

  ShareFlags f;
  auto add_share = [&](CLI::App* c) {
    c->add_option("--share", f.name, "ps, mms, rho-mms, top-n, top-n-minus-1, round-robin, picking, ns, ptas2");
    c->add_option("--q", f.q, "q of the nested share");
    c->add_option("--rho", f.rho, "rho of rho-mms");
    c->add_option("--eps", f.eps, "epsilon of ptas2");
    c->add_option("--order", f.order, "picking order: roundrobin, mms or file:<path>");
    c->add_option("--agent", f.agent, "agent id or 'all'");
  };

  auto* compute = app.add_subcommand("compute", "share value, guarantee and witness per agent");
  add_share(compute);
  auto* allocate = app.add_subcommand("allocate", "allocation giving every agent her share");
  add_share(allocate);
  std::string allocation_path;
  auto* verify = app.add_subcommand("verify", "check an allocation against a share");
  add_share(verify);
  verify->add_option("--allocation", allocation_path, "allocation JSON file")->required();
  std::string mms_agent = "all";
  auto* mms = app.add_subcommand("mms", "maximin share with a witness partition");
  mms->add_option("--agent", mms_agent, "agent id or 'all'");
  std::string policy = "random:1000:42";
  bool serial = false;
  auto* selfmax = app.add_subcommand("selfmax", "search for misreports that raise the implied guarantee");
  add_share(selfmax);
  selfmax->add_option("--policy", policy, "random:<count>:<seed>, swaps, scale:<f,...>, file:<path> or catalog");
  selfmax->add_flag("--serial", serial, "single-threaded");
  std::string generator = "uniform:8:3";
  std::size_t trials = 100;
  std::string csv_path;
  auto* ratio = app.add_subcommand("ratio", "share/MMS ratio sweep over generated instances");
  add_share(ratio);
  ratio->add_option("--generator", generator, "uniform:<m>:<n>[:<max>], correlated:..., worstcase:<k>, catalog:<name>");
  ratio->add_option("--trials", trials, "number of trials");
  ratio->add_option("--csv", csv_path, "also write per-trial CSV here");
  ratio->add_flag("--serial", serial, "single-threaded");
  std::string export_path, verify_path;
  bool do_solve = false, with_p14 = false;
  SolveOptions solve_opts;
  auto* milp = app.add_subcommand("milp", "the n=4, q=3 mixed-integer certificate");
  milp->add_option("--export", export_path, "write the LP file ('-' for stdout)");
  milp->add_flag("--solve", do_solve, "solve exactly by branch and bound");
  milp->add_option("--verify", verify_path, "check a witness JSON {x, z[, y]}");
  milp->add_flag("--with-p14", with_p14, "re-enable the commented-out row p14");
  milp->add_flag("--highest-first", solve_opts.highest_index_first, "branch on the highest fractional binary");
  milp->add_flag("--one-first", solve_opts.one_first, "explore y=1 before y=0");
  std::string catalog_name;
  bool list = false;
  auto* catalog = app.add_subcommand("catalog", "fixture instances with expected values");
  catalog->add_option("name", catalog_name, "fixture name");
  catalog->add_flag("--list", list, "list fixtures");
  std::string gen_spec = "uniform:8:3";
  auto* gen = app.add_subcommand("gen", "generate a seeded instance");
  gen->add_option("--generator", gen_spec, "uniform:<m>:<n>[:<max>], correlated:..., worstcase:<k>, catalog:<name>");
  for (auto* c : {compute, allocate, verify, mms, selfmax, ratio, milp, catalog, gen}) c->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail(2, "usage", e.what());
  }

  try {
    Json out;
    std::string raw;
    if (*compute) out = cmd_compute(g, f);
    else if (*allocate) out = cmd_allocate(g, f);
    else if (*verify) out = cmd_verify(g, f, allocation_path);
    else if (*mms) out = cmd_mms(g, mms_agent);
    else if (*selfmax) out = cmd_selfmax(g, f, policy, serial);
    else if (*ratio) out = cmd_ratio(g, f, generator, trials, csv_path, serial);
    else if (*milp) out = cmd_milp(g, export_path, do_solve, verify_path, with_p14, solve_opts, &raw);
    else if (*catalog) out = cmd_catalog(g, catalog_name, list);
    else if (*gen) out = cmd_gen(g, gen_spec);
    if (!raw.empty()) std::cout << raw;
    else std::cout << (g.pretty ? render_pretty(out) : out.dump(2) + "\n");
    return 0;
  } catch (const ParseError& e) {
    return fail(2, "parse", e.what());
  } catch (const ScaleExceeded& e) {
    return fail(3, "scale", e.what());
  } catch (const InternalError& e) {
    return fail(4, "internal", e.what());
  } catch (const UnsupportedShare& e) {
    return fail(5, "unsupported", e.what());
  } catch (const Unsupported& e) {
    return fail(5, "unsupported", e.what());
  } catch (const Json::exception& e) {
    return fail(2, "parse", e.what());
  } catch (const std::invalid_argument& e) {
    return fail(2, "parse", e.what());
  } catch (const std::out_of_range& e) {
    return fail(2, "parse", e.what());
  } catch (const std::domain_error& e) {
    return fail(2, "parse", e.what());
  }
}
