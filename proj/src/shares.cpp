#include "fairshare/shares.hpp"

#include <algorithm>
#include <exception>
#include <random>
#include <sstream>
#include <stdexcept>

#include "fairshare/errors.hpp"
#include "fairshare/json_io.hpp"
#include "fairshare/nested.hpp"
#include "fairshare/ordinal.hpp"
#include "fairshare/picking.hpp"

namespace fairshare {

namespace {

struct Valued {
  Rational value;
  std::optional<Partition> witness;
};

Valued compute(const ShareSpec& spec, const Valuation& v, int n, const OracleLimits& limits) {
  if (n < 1) throw std::invalid_argument("share needs n >= 1");
  const int m = static_cast<int>(v.size());
  struct Visitor {
    const Valuation& v;
    int n, m;
    const OracleLimits& limits;

    Valued operator()(const share::Proportional&) const { return {v.total() / n, std::nullopt}; }
    Valued operator()(const share::RhoMms& s) const {
      if (sgn(s.rho) <= 0 || s.rho > 1) throw std::invalid_argument("rho must lie in (0, 1]");
      MmsResult r = mms_exact(v, n, limits);
      Rational value = s.rho * r.value;
      value.canonicalize();
      return {value, std::nullopt};
    }
    Valued operator()(const share::Mms&) const {
      MmsResult r = mms_exact(v, n, limits);
      return {r.value, r.witness};
    }
    Valued operator()(const share::TopN&) const {
      if (m < n) return {0, std::nullopt};
      return {order_values(v).sorted[n - 1], std::nullopt};
    }
    Valued operator()(const share::TopNMinus1&) const {
      if (m < n) return {0, std::nullopt};
      const OrderedValuation ov = order_values(v);
      Rational tail = 0;
      for (int r = n - 1; r < m; ++r) tail += ov.sorted[r];  // the m-n+1 smallest
      if (n == 1) return {tail, std::nullopt};
      return {std::min(ov.sorted[n - 2], tail), std::nullopt};
    }
    Valued operator()(const share::Picking& s) const {
      if (s.order.n != n) throw std::invalid_argument("picking order is for a different number of agents");
      FamilyResult r = eval_family(v, n, family::Picking{s.order}, limits);
      return {picking_share(v, s.order), r.best};
    }
    Valued operator()(const share::RoundRobin&) const {
      const PickingOrder w = PickingOrder::round_robin(n, m);
      FamilyResult r = eval_family(v, n, family::RoundRobin{}, limits);
      return {picking_share(v, w), r.best};
    }
    Valued operator()(const share::Nested& s) const {
      NsResult r = ns_share(v, n, s.q);
      return {r.value, r.witness};
    }
    Valued operator()(const share::Ptas2& s) const {
      if (n != 2) throw UnsupportedShare("ptas2 share is defined for two agents only");
      Ptas2Result r = ptas2_share(v, s.epsilon, limits);
      return {r.value, r.best};
    }
  };
  return std::visit(Visitor{v, n, m, limits}, spec);
}

Valuation perturbed(const Valuation& v, std::mt19937_64& rng, bool shuffle) {
  const std::size_t m = v.size();
  if (m == 0) return v;
  const Rational step = v.total() / (4 * static_cast<long>(m));
  std::uniform_int_distribution<int> delta(-4, 4);
  std::vector<Rational> out;
  out.reserve(m);
  for (std::size_t j = 0; j < m; ++j) {
    Rational x = v[j] + delta(rng) * step;
    if (sgn(x) < 0) x = 0;
    x.canonicalize();
    out.push_back(x);
  }
  if (shuffle) std::shuffle(out.begin(), out.end(), rng);
  return Valuation(std::move(out));
}

template <bool Parallel>
ProbeVerdict run_probe(const ShareSpec& spec, const Valuation& v, int n, const ProbePolicy& policy,
                   const OracleLimits& limits) {
  const std::vector<Valuation> reports = generate_reports(policy, v);
  for (const auto& r : reports)
    if (r.size() != v.size()) throw std::invalid_argument("report covers a different item set");

  ProbeVerdict verdict;
  verdict.baseline = share_guarantee(spec, v, n, limits);
  verdict.best_found = verdict.baseline;
  verdict.reports = reports.size();

  std::vector<Rational> implied(reports.size());
  std::vector<std::exception_ptr> errors(reports.size());
  const long count = static_cast<long>(reports.size());
#pragma omp parallel for schedule(dynamic) if (Parallel)
  for (long i = 0; i < count; ++i) {
    try {
      implied[i] = implied_guarantee(spec, v, reports[i], n, limits);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  // First report attaining the best value wins.
  for (long i = 0; i < count; ++i)
    if (implied[i] > verdict.best_found) {
      verdict.best_found = implied[i];
      verdict.witness_report = reports[i];
    }
  verdict.improved = verdict.best_found > verdict.baseline;
  return verdict;
}

}  // namespace

Rational share_value(const ShareSpec& spec, const Valuation& v, int n, const OracleLimits& limits) {
  return compute(spec, v, n, limits).value;
}

ShareEvaluation evaluate_share(const ShareSpec& spec, const Valuation& v, int n, const OracleLimits& limits) {
  Valued c = compute(spec, v, n, limits);
  ShareEvaluation e;
  e.spec = spec;
  e.value = c.value;
  e.witness = std::move(c.witness);
  BundleResult g = min_acceptable_bundle(v, e.value, limits);
  e.guarantee = g.value;
  e.guarantee_bundle = std::move(g.bundle);
  return e;
}

Rational share_guarantee(const ShareSpec& spec, const Valuation& v, int n, const OracleLimits& limits) {
  return min_acceptable_bundle(v, share_value(spec, v, n, limits), limits).value;
}

Rational implied_guarantee(const ShareSpec& spec, const Valuation& true_v, const Valuation& report_v, int n,
                           const OracleLimits& limits) {
  if (true_v.size() != report_v.size()) throw std::invalid_argument("report covers a different item set");
  const Rational threshold = share_value(spec, report_v, n, limits);
  return min_objective_bundle(true_v, report_v, threshold, limits).value;
}

ProbePolicy parse_probe_policy(const std::string& text) {
  auto fail = [&](const std::string& why) { return std::invalid_argument("bad probe policy '" + text + "': " + why); };
  if (text == "swaps") return probe::Swaps{};
  if (text.rfind("random:", 0) == 0) {
    std::istringstream in(text.substr(7));
    std::string count, seed;
    if (!std::getline(in, count, ':') || !std::getline(in, seed)) throw fail("expected random:<count>:<seed>");
    try {
      return probe::Random{std::stoull(count), std::stoull(seed)};
    } catch (const std::exception&) {
      throw fail("count and seed must be integers");
    }
  }
  if (text.rfind("scale:", 0) == 0) {
    probe::ScaleGrid g;
    std::istringstream in(text.substr(6));
    std::string tok;
    while (std::getline(in, tok, ',')) g.factors.push_back(parse_rational(tok));
    if (g.factors.empty()) throw fail("empty grid");
    return g;
  }
  if (text.rfind("file:", 0) == 0) {
    const Json j = Json::parse(read_file(text.substr(5)));
    probe::Explicit e;
    for (const auto& row : j) {
      std::vector<Rational> vals;
      for (const auto& x : row) vals.push_back(x.is_string() ? parse_rational(x.get<std::string>())
                                                             : parse_rational(x.dump()));
      e.reports.emplace_back(std::move(vals));
    }
    return e;
  }
  throw fail("unknown policy");
}

std::vector<Valuation> generate_reports(const ProbePolicy& policy, const Valuation& v) {
  struct Visitor {
    const Valuation& v;
    std::vector<Valuation> operator()(const probe::Explicit& e) const { return e.reports; }
    std::vector<Valuation> operator()(const probe::Random& r) const {
      std::mt19937_64 rng(r.seed);
      std::vector<Valuation> out;
      out.reserve(r.count);
      for (std::size_t i = 0; i < r.count; ++i) out.push_back(perturbed(v, rng, i % 4 == 3));
      return out;
    }
    std::vector<Valuation> operator()(const probe::Swaps&) const {
      std::vector<Valuation> out;
      for (std::size_t a = 0; a < v.size(); ++a)
        for (std::size_t b = a + 1; b < v.size(); ++b) {
          if (v[a] == v[b]) continue;
          Valuation w = v;
          std::swap(w.values[a], w.values[b]);
          out.push_back(std::move(w));
        }
      return out;
    }
    std::vector<Valuation> operator()(const probe::ScaleGrid& g) const {
      std::vector<Valuation> out;
      for (std::size_t j = 0; j < v.size(); ++j)
        for (const auto& f : g.factors) {
          if (sgn(f) < 0) throw std::invalid_argument("scale factors must be nonnegative");
          Valuation w = v;
          w.values[j] *= f;
          w.values[j].canonicalize();
          out.push_back(std::move(w));
        }
      return out;
    }
  };
  return std::visit(Visitor{v}, policy);
}

ProbeVerdict self_max_probe(const ShareSpec& spec, const Valuation& v, int n, const ProbePolicy& policy,
                            const OracleLimits& limits) {
  return run_probe<true>(spec, v, n, policy, limits);
}

ProbeVerdict self_max_probe_serial(const ShareSpec& spec, const Valuation& v, int n, const ProbePolicy& policy,
                                   const OracleLimits& limits) {
  return run_probe<false>(spec, v, n, policy, limits);
}

DominationReport domination_ratio(const ShareSpec& spec, const std::vector<RatioInstance>& instances,
                                  const OracleLimits& limits) {
  DominationReport report;
  for (std::size_t i = 0; i < instances.size(); ++i) {
    const auto& inst = instances[i];
    RatioRow row;
    row.share = share_value(spec, inst.v, inst.n, limits);
    row.mms = mms_exact(inst.v, inst.n, limits).value;
    row.ratio = sgn(row.mms) == 0 ? Rational(1) : Rational(row.share / row.mms);
    row.ratio.canonicalize();
    if (!report.argmin || row.ratio < report.min_ratio) {
      report.min_ratio = row.ratio;
      report.argmin = i;
    }
    report.rows.push_back(std::move(row));
  }
  return report;
}

}  // namespace fairshare
