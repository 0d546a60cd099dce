#include "fairshare/sweeps.hpp"

#include <algorithm>
#include <exception>
#include <numeric>
#include <random>
#include <sstream>

#include "fairshare/errors.hpp"
#include "fairshare/nested.hpp"
#include "fairshare/shares.hpp"

namespace fairshare {

namespace {

SweepTrial run_ratio_trial(const ShareSpec& spec, const GeneratorFamily& family, std::size_t t,
                           std::uint64_t seed, const OracleLimits& limits) {
  SweepTrial row;
  row.trial = t;
  row.seed = trial_seed(seed, t);
  try {
    const Instance inst = generate({family, row.seed});
    bool first = true;
    for (int i = 0; i < inst.n; ++i) {
      const Rational s = share_value(spec, inst.valuations[i], inst.n, limits);
      const Rational mms = mms_exact(inst.valuations[i], inst.n, limits).value;
      Rational r = sgn(mms) == 0 ? Rational(1) : Rational(s / mms);
      r.canonicalize();
      if (first || r < row.ratio) {
        row.agent = i;
        row.share = s;
        row.mms = mms;
        row.ratio = r;
        first = false;
      }
    }
    if (first) row.ratio = 1;
  } catch (const ScaleExceeded& e) {
    row.skipped = true;
    row.reason = e.what();
  }
  return row;
}

SweepReport finish(std::vector<SweepTrial> rows, const GeneratorFamily& family) {
  SweepReport report;
  Rational running = 1;
  for (auto& row : rows) {
    if (row.skipped) {
      ++report.skipped;
    } else if (row.ratio < running || (!report.argmin && row.ratio == running)) {
      running = row.ratio;
      report.argmin = row.trial;
    }
    row.running_min = running;
  }
  report.min_ratio = running;
  if (report.argmin) report.witness = generate({family, rows[*report.argmin].seed});
  report.trials = std::move(rows);
  return report;
}

template <bool Parallel>
SweepReport sweep(const ShareSpec& spec, const GeneratorFamily& family, std::size_t trials, std::uint64_t seed,
                  const OracleLimits& limits) {
  std::vector<SweepTrial> rows(trials);
  std::vector<std::exception_ptr> errors(trials);
  const long count = static_cast<long>(trials);
#pragma omp parallel for schedule(dynamic) if (Parallel)
  for (long t = 0; t < count; ++t) {
    try {
      rows[t] = run_ratio_trial(spec, family, static_cast<std::size_t>(t), seed, limits);
    } catch (...) {
      errors[t] = std::current_exception();
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return finish(std::move(rows), family);
}

Instance shuffled(const Instance& inst, std::uint64_t seed) {
  std::vector<int> perm(inst.m);
  std::iota(perm.begin(), perm.end(), 0);
  std::mt19937_64 rng(seed);
  std::shuffle(perm.begin(), perm.end(), rng);
  Instance out = inst;
  for (int i = 0; i < inst.n; ++i)
    for (int j = 0; j < inst.m; ++j) out.valuations[i].values[j] = inst.valuations[i].values[perm[j]];
  return out;
}

std::optional<FuzzFailure> run_fuzz_trial(int q, const GeneratorFamily& family, std::size_t t,
                                          std::uint64_t seed, bool shuffle_items, bool& skipped) {
  const std::uint64_t s = trial_seed(seed, t);
  Instance inst = generate({family, s});
  if (shuffle_items) inst = shuffled(inst, s ^ 0x5bd1e995ULL);
  auto fail = [&](std::string msg) { return FuzzFailure{t, s, inst, std::move(msg)}; };
  try {
    const Allocation alloc = ns_allocate(inst, q);
    std::vector<Rational> thresholds;
    for (const auto& v : inst.valuations) thresholds.push_back(ns_share(v, inst.n, q).value);
    const AllocationReport rep = validate_allocation(inst, alloc, thresholds);
    if (!rep.acceptable) {
      std::ostringstream msg;
      msg << "agents below their share:";
      for (int a : rep.violators()) msg << ' ' << a;
      return fail(msg.str());
    }
  } catch (const ScaleExceeded&) {
    skipped = true;
  } catch (const std::exception& e) {
    return fail(e.what());
  }
  return std::nullopt;
}

template <bool Parallel>
FuzzReport fuzz(int q, const GeneratorFamily& family, std::size_t trials, std::uint64_t seed, bool shuffle_items) {
  std::vector<std::optional<FuzzFailure>> out(trials);
  std::vector<char> skipped(trials, 0);
  const long count = static_cast<long>(trials);
#pragma omp parallel for schedule(dynamic) if (Parallel)
  for (long t = 0; t < count; ++t) {
    bool s = false;
    out[t] = run_fuzz_trial(q, family, static_cast<std::size_t>(t), seed, shuffle_items, s);
    skipped[t] = s;
  }
  FuzzReport report;
  report.trials = trials;
  for (std::size_t t = 0; t < trials; ++t) {
    report.skipped += skipped[t];
    if (out[t]) report.failures.push_back(std::move(*out[t]));
  }
  return report;
}

}  // namespace

SweepReport ratio_sweep(const ShareSpec& spec, const GeneratorFamily& family, std::size_t trials,
                        std::uint64_t seed, const OracleLimits& limits) {
  return sweep<true>(spec, family, trials, seed, limits);
}

SweepReport ratio_sweep_serial(const ShareSpec& spec, const GeneratorFamily& family, std::size_t trials,
                               std::uint64_t seed, const OracleLimits& limits) {
  return sweep<false>(spec, family, trials, seed, limits);
}

std::string to_csv(const SweepReport& report) {
  std::ostringstream out;
  out << "trial,seed,skipped,agent,share,mms,ratio,running_min\n";
  for (const auto& r : report.trials)
    out << r.trial << ',' << r.seed << ',' << (r.skipped ? 1 : 0) << ',' << r.agent << ',' << to_string(r.share)
        << ',' << to_string(r.mms) << ',' << to_string(r.ratio) << ',' << to_string(r.running_min) << '\n';
  return out.str();
}

FuzzReport ns_fuzz(int q, const GeneratorFamily& family, std::size_t trials, std::uint64_t seed,
                   bool shuffle_items) {
  return fuzz<true>(q, family, trials, seed, shuffle_items);
}

FuzzReport ns_fuzz_serial(int q, const GeneratorFamily& family, std::size_t trials, std::uint64_t seed,
                          bool shuffle_items) {
  return fuzz<false>(q, family, trials, seed, shuffle_items);
}

}  // namespace fairshare
