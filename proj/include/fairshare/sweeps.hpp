#pragma once

// Batch runs over generated instances. Trial t uses the instance generated
// with trial_seed(seed, t); results are stored by trial index, so the
// parallel and serial versions report the same thing.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fairshare/core.hpp"
#include "fairshare/generators.hpp"
#include "fairshare/oracle.hpp"

namespace fairshare {

struct SweepTrial {
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  bool skipped = false;
  std::string reason;  // set when skipped
  int agent = 0;       // agent attaining the trial's minimum ratio
  Rational share;
  Rational mms;
  Rational ratio;      // share / mms, 1 when mms = 0
  Rational running_min;
};

struct SweepReport {
  std::vector<SweepTrial> trials;
  std::size_t skipped = 0;
  Rational min_ratio = 1;
  std::optional<std::size_t> argmin;  // first trial attaining min_ratio
  std::optional<Instance> witness;
};

/// Per trial, the least share/MMS ratio over the agents. Trials that hit a
/// size limit are marked skipped.
SweepReport ratio_sweep(const ShareSpec& spec, const GeneratorFamily& family, std::size_t trials,
                        std::uint64_t seed, const OracleLimits& limits = {});
SweepReport ratio_sweep_serial(const ShareSpec& spec, const GeneratorFamily& family, std::size_t trials,
                               std::uint64_t seed, const OracleLimits& limits = {});

/// trial,seed,skipped,agent,share,mms,ratio,running_min
std::string to_csv(const SweepReport& report);

struct FuzzFailure {
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  Instance instance;
  std::string message;
};

struct FuzzReport {
  std::size_t trials = 0;
  std::size_t skipped = 0;
  std::vector<FuzzFailure> failures;
};

/// Runs ns_allocate(q) on every generated instance and checks each agent's
/// bundle against her NS_{n,q} value. With `shuffle_items` the item order is
/// additionally permuted at random, so instances are never presented sorted.
FuzzReport ns_fuzz(int q, const GeneratorFamily& family, std::size_t trials, std::uint64_t seed,
                   bool shuffle_items = true);
FuzzReport ns_fuzz_serial(int q, const GeneratorFamily& family, std::size_t trials, std::uint64_t seed,
                          bool shuffle_items = true);

}  // namespace fairshare
