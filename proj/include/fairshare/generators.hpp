#pragma once

// Seeded instance generators. The same spec and seed always give the same
// instance (mt19937_64, integer draws only).

#include <cstdint>
#include <string>
#include <variant>

#include "fairshare/core.hpp"

namespace fairshare {

namespace gen {
/// Independent integer values in [1, max_value] per agent and item.
struct Uniform { int m = 0; int n = 0; int max_value = 100; };
/// A shared base value in [1, 100] per item, each agent adding an integer in
/// [-noise, noise] (clamped at 0).
struct Correlated { int m = 0; int n = 0; int noise = 10; };
/// Identical agents on worstcase_instance(k).
struct WorstCase { int k = 1; };
struct Catalog { std::string name; };
}  // namespace gen

using GeneratorFamily = std::variant<gen::Uniform, gen::Correlated, gen::WorstCase, gen::Catalog>;

struct GeneratorSpec {
  GeneratorFamily family;
  std::uint64_t seed = 0;
};

Instance generate(const GeneratorSpec& spec);

/// "uniform:<m>:<n>[:<max>]", "correlated:<m>:<n>[:<noise>]", "worstcase:<k>",
/// "catalog:<name>".
GeneratorFamily parse_generator(const std::string& text);

/// Seed for trial t of a sweep: seed xor t, passed through splitmix64 so that
/// neighbouring trials get unrelated streams.
std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t trial);

}  // namespace fairshare
