#include "fairshare/generators.hpp"

#include <random>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "fairshare/catalog.hpp"
#include "fairshare/nested.hpp"

namespace fairshare {

namespace {

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string tok;
  while (std::getline(in, tok, sep)) out.push_back(tok);
  return out;
}

int to_int(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    const int x = std::stoi(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return x;
  } catch (const std::exception&) {
    throw std::invalid_argument("generator " + what + " must be an integer, got '" + s + "'");
  }
}

void check_shape(int m, int n) {
  if (n < 1) throw std::invalid_argument("generator needs n >= 1");
  if (m < 0) throw std::invalid_argument("generator needs m >= 0");
}

}  // namespace

std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t trial) {
  std::uint64_t z = (seed ^ trial) + 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

Instance generate(const GeneratorSpec& spec) {
  std::mt19937_64 rng(spec.seed);
  struct Visitor {
    std::mt19937_64& rng;
    Instance operator()(const gen::Uniform& u) const {
      check_shape(u.m, u.n);
      if (u.max_value < 1) throw std::invalid_argument("uniform generator needs max >= 1");
      std::uniform_int_distribution<int> d(1, u.max_value);
      std::vector<Valuation> vs;
      for (int i = 0; i < u.n; ++i) {
        std::vector<Rational> vals;
        for (int j = 0; j < u.m; ++j) vals.emplace_back(d(rng));
        vs.emplace_back(std::move(vals));
      }
      return Instance::from_valuations(std::move(vs));
    }
    Instance operator()(const gen::Correlated& c) const {
      check_shape(c.m, c.n);
      if (c.noise < 0) throw std::invalid_argument("correlated generator needs noise >= 0");
      std::uniform_int_distribution<int> base_d(1, 100), noise_d(-c.noise, c.noise);
      std::vector<int> base(c.m);
      for (auto& b : base) b = base_d(rng);
      std::vector<Valuation> vs;
      for (int i = 0; i < c.n; ++i) {
        std::vector<Rational> vals;
        for (int j = 0; j < c.m; ++j) vals.emplace_back(std::max(0, base[j] + noise_d(rng)));
        vs.emplace_back(std::move(vals));
      }
      return Instance::from_valuations(std::move(vs));
    }
    Instance operator()(const gen::WorstCase& w) const {
      const WorstCase wc = worstcase_instance(w.k);
      return Instance::identical(wc.v, wc.n);
    }
    Instance operator()(const gen::Catalog& c) const { return catalog_entry(c.name).instance; }
  };
  return std::visit(Visitor{rng}, spec.family);
}

GeneratorFamily parse_generator(const std::string& text) {
  const auto parts = split(text, ':');
  if (parts.empty()) throw std::invalid_argument("empty generator spec");
  const std::string& kind = parts[0];
  if (kind == "uniform" && (parts.size() == 3 || parts.size() == 4))
    return gen::Uniform{to_int(parts[1], "m"), to_int(parts[2], "n"),
                        parts.size() == 4 ? to_int(parts[3], "max") : 100};
  if (kind == "correlated" && (parts.size() == 3 || parts.size() == 4))
    return gen::Correlated{to_int(parts[1], "m"), to_int(parts[2], "n"),
                           parts.size() == 4 ? to_int(parts[3], "noise") : 10};
  if (kind == "worstcase" && parts.size() == 2) return gen::WorstCase{to_int(parts[1], "k")};
  if (kind == "catalog" && parts.size() == 2) return gen::Catalog{parts[1]};
  throw std::invalid_argument("unknown generator '" + text +
                              "' (expected uniform:<m>:<n>[:<max>], correlated:<m>:<n>[:<noise>], "
                              "worstcase:<k> or catalog:<name>)");
}

}  // namespace fairshare
