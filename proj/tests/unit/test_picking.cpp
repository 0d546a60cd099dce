#include <random>

#include "doctest.h"
#include "fairshare/picking.hpp"
#include "support/oracles.hpp"

using namespace fairshare;

namespace {

PickingOrder random_order(std::mt19937_64& rng, int n, int m) {
  PickingOrder w;
  w.n = n;
  for (int t = 0; t < m; ++t) w.turns.push_back(1 + static_cast<int>(rng() % n));
  return w;
}

}  // namespace

TEST_CASE("picking share of a fixed order") {
  PickingOrder w{2, {1, 2, 1, 2, 1}};
  CHECK(picking_share(make_valuation({3, 2, 2, 2, 1}), w) == 4);
  PickingOrder solo{1, {1, 1, 1}};
  CHECK(picking_share(make_valuation({3, 2, 2}), solo) == 7);
}

TEST_CASE("picking share matches the definition on random orders") {
  std::mt19937_64 rng(21);
  for (int t = 0; t < 200; ++t) {
    const int m = 1 + t % 10, n = 1 + t % 4;
    const auto vals = oracle::random_values(rng, m, 0, 9);
    const PickingOrder w = random_order(rng, n, m);
    CHECK(picking_share(Valuation(vals), w) == oracle::picking(vals, n, w.turns));
  }
}

TEST_CASE("the mms picking order reaches the mms") {
  const PickingOrder w = mms_picking_order(make_valuation({3, 2, 2, 2, 1}), 2);
  CHECK(picking_share(make_valuation({3, 2, 2, 2, 1}), w) == 5);
  CHECK(w.turns.size() == 5);
  const Valuation ex = make_valuation({3, 3, 2, 2, 2, 2, 2, 2, 1, 1});
  CHECK(picking_share(ex, mms_picking_order(ex, 4)) == 5);
  std::mt19937_64 rng(22);
  for (int t = 0; t < 100; ++t) {
    const int m = 1 + t % 9, n = 1 + t % 4;
    const auto vals = oracle::random_values(rng, m, 0, 9);
    const PickingOrder o = mms_picking_order(Valuation(vals), n);
    CHECK(picking_share(Valuation(vals), o) == oracle::mms(vals, n));
  }
}

TEST_CASE("equal values with m = n give the common value") {
  const Valuation v = make_valuation({4, 4, 4});
  CHECK(picking_share(v, mms_picking_order(v, 3)) == 4);
}

TEST_CASE("picking allocation on identical round robin") {
  const Instance inst = Instance::identical(make_valuation({5, 4, 3, 2, 1, 0}), 2);
  const Allocation a = picking_allocate(inst, PickingOrder::round_robin(2, 6));
  CHECK(a.bundle_of(0) == Bundle{0, 2, 4});
  CHECK(a.bundle_of(1) == Bundle{1, 3, 5});
}

TEST_CASE("every agent gets at least her picking share") {
  const Instance two = Instance::from_valuations({make_valuation({3, 2, 2, 2, 1}), make_valuation({1, 2, 2, 2, 3})});
  PickingOrder w{2, {1, 2, 1, 2, 1}};
  const Allocation a = picking_allocate(two, w);
  for (int i = 0; i < 2; ++i)
    CHECK(bundle_value(two.valuations[i], a.bundle_of(i)) >= picking_share(two.valuations[i], w));

  std::mt19937_64 rng(23);
  for (int t = 0; t < 150; ++t) {
    const int m = 1 + t % 10, n = 1 + t % 4;
    std::vector<Valuation> vs;
    for (int i = 0; i < n; ++i) vs.emplace_back(oracle::random_values(rng, m, 0, 9));
    const Instance inst = Instance::from_valuations(vs);
    const PickingOrder o = random_order(rng, n, m);
    const Allocation al = picking_allocate(inst, o);
    CHECK_NOTHROW(check_partition(al.partition, m));
    for (int i = 0; i < n; ++i) CHECK(bundle_value(vs[i], al.bundle_of(i)) >= picking_share(vs[i], o));
  }
}

TEST_CASE("an order giving every turn to one agent gives her everything") {
  const Instance inst = Instance::from_valuations({make_valuation({1, 2, 3}), make_valuation({3, 2, 1})});
  const Allocation a = picking_allocate(inst, PickingOrder{2, {2, 2, 2}});
  CHECK(a.bundle_of(1) == Bundle{0, 1, 2});
  CHECK(a.bundle_of(0).empty());
}

TEST_CASE("ordered reduction never lowers an agent's value") {
  std::mt19937_64 rng(24);
  for (int t = 0; t < 150; ++t) {
    const int m = 1 + t % 9, n = 1 + t % 4;
    std::vector<Valuation> vs;
    for (int i = 0; i < n; ++i) vs.emplace_back(oracle::random_values(rng, m, 0, 9));
    const Instance inst = Instance::from_valuations(vs);
    const PickingOrder o = random_order(rng, n, m);
    Allocation ordered_alloc;
    const Instance ordered = ordered_companion(inst);
    const Allocation real = ordered_reduction(inst, [&](const Instance& oi) {
      ordered_alloc = picking_allocate(oi, o);
      return ordered_alloc;
    });
    CHECK_NOTHROW(check_partition(real.partition, m));
    for (int i = 0; i < n; ++i)
      CHECK(bundle_value(vs[i], real.bundle_of(i)) >= bundle_value(ordered.valuations[i], ordered_alloc.bundle_of(i)));
  }
}

TEST_CASE("ordered reduction on an ordered instance keeps the values") {
  const Instance inst = Instance::identical(make_valuation({4, 3, 2, 1}), 2);
  const PickingOrder o{2, {1, 2, 2, 1}};
  const Allocation base = picking_allocate(inst, o);
  const Allocation red = ordered_reduction(inst, [&](const Instance& oi) { return picking_allocate(oi, o); });
  for (int i = 0; i < 2; ++i)
    CHECK(bundle_value(inst.valuations[i], red.bundle_of(i)) == bundle_value(inst.valuations[i], base.bundle_of(i)));
  const Instance rev = Instance::from_valuations({make_valuation({4, 3, 2, 1}), make_valuation({1, 2, 3, 4})});
  const Instance ord = ordered_companion(rev);
  const Allocation ob = picking_allocate(ord, o);
  const Allocation rr = ordered_reduction(rev, [&](const Instance& oi) { return picking_allocate(oi, o); });
  for (int i = 0; i < 2; ++i)
    CHECK(bundle_value(rev.valuations[i], rr.bundle_of(i)) >= bundle_value(ord.valuations[i], ob.bundle_of(i)));
}
