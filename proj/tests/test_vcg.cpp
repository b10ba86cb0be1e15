// Copyright 2026 The v2x-market Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <doctest.h>

#include <random>

#include "generators.hpp"
#include "v2x/vcg.hpp"

using namespace v2x;

namespace {

// Single fleet, one contract l=10 b=5 at the only hhp, m=8, demand 20.
struct SingleFleetFixture {
  Timeline timeline = build_timeline(1, std::vector<HhpRange>{{0, 1}});
  ContractBook book = validate_book({{1, 1, Money{5}, 0, 1, Money{0}}}, {{1, 1, Kwh(10)}}, timeline);
  std::vector<Kwh> demand = {Kwh(20)};
  PriceVector prices;

  SingleFleetFixture() { prices.per_kwh = {Money{8}}; }
};

// Two fleets, one bundle each l=10, bids 3 and 4, one hhp, m=8, demand 10.
struct TwoFleetFixture {
  Timeline timeline = build_timeline(1, std::vector<HhpRange>{{0, 1}});
  ContractBook book = validate_book({{1, 1, Money{3}, 0, 1, Money{0}},
                                     {2, 2, Money{4}, 0, 2, Money{0}}},
                                    {{1, 1, Kwh(10)}, {2, 2, Kwh(10)}}, timeline);
  std::vector<Kwh> demand = {Kwh(10)};
  PriceVector prices;

  TwoFleetFixture() { prices.per_kwh = {Money{8}}; }
};

}  // namespace

TEST_CASE("soc_save_excluding adds back the fleet's accepted bids") {
  SingleFleetFixture fx;
  const Allocation alloc = clear_day(fx.book, fx.demand, fx.prices);
  CHECK(alloc.value == Money{30});
  CHECK(soc_save_excluding(alloc, 1, fx.book) == Money{80});
  CHECK(soc_save_excluding(alloc, 99, fx.book) == alloc.value);  // no accepted contracts

  TwoFleetFixture two;
  const Allocation winner_only = clear_day(two.book, two.demand, two.prices);
  CHECK(winner_only.accepted == std::vector<ContractId>{1});
  CHECK(soc_save_excluding(winner_only, 1, two.book) == Money{80});  // 50 + 30
}

TEST_CASE("vcg_payment: no competition pays the full market saving") {
  SingleFleetFixture fx;
  CHECK(vcg_payment(fx.book, fx.demand, fx.prices, 1) == Money{80});
}

TEST_CASE("vcg_payment: losing competitor caps the winner's payment") {
  TwoFleetFixture fx;
  CHECK(vcg_payment(fx.book, fx.demand, fx.prices, 1) == Money{40});  // 80 - 40
  CHECK(vcg_payment(fx.book, fx.demand, fx.prices, 2) == Money{0});
}

TEST_CASE("vcg_payment: fleet absent from the book is paid nothing") {
  TwoFleetFixture fx;
  CHECK(vcg_payment(fx.book, fx.demand, fx.prices, 42) == Money{0});
}

TEST_CASE("fleet_expected_cost") {
  FleetPrivate priv;
  priv.m_imported = Money{2};
  priv.c_bd = Money{1};
  priv.success_prob[1] = 1.0;
  const Contract certain{1, 1, Money{5}, 0, 1, Money{100}};
  CHECK(fleet_expected_cost(certain, Kwh(10), priv) == Money{30});

  FleetPrivate fails;
  fails.m_imported = Money{2};
  fails.c_bd = Money{1};
  fails.success_prob[2] = 0.0;
  const Contract fined{2, 1, Money{5}, 0, 1, Money{100}};
  CHECK(fleet_expected_cost(fined, Kwh(10), fails) == Money{100});

  FleetPrivate mixed;
  mixed.m_imported = Money{2};
  mixed.c_bd = Money{0};
  mixed.success_prob[3] = 0.5;
  mixed.scheduling_cost[3] = Money{5};
  const Contract half{3, 1, Money{5}, 0, 1, Money{20}};
  CHECK(fleet_expected_cost(half, Kwh(10), mixed) == Money{25});  // 10 + 10 + 5
}

TEST_CASE("fleet_utility composes payment and expected cost") {
  SingleFleetFixture fx;
  FleetPrivate priv;
  priv.m_imported = Money{2};
  priv.c_bd = Money{1};
  priv.success_prob[1] = 1.0;
  CHECK(fleet_utility(fx.book, fx.demand, fx.prices, 1, priv) == Money{50});  // 80 - 30

  // losing position: bid above market, not accepted, utility 0
  const Timeline t = build_timeline(1, std::vector<HhpRange>{{0, 1}});
  const ContractBook losing =
      validate_book({{1, 1, Money{9}, 0, 1, Money{0}}}, {{1, 1, Kwh(10)}}, t);
  FleetPrivate loser;
  loser.success_prob[1] = 1.0;
  loser.m_imported = Money{9};
  loser.c_bd = Money{0};
  CHECK(fleet_utility(losing, fx.demand, fx.prices, 1, loser) == Money{0});
}

TEST_CASE("platform_utility on the worked examples") {
  SingleFleetFixture fx;
  const PaymentSchedule single = compute_payments(fx.book, fx.demand, fx.prices);
  CHECK(platform_utility(single, fx.demand, fx.prices) == Money{0});  // 80 - 80

  TwoFleetFixture two;
  const PaymentSchedule schedule = compute_payments(two.book, two.demand, two.prices);
  CHECK(schedule.payments.at(1) == Money{40});
  CHECK(schedule.payments.at(2) == Money{0});
  CHECK(platform_utility(schedule, two.demand, two.prices) == Money{40});  // 80 - 40

  const Timeline t = build_timeline(1, std::vector<HhpRange>{{0, 1}});
  const ContractBook empty = validate_book({}, {}, t);
  const PaymentSchedule none = compute_payments(empty, fx.demand, fx.prices);
  CHECK(platform_utility(none, fx.demand, fx.prices) == Money{0});
}

TEST_CASE("deviation_grid: multiplier one reproduces fleet_utility") {
  std::mt19937_64 rng(311);
  testgen::InstanceOptions opt;
  opt.truthful_bids = true;
  for (int trial = 0; trial < 30; ++trial) {
    const testgen::Instance inst = testgen::make_instance(rng, opt);
    for (FleetId n : inst.book.fleets()) {
      const std::vector<Ratio> identity = {{1, 1}};
      const auto grid =
          deviation_grid(inst.book, inst.demand_hat, inst.prices, n, inst.fleets.at(n), identity);
      REQUIRE(grid.size() == 1);
      CHECK(grid[0].utility ==
            fleet_utility(inst.book, inst.demand_hat, inst.prices, n, inst.fleets.at(n)));
    }
  }
}

TEST_CASE("deviation_grid: overbidding out of the market forfeits utility") {
  SingleFleetFixture fx;
  FleetPrivate priv;
  priv.m_imported = Money{2};
  priv.c_bd = Money{1};
  priv.success_prob[1] = 1.0;
  const std::vector<Ratio> doubled = {{2, 1}};
  const auto grid = deviation_grid(fx.book, fx.demand, fx.prices, 1, priv, doubled);
  REQUIRE(grid.size() == 1);
  CHECK(grid[0].bids.at(1) == Money{10});  // 10 > m=8, rejected
  CHECK(grid[0].utility == Money{0});
  CHECK(grid[0].utility <= fleet_utility(fx.book, fx.demand, fx.prices, 1, priv));
}

TEST_CASE("truthfulness: no grid deviation beats truthful bidding") {
  std::mt19937_64 rng(313);
  testgen::InstanceOptions opt;
  opt.truthful_bids = true;
  const std::vector<Ratio> multipliers = default_deviation_multipliers();
  for (int trial = 0; trial < 60; ++trial) {
    const testgen::Instance inst = testgen::make_instance(rng, opt);
    for (FleetId n : inst.book.fleets()) {
      const Money truthful =
          fleet_utility(inst.book, inst.demand_hat, inst.prices, n, inst.fleets.at(n));
      const auto grid = deviation_grid(inst.book, inst.demand_hat, inst.prices, n,
                                       inst.fleets.at(n), multipliers);
      for (const Deviation& dev : grid) CHECK(dev.utility <= truthful);
    }
  }
}

TEST_CASE("individual rationality: payment covers the accepted bids") {
  std::mt19937_64 rng(317);
  testgen::InstanceOptions opt;
  opt.truthful_bids = true;
  for (int trial = 0; trial < 100; ++trial) {
    const testgen::Instance inst = testgen::make_instance(rng, opt);
    const PaymentSchedule schedule = compute_payments(inst.book, inst.demand_hat, inst.prices);
    for (const auto& [fleet, payment] : schedule.payments) {
      Money accepted_bids{0};
      for (ContractId id : schedule.allocation.accepted) {
        if (inst.book.contract(id).fleet == fleet) accepted_bids += inst.book.total_bid(id);
      }
      CHECK(payment >= accepted_bids);
    }
  }
}

TEST_CASE("budget balance under the no-excess assumption") {
  std::mt19937_64 rng(331);
  testgen::InstanceOptions opt;
  opt.truthful_bids = true;
  int kept = 0;
  for (int trial = 0; trial < 150; ++trial) {
    const testgen::Instance inst = testgen::make_instance(rng, opt);
    const PaymentSchedule schedule = compute_payments(inst.book, inst.demand_hat, inst.prices);
    bool no_excess = true;
    for (std::size_t h = 0; h < inst.demand_hat.size(); ++h) {
      if (schedule.allocation.per_hhp_supply[h] > inst.demand_hat[h]) no_excess = false;
    }
    if (!no_excess) continue;
    ++kept;
    CHECK(platform_utility(schedule, inst.demand_hat, inst.prices) >= Money{0});
  }
  CHECK(kept > 50);
}

TEST_CASE("payment independence: bids move, accepted set fixed, payment fixed") {
  std::mt19937_64 rng(337);
  testgen::InstanceOptions opt;
  opt.truthful_bids = true;
  int exercised = 0;
  for (int trial = 0; trial < 120; ++trial) {
    const testgen::Instance inst = testgen::make_instance(rng, opt);
    const Allocation base = clear_day(inst.book, inst.demand_hat, inst.prices);
    for (FleetId n : inst.book.fleets()) {
      // nudge one of n's bids by one milli-penny
      std::map<ContractId, Money> bids;
      for (const Contract& c : inst.book.contracts()) {
        if (c.fleet != n) continue;
        bids[c.id] = c.bid_per_kwh + Money{testgen::pick(rng, 0, 1) == 0 ? 1 : -1};
        if (bids[c.id] < Money{0}) bids[c.id] = Money{0};
      }
      if (bids.empty()) continue;
      const ContractBook nudged = inst.book.with_bids(n, bids);
      const Allocation moved = clear_day(nudged, inst.demand_hat, inst.prices);
      if (moved.accepted != base.accepted) continue;  // acceptance changed; rule not applicable
      ++exercised;
      CHECK(vcg_payment(nudged, inst.demand_hat, inst.prices, n) ==
            vcg_payment(inst.book, inst.demand_hat, inst.prices, n));
    }
  }
  CHECK(exercised > 40);
}
