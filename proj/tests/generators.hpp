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

#ifndef V2X_TESTS_GENERATORS_HPP
#define V2X_TESTS_GENERATORS_HPP

#include <algorithm>
#include <map>
#include <random>
#include <vector>

#include "v2x/contracts.hpp"
#include "v2x/market.hpp"
#include "v2x/simulator.hpp"

namespace v2x::testgen {

// Desk-scale random auction instance: one peak of up to 4 hhps, up to 6
// bundles with up to 3 contracts each, demand up to 30 kWh/hhp. Small
// enough for the brute-force oracle, rich enough to hit excess-supply and
// tie-break paths.
struct Instance {
  Timeline timeline;
  ContractBook book;
  DemandVector demand;
  std::vector<Kwh> demand_hat;
  PriceVector prices;
  std::vector<Bundle> bundles;
  std::vector<Contract> contracts;
  std::map<FleetId, FleetPrivate> fleets;
};

struct InstanceOptions {
  int max_hhps = 4;
  int max_bundles = 6;
  int max_contracts_per_bundle = 3;
  std::int64_t max_demand = 30;
  bool allow_negative_prices = false;
  bool truthful_bids = false;  // construct private costs with E[c] = b*l exactly
};

inline std::int64_t pick(std::mt19937_64& rng, std::int64_t lo, std::int64_t hi) {
  return lo + static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

inline Instance make_instance(std::mt19937_64& rng, const InstanceOptions& opt = {}) {
  Instance inst;
  const int hhps = static_cast<int>(pick(rng, 1, opt.max_hhps));
  const std::vector<HhpRange> peaks = {HhpRange{0, hhps}};
  inst.timeline = build_timeline(hhps, peaks);

  const int bundle_count = static_cast<int>(pick(rng, 1, opt.max_bundles));
  const int fleet_count = static_cast<int>(pick(rng, 1, 3));
  std::map<FleetId, Money> unit_cost;  // m_imported + c_bd per fleet
  for (FleetId n = 1; n <= fleet_count; ++n) {
    FleetPrivate priv;
    priv.m_imported = Money{4 * pick(rng, 0, opt.truthful_bids ? 1 : 2)};
    priv.c_bd = Money{4 * pick(rng, 0, 1)};
    unit_cost[n] = priv.m_imported + priv.c_bd;
    inst.fleets[n] = priv;
  }

  ContractId next_contract = 1;
  for (BundleId b = 1; b <= bundle_count; ++b) {
    Bundle bundle;
    bundle.id = b;
    bundle.fleet = pick(rng, 1, fleet_count);
    bundle.size = Kwh(pick(rng, 1, 12));
    inst.bundles.push_back(bundle);

    const int offers = static_cast<int>(
        std::min<std::int64_t>(pick(rng, 1, opt.max_contracts_per_bundle), hhps));
    std::vector<int> all_hhps(static_cast<std::size_t>(hhps));
    for (int h = 0; h < hhps; ++h) all_hhps[static_cast<std::size_t>(h)] = h;
    std::shuffle(all_hhps.begin(), all_hhps.end(), rng);

    for (int k = 0; k < offers; ++k) {
      Contract c;
      c.id = next_contract++;
      c.fleet = bundle.fleet;
      c.bundle = bundle.id;
      c.hhp = all_hhps[static_cast<std::size_t>(k)];
      c.fine = Money{4 * pick(rng, 1, opt.truthful_bids ? 6 : 25)};
      FleetPrivate& priv = inst.fleets[c.fleet];
      if (opt.truthful_bids) {
        // quarters keep every expected-cost term an exact integer, and the
        // scheduling remainder makes E[c] equal b*l exactly
        const std::int64_t quarters = pick(rng, 2, 4);
        const double p = static_cast<double>(quarters) / 4.0;
        const std::int64_t size = bundle.size.count();
        const std::int64_t export_cost = quarters * unit_cost[c.fleet].milli_pence * size / 4;
        const std::int64_t fine_cost = (4 - quarters) * c.fine.milli_pence / 4;
        const std::int64_t bid = (export_cost + fine_cost + size - 1) / size;
        c.bid_per_kwh = Money{bid};
        priv.success_prob[c.id] = p;
        priv.scheduling_cost[c.id] = Money{bid * size - export_cost - fine_cost};
      } else {
        c.bid_per_kwh = Money{pick(rng, 0, 12)};
        priv.success_prob[c.id] = static_cast<double>(pick(rng, 0, 4)) / 4.0;
        priv.scheduling_cost[c.id] = Money{pick(rng, 0, 5)};
      }
      inst.contracts.push_back(c);
    }
  }
  inst.book = validate_book(inst.contracts, inst.bundles, inst.timeline);

  inst.demand.safety_margin = Kwh(0);
  inst.prices.market = MarketId::kDayAhead;
  for (int h = 0; h < hhps; ++h) {
    inst.demand.per_hhp.push_back(Kwh(pick(rng, 0, opt.max_demand)));
    const std::int64_t lo = opt.allow_negative_prices ? -4 : 0;
    inst.prices.per_kwh.push_back(Money{pick(rng, lo, 15)});
  }
  inst.demand_hat = adjusted_demand(inst.demand);
  return inst;
}

// Monte-Carlo supply sampler, independent of the reliability module: one
// Bernoulli trial per contract, totals bucketed onto the l_bar grid with
// the same round-to-nearest index mapping the model uses.
struct McContract {
  std::int64_t size = 0;
  double p = 0.0;
};

inline std::map<int, std::int64_t> mc_supply_buckets(const std::vector<McContract>& contracts,
                                                     double mean_size, int trials,
                                                     std::size_t samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::map<int, std::int64_t> buckets;
  for (std::size_t s = 0; s < samples; ++s) {
    std::int64_t total = 0;
    for (const McContract& c : contracts) {
      const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
      if (u < c.p) total += c.size;
    }
    int k = static_cast<int>(std::floor(static_cast<double>(total) / mean_size + 0.5));
    k = std::clamp(k, 0, trials);
    ++buckets[k];
  }
  return buckets;
}

}  // namespace v2x::testgen

#endif  // V2X_TESTS_GENERATORS_HPP
