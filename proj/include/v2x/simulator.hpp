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

#ifndef V2X_SIMULATOR_HPP
#define V2X_SIMULATOR_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "v2x/frequency_regulation.hpp"
#include "v2x/vcg.hpp"

namespace v2x {

// An EV is plugged at an hhp iff its schedule has an entry there.
struct EvScheduleEntry {
  Kwh x_min;
  Kwh x_max;
  bool operator==(const EvScheduleEntry&) const = default;
};

struct EvSpec {
  EvId id = 0;
  Kwh battery_capacity;
  Kwh initial_soc;
  std::map<int, EvScheduleEntry> schedule;

  bool operator==(const EvSpec&) const = default;
};

struct CarbonFactors {
  std::int64_t grid_g_per_kwh = 200;
  std::int64_t balancing_g_per_kwh = 600;

  bool operator==(const CarbonFactors&) const = default;
};

// Everything one experiment needs; the seed fully determines every random
// draw.
struct Scenario {
  int schema_version = 1;
  int hhp_count = 48;
  std::vector<HhpRange> peak_ranges;
  DemandVector demand;
  PriceVector day_ahead;
  PriceVector balancing;
  std::optional<PriceVector> intra_day;
  std::vector<Bundle> bundles;
  std::vector<Contract> contracts;
  std::map<FleetId, FleetPrivate> fleets;
  std::vector<EvSpec> evs;
  std::vector<std::int64_t> imbalance_kwh;  // exogenous trace, empty = zeros
  FrConfig fr;
  CarbonFactors carbon;
  std::uint64_t seed = 0;
  std::uint64_t state_budget = ClearOptions{}.state_budget;

  bool operator==(const Scenario&) const = default;
};

Timeline scenario_timeline(const Scenario& s);
// Cross-reference and length checks beyond what validate_book covers.
void validate_scenario(const Scenario& s);

struct RunOptions {
  bool use_oracle = false;
};

struct Settlement {
  int schema_version = 1;
  Allocation allocation;
  std::map<FleetId, Money> payments;  // upfront, independent of the draws
  std::vector<ContractId> honored;
  std::vector<ContractId> defaulted;
  Money fines_collected;
  std::vector<Kwh> realized_supply;   // per hhp, honored contract energy
  std::vector<Kwh> unmet_demand;      // per hhp, max(0, demand_hat - realized)
  std::vector<std::int64_t> fr_dispatch_kwh;  // per hhp, net EV dispatch (+ = export)
  std::vector<Kwh> balancing_purchases;       // per hhp
  std::vector<Kwh> curtailed;                 // per hhp surplus
  Money fr_payment_total;
  std::map<EvId, Money> fr_payments;
  std::map<FleetId, Money> fleet_realized_utilities;
  Money platform_realized_utility;
  std::int64_t carbon_g = 0;

  bool operator==(const Settlement&) const = default;
};

// The full pipeline: validate, clear, pay upfront, draw defaults, levy
// fines, run the FR ticks, report. Deterministic given the scenario.
//
// Default draws use std::mt19937_64 seeded with the scenario seed; for
// each accepted contract in ascending id order, one engine output x is
// mapped to u = (x >> 11) * 2^-53 and the contract is honored iff
// u < p(j). This is the documented, replayable generator contract.
Settlement run_scenario(const Scenario& s, const RunOptions& options = {});

// balancing factor x balancing kWh + grid factor x honored contract kWh.
std::int64_t carbon_proxy(const Settlement& settlement, const CarbonFactors& factors);

struct SweepRow {
  double axis_value = 0.0;
  Settlement settlement;
};

// Runs the scenario once per value with the named scalar field replaced.
// Axes: demand.safety_margin, fr.const_ex, fr.const_im, seed,
// carbon.grid_g_per_kwh, carbon.balancing_g_per_kwh, state_budget.
std::vector<SweepRow> sweep(const Scenario& base, const std::string& axis,
                            std::span<const double> values, const RunOptions& options = {});

}  // namespace v2x

#endif  // V2X_SIMULATOR_HPP
