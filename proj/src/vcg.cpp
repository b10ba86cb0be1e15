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

#include "v2x/vcg.hpp"

#include <cmath>

namespace v2x {

Money PaymentSchedule::total() const {
  Money sum{0};
  for (const auto& [fleet, payment] : payments) sum += payment;
  return sum;
}

Money soc_save_excluding(const Allocation& allocation, FleetId n, const ContractBook& book) {
  Money result = allocation.value;
  for (ContractId id : allocation.accepted) {
    if (book.contract(id).fleet == n) result += book.total_bid(id);
  }
  return result;
}

Money vcg_payment(const ContractBook& book, const std::vector<Kwh>& demand_hat,
                  const PriceVector& prices, FleetId n, const ClearOptions& options) {
  const Allocation full = clear(book, demand_hat, prices, options);
  const Allocation without = clear(book.excluding_fleet(n), demand_hat, prices, options);
  return soc_save_excluding(full, n, book) - without.value;
}

PaymentSchedule compute_payments(const ContractBook& book, const std::vector<Kwh>& demand_hat,
                                 const PriceVector& prices, const ClearOptions& options) {
  PaymentSchedule schedule;
  schedule.allocation = clear(book, demand_hat, prices, options);
  for (FleetId n : book.fleets()) {
    const Allocation without = clear(book.excluding_fleet(n), demand_hat, prices, options);
    schedule.payments[n] = soc_save_excluding(schedule.allocation, n, book) - without.value;
  }
  return schedule;
}

Money fleet_expected_cost(const Contract& contract, Kwh size, const FleetPrivate& priv) {
  const double p = priv.p(contract.id);
  if (p < 0.0 || p > 1.0) {
    throw Error("fleet", "success probability for contract " + std::to_string(contract.id) +
                             " outside [0,1]");
  }
  const double export_cost =
      p * static_cast<double>((priv.m_imported + priv.c_bd).milli_pence) *
      static_cast<double>(size.count());
  const double fine_cost = static_cast<double>(contract.fine.milli_pence) * (1.0 - p);
  const double total = export_cost + fine_cost +
                       static_cast<double>(priv.sched(contract.id).milli_pence);
  return Money{std::llround(total)};
}

Money fleet_utility(const ContractBook& book, const std::vector<Kwh>& demand_hat,
                    const PriceVector& prices, FleetId n, const FleetPrivate& priv,
                    const ClearOptions& options) {
  const Allocation full = clear(book, demand_hat, prices, options);
  const Allocation without = clear(book.excluding_fleet(n), demand_hat, prices, options);
  Money payment = soc_save_excluding(full, n, book) - without.value;
  Money cost{0};
  for (ContractId id : full.accepted) {
    const Contract& c = book.contract(id);
    if (c.fleet == n) cost += fleet_expected_cost(c, book.contract_size(id), priv);
  }
  return payment - cost;
}

Money platform_utility(const PaymentSchedule& schedule, const std::vector<Kwh>& demand_hat,
                       const PriceVector& prices) {
  if (demand_hat.size() != schedule.allocation.per_hhp_supply.size() ||
      prices.per_kwh.size() != demand_hat.size()) {
    throw Error("vcg", "demand/price vector length does not match the allocation");
  }
  Money value{0};
  for (std::size_t h = 0; h < demand_hat.size(); ++h) {
    const Kwh served = min(demand_hat[h], schedule.allocation.per_hhp_supply[h]);
    value += scale_by_energy(prices.per_kwh[h], served);
  }
  return value - schedule.total();
}

std::vector<Deviation> deviation_grid(const ContractBook& book, const std::vector<Kwh>& demand_hat,
                                      const PriceVector& prices, FleetId n,
                                      const FleetPrivate& priv, std::span<const Ratio> multipliers,
                                      const ClearOptions& options) {
  std::vector<Deviation> grid;
  for (const Ratio& r : multipliers) {
    if (r.num <= 0 || r.den <= 0) {
      throw Error("vcg", "deviation multipliers must be positive");
    }
    Deviation dev;
    dev.multiplier = r;
    for (const Contract& c : book.contracts()) {
      if (c.fleet != n) continue;
      // round half up; bids are non-negative
      const std::int64_t scaled =
          (checked_mul(c.bid_per_kwh.milli_pence, r.num, "bid scale") + r.den / 2) / r.den;
      dev.bids[c.id] = Money{scaled};
    }
    const ContractBook deviated = book.with_bids(n, dev.bids);
    const Allocation full = clear(deviated, demand_hat, prices, options);
    const Allocation without = clear(deviated.excluding_fleet(n), demand_hat, prices, options);
    Money payment = soc_save_excluding(full, n, deviated) - without.value;
    Money cost{0};
    for (ContractId id : full.accepted) {
      const Contract& c = book.contract(id);  // true contract, true costs
      if (c.fleet == n) cost += fleet_expected_cost(c, book.contract_size(id), priv);
    }
    dev.utility = payment - cost;
    grid.push_back(std::move(dev));
  }
  return grid;
}

}  // namespace v2x
