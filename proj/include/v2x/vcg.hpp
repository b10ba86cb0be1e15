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

#ifndef V2X_VCG_HPP
#define V2X_VCG_HPP

#include <map>
#include <span>
#include <vector>

#include "v2x/clearing.hpp"

namespace v2x {

// Per-fleet VCG payments together with the allocation they were computed
// from. Every fleet with at least one offered contract has an entry.
struct PaymentSchedule {
  Allocation allocation;
  std::map<FleetId, Money> payments;

  Money total() const;
  bool operator==(const PaymentSchedule&) const = default;
};

// Savings of the platform due to the allocation, excluding fleet n's cost:
// allocation value plus the add-back of n's accepted bids.
Money soc_save_excluding(const Allocation& allocation, FleetId n, const ContractBook& book);

// The VCG payment to fleet n: savings-excluding-n of the full clearing
// minus the optimal savings when all of n's contracts are withdrawn.
// A fleet with no contracts in the book is paid 0.
Money vcg_payment(const ContractBook& book, const std::vector<Kwh>& demand_hat,
                  const PriceVector& prices, FleetId n, const ClearOptions& options = {});

PaymentSchedule compute_payments(const ContractBook& book, const std::vector<Kwh>& demand_hat,
                                 const PriceVector& prices, const ClearOptions& options = {});

// Expected cost of attempting one contract:
//   p * (m_imported + c_bd) * l  +  fine * (1 - p)  +  scheduling cost,
// rounded to the nearest milli-penny.
Money fleet_expected_cost(const Contract& contract, Kwh size, const FleetPrivate& priv);

// VCG payment minus the expected costs of the fleet's accepted contracts.
Money fleet_utility(const ContractBook& book, const std::vector<Kwh>& demand_hat,
                    const PriceVector& prices, FleetId n, const FleetPrivate& priv,
                    const ClearOptions& options = {});

// sum_h min(demand, supplied) * m(h) minus all payments. Non-negative
// whenever accepted supply stays within demand at every hhp.
Money platform_utility(const PaymentSchedule& schedule, const std::vector<Kwh>& demand_hat,
                       const PriceVector& prices);

// Exact rational bid multiplier for deviation experiments.
struct Ratio {
  std::int64_t num = 1;
  std::int64_t den = 1;
};

struct Deviation {
  Ratio multiplier;
  std::map<ContractId, Money> bids;  // the deviated bids of fleet n
  Money utility;                     // n's utility at true costs under those bids
};

inline std::vector<Ratio> default_deviation_multipliers() {
  return {{1, 4}, {1, 2}, {3, 4}, {9, 10}, {1, 1}, {11, 10}, {3, 2}, {2, 1}, {4, 1}};
}

// Scales all of fleet n's bids by each multiplier, re-clears, and
// recomputes n's utility with its true costs. Empirical probe of the
// dominant-strategy property.
std::vector<Deviation> deviation_grid(const ContractBook& book, const std::vector<Kwh>& demand_hat,
                                      const PriceVector& prices, FleetId n,
                                      const FleetPrivate& priv, std::span<const Ratio> multipliers,
                                      const ClearOptions& options = {});

}  // namespace v2x

#endif  // V2X_VCG_HPP
