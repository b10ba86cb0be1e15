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

#include "v2x/social_savings.hpp"

#include <algorithm>
#include <string>
#include <unordered_set>

namespace v2x {

Money soc_save(std::span<const ContractId> accepted, const ContractBook& book,
               const std::vector<Kwh>& demand_hat, const PriceVector& prices) {
  const int hhp_count = book.timeline().hhp_count();
  if (static_cast<int>(demand_hat.size()) != hhp_count ||
      static_cast<int>(prices.per_kwh.size()) != hhp_count) {
    throw Error("savings", "demand/price vector length does not match the timeline");
  }
  {
    std::unordered_set<ContractId> seen;
    for (ContractId id : accepted) {
      if (!seen.insert(id).second) {
        throw Error("savings", "contract set contains duplicate id " + std::to_string(id));
      }
    }
  }

  Money total{0};
  std::vector<std::int64_t> supply(static_cast<std::size_t>(hhp_count), 0);
  for (ContractId id : accepted) {
    const Contract& c = book.contract(id);  // throws on unknown id
    const Kwh size = book.contract_size(id);
    const Money unit_margin = prices.per_kwh[static_cast<std::size_t>(c.hhp)] - c.bid_per_kwh;
    total += scale_by_energy(unit_margin, size);
    supply[static_cast<std::size_t>(c.hhp)] =
        checked_add(supply[static_cast<std::size_t>(c.hhp)], size.count(), "supply sum");
  }
  for (int h = 0; h < hhp_count; ++h) {
    const std::int64_t excess = supply[static_cast<std::size_t>(h)] -
                                demand_hat[static_cast<std::size_t>(h)].count();
    if (excess > 0) {
      total -= prices.per_kwh[static_cast<std::size_t>(h)] * excess;
    }
  }
  return total;
}

bool is_feasible(std::span<const ContractId> accepted, const ContractBook& book) {
  std::unordered_set<BundleId> used;
  for (ContractId id : accepted) {
    if (!used.insert(book.contract(id).bundle).second) return false;
  }
  return true;
}

}  // namespace v2x
