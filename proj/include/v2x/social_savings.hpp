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

#ifndef V2X_SOCIAL_SAVINGS_HPP
#define V2X_SOCIAL_SAVINGS_HPP

#include <span>
#include <vector>

#include "v2x/contracts.hpp"
#include "v2x/market.hpp"

namespace v2x {

// Society's savings from accepting contract set J:
//
//   sum_j [m(hhp(j)) - b(j)] * l(j)
//   - sum_h m(h) * max(0, supply(h) - demand(h))
//
// The set need not be feasible or fit under demand; oversupply is charged
// (or, at negative prices, rewarded) by the second term exactly as written.
Money soc_save(std::span<const ContractId> accepted, const ContractBook& book,
               const std::vector<Kwh>& demand_hat, const PriceVector& prices);

// True iff no bundle appears in more than one contract of the set.
bool is_feasible(std::span<const ContractId> accepted, const ContractBook& book);

}  // namespace v2x

#endif  // V2X_SOCIAL_SAVINGS_HPP
