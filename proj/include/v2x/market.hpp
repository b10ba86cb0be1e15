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

#ifndef V2X_MARKET_HPP
#define V2X_MARKET_HPP

#include <string>
#include <vector>

#include "v2x/units.hpp"

namespace v2x {

enum class MarketId { kDayAhead, kIntraDay, kBalancing };

std::string to_string(MarketId id);
MarketId market_id_from_string(const std::string& s);

// Per-hhp spot price in milli-pence per kWh. Prices may be negative.
struct PriceVector {
  MarketId market = MarketId::kDayAhead;
  std::vector<Money> per_kwh;

  bool operator==(const PriceVector&) const = default;
};

// Expected per-hhp demand plus the additive safety margin.
struct DemandVector {
  std::vector<Kwh> per_hhp;
  Kwh safety_margin;

  bool operator==(const DemandVector&) const = default;
};

// D-hat: every entry raised by the safety margin.
std::vector<Kwh> adjusted_demand(const DemandVector& d);

}  // namespace v2x

#endif  // V2X_MARKET_HPP
