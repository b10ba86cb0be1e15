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

#include "v2x/market.hpp"

namespace v2x {

std::string to_string(MarketId id) {
  switch (id) {
    case MarketId::kDayAhead:
      return "day-ahead";
    case MarketId::kIntraDay:
      return "intra-day";
    case MarketId::kBalancing:
      return "balancing";
  }
  throw Error("market", "unhandled market id");
}

MarketId market_id_from_string(const std::string& s) {
  if (s == "day-ahead") return MarketId::kDayAhead;
  if (s == "intra-day") return MarketId::kIntraDay;
  if (s == "balancing") return MarketId::kBalancing;
  throw Error("market", "unknown market id '" + s + "'");
}

std::vector<Kwh> adjusted_demand(const DemandVector& d) {
  std::vector<Kwh> out;
  out.reserve(d.per_hhp.size());
  for (Kwh base : d.per_hhp) out.push_back(base + d.safety_margin);
  return out;
}

}  // namespace v2x
