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

#include "v2x/frequency_regulation.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace v2x {

void validate_ev_state(const EvFrState& ev) {
  if (ev.x_min > ev.x_max) {
    throw Error("fr", "ev " + std::to_string(ev.id) + " has x_min > x_max");
  }
  if (ev.x_max > ev.battery_capacity) {
    throw Error("fr", "ev " + std::to_string(ev.id) + " has x_max above battery capacity");
  }
  if (ev.soc > ev.battery_capacity) {
    throw Error("fr", "ev " + std::to_string(ev.id) + " has soc above battery capacity");
  }
}

Kwh available_export(const EvFrState& ev) { return energy_sub_floor0(ev.soc, ev.x_min); }

Kwh available_import(const EvFrState& ev) { return energy_sub_floor0(ev.x_max, ev.soc); }

void PeakLedger::record_export(EvId ev, int hhp, Kwh amount) {
  Flows& f = entries_[{ev, hhp}];
  f.exported = f.exported + amount;
}

void PeakLedger::record_import(EvId ev, int hhp, Kwh amount) {
  Flows& f = entries_[{ev, hhp}];
  f.imported = f.imported + amount;
}

Kwh PeakLedger::exported_at(EvId ev, int hhp) const {
  auto it = entries_.find({ev, hhp});
  return it == entries_.end() ? Kwh(0) : it->second.exported;
}

Kwh PeakLedger::imported_at(EvId ev, int hhp) const {
  auto it = entries_.find({ev, hhp});
  return it == entries_.end() ? Kwh(0) : it->second.imported;
}

Kwh PeakLedger::exported_peak_excluding(EvId ev, const Block& peak, int hhp) const {
  Kwh total(0);
  for (int h = peak.begin; h < peak.end; ++h) {
    if (h != hhp) total = total + exported_at(ev, h);
  }
  return total;
}

Kwh PeakLedger::imported_peak_excluding(EvId ev, const Block& peak, int hhp) const {
  Kwh total(0);
  for (int h = peak.begin; h < peak.end; ++h) {
    if (h != hhp) total = total + imported_at(ev, h);
  }
  return total;
}

FrDispatchResult fr_dispatch(std::span<const EvFrState> plugged, std::int64_t imbalance_kwh) {
  FrDispatchResult result;
  result.residual_kwh = imbalance_kwh;
  if (imbalance_kwh == 0 || plugged.empty()) {
    for (const EvFrState& ev : plugged) result.per_ev_kwh[ev.id] = 0;
    return result;
  }
  const bool exporting = imbalance_kwh > 0;

  struct Slot {
    EvId id;
    std::int64_t avail;
    std::int64_t base = 0;
    std::int64_t remainder = 0;
  };
  std::vector<Slot> slots;
  std::int64_t total_avail = 0;
  for (const EvFrState& ev : plugged) {
    validate_ev_state(ev);
    const Kwh a = exporting ? available_export(ev) : available_import(ev);
    slots.push_back({ev.id, a.count()});
    total_avail = checked_add(total_avail, a.count(), "fr availability");
  }
  const std::int64_t magnitude = exporting ? imbalance_kwh : -imbalance_kwh;
  const std::int64_t amount = std::min(magnitude, total_avail);
  if (amount > 0) {
    // exact largest-remainder apportionment over integer availabilities
    std::int64_t assigned = 0;
    for (Slot& s : slots) {
      const std::int64_t scaled = checked_mul(amount, s.avail, "fr apportion");
      s.base = scaled / total_avail;
      s.remainder = scaled % total_avail;
      assigned += s.base;
    }
    std::int64_t leftover = amount - assigned;
    std::vector<std::size_t> order(slots.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      if (slots[a].remainder != slots[b].remainder) return slots[a].remainder > slots[b].remainder;
      return slots[a].id < slots[b].id;
    });
    for (std::size_t i = 0; i < order.size() && leftover > 0; ++i) {
      Slot& s = slots[order[i]];
      if (s.base < s.avail) {
        ++s.base;
        --leftover;
      }
    }
  }
  std::int64_t dispatched = 0;
  for (const Slot& s : slots) {
    const std::int64_t signed_kwh = exporting ? s.base : -s.base;
    result.per_ev_kwh[s.id] = signed_kwh;
    dispatched += signed_kwh;
  }
  result.residual_kwh = imbalance_kwh - dispatched;
  return result;
}

namespace {

double pool_share(double own, double total) { return total > 0.0 ? own / total : 0.0; }

}  // namespace

double fr_export_share(const EvFrState& ev, std::span<const EvFrState> plugged,
                       const PeakLedger& ledger, const Block& peak, int hhp) {
  double total = 0.0;
  double own = 0.0;
  for (const EvFrState& q : plugged) {
    const double w = static_cast<double>(available_export(q).count()) +
                     static_cast<double>(ledger.exported_peak_excluding(q.id, peak, hhp).count());
    total += w;
    if (q.id == ev.id) own = w;
  }
  return pool_share(own, total);
}

double fr_import_share(const EvFrState& ev, std::span<const EvFrState> plugged,
                       const PeakLedger& ledger, const Block& peak, int hhp) {
  double total = 0.0;
  double own = 0.0;
  for (const EvFrState& q : plugged) {
    const double w = static_cast<double>(available_import(q).count()) +
                     static_cast<double>(ledger.imported_peak_excluding(q.id, peak, hhp).count());
    total += w;
    if (q.id == ev.id) own = w;
  }
  return pool_share(own, total);
}

FrQuote fr_payment(const EvFrState& ev, int hhp, const ActiveSet& active,
                   std::span<const EvFrState> plugged, const PeakLedger& ledger, const Block& peak,
                   const FrConfig& config, Money m_balancing, Money m_day_ahead, Kwh demand_hat) {
  if (!ev.plugged) {
    throw Error("fr", "quote requested for unplugged ev " + std::to_string(ev.id));
  }
  FrQuote quote;
  quote.ev = ev.id;
  quote.hhp = hhp;

  if (!active.at_hhp(hhp).empty()) {
    const SupplyDistribution dist = SupplyDistribution::build(active, hhp);
    const double demand = static_cast<double>(demand_hat.count());
    // grid points sitting exactly on demand belong to both sums
    double base_export = 0.0;
    double base_import = 0.0;
    for (int k = 0; k <= dist.trials(); ++k) {
      const double y = dist.support(k);
      const double weighted =
          dist.pmf()[static_cast<std::size_t>(k)] * static_cast<double>(m_balancing.milli_pence) * y;
      if (y <= demand + 1e-9) base_export += weighted;
      if (y >= demand - 1e-9) base_import += weighted;
    }
    const double share_ex = fr_export_share(ev, plugged, ledger, peak, hhp);
    const double share_im = fr_import_share(ev, plugged, ledger, peak, hhp);
    quote.export_term = Money{std::llround(config.const_ex * base_export * share_ex)};
    quote.import_term = Money{std::llround(config.const_im * base_import * share_im)};
  }

  quote.delivery_term = scale_by_energy(config.c_bd + m_day_ahead, ledger.exported_at(ev.id, hhp));
  quote.payment = quote.export_term + quote.import_term + quote.delivery_term;
  return quote;
}

bool fr_abstention_check(Money hour_scheduling_utility, std::span<const FrQuote> quotes,
                         const PeakLedger& ledger, Money c_bd, Money m_imported) {
  Money fr_net{0};
  for (const FrQuote& q : quotes) {
    fr_net += q.payment - scale_by_energy(c_bd + m_imported, ledger.exported_at(q.ev, q.hhp));
  }
  return fr_net > hour_scheduling_utility;
}

}  // namespace v2x
