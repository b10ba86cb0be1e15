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

#include "v2x/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <unordered_set>

namespace v2x {

Timeline scenario_timeline(const Scenario& s) { return build_timeline(s.hhp_count, s.peak_ranges); }

void validate_scenario(const Scenario& s) {
  if (s.schema_version != 1) {
    throw Error("scenario", "unsupported schema version " + std::to_string(s.schema_version));
  }
  const std::size_t n = static_cast<std::size_t>(s.hhp_count);
  if (s.demand.per_hhp.size() != n) throw Error("scenario", "demand length != hhp_count");
  if (s.day_ahead.per_kwh.size() != n) throw Error("scenario", "day-ahead price length != hhp_count");
  if (s.balancing.per_kwh.size() != n) throw Error("scenario", "balancing price length != hhp_count");
  if (s.intra_day && s.intra_day->per_kwh.size() != n) {
    throw Error("scenario", "intra-day price length != hhp_count");
  }
  if (!s.imbalance_kwh.empty() && s.imbalance_kwh.size() != n) {
    throw Error("scenario", "imbalance trace length != hhp_count");
  }
  if (s.day_ahead.market != MarketId::kDayAhead || s.balancing.market != MarketId::kBalancing) {
    throw Error("scenario", "price vector carries the wrong market id");
  }
  if (s.carbon.grid_g_per_kwh < 0 || s.carbon.balancing_g_per_kwh < s.carbon.grid_g_per_kwh) {
    throw Error("scenario", "carbon factors must satisfy 0 <= grid <= balancing");
  }
  for (const Contract& c : s.contracts) {
    auto it = s.fleets.find(c.fleet);
    if (it == s.fleets.end()) {
      throw Error("scenario", "contract " + std::to_string(c.id) + " names unknown fleet " +
                                  std::to_string(c.fleet));
    }
    const double p = it->second.p(c.id);  // throws if missing
    if (p < 0.0 || p > 1.0) {
      throw Error("scenario", "success probability for contract " + std::to_string(c.id) +
                                  " outside [0,1]");
    }
  }
  std::set<EvId> ev_ids;
  for (const EvSpec& ev : s.evs) {
    if (!ev_ids.insert(ev.id).second) {
      throw Error("scenario", "duplicate ev id " + std::to_string(ev.id));
    }
    if (ev.initial_soc > ev.battery_capacity) {
      throw Error("scenario", "ev " + std::to_string(ev.id) + " initial soc above capacity");
    }
    for (const auto& [hhp, entry] : ev.schedule) {
      if (hhp < 0 || hhp >= s.hhp_count) {
        throw Error("scenario", "ev " + std::to_string(ev.id) + " schedule hhp " +
                                    std::to_string(hhp) + " outside the day");
      }
      if (entry.x_min > entry.x_max || entry.x_max > ev.battery_capacity) {
        throw Error("scenario", "ev " + std::to_string(ev.id) + " schedule bounds invalid at hhp " +
                                    std::to_string(hhp));
      }
    }
  }
}

namespace {

// The documented engine-output -> [0,1) mapping for default draws.
double unit_draw(std::mt19937_64& engine) {
  return static_cast<double>(engine() >> 11) * 0x1.0p-53;
}

const FleetPrivate& fleet_private(const Scenario& s, FleetId n) {
  auto it = s.fleets.find(n);
  if (it == s.fleets.end()) throw Error("scenario", "unknown fleet " + std::to_string(n));
  return it->second;
}

}  // namespace

Settlement run_scenario(const Scenario& s, const RunOptions& options) {
  validate_scenario(s);
  const Timeline timeline = scenario_timeline(s);
  const std::vector<Kwh> demand_hat = adjusted_demand(s.demand);
  const std::size_t n = static_cast<std::size_t>(s.hhp_count);

  ClearOptions clear_options;
  clear_options.state_budget = s.state_budget;
  clear_options.use_bruteforce = options.use_oracle;

  const ContractBook book = validate_book(s.contracts, s.bundles, timeline);
  const PaymentSchedule schedule = compute_payments(book, demand_hat, s.day_ahead, clear_options);

  Settlement out;
  out.allocation = schedule.allocation;
  out.payments = schedule.payments;

  // Default draws: one per accepted contract, ascending contract id.
  std::mt19937_64 engine(s.seed);
  out.realized_supply.assign(n, Kwh(0));
  for (ContractId id : out.allocation.accepted) {
    const Contract& c = book.contract(id);
    const double p = fleet_private(s, c.fleet).p(id);
    if (unit_draw(engine) < p) {
      out.honored.push_back(id);
      const std::size_t h = static_cast<std::size_t>(c.hhp);
      out.realized_supply[h] = out.realized_supply[h] + book.contract_size(id);
    } else {
      out.defaulted.push_back(id);
      out.fines_collected += c.fine;
    }
  }

  out.unmet_demand.resize(n);
  for (std::size_t h = 0; h < n; ++h) {
    out.unmet_demand[h] = energy_sub_floor0(demand_hat[h], out.realized_supply[h]);
  }

  // FR ticks. Dispatch runs every hhp; availability quotes are paid at
  // peak hhps only. The active set at a tick drops contracts whose
  // default has already been revealed (hhp in the past).
  std::unordered_set<ContractId> defaulted_set(out.defaulted.begin(), out.defaulted.end());
  std::map<EvId, Kwh> soc;
  for (const EvSpec& ev : s.evs) soc[ev.id] = ev.initial_soc;
  PeakLedger ledger;
  out.fr_dispatch_kwh.assign(n, 0);
  out.balancing_purchases.assign(n, Kwh(0));
  out.curtailed.assign(n, Kwh(0));

  for (int h = 0; h < s.hhp_count; ++h) {
    const std::size_t hi = static_cast<std::size_t>(h);
    std::vector<EvFrState> plugged;
    for (const EvSpec& ev : s.evs) {
      auto it = ev.schedule.find(h);
      if (it == ev.schedule.end()) continue;
      EvFrState state;
      state.id = ev.id;
      state.soc = soc[ev.id];
      state.x_min = it->second.x_min;
      state.x_max = it->second.x_max;
      state.plugged = true;
      state.battery_capacity = ev.battery_capacity;
      validate_ev_state(state);
      plugged.push_back(state);
    }

    const std::int64_t residual_in =
        checked_add(demand_hat[hi].count() - out.realized_supply[hi].count(),
                    s.imbalance_kwh.empty() ? 0 : s.imbalance_kwh[hi], "imbalance");
    const FrDispatchResult dispatch = fr_dispatch(plugged, residual_in);
    std::int64_t net = 0;
    // `plugged` keeps the announcement-time soc; quotes price availability
    // as announced, while the ledger carries what was actually delivered.
    for (const EvFrState& state : plugged) {
      const std::int64_t d = dispatch.per_ev_kwh.at(state.id);
      net += d;
      if (d > 0) {
        soc[state.id] = energy_sub(soc[state.id], Kwh(d));
        ledger.record_export(state.id, h, Kwh(d));
      } else if (d < 0) {
        soc[state.id] = soc[state.id] + Kwh(-d);
        ledger.record_import(state.id, h, Kwh(-d));
      }
    }
    out.fr_dispatch_kwh[hi] = net;
    out.balancing_purchases[hi] = Kwh(std::max<std::int64_t>(0, dispatch.residual_kwh));
    out.curtailed[hi] = Kwh(std::max<std::int64_t>(0, -dispatch.residual_kwh));

    if (timeline.is_peak(h) && !plugged.empty()) {
      std::vector<ContractId> active_ids;
      for (ContractId id : out.allocation.accepted) {
        if (defaulted_set.count(id) != 0 && book.contract(id).hhp < h) continue;
        active_ids.push_back(id);
      }
      const ActiveSet active = ActiveSet::from_contracts(book, active_ids);
      const Block& peak = timeline.block_at(h);
      for (const EvFrState& state : plugged) {
        const FrQuote quote =
            fr_payment(state, h, active, plugged, ledger, peak, s.fr,
                       s.balancing.per_kwh[hi], s.day_ahead.per_kwh[hi], demand_hat[hi]);
        out.fr_payments[state.id] += quote.payment;
        out.fr_payment_total += quote.payment;
      }
    }
  }

  // Realized fleet utility: upfront payment minus realized costs. Honored
  // contracts cost the import-and-deterioration of the exported energy;
  // defaulted ones cost the fine; scheduling cost is sunk at acceptance.
  for (FleetId fleet : book.fleets()) {
    const FleetPrivate& priv = fleet_private(s, fleet);
    Money cost{0};
    for (ContractId id : out.allocation.accepted) {
      const Contract& c = book.contract(id);
      if (c.fleet != fleet) continue;
      if (defaulted_set.count(id) != 0) {
        cost += c.fine;
      } else {
        cost += scale_by_energy(priv.m_imported + priv.c_bd, book.contract_size(id));
      }
      cost += priv.sched(id);
    }
    auto pay = out.payments.find(fleet);
    out.fleet_realized_utilities[fleet] = (pay == out.payments.end() ? Money{0} : pay->second) - cost;
  }

  // Cash conservation: outflow (payments + balancing cost) minus inflow
  // (fines + day-ahead value of served contract supply) = -utility.
  Money served_value{0};
  Money balancing_cost{0};
  for (std::size_t h = 0; h < n; ++h) {
    served_value += scale_by_energy(s.day_ahead.per_kwh[h], min(demand_hat[h], out.realized_supply[h]));
    balancing_cost += scale_by_energy(s.balancing.per_kwh[h], out.balancing_purchases[h]);
  }
  Money payments_total{0};
  for (const auto& [fleet, payment] : out.payments) payments_total += payment;
  out.platform_realized_utility =
      out.fines_collected + served_value - payments_total - balancing_cost;

  out.carbon_g = carbon_proxy(out, s.carbon);
  return out;
}

std::int64_t carbon_proxy(const Settlement& settlement, const CarbonFactors& factors) {
  if (factors.grid_g_per_kwh < 0 || factors.balancing_g_per_kwh < factors.grid_g_per_kwh) {
    throw Error("carbon", "factors must satisfy 0 <= grid <= balancing");
  }
  std::int64_t grid_kwh = 0;
  for (Kwh k : settlement.realized_supply) grid_kwh = checked_add(grid_kwh, k.count(), "carbon");
  std::int64_t balancing_kwh = 0;
  for (Kwh k : settlement.balancing_purchases) {
    balancing_kwh = checked_add(balancing_kwh, k.count(), "carbon");
  }
  return checked_add(checked_mul(grid_kwh, factors.grid_g_per_kwh, "carbon"),
                     checked_mul(balancing_kwh, factors.balancing_g_per_kwh, "carbon"), "carbon");
}

std::vector<SweepRow> sweep(const Scenario& base, const std::string& axis,
                            std::span<const double> values, const RunOptions& options) {
  std::vector<SweepRow> rows;
  for (double v : values) {
    Scenario s = base;
    if (axis == "demand.safety_margin") {
      s.demand.safety_margin = Kwh(std::llround(v));
    } else if (axis == "fr.const_ex") {
      s.fr.const_ex = v;
    } else if (axis == "fr.const_im") {
      s.fr.const_im = v;
    } else if (axis == "seed") {
      s.seed = static_cast<std::uint64_t>(std::llround(v));
    } else if (axis == "carbon.grid_g_per_kwh") {
      s.carbon.grid_g_per_kwh = std::llround(v);
    } else if (axis == "carbon.balancing_g_per_kwh") {
      s.carbon.balancing_g_per_kwh = std::llround(v);
    } else if (axis == "state_budget") {
      s.state_budget = static_cast<std::uint64_t>(std::llround(v));
    } else {
      throw Error("sweep", "unknown axis '" + axis + "'");
    }
    rows.push_back(SweepRow{v, run_scenario(s, options)});
  }
  return rows;
}

}  // namespace v2x
