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

#ifndef V2X_FREQUENCY_REGULATION_HPP
#define V2X_FREQUENCY_REGULATION_HPP

#include <map>
#include <span>
#include <vector>

#include "v2x/reliability.hpp"
#include "v2x/timeline.hpp"

namespace v2x {

// One EV's announced state for an hhp: current state of charge and the
// acceptable end-of-hhp bounds.
struct EvFrState {
  EvId id = 0;
  Kwh soc;
  Kwh x_min;
  Kwh x_max;
  bool plugged = false;
  Kwh battery_capacity;
};

// Throws unless 0 <= x_min <= x_max <= capacity and soc <= capacity.
void validate_ev_state(const EvFrState& ev);

// Energy the EV can export (import) this hhp without leaving its
// announced band, floored at zero.
Kwh available_export(const EvFrState& ev);
Kwh available_import(const EvFrState& ev);

// Per-EV, per-hhp export/import history. Peak aggregates excluding an hhp
// are recomputed from the per-hhp entries, so the two views cannot drift.
class PeakLedger {
 public:
  struct Flows {
    Kwh exported;
    Kwh imported;
    bool operator==(const Flows&) const = default;
  };

  void record_export(EvId ev, int hhp, Kwh amount);
  void record_import(EvId ev, int hhp, Kwh amount);

  Kwh exported_at(EvId ev, int hhp) const;
  Kwh imported_at(EvId ev, int hhp) const;
  Kwh exported_peak_excluding(EvId ev, const Block& peak, int hhp) const;
  Kwh imported_peak_excluding(EvId ev, const Block& peak, int hhp) const;

  const std::map<std::pair<EvId, int>, Flows>& entries() const { return entries_; }

 private:
  std::map<std::pair<EvId, int>, Flows> entries_;
};

// Signed per-EV dispatch (positive = EV exports to the grid) plus the
// residual routed to the balancing market.
struct FrDispatchResult {
  std::map<EvId, std::int64_t> per_ev_kwh;
  std::int64_t residual_kwh = 0;
};

// Splits the imbalance across plugged EVs in proportion to availability on
// the relevant side, rounding to whole kWh by largest remainder with the
// smaller ev id winning ties. Positive imbalance means the grid is short
// and EVs export. Never pushes an EV outside its announced band;
// dispatched energy plus the residual equals the imbalance exactly.
FrDispatchResult fr_dispatch(std::span<const EvFrState> plugged, std::int64_t imbalance_kwh);

struct FrConfig {
  double const_ex = 0.1;
  double const_im = 0.1;
  Money c_bd;  // battery deterioration, common knowledge in the FR setting

  bool operator==(const FrConfig&) const = default;
};

// An EV's FR payment for one hhp and its three components.
struct FrQuote {
  EvId ev = 0;
  int hhp = 0;
  Money payment;
  Money export_term;
  Money import_term;
  Money delivery_term;

  bool operator==(const FrQuote&) const = default;
};

// The EV's weight in the export-side availability pool: availability plus
// energy already exported elsewhere in the peak, normalized over all
// plugged EVs. Returns 0 when the pool is empty.
double fr_export_share(const EvFrState& ev, std::span<const EvFrState> plugged,
                       const PeakLedger& ledger, const Block& peak, int hhp);
double fr_import_share(const EvFrState& ev, std::span<const EvFrState> plugged,
                       const PeakLedger& ledger, const Block& peak, int hhp);

// The FR contract payment for one plugged EV at a peak hhp:
//   const_ex * sum_{y <= D} p(y) * m_bal * y * export share
// + const_im * sum_{y >= D} p(y) * m_bal * y * import share
// + exported(hhp) * (c_bd + m_day_ahead).
// The y sums run over the supply-distribution grid; with no active
// contracts at the hhp both probability terms are zero and only delivery
// is paid.
FrQuote fr_payment(const EvFrState& ev, int hhp, const ActiveSet& active,
                   std::span<const EvFrState> plugged, const PeakLedger& ledger, const Block& peak,
                   const FrConfig& config, Money m_balancing, Money m_day_ahead, Kwh demand_hat);

// True iff expected FR income net of export costs strictly exceeds the
// fleet's Hour-Scheduling utility, i.e. a risk-neutral owner would abstain
// from offering contracts.
bool fr_abstention_check(Money hour_scheduling_utility, std::span<const FrQuote> quotes,
                         const PeakLedger& ledger, Money c_bd, Money m_imported);

}  // namespace v2x

#endif  // V2X_FREQUENCY_REGULATION_HPP
