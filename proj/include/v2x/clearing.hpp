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

#ifndef V2X_CLEARING_HPP
#define V2X_CLEARING_HPP

#include <cstdint>
#include <memory>
#include <unordered_map>
#include <vector>

#include "v2x/social_savings.hpp"

namespace v2x {

// A feasible accepted set with its savings value and per-hhp supply.
struct Allocation {
  std::vector<ContractId> accepted;  // ascending
  Money value;
  std::vector<Kwh> per_hhp_supply;

  bool operator==(const Allocation&) const = default;
};

struct ClearOptions {
  // Upper bound on the per-peak DP state grid (product over the peak's
  // hhps of capped-demand + 1). Exceeding it is a hard error.
  std::uint64_t state_budget = std::uint64_t{1} << 24;
  // Upper bound on brute-force subset enumeration.
  std::uint64_t bruteforce_cap = std::uint64_t{1} << 20;
  // Route every clearing call through the exhaustive oracle instead of
  // the DP (cross-check mode).
  bool use_bruteforce = false;
};

// Tie-break shared by the DP and the brute-force oracle: higher value,
// then fewer contracts, then lexicographically smallest sorted id
// sequence. Returns true if `a` beats `b`.
bool allocation_preferred(Money a_value, const std::vector<ContractId>& a_ids, Money b_value,
                          const std::vector<ContractId>& b_ids);

// One peak's dynamic program over bundle-group prefixes and residual
// demand, as used by clear_peak_dp. Exposed so tests can probe table
// entries directly; entries are materialized on demand and memoized.
//
// entry(r, d) is the best feasible subset of the first r bundle groups
// given residual demand d over the peak's hhps, together with its value.
class DpTables {
 public:
  struct Entry {
    Money value;
    std::vector<ContractId> accepted;  // ascending
  };

  DpTables(const ContractBook& book, const Block& peak, std::vector<Kwh> residual_caps,
           const PriceVector& prices);

  const Entry& entry(std::size_t r, const std::vector<Kwh>& residual);
  std::size_t group_count() const { return groups_.size(); }
  const std::vector<Kwh>& caps() const { return caps_; }

 private:
  std::uint64_t pack(const std::vector<Kwh>& residual) const;
  const Entry& solve(std::size_t r, const std::vector<Kwh>& residual);

  const ContractBook& book_;
  Block peak_;
  std::vector<Kwh> caps_;             // per local hhp
  std::vector<std::uint64_t> radix_;  // caps + 1
  std::vector<std::vector<ContractId>> groups_;  // this peak's groups only
  const PriceVector& prices_;
  std::vector<std::unordered_map<std::uint64_t, Entry>> memo_;  // per r
};

// Optimal feasible subset of the contracts of one peak (ordinal index into
// timeline.peaks()), maximizing soc_save against demand_hat. Residual
// demand is capped per hhp at that hhp's total offered energy before the
// state budget is checked; demand beyond total supply never binds.
Allocation clear_peak_dp(const ContractBook& book, int peak_ordinal,
                         const std::vector<Kwh>& demand_hat, const PriceVector& prices,
                         const ClearOptions& options = {});

// Whole-day winner determination: clears each peak separately and takes
// the union. Exact because bundles never span peaks and the objective is
// separable across peaks.
Allocation clear_day(const ContractBook& book, const std::vector<Kwh>& demand_hat,
                     const PriceVector& prices, const ClearOptions& options = {});

// Exhaustive oracle: enumerates every feasible subset (one choice per
// bundle group) and keeps the best under the shared tie-break.
Allocation clear_bruteforce(const ContractBook& book, const std::vector<Kwh>& demand_hat,
                            const PriceVector& prices, const ClearOptions& options = {});

// Dispatches to clear_day or clear_bruteforce per options.use_bruteforce.
Allocation clear(const ContractBook& book, const std::vector<Kwh>& demand_hat,
                 const PriceVector& prices, const ClearOptions& options = {});

}  // namespace v2x

#endif  // V2X_CLEARING_HPP
