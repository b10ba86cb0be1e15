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

#ifndef V2X_CONTRACTS_HPP
#define V2X_CONTRACTS_HPP

#include <cstdint>
#include <map>
#include <span>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "v2x/timeline.hpp"
#include "v2x/units.hpp"

namespace v2x {

using FleetId = std::int64_t;
using BundleId = std::int64_t;
using ContractId = std::int64_t;
using EvId = std::int64_t;

// An indivisible quantity of stored kWh in one EV's battery, exportable at
// most once.
struct Bundle {
  BundleId id = 0;
  FleetId fleet = 0;
  Kwh size;

  bool operator==(const Bundle&) const = default;
};

// An offer to export a bundle at one specific hhp: (fleet, bid per kWh,
// hhp, bundle, fine). The fine is a total per-contract amount due on
// default.
struct Contract {
  ContractId id = 0;
  FleetId fleet = 0;
  Money bid_per_kwh;
  int hhp = 0;
  BundleId bundle = 0;
  Money fine;

  bool operator==(const Contract&) const = default;
};

// A fleet's private information: per-contract success probability, the
// price its exported energy was originally imported at, battery
// deterioration cost per kWh, and per-contract scheduling cost.
struct FleetPrivate {
  Money m_imported;
  Money c_bd;
  std::map<ContractId, double> success_prob;
  std::map<ContractId, Money> scheduling_cost;  // absent contract -> 0

  double p(ContractId j) const;
  Money sched(ContractId j) const;

  bool operator==(const FleetPrivate&) const = default;
};

// Validated offered contracts grouped per distinct bundle. Group order is
// the fixed arbitrary order over the bundle set: ascending bundle id, so
// every clearing run is reproducible. All contracts of one group share the
// bundle, have pairwise distinct hhps, and lie inside one peak.
class ContractBook {
 public:
  ContractBook() = default;

  const Timeline& timeline() const { return timeline_; }
  std::span<const Contract> contracts() const { return contracts_; }
  std::span<const Bundle> bundles() const { return bundles_; }
  // One entry per offered bundle, ascending bundle id; contract ids within
  // a group ascend.
  std::span<const std::vector<ContractId>> groups() const { return groups_; }

  const Contract& contract(ContractId id) const;
  const Bundle& bundle(BundleId id) const;
  bool has_contract(ContractId id) const { return contract_index_.count(id) != 0; }
  bool has_fleet(FleetId n) const;

  // Fleet ids with at least one offered contract, ascending.
  std::vector<FleetId> fleets() const;

  // Total bid of a contract: bid per kWh times bundle size.
  Money total_bid(ContractId id) const;
  Kwh contract_size(ContractId id) const;

  // The book with every contract of fleet n removed (WB-bar minus n).
  ContractBook excluding_fleet(FleetId n) const;
  // The book restricted to contracts owned by the given fleets.
  ContractBook restricted_to_fleets(const std::unordered_set<FleetId>& keep) const;
  // The book with one fleet's bids replaced (used by the deviation grid).
  ContractBook with_bids(FleetId n, const std::map<ContractId, Money>& bid) const;

  friend ContractBook validate_book(std::vector<Contract> contracts, std::vector<Bundle> bundles,
                                    const Timeline& timeline);

 private:
  Timeline timeline_;
  std::vector<Contract> contracts_;
  std::vector<Bundle> bundles_;
  std::vector<std::vector<ContractId>> groups_;
  std::unordered_map<ContractId, std::size_t> contract_index_;
  std::unordered_map<BundleId, std::size_t> bundle_index_;
};

// Checks every book invariant and builds the per-bundle groups. Rejects
// duplicate ids, same-bundle contracts at one hhp or spanning two peaks,
// contracts at valley hhps, owner mismatches, negative bids or fines.
ContractBook validate_book(std::vector<Contract> contracts, std::vector<Bundle> bundles,
                           const Timeline& timeline);

}  // namespace v2x

#endif  // V2X_CONTRACTS_HPP
