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

#include "v2x/contracts.hpp"

#include <algorithm>
#include <string>

namespace v2x {

double FleetPrivate::p(ContractId j) const {
  auto it = success_prob.find(j);
  if (it == success_prob.end()) {
    throw Error("fleet", "no success probability for contract " + std::to_string(j));
  }
  return it->second;
}

Money FleetPrivate::sched(ContractId j) const {
  auto it = scheduling_cost.find(j);
  return it == scheduling_cost.end() ? Money{0} : it->second;
}

const Contract& ContractBook::contract(ContractId id) const {
  auto it = contract_index_.find(id);
  if (it == contract_index_.end()) {
    throw Error("book", "unknown contract id " + std::to_string(id));
  }
  return contracts_[it->second];
}

const Bundle& ContractBook::bundle(BundleId id) const {
  auto it = bundle_index_.find(id);
  if (it == bundle_index_.end()) {
    throw Error("book", "unknown bundle id " + std::to_string(id));
  }
  return bundles_[it->second];
}

bool ContractBook::has_fleet(FleetId n) const {
  return std::any_of(contracts_.begin(), contracts_.end(),
                     [n](const Contract& c) { return c.fleet == n; });
}

std::vector<FleetId> ContractBook::fleets() const {
  std::vector<FleetId> out;
  for (const Contract& c : contracts_) out.push_back(c.fleet);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

Money ContractBook::total_bid(ContractId id) const {
  const Contract& c = contract(id);
  return scale_by_energy(c.bid_per_kwh, bundle(c.bundle).size);
}

Kwh ContractBook::contract_size(ContractId id) const {
  return bundle(contract(id).bundle).size;
}

ContractBook ContractBook::excluding_fleet(FleetId n) const {
  std::vector<Contract> kept;
  for (const Contract& c : contracts_) {
    if (c.fleet != n) kept.push_back(c);
  }
  return validate_book(std::move(kept), bundles_, timeline_);
}

ContractBook ContractBook::restricted_to_fleets(const std::unordered_set<FleetId>& keep) const {
  std::vector<Contract> kept;
  for (const Contract& c : contracts_) {
    if (keep.count(c.fleet) != 0) kept.push_back(c);
  }
  std::vector<Bundle> kept_bundles;
  for (const Bundle& b : bundles_) {
    if (keep.count(b.fleet) != 0) kept_bundles.push_back(b);
  }
  return validate_book(std::move(kept), std::move(kept_bundles), timeline_);
}

ContractBook ContractBook::with_bids(FleetId n, const std::map<ContractId, Money>& bid) const {
  std::vector<Contract> replaced = contracts_;
  for (Contract& c : replaced) {
    if (c.fleet != n) continue;
    auto it = bid.find(c.id);
    if (it != bid.end()) c.bid_per_kwh = it->second;
  }
  return validate_book(std::move(replaced), bundles_, timeline_);
}

ContractBook validate_book(std::vector<Contract> contracts, std::vector<Bundle> bundles,
                           const Timeline& timeline) {
  ContractBook book;
  book.timeline_ = timeline;

  std::sort(bundles.begin(), bundles.end(),
            [](const Bundle& a, const Bundle& b) { return a.id < b.id; });
  for (std::size_t i = 0; i < bundles.size(); ++i) {
    const Bundle& b = bundles[i];
    if (i > 0 && bundles[i - 1].id == b.id) {
      throw Error("validation", "duplicate bundle id " + std::to_string(b.id));
    }
    if (b.size.count() <= 0) {
      throw Error("validation", "bundle " + std::to_string(b.id) + " has non-positive size");
    }
    book.bundle_index_[b.id] = i;
  }
  book.bundles_ = std::move(bundles);

  std::sort(contracts.begin(), contracts.end(),
            [](const Contract& a, const Contract& b) { return a.id < b.id; });
  std::map<BundleId, std::vector<ContractId>> by_bundle;
  for (std::size_t i = 0; i < contracts.size(); ++i) {
    const Contract& c = contracts[i];
    if (i > 0 && contracts[i - 1].id == c.id) {
      throw Error("validation", "duplicate contract id " + std::to_string(c.id));
    }
    if (c.bid_per_kwh < Money{0}) {
      throw Error("validation", "contract " + std::to_string(c.id) + " has negative bid");
    }
    if (c.fine < Money{0}) {
      throw Error("validation", "contract " + std::to_string(c.id) + " has negative fine");
    }
    auto bit = book.bundle_index_.find(c.bundle);
    if (bit == book.bundle_index_.end()) {
      throw Error("validation", "contract " + std::to_string(c.id) + " names unknown bundle " +
                                    std::to_string(c.bundle));
    }
    const Bundle& owner = book.bundles_[bit->second];
    if (owner.fleet != c.fleet) {
      throw Error("validation", "contract " + std::to_string(c.id) + " fleet " +
                                    std::to_string(c.fleet) + " does not own bundle " +
                                    std::to_string(c.bundle));
    }
    if (c.hhp < 0 || c.hhp >= timeline.hhp_count()) {
      throw Error("validation", "contract " + std::to_string(c.id) + " hhp " +
                                    std::to_string(c.hhp) + " outside the day");
    }
    if (!timeline.is_peak(c.hhp)) {
      throw Error("validation", "contract " + std::to_string(c.id) + " hhp " +
                                    std::to_string(c.hhp) + " not in peak");
    }
    book.contract_index_[c.id] = i;
    by_bundle[c.bundle].push_back(c.id);
  }
  book.contracts_ = std::move(contracts);

  // Per-bundle groups: distinct hhps, all within one peak.
  for (auto& [bundle_id, ids] : by_bundle) {
    int peak = -1;
    std::vector<int> hhps;
    for (ContractId id : ids) {
      const Contract& c = book.contract(id);
      hhps.push_back(c.hhp);
      int ordinal = timeline.peak_ordinal_of(c.hhp);
      if (peak == -1) peak = ordinal;
      if (ordinal != peak) {
        throw Error("validation", "bundle " + std::to_string(bundle_id) + " spans peaks (hhp " +
                                      std::to_string(c.hhp) + ")");
      }
    }
    std::sort(hhps.begin(), hhps.end());
    if (std::adjacent_find(hhps.begin(), hhps.end()) != hhps.end()) {
      throw Error("validation", "bundle " + std::to_string(bundle_id) +
                                    " offered twice at the same hhp");
    }
    book.groups_.push_back(std::move(ids));  // by_bundle is ordered by bundle id
  }
  return book;
}

}  // namespace v2x
