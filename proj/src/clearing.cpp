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

#include "v2x/clearing.hpp"

#include <algorithm>
#include <string>

namespace v2x {

namespace {

std::string uint128_str(unsigned __int128 v) {
  if (v == 0) return "0";
  std::string out;
  while (v > 0) {
    out.insert(out.begin(), static_cast<char>('0' + static_cast<int>(v % 10)));
    v /= 10;
  }
  return out;
}

std::vector<ContractId> insert_sorted(std::vector<ContractId> ids, ContractId id) {
  ids.insert(std::lower_bound(ids.begin(), ids.end(), id), id);
  return ids;
}

// Groups of the book whose contracts lie inside the given peak.
std::vector<std::vector<ContractId>> peak_groups(const ContractBook& book, const Block& peak) {
  std::vector<std::vector<ContractId>> out;
  for (const auto& group : book.groups()) {
    if (peak.contains(book.contract(group.front()).hhp)) out.push_back(group);
  }
  return out;
}

std::vector<Kwh> supply_of(const ContractBook& book, std::span<const ContractId> accepted,
                           int hhp_count) {
  std::vector<Kwh> supply(static_cast<std::size_t>(hhp_count), Kwh(0));
  for (ContractId id : accepted) {
    const int h = book.contract(id).hhp;
    supply[static_cast<std::size_t>(h)] =
        supply[static_cast<std::size_t>(h)] + book.contract_size(id);
  }
  return supply;
}

}  // namespace

bool allocation_preferred(Money a_value, const std::vector<ContractId>& a_ids, Money b_value,
                          const std::vector<ContractId>& b_ids) {
  if (a_value != b_value) return a_value > b_value;
  if (a_ids.size() != b_ids.size()) return a_ids.size() < b_ids.size();
  return std::lexicographical_compare(a_ids.begin(), a_ids.end(), b_ids.begin(), b_ids.end());
}

DpTables::DpTables(const ContractBook& book, const Block& peak, std::vector<Kwh> residual_caps,
                   const PriceVector& prices)
    : book_(book), peak_(peak), caps_(std::move(residual_caps)), prices_(prices) {
  if (static_cast<int>(caps_.size()) != peak_.size()) {
    throw Error("clearing", "residual cap vector does not match the peak width");
  }
  for (Kwh c : caps_) radix_.push_back(static_cast<std::uint64_t>(c.count()) + 1);
  groups_ = peak_groups(book_, peak_);
  memo_.resize(groups_.size() + 1);
}

std::uint64_t DpTables::pack(const std::vector<Kwh>& residual) const {
  std::uint64_t key = 0;
  for (std::size_t i = 0; i < residual.size(); ++i) {
    key = key * radix_[i] + static_cast<std::uint64_t>(residual[i].count());
  }
  return key;
}

const DpTables::Entry& DpTables::entry(std::size_t r, const std::vector<Kwh>& residual) {
  if (r > groups_.size()) {
    throw Error("clearing", "prefix length " + std::to_string(r) + " exceeds group count");
  }
  if (residual.size() != caps_.size()) {
    throw Error("clearing", "residual vector does not match the peak width");
  }
  for (std::size_t i = 0; i < residual.size(); ++i) {
    if (residual[i] > caps_[i]) {
      throw Error("clearing", "residual demand exceeds the table cap at local hhp " +
                                  std::to_string(i));
    }
  }
  return solve(r, residual);
}

// Recurrence: the best set over the first r groups either skips group r or
// accepts exactly one of its contracts j and recurses on the residual with
// hhp(j) reduced by l(j) (floored at zero). The marginal value of j charges
// any overshoot beyond the residual immediately, which makes the clamped
// residual a sufficient state: max(0, a - d) telescopes exactly across
// successive acceptances at one hhp.
const DpTables::Entry& DpTables::solve(std::size_t r, const std::vector<Kwh>& residual) {
  const std::uint64_t key = pack(residual);
  auto& level = memo_[r];
  if (auto it = level.find(key); it != level.end()) return it->second;

  Entry best;
  if (r == 0) {
    best = Entry{Money{0}, {}};
  } else {
    best = solve(r - 1, residual);
    for (ContractId id : groups_[r - 1]) {
      const Contract& c = book_.contract(id);
      const Kwh size = book_.contract_size(id);
      const std::size_t local = static_cast<std::size_t>(c.hhp - peak_.begin);
      const Money price = prices_.per_kwh[static_cast<std::size_t>(c.hhp)];
      const Kwh overshoot = energy_sub_floor0(size, residual[local]);
      const Money gain =
          scale_by_energy(price - c.bid_per_kwh, size) - scale_by_energy(price, overshoot);

      std::vector<Kwh> sub = residual;
      sub[local] = energy_sub_floor0(residual[local], size);
      const Entry& tail = solve(r - 1, sub);
      const Money value = tail.value + gain;
      std::vector<ContractId> ids = insert_sorted(tail.accepted, id);
      if (allocation_preferred(value, ids, best.value, best.accepted)) {
        best = Entry{value, std::move(ids)};
      }
    }
  }
  return level.emplace(key, std::move(best)).first->second;
}

Allocation clear_peak_dp(const ContractBook& book, int peak_ordinal,
                         const std::vector<Kwh>& demand_hat, const PriceVector& prices,
                         const ClearOptions& options) {
  const Timeline& timeline = book.timeline();
  const std::vector<Block> peaks = timeline.peaks();
  if (peak_ordinal < 0 || peak_ordinal >= static_cast<int>(peaks.size())) {
    throw Error("clearing", "no peak with ordinal " + std::to_string(peak_ordinal));
  }
  if (static_cast<int>(demand_hat.size()) != timeline.hhp_count() ||
      static_cast<int>(prices.per_kwh.size()) != timeline.hhp_count()) {
    throw Error("clearing", "demand/price vector length does not match the timeline");
  }
  const Block peak = peaks[static_cast<std::size_t>(peak_ordinal)];

  // Residual caps: demand above the hhp's total offered energy is
  // unreachable, so the state grid stops at the smaller of the two.
  std::vector<std::int64_t> offered(static_cast<std::size_t>(peak.size()), 0);
  for (const auto& group : peak_groups(book, peak)) {
    for (ContractId id : group) {
      const std::size_t local = static_cast<std::size_t>(book.contract(id).hhp - peak.begin);
      offered[local] = checked_add(offered[local], book.contract_size(id).count(), "offer sum");
    }
  }
  std::vector<Kwh> caps;
  unsigned __int128 states = 1;
  for (int h = peak.begin; h < peak.end; ++h) {
    const std::int64_t cap = std::min(demand_hat[static_cast<std::size_t>(h)].count(),
                                      offered[static_cast<std::size_t>(h - peak.begin)]);
    caps.push_back(Kwh(cap));
    states *= static_cast<unsigned __int128>(cap) + 1;
    if (states > options.state_budget) {
      // keep multiplying only to name the true requirement, guarding overflow
      const unsigned __int128 display_cap = static_cast<unsigned __int128>(1) << 100;
      for (int h2 = h + 1; h2 < peak.end && states < display_cap; ++h2) {
        const std::int64_t cap2 =
            std::min(demand_hat[static_cast<std::size_t>(h2)].count(),
                     offered[static_cast<std::size_t>(h2 - peak.begin)]);
        states *= static_cast<unsigned __int128>(cap2) + 1;
      }
      throw Error("clearing", "state budget exceeded: peak [" + std::to_string(peak.begin) + "," +
                                  std::to_string(peak.end) + ") needs " + uint128_str(states) +
                                  " states, budget is " + std::to_string(options.state_budget));
    }
  }

  DpTables tables(book, peak, caps, prices);
  const DpTables::Entry& best = tables.entry(tables.group_count(), caps);

  Allocation alloc;
  alloc.accepted = best.accepted;
  alloc.value = best.value;
  alloc.per_hhp_supply = supply_of(book, alloc.accepted, timeline.hhp_count());
  return alloc;
}

Allocation clear_day(const ContractBook& book, const std::vector<Kwh>& demand_hat,
                     const PriceVector& prices, const ClearOptions& options) {
  const Timeline& timeline = book.timeline();
  if (static_cast<int>(demand_hat.size()) != timeline.hhp_count() ||
      static_cast<int>(prices.per_kwh.size()) != timeline.hhp_count()) {
    throw Error("clearing", "demand/price vector length does not match the timeline");
  }
  Allocation day;
  day.value = Money{0};
  day.per_hhp_supply.assign(static_cast<std::size_t>(timeline.hhp_count()), Kwh(0));

  const int peak_count = static_cast<int>(timeline.peaks().size());
  for (int ordinal = 0; ordinal < peak_count; ++ordinal) {
    Allocation part = clear_peak_dp(book, ordinal, demand_hat, prices, options);
    day.accepted.insert(day.accepted.end(), part.accepted.begin(), part.accepted.end());
    day.value += part.value;
    for (std::size_t h = 0; h < day.per_hhp_supply.size(); ++h) {
      day.per_hhp_supply[h] = day.per_hhp_supply[h] + part.per_hhp_supply[h];
    }
  }
  std::sort(day.accepted.begin(), day.accepted.end());
  return day;
}

Allocation clear_bruteforce(const ContractBook& book, const std::vector<Kwh>& demand_hat,
                            const PriceVector& prices, const ClearOptions& options) {
  const auto groups = book.groups();
  unsigned __int128 combos = 1;
  for (const auto& g : groups) {
    combos *= static_cast<unsigned __int128>(g.size()) + 1;
    if (combos > options.bruteforce_cap) {
      throw Error("clearing", "brute-force cap exceeded: " + uint128_str(combos) +
                                  "+ subsets, cap is " + std::to_string(options.bruteforce_cap));
    }
  }

  // One choice digit per group: 0 = skip, k = the group's k-th contract.
  std::vector<std::size_t> choice(groups.size(), 0);
  Allocation best;
  best.value = Money{0};
  bool first = true;
  while (true) {
    std::vector<ContractId> ids;
    for (std::size_t g = 0; g < groups.size(); ++g) {
      if (choice[g] > 0) ids.push_back(groups[g][choice[g] - 1]);
    }
    std::sort(ids.begin(), ids.end());
    const Money value = soc_save(ids, book, demand_hat, prices);
    if (first || allocation_preferred(value, ids, best.value, best.accepted)) {
      best.value = value;
      best.accepted = std::move(ids);
      first = false;
    }

    std::size_t g = 0;
    for (; g < groups.size(); ++g) {
      if (++choice[g] <= groups[g].size()) break;
      choice[g] = 0;
    }
    if (g == groups.size()) break;
  }
  best.per_hhp_supply = supply_of(book, best.accepted, book.timeline().hhp_count());
  return best;
}

Allocation clear(const ContractBook& book, const std::vector<Kwh>& demand_hat,
                 const PriceVector& prices, const ClearOptions& options) {
  return options.use_bruteforce ? clear_bruteforce(book, demand_hat, prices, options)
                                : clear_day(book, demand_hat, prices, options);
}

}  // namespace v2x
