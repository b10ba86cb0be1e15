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

#include "v2x/reliability.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace v2x {

namespace {

// round to nearest, ties up
int bracket(double x) { return static_cast<int>(std::floor(x + 0.5)); }

}  // namespace

double prob_lower_bound(Money fine, Money total_bid) {
  if (fine <= Money{0}) throw Error("reliability", "unbounded: fine is zero");
  const double raw = static_cast<double>((fine - total_bid).milli_pence) /
                     static_cast<double>(fine.milli_pence);
  return std::clamp(raw, 0.0, 1.0);
}

double min_offer_probability(Money fine, Money cost, Money total_bid) {
  if (fine <= Money{0}) throw Error("reliability", "unbounded: fine is zero");
  const double raw = static_cast<double>((fine + cost - total_bid).milli_pence) /
                     static_cast<double>(fine.milli_pence);
  return std::clamp(raw, 0.0, 1.0);
}

ActiveSet::ActiveSet(std::vector<Entry> entries) : entries_(std::move(entries)) {
  std::sort(entries_.begin(), entries_.end(),
            [](const Entry& a, const Entry& b) { return a.id < b.id; });
  for (const Entry& e : entries_) {
    if (e.p_hat < 0.0 || e.p_hat > 1.0) {
      throw Error("reliability", "p_hat for contract " + std::to_string(e.id) + " outside [0,1]");
    }
  }
}

ActiveSet ActiveSet::from_contracts(const ContractBook& book, std::span<const ContractId> ids) {
  std::vector<Entry> entries;
  for (ContractId id : ids) {
    const Contract& c = book.contract(id);
    Entry e;
    e.id = id;
    e.hhp = c.hhp;
    e.size = book.contract_size(id);
    e.p_hat = prob_lower_bound(c.fine, book.total_bid(id));
    entries.push_back(e);
  }
  return ActiveSet(std::move(entries));
}

std::vector<const ActiveSet::Entry*> ActiveSet::at_hhp(int hhp) const {
  std::vector<const Entry*> out;
  for (const Entry& e : entries_) {
    if (e.hhp == hhp) out.push_back(&e);
  }
  return out;
}

double mean_success_prob(const ActiveSet& active) {
  if (active.empty()) throw Error("reliability", "no active contracts");
  double weighted = 0.0;
  double total = 0.0;
  for (const auto& e : active.entries()) {
    weighted += static_cast<double>(e.size.count()) * e.p_hat;
    total += static_cast<double>(e.size.count());
  }
  return weighted / total;
}

double mean_bundle_size(const ActiveSet& active) {
  if (active.empty()) throw Error("reliability", "no active contracts");
  double total = 0.0;
  for (const auto& e : active.entries()) total += static_cast<double>(e.size.count());
  return total / static_cast<double>(active.entries().size());
}

Kwh x_max(const ActiveSet& active, int hhp) {
  std::int64_t total = 0;
  for (const auto& e : active.entries()) {
    if (e.hhp == hhp) total = checked_add(total, e.size.count(), "x_max");
  }
  return Kwh(total);
}

double binomial_pmf(int trials, int successes, double p) {
  if (trials < 0 || successes < 0 || successes > trials) {
    throw Error("reliability", "invalid binomial indices");
  }
  if (p == 0.0) return successes == 0 ? 1.0 : 0.0;
  if (p == 1.0) return successes == trials ? 1.0 : 0.0;
  const double n = trials;
  const double k = successes;
  const double log_choose = std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
  return std::exp(log_choose + k * std::log(p) + (n - k) * std::log1p(-p));
}

SupplyDistribution SupplyDistribution::build(const ActiveSet& active, int hhp) {
  SupplyDistribution dist;
  dist.hhp_ = hhp;
  dist.x_max_ = x_max(active, hhp);
  if (active.at_hhp(hhp).empty()) {
    throw Error("reliability", "no active contracts at hhp " + std::to_string(hhp));
  }
  dist.mean_size_ = mean_bundle_size(active);
  dist.mean_prob_ = mean_success_prob(active);
  dist.trials_ = bracket(static_cast<double>(dist.x_max_.count()) / dist.mean_size_);
  dist.pmf_.resize(static_cast<std::size_t>(dist.trials_) + 1);
  for (int k = 0; k <= dist.trials_; ++k) {
    dist.pmf_[static_cast<std::size_t>(k)] = binomial_pmf(dist.trials_, k, dist.mean_prob_);
  }
  return dist;
}

double supply_probability(Kwh y, const ActiveSet& active, int hhp) {
  const Kwh cap = x_max(active, hhp);
  if (y > cap) {
    throw Error("reliability", "queried supply " + std::to_string(y.count()) + " kWh exceeds x_max " +
                                   std::to_string(cap.count()));
  }
  const SupplyDistribution dist = SupplyDistribution::build(active, hhp);
  const int k = std::clamp(bracket(static_cast<double>(y.count()) / dist.mean_size()), 0,
                           dist.trials());
  return dist.pmf()[static_cast<std::size_t>(k)];
}

}  // namespace v2x
