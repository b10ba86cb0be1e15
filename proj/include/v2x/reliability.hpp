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

#ifndef V2X_RELIABILITY_HPP
#define V2X_RELIABILITY_HPP

#include <map>
#include <span>
#include <vector>

#include "v2x/contracts.hpp"

namespace v2x {

// Lower bound on a contract's success probability implied by its bid and
// fine: (fine - total_bid) / fine, clamped to [0,1]. The fine must be
// positive; with a zero fine the bound is undefined.
double prob_lower_bound(Money fine, Money total_bid);

// Minimum success probability at which offering the contract is rational:
// (fine + cost - total_bid) / fine, clamped to [0,1]. Reduces to
// prob_lower_bound at zero cost.
double min_offer_probability(Money fine, Money cost, Money total_bid);

// Accepted, not-yet-defaulted contracts with their bid-implied success
// bounds, grouped per hhp.
class ActiveSet {
 public:
  struct Entry {
    ContractId id = 0;
    int hhp = 0;
    Kwh size;
    double p_hat = 0.0;
  };

  ActiveSet() = default;
  explicit ActiveSet(std::vector<Entry> entries);

  // Builds the set from contracts of the book, deriving p_hat from each
  // contract's fine and total bid.
  static ActiveSet from_contracts(const ContractBook& book, std::span<const ContractId> ids);

  std::span<const Entry> entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }
  std::vector<const Entry*> at_hhp(int hhp) const;

 private:
  std::vector<Entry> entries_;  // ascending id
};

// Energy-weighted mean of the success bounds: sum l*p / sum l.
double mean_success_prob(const ActiveSet& active);

// Plain mean of the contract sizes: sum l / count.
double mean_bundle_size(const ActiveSet& active);

// Total energy exported at the hhp if every active contract is honored.
Kwh x_max(const ActiveSet& active, int hhp);

// Binomial model of supplied energy at one hhp: n = [x_max / l_bar]
// trials at the pooled success probability, support {0, l_bar, ...,
// x_max}. Bracketed ratios round to nearest, ties up.
class SupplyDistribution {
 public:
  static SupplyDistribution build(const ActiveSet& active, int hhp);

  int hhp() const { return hhp_; }
  double mean_size() const { return mean_size_; }
  double mean_prob() const { return mean_prob_; }
  Kwh max_supply() const { return x_max_; }
  int trials() const { return trials_; }
  // Grid point k in kWh (k * l_bar, a real quantity).
  double support(int k) const { return mean_size_ * k; }
  const std::vector<double>& pmf() const { return pmf_; }

 private:
  int hhp_ = 0;
  double mean_size_ = 0.0;
  double mean_prob_ = 0.0;
  Kwh x_max_;
  int trials_ = 0;
  std::vector<double> pmf_;
};

// Probability that exactly y kWh are supplied at the hhp under the
// binomial approximation. y must not exceed x_max and the hhp must have
// active contracts.
double supply_probability(Kwh y, const ActiveSet& active, int hhp);

// Binomial point mass evaluated in log space (exact at p in {0,1}).
double binomial_pmf(int trials, int successes, double p);

}  // namespace v2x

#endif  // V2X_RELIABILITY_HPP
