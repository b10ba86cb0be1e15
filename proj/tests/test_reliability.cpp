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

#include <doctest.h>

#include <cmath>
#include <random>

#include "generators.hpp"
#include "v2x/reliability.hpp"

using namespace v2x;

namespace {

ActiveSet make_active(const std::vector<ActiveSet::Entry>& entries) { return ActiveSet(entries); }

}  // namespace

TEST_CASE("prob_lower_bound") {
  CHECK(prob_lower_bound(Money{100}, Money{20}) == doctest::Approx(0.8).epsilon(1e-15));
  CHECK(prob_lower_bound(Money{100}, Money{0}) == 1.0);
  CHECK(prob_lower_bound(Money{100}, Money{100}) == 0.0);
  CHECK(prob_lower_bound(Money{100}, Money{150}) == 0.0);  // clamped
  CHECK_THROWS_WITH_AS(prob_lower_bound(Money{0}, Money{20}),
                       doctest::Contains("unbounded: fine is zero"), Error);
}

TEST_CASE("min_offer_probability") {
  CHECK(min_offer_probability(Money{100}, Money{50}, Money{50}) == 1.0);  // c = b_total
  CHECK(min_offer_probability(Money{100}, Money{50}, Money{80}) == doctest::Approx(0.7));
  CHECK(min_offer_probability(Money{100}, Money{0}, Money{20}) ==
        prob_lower_bound(Money{100}, Money{20}));
  CHECK_THROWS_AS(min_offer_probability(Money{0}, Money{1}, Money{1}), Error);
}

TEST_CASE("prob_lower_bound never exceeds min_offer_probability at non-negative cost") {
  std::mt19937_64 rng(401);
  for (int trial = 0; trial < 200; ++trial) {
    const Money fine{testgen::pick(rng, 1, 500)};
    const Money bid{testgen::pick(rng, 0, 600)};
    const Money cost{testgen::pick(rng, 0, 300)};
    CHECK(prob_lower_bound(fine, bid) <= min_offer_probability(fine, cost, bid));
  }
}

TEST_CASE("mean_success_prob") {
  CHECK(mean_success_prob(make_active({{1, 0, Kwh(10), 0.8}, {2, 0, Kwh(30), 0.8}})) ==
        doctest::Approx(0.8));
  CHECK(mean_success_prob(make_active({{1, 0, Kwh(10), 1.0}, {2, 0, Kwh(30), 0.5}})) ==
        doctest::Approx(0.625));
  CHECK(mean_success_prob(make_active({{1, 0, Kwh(7), 0.3}})) == doctest::Approx(0.3));
  CHECK_THROWS_WITH_AS(mean_success_prob(ActiveSet()), doctest::Contains("no active contracts"),
                       Error);
}

TEST_CASE("mean_success_prob stays within the entry bounds") {
  std::mt19937_64 rng(409);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<ActiveSet::Entry> entries;
    double lo = 1.0;
    double hi = 0.0;
    const int count = static_cast<int>(testgen::pick(rng, 1, 8));
    for (int i = 0; i < count; ++i) {
      const double p = static_cast<double>(testgen::pick(rng, 0, 100)) / 100.0;
      entries.push_back({i + 1, 0, Kwh(testgen::pick(rng, 1, 12)), p});
      lo = std::min(lo, p);
      hi = std::max(hi, p);
    }
    const double mean = mean_success_prob(make_active(entries));
    CHECK(mean >= lo - 1e-12);
    CHECK(mean <= hi + 1e-12);
  }
}

TEST_CASE("mean_bundle_size") {
  CHECK(mean_bundle_size(make_active({{1, 0, Kwh(10), 1.0}, {2, 0, Kwh(30), 1.0}})) ==
        doctest::Approx(20.0));
  CHECK(mean_bundle_size(make_active({{1, 0, Kwh(7), 1.0}})) == doctest::Approx(7.0));
  CHECK(mean_bundle_size(make_active({{1, 0, Kwh(5), 1.0}, {2, 0, Kwh(5), 1.0}})) ==
        doctest::Approx(5.0));
  CHECK_THROWS_AS(mean_bundle_size(ActiveSet()), Error);
}

TEST_CASE("x_max sums the hhp's contract sizes") {
  const ActiveSet active = make_active({{1, 3, Kwh(10), 1.0}, {2, 3, Kwh(15), 1.0},
                                        {3, 5, Kwh(4), 1.0}});
  CHECK(x_max(active, 3) == Kwh(25));
  CHECK(x_max(active, 5) == Kwh(4));
  CHECK(x_max(active, 7) == Kwh(0));
  CHECK(x_max(ActiveSet(), 3) == Kwh(0));
}

TEST_CASE("supply_probability on the homogeneous two-contract case") {
  const ActiveSet active = make_active({{1, 0, Kwh(10), 0.5}, {2, 0, Kwh(10), 0.5}});
  CHECK(supply_probability(Kwh(10), active, 0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(supply_probability(Kwh(0), active, 0) == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(supply_probability(Kwh(20), active, 0) == doctest::Approx(0.25).epsilon(1e-12));

  const ActiveSet certain = make_active({{1, 0, Kwh(10), 1.0}, {2, 0, Kwh(10), 1.0}});
  CHECK(supply_probability(Kwh(0), certain, 0) == 0.0);
  CHECK(supply_probability(Kwh(20), certain, 0) == 1.0);

  CHECK_THROWS_WITH_AS(supply_probability(Kwh(21), certain, 0), doctest::Contains("exceeds x_max"),
                       Error);
  const ActiveSet elsewhere = make_active({{1, 4, Kwh(10), 1.0}});
  CHECK_THROWS_WITH_AS(supply_probability(Kwh(0), elsewhere, 0),
                       doctest::Contains("no active contracts at hhp"), Error);
}

TEST_CASE("binomial_pmf rejects bad indices and handles the degenerate p") {
  CHECK_THROWS_AS(binomial_pmf(3, 4, 0.5), Error);
  CHECK_THROWS_AS(binomial_pmf(-1, 0, 0.5), Error);
  CHECK(binomial_pmf(5, 0, 0.0) == 1.0);
  CHECK(binomial_pmf(5, 5, 1.0) == 1.0);
  CHECK(binomial_pmf(5, 3, 1.0) == 0.0);
  // log-space evaluation handles sizes far beyond direct factorials
  double total = 0.0;
  for (int k = 0; k <= 500; ++k) total += binomial_pmf(500, k, 0.37);
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("supply distribution normalizes to one") {
  std::mt19937_64 rng(419);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<ActiveSet::Entry> entries;
    const int count = static_cast<int>(testgen::pick(rng, 1, 10));
    for (int i = 0; i < count; ++i) {
      entries.push_back({i + 1, 0, Kwh(testgen::pick(rng, 1, 20)),
                         static_cast<double>(testgen::pick(rng, 0, 100)) / 100.0});
    }
    const SupplyDistribution dist = SupplyDistribution::build(make_active(entries), 0);
    double total = 0.0;
    for (double p : dist.pmf()) {
      total += p;
      CHECK(p >= 0.0);
      CHECK(p <= 1.0);
    }
    CHECK(std::abs(total - 1.0) <= 1e-12);
    CHECK(static_cast<int>(dist.pmf().size()) == dist.trials() + 1);
  }
}

TEST_CASE("homogeneous case matches exact binomial and Monte Carlo") {
  std::mt19937_64 rng(421);
  for (int trial = 0; trial < 5; ++trial) {
    const int count = static_cast<int>(testgen::pick(rng, 2, 8));
    const std::int64_t size = testgen::pick(rng, 2, 12);
    const double p = static_cast<double>(testgen::pick(rng, 10, 90)) / 100.0;
    std::vector<ActiveSet::Entry> entries;
    std::vector<testgen::McContract> mc;
    for (int i = 0; i < count; ++i) {
      entries.push_back({i + 1, 0, Kwh(size), p});
      mc.push_back({size, p});
    }
    const ActiveSet active = make_active(entries);
    const SupplyDistribution dist = SupplyDistribution::build(active, 0);
    REQUIRE(dist.trials() == count);

    // exact binomial agreement
    for (int k = 0; k <= count; ++k) {
      CHECK(std::abs(dist.pmf()[static_cast<std::size_t>(k)] - binomial_pmf(count, k, p)) <= 1e-12);
    }

    // Monte-Carlo agreement within three standard errors
    const std::size_t samples = 100000;
    const auto buckets =
        testgen::mc_supply_buckets(mc, dist.mean_size(), dist.trials(), samples, 999 + trial);
    for (int k = 0; k <= count; ++k) {
      const double expect = dist.pmf()[static_cast<std::size_t>(k)];
      auto it = buckets.find(k);
      const double freq =
          it == buckets.end() ? 0.0
                              : static_cast<double>(it->second) / static_cast<double>(samples);
      const double se = std::sqrt(std::max(expect * (1.0 - expect), 1e-12) /
                                  static_cast<double>(samples));
      CHECK(std::abs(freq - expect) <= 3.0 * se + 1e-9);
    }
  }
}
