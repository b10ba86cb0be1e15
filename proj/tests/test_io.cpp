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

#include <cstdio>
#include <filesystem>
#include <string>

#include "v2x/io.hpp"

using namespace v2x;

namespace {

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

std::string csv_for(int hhp_count, const std::string& market, int skip_hhp = -1) {
  std::string out;
  for (int h = 0; h < hhp_count; ++h) {
    if (h == skip_hhp) continue;
    out += std::to_string(h) + ",8.000," + market + "\n";
  }
  return out;
}

Scenario tiny_scenario() {
  Scenario s;
  s.hhp_count = 4;
  s.peak_ranges = {{1, 3}};
  s.demand.per_hhp = {Kwh(2), Kwh(9), Kwh(7), Kwh(2)};
  s.demand.safety_margin = Kwh(1);
  s.day_ahead.market = MarketId::kDayAhead;
  s.day_ahead.per_kwh = {Money{4000}, Money{8000}, Money{8500}, Money{-250}};
  s.balancing.market = MarketId::kBalancing;
  s.balancing.per_kwh = {Money{6000}, Money{12000}, Money{12750}, Money{6000}};
  s.bundles = {{1, 1, Kwh(5)}, {2, 2, Kwh(3)}};
  s.contracts = {{1, 1, Money{5000}, 1, 1, Money{20000}},
                 {2, 1, Money{5250}, 2, 1, Money{20000}},
                 {3, 2, Money{6125}, 2, 2, Money{9000}}};
  FleetPrivate f1;
  f1.m_imported = Money{3000};
  f1.c_bd = Money{400};
  f1.success_prob = {{1, 0.9}, {2, 0.9}};
  f1.scheduling_cost = {{1, Money{125}}};
  FleetPrivate f2;
  f2.m_imported = Money{2750};
  f2.c_bd = Money{600};
  f2.success_prob = {{3, 0.7}};
  s.fleets = {{1, f1}, {2, f2}};
  EvSpec ev;
  ev.id = 9;
  ev.battery_capacity = Kwh(40);
  ev.initial_soc = Kwh(25);
  ev.schedule[1] = EvScheduleEntry{Kwh(10), Kwh(35)};
  ev.schedule[2] = EvScheduleEntry{Kwh(10), Kwh(35)};
  s.evs = {ev};
  s.imbalance_kwh = {0, 2, -1, 0};
  s.fr.const_ex = 0.25;
  s.fr.const_im = 0.125;
  s.fr.c_bd = Money{400};
  s.seed = 20260810;
  return s;
}

}  // namespace

TEST_CASE("load_prices parses exact milli-pence, negatives included") {
  const std::string path = temp_path("v2x_prices_ok.csv");
  std::string content = csv_for(48, "day-ahead");
  content += "3,-1.250,balancing\n";
  for (int h = 0; h < 48; ++h) {
    if (h == 3) continue;
    content += std::to_string(h) + ",2.5,balancing\n";
  }
  write_file(path, content);
  const std::vector<PriceVector> loaded = load_prices(path, 48);
  REQUIRE(loaded.size() == 2);
  const PriceVector* day_ahead = nullptr;
  const PriceVector* balancing = nullptr;
  for (const PriceVector& v : loaded) {
    if (v.market == MarketId::kDayAhead) day_ahead = &v;
    if (v.market == MarketId::kBalancing) balancing = &v;
  }
  REQUIRE(day_ahead != nullptr);
  REQUIRE(balancing != nullptr);
  CHECK(day_ahead->per_kwh.size() == 48);
  CHECK(day_ahead->per_kwh[0] == Money{8000});
  CHECK(balancing->per_kwh[3] == Money{-1250});
  CHECK(balancing->per_kwh[4] == Money{2500});
  std::remove(path.c_str());
}

TEST_CASE("load_prices rejections carry line numbers") {
  const std::string missing = temp_path("v2x_prices_missing.csv");
  write_file(missing, csv_for(48, "day-ahead", 47));
  CHECK_THROWS_WITH_AS(load_prices(missing, 48), doctest::Contains("missing hhp 47"), Error);
  std::remove(missing.c_str());

  const std::string malformed = temp_path("v2x_prices_malformed.csv");
  write_file(malformed, "0,8.000,day-ahead\nnot-a-row\n");
  CHECK_THROWS_WITH_AS(load_prices(malformed, 48), doctest::Contains(":2:"), Error);
  std::remove(malformed.c_str());

  const std::string duplicate = temp_path("v2x_prices_dup.csv");
  write_file(duplicate, "0,8.000,day-ahead\n0,9.000,day-ahead\n");
  CHECK_THROWS_WITH_AS(load_prices(duplicate, 48), doctest::Contains("duplicate"), Error);
  std::remove(duplicate.c_str());

  const std::string bad_fraction = temp_path("v2x_prices_frac.csv");
  write_file(bad_fraction, "0,8.1234,day-ahead\n");
  CHECK_THROWS_AS(load_prices(bad_fraction, 48), Error);
  std::remove(bad_fraction.c_str());
}

TEST_CASE("scenario files round-trip exactly") {
  const Scenario original = tiny_scenario();
  const std::string text = scenario_to_string(original);
  const Scenario reloaded = scenario_from_string(text);
  CHECK(reloaded == original);
  // emission is stable byte-for-byte
  CHECK(scenario_to_string(reloaded) == text);
}

TEST_CASE("scenario loader rejects unknown fields and bad versions") {
  const Scenario s = tiny_scenario();
  std::string text = scenario_to_string(s);
  text.insert(text.find("\"seed\""), "\"surprise\": 1,\n  ");
  CHECK_THROWS_WITH_AS(scenario_from_string(text), doctest::Contains("unknown field"), Error);

  std::string versioned = scenario_to_string(s);
  const std::string needle = "\"schema_version\": 1";
  versioned.replace(versioned.find(needle), needle.size(), "\"schema_version\": 9");
  CHECK_THROWS_WITH_AS(scenario_from_string(versioned), doctest::Contains("schema version"), Error);
}

TEST_CASE("scenario prices can come from a csv file") {
  Scenario s = tiny_scenario();
  const std::string dir = temp_path("v2x_scenario_dir");
  std::filesystem::create_directories(dir);
  std::string csv;
  for (int h = 0; h < 4; ++h) {
    csv += std::to_string(h) + "," + format_pence(s.day_ahead.per_kwh[static_cast<std::size_t>(h)]) +
           ",day-ahead\n";
    csv += std::to_string(h) + "," + format_pence(s.balancing.per_kwh[static_cast<std::size_t>(h)]) +
           ",balancing\n";
  }
  write_file(dir + "/prices.csv", csv);

  std::string text = scenario_to_string(s);
  // swap the inline price arrays for a csv reference
  const std::size_t begin = text.find("\"prices\"");
  const std::size_t end = text.find("},", begin);
  text.replace(begin, end - begin + 2, "\"prices\": {\"csv\": \"prices.csv\"},");
  write_file(dir + "/scenario.json", text);

  const Scenario loaded = load_scenario(dir + "/scenario.json");
  CHECK(loaded == s);
  std::filesystem::remove_all(dir);
}

TEST_CASE("settlement records round-trip and emit deterministically") {
  const Scenario s = tiny_scenario();
  const Settlement settlement = run_scenario(s);
  const std::string record = emit_report(settlement, ReportFormat::kMachineRecord);
  CHECK(record == emit_report(settlement, ReportFormat::kMachineRecord));
  const Settlement reloaded = settlement_from_record(record);
  CHECK(reloaded == settlement);
  CHECK(emit_report(reloaded, ReportFormat::kMachineRecord) == record);

  const std::string human = emit_report(settlement, ReportFormat::kHumanTable);
  CHECK(human.find("settlement") != std::string::npos);
  CHECK(human.find("carbon proxy") != std::string::npos);
}

TEST_CASE("an empty settlement emits a zeroed record that round-trips") {
  const Settlement empty;
  const std::string record = emit_report(empty, ReportFormat::kMachineRecord);
  CHECK(record.find("\"fines_collected\": \"0.000\"") != std::string::npos);
  CHECK(record.find("\"carbon_g\": 0") != std::string::npos);
  CHECK(settlement_from_record(record) == empty);
}

TEST_CASE("golden fixture matches byte-exactly") {
  const std::string scenario_path = std::string(V2X_SOURCE_DIR) + "/data/sample_scenario.json";
  const std::string golden_path =
      std::string(V2X_SOURCE_DIR) + "/tests/golden/sample_settlement.json";
  const Scenario s = load_scenario(scenario_path);
  const Settlement settlement = run_scenario(s);
  CHECK(emit_report(settlement, ReportFormat::kMachineRecord) == read_file(golden_path));
}

TEST_CASE("sweep reports cover both formats") {
  const Scenario s = tiny_scenario();
  const std::vector<double> values = {0.0, 2.0};
  const std::vector<SweepRow> rows = sweep(s, "demand.safety_margin", values);
  const std::string machine = emit_sweep_report("demand.safety_margin", rows,
                                                ReportFormat::kMachineRecord);
  CHECK(machine.find("\"axis\"") != std::string::npos);
  CHECK(settlement_from_record(emit_report(rows[0].settlement, ReportFormat::kMachineRecord)) ==
        rows[0].settlement);
  const std::string human = emit_sweep_report("demand.safety_margin", rows,
                                              ReportFormat::kHumanTable);
  CHECK(human.find("sweep over demand.safety_margin") != std::string::npos);
}
