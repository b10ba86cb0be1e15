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

#ifndef V2X_IO_HPP
#define V2X_IO_HPP

#include <string>
#include <vector>

#include "v2x/simulator.hpp"

namespace v2x {

// Price CSV: one "hhp,price,market" row per (hhp, market) pair, price in
// decimal pence with at most three fraction digits, market one of
// day-ahead / intra-day / balancing. Blank lines and lines starting with
// '#' are skipped. Every market present must cover hhps 0..hhp_count-1
// exactly once.
std::vector<PriceVector> load_prices(const std::string& path, int hhp_count);

// Scenario files are schema-versioned JSON; unknown fields are rejected.
// The "prices" object may name a CSV file instead of inline arrays, which
// load_scenario resolves relative to the scenario file.
Scenario load_scenario(const std::string& path);
void save_scenario(const Scenario& s, const std::string& path);
std::string scenario_to_string(const Scenario& s);
Scenario scenario_from_string(const std::string& text, const std::string& csv_base_dir = "");

enum class ReportFormat { kHumanTable, kMachineRecord };

// Machine records are the stable, documented settlement format; two runs
// of the same scenario emit byte-identical records. The human table is
// advisory.
std::string emit_report(const Settlement& settlement, ReportFormat format);
Settlement settlement_from_record(const std::string& text);

std::string emit_sweep_report(const std::string& axis, const std::vector<SweepRow>& rows,
                              ReportFormat format);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace v2x

#endif  // V2X_IO_HPP
