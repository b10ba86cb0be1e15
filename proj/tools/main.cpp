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

#include <cstdint>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "v2x/io.hpp"

namespace {

struct CommonArgs {
  std::string scenario_path;
  std::string format = "human";
  std::string prices_csv;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> state_budget;
  bool oracle = false;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("scenario", args.scenario_path, "scenario JSON file")->required();
  cmd->add_option("--format", args.format, "output format")
      ->check(CLI::IsMember({"human", "machine"}));
  cmd->add_option("--prices", args.prices_csv, "price CSV overriding the scenario prices");
  cmd->add_option("--seed", args.seed, "override the scenario seed");
  cmd->add_option("--state-budget", args.state_budget, "override the DP state budget");
  cmd->add_flag("--oracle", args.oracle, "force brute-force clearing (cross-check mode)");
}

v2x::ReportFormat report_format(const CommonArgs& args) {
  return args.format == "machine" ? v2x::ReportFormat::kMachineRecord
                                  : v2x::ReportFormat::kHumanTable;
}

v2x::Scenario load(const CommonArgs& args) {
  v2x::Scenario s = v2x::load_scenario(args.scenario_path);
  if (!args.prices_csv.empty()) {
    bool have_day_ahead = false;
    bool have_balancing = false;
    for (v2x::PriceVector& v : v2x::load_prices(args.prices_csv, s.hhp_count)) {
      if (v.market == v2x::MarketId::kDayAhead) {
        s.day_ahead = std::move(v);
        have_day_ahead = true;
      } else if (v.market == v2x::MarketId::kBalancing) {
        s.balancing = std::move(v);
        have_balancing = true;
      } else {
        s.intra_day = std::move(v);
      }
    }
    if (!have_day_ahead || !have_balancing) {
      throw v2x::Error("io", "--prices file must provide day-ahead and balancing markets");
    }
  }
  if (args.seed) s.seed = *args.seed;
  if (args.state_budget) s.state_budget = *args.state_budget;
  return s;
}

v2x::ClearOptions clear_options(const v2x::Scenario& s, const CommonArgs& args) {
  v2x::ClearOptions options;
  options.state_budget = s.state_budget;
  options.use_bruteforce = args.oracle;
  return options;
}

int cmd_validate(const CommonArgs& args) {
  const v2x::Scenario s = load(args);
  v2x::validate_scenario(s);
  const v2x::Timeline timeline = v2x::scenario_timeline(s);
  const v2x::ContractBook book = v2x::validate_book(s.contracts, s.bundles, timeline);
  std::cout << "ok: " << book.contracts().size() << " contracts over " << book.groups().size()
            << " bundles, " << timeline.peaks().size() << " peaks, " << s.evs.size() << " evs\n";
  return 0;
}

int cmd_clear(const CommonArgs& args) {
  const v2x::Scenario s = load(args);
  v2x::validate_scenario(s);
  const v2x::ContractBook book = v2x::validate_book(s.contracts, s.bundles, v2x::scenario_timeline(s));
  const std::vector<v2x::Kwh> demand_hat = v2x::adjusted_demand(s.demand);
  const v2x::Allocation alloc = v2x::clear(book, demand_hat, s.day_ahead, clear_options(s, args));
  if (report_format(args) == v2x::ReportFormat::kMachineRecord) {
    std::ostringstream out;
    out << "{\n  \"accepted\": [";
    for (std::size_t i = 0; i < alloc.accepted.size(); ++i) {
      out << (i ? ", " : "") << alloc.accepted[i];
    }
    out << "],\n  \"soc_save\": \"" << v2x::format_pence(alloc.value) << "\"\n}\n";
    std::cout << out.str();
  } else {
    std::cout << "soc_save: " << v2x::format_pence(alloc.value) << " p\n";
    std::cout << "accepted (" << alloc.accepted.size() << "):";
    for (v2x::ContractId id : alloc.accepted) std::cout << " " << id;
    std::cout << "\n";
    for (int h = 0; h < s.hhp_count; ++h) {
      const v2x::Kwh supply = alloc.per_hhp_supply[static_cast<std::size_t>(h)];
      if (supply.count() > 0) std::cout << "  hhp " << h << ": " << supply.count() << " kWh\n";
    }
  }
  return 0;
}

int cmd_pay(const CommonArgs& args) {
  const v2x::Scenario s = load(args);
  v2x::validate_scenario(s);
  const v2x::ContractBook book = v2x::validate_book(s.contracts, s.bundles, v2x::scenario_timeline(s));
  const std::vector<v2x::Kwh> demand_hat = v2x::adjusted_demand(s.demand);
  const v2x::PaymentSchedule schedule =
      v2x::compute_payments(book, demand_hat, s.day_ahead, clear_options(s, args));
  const v2x::Money platform = v2x::platform_utility(schedule, demand_hat, s.day_ahead);
  if (report_format(args) == v2x::ReportFormat::kMachineRecord) {
    std::ostringstream out;
    out << "{\n  \"payments\": [";
    bool first = true;
    for (const auto& [fleet, payment] : schedule.payments) {
      out << (first ? "" : ", ") << "{\"fleet\": " << fleet << ", \"payment\": \""
          << v2x::format_pence(payment) << "\"}";
      first = false;
    }
    out << "],\n  \"soc_save\": \"" << v2x::format_pence(schedule.allocation.value)
        << "\",\n  \"platform_utility\": \"" << v2x::format_pence(platform) << "\"\n}\n";
    std::cout << out.str();
  } else {
    std::cout << "soc_save: " << v2x::format_pence(schedule.allocation.value) << " p\n";
    for (const auto& [fleet, payment] : schedule.payments) {
      std::cout << "fleet " << fleet << ": " << v2x::format_pence(payment) << " p\n";
    }
    std::cout << "platform utility: " << v2x::format_pence(platform) << " p\n";
  }
  return 0;
}

int cmd_reliability(const CommonArgs& args) {
  const v2x::Scenario s = load(args);
  v2x::validate_scenario(s);
  const v2x::ContractBook book = v2x::validate_book(s.contracts, s.bundles, v2x::scenario_timeline(s));
  const std::vector<v2x::Kwh> demand_hat = v2x::adjusted_demand(s.demand);
  const v2x::Allocation alloc = v2x::clear(book, demand_hat, s.day_ahead, clear_options(s, args));
  if (alloc.accepted.empty()) {
    std::cout << "no accepted contracts; nothing to estimate\n";
    return 0;
  }
  const v2x::ActiveSet active = v2x::ActiveSet::from_contracts(book, alloc.accepted);
  std::cout << "mean bundle size: " << v2x::mean_bundle_size(active) << " kWh\n";
  std::cout << "mean success bound: " << v2x::mean_success_prob(active) << "\n";
  for (int h = 0; h < s.hhp_count; ++h) {
    if (active.at_hhp(h).empty()) continue;
    const v2x::SupplyDistribution dist = v2x::SupplyDistribution::build(active, h);
    const double demand = static_cast<double>(demand_hat[static_cast<std::size_t>(h)].count());
    std::cout << "hhp " << h << ": x_max " << dist.max_supply().count() << " kWh, " << dist.trials()
              << " trials, demand " << demand << " kWh\n";
    for (int k = 0; k <= dist.trials(); ++k) {
      const double y = dist.support(k);
      std::cout << "  y=" << y << " kWh: p=" << dist.pmf()[static_cast<std::size_t>(k)];
      if (y < demand) std::cout << " (deficit " << demand - y << " kWh)";
      if (y > demand) std::cout << " (excess " << y - demand << " kWh)";
      std::cout << "\n";
    }
  }
  return 0;
}

int cmd_fr_quote(const CommonArgs& args, std::optional<int> hhp) {
  const v2x::Scenario s = load(args);
  v2x::validate_scenario(s);
  const v2x::Timeline timeline = v2x::scenario_timeline(s);
  const v2x::ContractBook book = v2x::validate_book(s.contracts, s.bundles, timeline);
  const std::vector<v2x::Kwh> demand_hat = v2x::adjusted_demand(s.demand);
  const v2x::Allocation alloc = v2x::clear(book, demand_hat, s.day_ahead, clear_options(s, args));
  const v2x::ActiveSet active = v2x::ActiveSet::from_contracts(book, alloc.accepted);
  const v2x::PeakLedger empty_ledger;

  bool any = false;
  for (int h = 0; h < s.hhp_count; ++h) {
    if (hhp && *hhp != h) continue;
    if (!timeline.is_peak(h)) {
      if (hhp) throw v2x::Error("fr", "hhp " + std::to_string(h) + " is not in a peak");
      continue;
    }
    std::vector<v2x::EvFrState> plugged;
    for (const v2x::EvSpec& ev : s.evs) {
      auto it = ev.schedule.find(h);
      if (it == ev.schedule.end()) continue;
      plugged.push_back(v2x::EvFrState{ev.id, ev.initial_soc, it->second.x_min, it->second.x_max,
                                       true, ev.battery_capacity});
    }
    if (plugged.empty()) continue;
    any = true;
    const v2x::Block& peak = timeline.block_at(h);
    for (const v2x::EvFrState& ev : plugged) {
      const v2x::FrQuote q = v2x::fr_payment(ev, h, active, plugged, empty_ledger, peak, s.fr,
                                             s.balancing.per_kwh[static_cast<std::size_t>(h)],
                                             s.day_ahead.per_kwh[static_cast<std::size_t>(h)],
                                             demand_hat[static_cast<std::size_t>(h)]);
      std::cout << "hhp " << h << " ev " << ev.id << ": payment " << v2x::format_pence(q.payment)
                << " p (export " << v2x::format_pence(q.export_term) << ", import "
                << v2x::format_pence(q.import_term) << ", delivery "
                << v2x::format_pence(q.delivery_term) << ")\n";
    }
  }
  if (!any) std::cout << "no plugged EVs at the requested peak hhps\n";
  return 0;
}

int cmd_simulate(const CommonArgs& args) {
  const v2x::Scenario s = load(args);
  v2x::RunOptions options;
  options.use_oracle = args.oracle;
  const v2x::Settlement settlement = v2x::run_scenario(s, options);
  std::cout << v2x::emit_report(settlement, report_format(args));
  return 0;
}

int cmd_sweep(const CommonArgs& args, const std::string& axis, const std::string& values_csv) {
  const v2x::Scenario s = load(args);
  std::vector<double> values;
  std::stringstream ss(values_csv);
  std::string token;
  while (std::getline(ss, token, ',')) {
    try {
      std::size_t used = 0;
      values.push_back(std::stod(token, &used));
      if (used != token.size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw v2x::Error("sweep", "bad value '" + token + "' in --values");
    }
  }
  if (values.empty()) throw v2x::Error("sweep", "--values must list at least one value");
  v2x::RunOptions options;
  options.use_oracle = args.oracle;
  const std::vector<v2x::SweepRow> rows = v2x::sweep(s, axis, values, options);
  std::cout << v2x::emit_sweep_report(axis, rows, report_format(args));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"day-ahead V2X energy-export auction engine"};
  app.require_subcommand(1);

  CommonArgs validate_args;
  add_common(app.add_subcommand("validate", "lint a scenario and its contract book"), validate_args);
  CommonArgs clear_args;
  add_common(app.add_subcommand("clear", "winner determination"), clear_args);
  CommonArgs pay_args;
  add_common(app.add_subcommand("pay", "VCG payment schedule"), pay_args);
  CommonArgs reliability_args;
  add_common(app.add_subcommand("reliability", "per-hhp supply distributions"), reliability_args);

  CommonArgs fr_args;
  std::optional<int> fr_hhp;
  CLI::App* fr_cmd = app.add_subcommand("fr-quote", "frequency-regulation quotes");
  add_common(fr_cmd, fr_args);
  fr_cmd->add_option("--hhp", fr_hhp, "quote a single peak hhp");

  CommonArgs simulate_args;
  add_common(app.add_subcommand("simulate", "full scenario run"), simulate_args);

  CommonArgs sweep_args;
  std::string sweep_axis;
  std::string sweep_values;
  CLI::App* sweep_cmd = app.add_subcommand("sweep", "parameter sweep");
  add_common(sweep_cmd, sweep_args);
  sweep_cmd->add_option("--axis", sweep_axis, "scenario field to vary")->required();
  sweep_cmd->add_option("--values", sweep_values, "comma-separated values")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand("validate")) return cmd_validate(validate_args);
    if (app.got_subcommand("clear")) return cmd_clear(clear_args);
    if (app.got_subcommand("pay")) return cmd_pay(pay_args);
    if (app.got_subcommand("reliability")) return cmd_reliability(reliability_args);
    if (app.got_subcommand("fr-quote")) return cmd_fr_quote(fr_args, fr_hhp);
    if (app.got_subcommand("simulate")) return cmd_simulate(simulate_args);
    if (app.got_subcommand("sweep")) return cmd_sweep(sweep_args, sweep_axis, sweep_values);
  } catch (const v2x::Error& e) {
    std::cerr << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
