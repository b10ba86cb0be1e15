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

#include "v2x/io.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

namespace v2x {

namespace {

using nlohmann::json;

// Strict object reader: every key must be consumed, unknown keys are
// rejected with their JSON path.
class StrictObject {
 public:
  StrictObject(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw Error("io", path_ + " must be a JSON object");
  }

  const json& at(const std::string& key) {
    consumed_.insert(key);
    auto it = j_.find(key);
    if (it == j_.end()) throw Error("io", path_ + " is missing required field '" + key + "'");
    return *it;
  }

  const json* opt(const std::string& key) {
    consumed_.insert(key);
    auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }

  void finish() {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (consumed_.count(it.key()) == 0) {
        throw Error("io", path_ + " has unknown field '" + it.key() + "'");
      }
    }
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> consumed_;
};

std::int64_t to_int(const json& j, const std::string& path) {
  if (!j.is_number_integer()) throw Error("io", path + " must be an integer");
  return j.get<std::int64_t>();
}

double to_double(const json& j, const std::string& path) {
  if (!j.is_number()) throw Error("io", path + " must be a number");
  return j.get<double>();
}

Money to_money(const json& j, const std::string& path) {
  if (!j.is_string()) throw Error("io", path + " must be a decimal-pence string");
  return parse_pence(j.get<std::string>());
}

Kwh to_kwh(const json& j, const std::string& path) {
  const std::int64_t v = to_int(j, path);
  if (v < 0) throw Error("io", path + " must be a non-negative kWh amount");
  return Kwh(v);
}

std::vector<Money> money_array(const json& j, const std::string& path, int expected) {
  if (!j.is_array() || static_cast<int>(j.size()) != expected) {
    throw Error("io", path + " must be an array of " + std::to_string(expected) + " entries");
  }
  std::vector<Money> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    out.push_back(to_money(j[i], path + "[" + std::to_string(i) + "]"));
  }
  return out;
}

json money_array_json(const std::vector<Money>& v) {
  json out = json::array();
  for (Money m : v) out.push_back(format_pence(m));
  return out;
}

json kwh_array_json(const std::vector<Kwh>& v) {
  json out = json::array();
  for (Kwh k : v) out.push_back(k.count());
  return out;
}

std::vector<Kwh> kwh_array(const json& j, const std::string& path, int expected = -1) {
  if (!j.is_array() || (expected >= 0 && static_cast<int>(j.size()) != expected)) {
    throw Error("io", path + " must be an array" +
                          (expected >= 0 ? " of " + std::to_string(expected) + " entries" : ""));
  }
  std::vector<Kwh> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    out.push_back(to_kwh(j[i], path + "[" + std::to_string(i) + "]"));
  }
  return out;
}

std::vector<ContractId> id_array(const json& j, const std::string& path) {
  if (!j.is_array()) throw Error("io", path + " must be an array");
  std::vector<ContractId> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    out.push_back(to_int(j[i], path + "[" + std::to_string(i) + "]"));
  }
  return out;
}

std::vector<std::string> split_csv_row(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(field);
  return fields;
}

std::string trimmed(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

}  // namespace

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("io", "cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("io", "cannot write '" + path + "'");
  out << content;
}

std::vector<PriceVector> load_prices(const std::string& path, int hhp_count) {
  std::istringstream in(read_file(path));
  std::map<MarketId, std::map<int, Money>> markets;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string row = trimmed(line);
    if (row.empty() || row[0] == '#') continue;
    const std::vector<std::string> fields = split_csv_row(row);
    if (fields.size() != 3) {
      throw Error("io", path + ":" + std::to_string(line_no) + ": expected hhp,price,market");
    }
    int hhp = 0;
    try {
      std::size_t used = 0;
      hhp = std::stoi(trimmed(fields[0]), &used);
      if (used != trimmed(fields[0]).size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw Error("io", path + ":" + std::to_string(line_no) + ": bad hhp index '" + fields[0] + "'");
    }
    if (hhp < 0 || hhp >= hhp_count) {
      throw Error("io", path + ":" + std::to_string(line_no) + ": hhp " + std::to_string(hhp) +
                            " outside [0," + std::to_string(hhp_count) + ")");
    }
    Money price;
    try {
      price = parse_pence(trimmed(fields[1]));
    } catch (const Error& e) {
      throw Error("io", path + ":" + std::to_string(line_no) + ": " + e.what());
    }
    const MarketId market = [&] {
      try {
        return market_id_from_string(trimmed(fields[2]));
      } catch (const Error& e) {
        throw Error("io", path + ":" + std::to_string(line_no) + ": " + e.what());
      }
    }();
    if (!markets[market].emplace(hhp, price).second) {
      throw Error("io", path + ":" + std::to_string(line_no) + ": duplicate (hhp " +
                            std::to_string(hhp) + ", " + to_string(market) + ")");
    }
  }
  std::vector<PriceVector> out;
  for (const auto& [market, rows] : markets) {
    PriceVector v;
    v.market = market;
    for (int h = 0; h < hhp_count; ++h) {
      auto it = rows.find(h);
      if (it == rows.end()) {
        throw Error("io", path + ": missing hhp " + std::to_string(h) + " for market " +
                              to_string(market));
      }
      v.per_kwh.push_back(it->second);
    }
    out.push_back(std::move(v));
  }
  return out;
}

namespace {

FleetPrivate fleet_private_from_json(const json& j, const std::string& path) {
  StrictObject obj(j, path);
  FleetPrivate priv;
  priv.m_imported = to_money(obj.at("m_imported"), path + ".m_imported");
  priv.c_bd = to_money(obj.at("c_bd"), path + ".c_bd");
  const json& probs = obj.at("p");
  if (!probs.is_object()) throw Error("io", path + ".p must be an object");
  for (auto it = probs.begin(); it != probs.end(); ++it) {
    ContractId id = 0;
    try {
      id = std::stoll(it.key());
    } catch (const std::exception&) {
      throw Error("io", path + ".p has non-numeric contract id '" + it.key() + "'");
    }
    priv.success_prob[id] = to_double(it.value(), path + ".p." + it.key());
  }
  if (const json* sched = obj.opt("scheduling_cost")) {
    if (!sched->is_object()) throw Error("io", path + ".scheduling_cost must be an object");
    for (auto it = sched->begin(); it != sched->end(); ++it) {
      ContractId id = 0;
      try {
        id = std::stoll(it.key());
      } catch (const std::exception&) {
        throw Error("io", path + ".scheduling_cost has non-numeric contract id '" + it.key() + "'");
      }
      priv.scheduling_cost[id] = to_money(it.value(), path + ".scheduling_cost." + it.key());
    }
  }
  obj.finish();
  return priv;
}

json fleet_private_to_json(const FleetPrivate& priv) {
  json j;
  j["m_imported"] = format_pence(priv.m_imported);
  j["c_bd"] = format_pence(priv.c_bd);
  json probs = json::object();
  for (const auto& [id, p] : priv.success_prob) probs[std::to_string(id)] = p;
  j["p"] = probs;
  if (!priv.scheduling_cost.empty()) {
    json sched = json::object();
    for (const auto& [id, m] : priv.scheduling_cost) sched[std::to_string(id)] = format_pence(m);
    j["scheduling_cost"] = sched;
  }
  return j;
}

}  // namespace

Scenario scenario_from_string(const std::string& text, const std::string& csv_base_dir) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::exception& e) {
    throw Error("io", std::string("scenario is not valid JSON: ") + e.what());
  }
  StrictObject obj(root, "scenario");
  Scenario s;
  s.schema_version = static_cast<int>(to_int(obj.at("schema_version"), "schema_version"));
  if (s.schema_version != 1) {
    throw Error("io", "unsupported scenario schema version " + std::to_string(s.schema_version));
  }
  s.hhp_count = static_cast<int>(to_int(obj.at("hhp_count"), "hhp_count"));

  const json& peaks = obj.at("peaks");
  if (!peaks.is_array()) throw Error("io", "peaks must be an array of [begin,end) pairs");
  for (const json& p : peaks) {
    if (!p.is_array() || p.size() != 2) throw Error("io", "peaks entries must be [begin,end) pairs");
    s.peak_ranges.push_back(HhpRange{static_cast<int>(to_int(p[0], "peaks.begin")),
                                     static_cast<int>(to_int(p[1], "peaks.end"))});
  }

  {
    StrictObject demand(obj.at("demand"), "demand");
    s.demand.per_hhp = kwh_array(demand.at("per_hhp"), "demand.per_hhp", s.hhp_count);
    s.demand.safety_margin = to_kwh(demand.at("safety_margin"), "demand.safety_margin");
    demand.finish();
  }

  {
    StrictObject prices(obj.at("prices"), "prices");
    if (const json* csv = prices.opt("csv")) {
      if (!csv->is_string()) throw Error("io", "prices.csv must be a path string");
      std::filesystem::path p = csv->get<std::string>();
      if (p.is_relative() && !csv_base_dir.empty()) p = std::filesystem::path(csv_base_dir) / p;
      bool have_day_ahead = false;
      bool have_balancing = false;
      for (PriceVector& v : load_prices(p.string(), s.hhp_count)) {
        if (v.market == MarketId::kDayAhead) {
          s.day_ahead = std::move(v);
          have_day_ahead = true;
        } else if (v.market == MarketId::kBalancing) {
          s.balancing = std::move(v);
          have_balancing = true;
        } else {
          s.intra_day = std::move(v);
        }
      }
      if (!have_day_ahead || !have_balancing) {
        throw Error("io", "prices csv must provide day-ahead and balancing markets");
      }
    } else {
      s.day_ahead.market = MarketId::kDayAhead;
      s.day_ahead.per_kwh = money_array(prices.at("day_ahead"), "prices.day_ahead", s.hhp_count);
      s.balancing.market = MarketId::kBalancing;
      s.balancing.per_kwh = money_array(prices.at("balancing"), "prices.balancing", s.hhp_count);
      if (const json* intra = prices.opt("intra_day")) {
        PriceVector v;
        v.market = MarketId::kIntraDay;
        v.per_kwh = money_array(*intra, "prices.intra_day", s.hhp_count);
        s.intra_day = std::move(v);
      }
    }
    prices.finish();
  }

  const json& bundles = obj.at("bundles");
  if (!bundles.is_array()) throw Error("io", "bundles must be an array");
  for (std::size_t i = 0; i < bundles.size(); ++i) {
    const std::string path = "bundles[" + std::to_string(i) + "]";
    StrictObject b(bundles[i], path);
    Bundle bundle;
    bundle.id = to_int(b.at("id"), path + ".id");
    bundle.fleet = to_int(b.at("fleet"), path + ".fleet");
    bundle.size = to_kwh(b.at("kwh"), path + ".kwh");
    b.finish();
    s.bundles.push_back(bundle);
  }

  const json& contracts = obj.at("contracts");
  if (!contracts.is_array()) throw Error("io", "contracts must be an array");
  for (std::size_t i = 0; i < contracts.size(); ++i) {
    const std::string path = "contracts[" + std::to_string(i) + "]";
    StrictObject c(contracts[i], path);
    Contract contract;
    contract.id = to_int(c.at("id"), path + ".id");
    contract.fleet = to_int(c.at("fleet"), path + ".fleet");
    contract.bundle = to_int(c.at("bundle"), path + ".bundle");
    contract.hhp = static_cast<int>(to_int(c.at("hhp"), path + ".hhp"));
    contract.bid_per_kwh = to_money(c.at("bid_per_kwh"), path + ".bid_per_kwh");
    contract.fine = to_money(c.at("fine"), path + ".fine");
    c.finish();
    s.contracts.push_back(contract);
  }

  const json& fleets = obj.at("fleets");
  if (!fleets.is_array()) throw Error("io", "fleets must be an array");
  for (std::size_t i = 0; i < fleets.size(); ++i) {
    const std::string path = "fleets[" + std::to_string(i) + "]";
    StrictObject f(fleets[i], path);
    const FleetId id = to_int(f.at("id"), path + ".id");
    FleetPrivate priv = fleet_private_from_json(f.at("private"), path + ".private");
    f.finish();
    if (!s.fleets.emplace(id, std::move(priv)).second) {
      throw Error("io", "duplicate fleet id " + std::to_string(id));
    }
  }

  if (const json* evs = obj.opt("evs")) {
    if (!evs->is_array()) throw Error("io", "evs must be an array");
    for (std::size_t i = 0; i < evs->size(); ++i) {
      const std::string path = "evs[" + std::to_string(i) + "]";
      StrictObject e((*evs)[i], path);
      EvSpec ev;
      ev.id = to_int(e.at("id"), path + ".id");
      ev.battery_capacity = to_kwh(e.at("battery_capacity"), path + ".battery_capacity");
      ev.initial_soc = to_kwh(e.at("initial_soc"), path + ".initial_soc");
      const json& schedule = e.at("schedule");
      if (!schedule.is_array()) throw Error("io", path + ".schedule must be an array");
      for (std::size_t k = 0; k < schedule.size(); ++k) {
        const std::string spath = path + ".schedule[" + std::to_string(k) + "]";
        StrictObject entry(schedule[k], spath);
        const int hhp = static_cast<int>(to_int(entry.at("hhp"), spath + ".hhp"));
        EvScheduleEntry sched;
        sched.x_min = to_kwh(entry.at("x_min"), spath + ".x_min");
        sched.x_max = to_kwh(entry.at("x_max"), spath + ".x_max");
        entry.finish();
        if (!ev.schedule.emplace(hhp, sched).second) {
          throw Error("io", spath + ": duplicate hhp " + std::to_string(hhp));
        }
      }
      e.finish();
      s.evs.push_back(std::move(ev));
    }
  }

  if (const json* imbalance = obj.opt("imbalance_kwh")) {
    if (!imbalance->is_array() || static_cast<int>(imbalance->size()) != s.hhp_count) {
      throw Error("io", "imbalance_kwh must be an array of hhp_count entries");
    }
    for (std::size_t i = 0; i < imbalance->size(); ++i) {
      s.imbalance_kwh.push_back(to_int((*imbalance)[i], "imbalance_kwh[" + std::to_string(i) + "]"));
    }
  }

  if (const json* fr = obj.opt("fr")) {
    StrictObject f(*fr, "fr");
    s.fr.const_ex = to_double(f.at("const_ex"), "fr.const_ex");
    s.fr.const_im = to_double(f.at("const_im"), "fr.const_im");
    s.fr.c_bd = to_money(f.at("c_bd"), "fr.c_bd");
    f.finish();
  }

  if (const json* carbon = obj.opt("carbon")) {
    StrictObject c(*carbon, "carbon");
    s.carbon.grid_g_per_kwh = to_int(c.at("grid_g_per_kwh"), "carbon.grid_g_per_kwh");
    s.carbon.balancing_g_per_kwh = to_int(c.at("balancing_g_per_kwh"), "carbon.balancing_g_per_kwh");
    c.finish();
  }

  s.seed = static_cast<std::uint64_t>(to_int(obj.at("seed"), "seed"));
  if (const json* budget = obj.opt("state_budget")) {
    s.state_budget = static_cast<std::uint64_t>(to_int(*budget, "state_budget"));
  }
  obj.finish();
  return s;
}

std::string scenario_to_string(const Scenario& s) {
  json root;
  root["schema_version"] = s.schema_version;
  root["hhp_count"] = s.hhp_count;
  json peaks = json::array();
  for (const HhpRange& r : s.peak_ranges) peaks.push_back(json::array({r.begin, r.end}));
  root["peaks"] = peaks;
  root["demand"]["per_hhp"] = kwh_array_json(s.demand.per_hhp);
  root["demand"]["safety_margin"] = s.demand.safety_margin.count();
  root["prices"]["day_ahead"] = money_array_json(s.day_ahead.per_kwh);
  root["prices"]["balancing"] = money_array_json(s.balancing.per_kwh);
  if (s.intra_day) root["prices"]["intra_day"] = money_array_json(s.intra_day->per_kwh);
  json bundles = json::array();
  for (const Bundle& b : s.bundles) {
    json jb;
    jb["id"] = b.id;
    jb["fleet"] = b.fleet;
    jb["kwh"] = b.size.count();
    bundles.push_back(jb);
  }
  root["bundles"] = bundles;
  json contracts = json::array();
  for (const Contract& c : s.contracts) {
    json jc;
    jc["id"] = c.id;
    jc["fleet"] = c.fleet;
    jc["bundle"] = c.bundle;
    jc["hhp"] = c.hhp;
    jc["bid_per_kwh"] = format_pence(c.bid_per_kwh);
    jc["fine"] = format_pence(c.fine);
    contracts.push_back(jc);
  }
  root["contracts"] = contracts;
  json fleets = json::array();
  for (const auto& [id, priv] : s.fleets) {
    json jf;
    jf["id"] = id;
    jf["private"] = fleet_private_to_json(priv);
    fleets.push_back(jf);
  }
  root["fleets"] = fleets;
  if (!s.evs.empty()) {
    json evs = json::array();
    for (const EvSpec& ev : s.evs) {
      json je;
      je["id"] = ev.id;
      je["battery_capacity"] = ev.battery_capacity.count();
      je["initial_soc"] = ev.initial_soc.count();
      json schedule = json::array();
      for (const auto& [hhp, entry] : ev.schedule) {
        json js;
        js["hhp"] = hhp;
        js["x_min"] = entry.x_min.count();
        js["x_max"] = entry.x_max.count();
        schedule.push_back(js);
      }
      je["schedule"] = schedule;
      evs.push_back(je);
    }
    root["evs"] = evs;
  }
  if (!s.imbalance_kwh.empty()) root["imbalance_kwh"] = s.imbalance_kwh;
  root["fr"]["const_ex"] = s.fr.const_ex;
  root["fr"]["const_im"] = s.fr.const_im;
  root["fr"]["c_bd"] = format_pence(s.fr.c_bd);
  root["carbon"]["grid_g_per_kwh"] = s.carbon.grid_g_per_kwh;
  root["carbon"]["balancing_g_per_kwh"] = s.carbon.balancing_g_per_kwh;
  root["seed"] = s.seed;
  root["state_budget"] = s.state_budget;
  return root.dump(2) + "\n";
}

Scenario load_scenario(const std::string& path) {
  const std::string base = std::filesystem::path(path).parent_path().string();
  return scenario_from_string(read_file(path), base);
}

void save_scenario(const Scenario& s, const std::string& path) {
  write_file(path, scenario_to_string(s));
}

namespace {

json allocation_to_json(const Allocation& a) {
  json j;
  j["accepted"] = a.accepted;
  j["value"] = format_pence(a.value);
  j["per_hhp_supply"] = kwh_array_json(a.per_hhp_supply);
  return j;
}

Allocation allocation_from_json(const json& j, const std::string& path) {
  StrictObject obj(j, path);
  Allocation a;
  a.accepted = id_array(obj.at("accepted"), path + ".accepted");
  a.value = to_money(obj.at("value"), path + ".value");
  a.per_hhp_supply = kwh_array(obj.at("per_hhp_supply"), path + ".per_hhp_supply");
  obj.finish();
  return a;
}

template <typename Id>
json id_money_array(const std::map<Id, Money>& m, const char* id_key, const char* value_key) {
  json out = json::array();
  for (const auto& [id, money] : m) {
    json row;
    row[id_key] = id;
    row[value_key] = format_pence(money);
    out.push_back(row);
  }
  return out;
}

template <typename Id>
std::map<Id, Money> id_money_map(const json& j, const std::string& path, const char* id_key,
                                 const char* value_key) {
  if (!j.is_array()) throw Error("io", path + " must be an array");
  std::map<Id, Money> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string rpath = path + "[" + std::to_string(i) + "]";
    StrictObject row(j[i], rpath);
    const Id id = static_cast<Id>(to_int(row.at(id_key), rpath + "." + id_key));
    out[id] = to_money(row.at(value_key), rpath + "." + value_key);
    row.finish();
  }
  return out;
}

}  // namespace

std::string emit_report(const Settlement& settlement, ReportFormat format) {
  if (format == ReportFormat::kMachineRecord) {
    json root;
    root["schema_version"] = settlement.schema_version;
    root["allocation"] = allocation_to_json(settlement.allocation);
    root["payments"] = id_money_array(settlement.payments, "fleet", "payment");
    root["honored"] = settlement.honored;
    root["defaulted"] = settlement.defaulted;
    root["fines_collected"] = format_pence(settlement.fines_collected);
    root["realized_supply"] = kwh_array_json(settlement.realized_supply);
    root["unmet_demand"] = kwh_array_json(settlement.unmet_demand);
    root["fr_dispatch_kwh"] = settlement.fr_dispatch_kwh;
    root["balancing_purchases"] = kwh_array_json(settlement.balancing_purchases);
    root["curtailed"] = kwh_array_json(settlement.curtailed);
    root["fr_payment_total"] = format_pence(settlement.fr_payment_total);
    root["fr_payments"] = id_money_array(settlement.fr_payments, "ev", "payment");
    root["fleet_realized_utilities"] =
        id_money_array(settlement.fleet_realized_utilities, "fleet", "utility");
    root["platform_realized_utility"] = format_pence(settlement.platform_realized_utility);
    root["carbon_g"] = settlement.carbon_g;
    return root.dump(2) + "\n";
  }

  std::ostringstream out;
  out << "settlement\n";
  out << "  accepted contracts : " << settlement.allocation.accepted.size() << "\n";
  out << "  savings value      : " << format_pence(settlement.allocation.value) << " p\n";
  out << "  honored/defaulted  : " << settlement.honored.size() << "/" << settlement.defaulted.size()
      << "\n";
  out << "  fines collected    : " << format_pence(settlement.fines_collected) << " p\n";
  Money payments_total{0};
  for (const auto& [fleet, payment] : settlement.payments) payments_total += payment;
  out << "  payments total     : " << format_pence(payments_total) << " p\n";
  out << "  fr payments total  : " << format_pence(settlement.fr_payment_total) << " p\n";
  out << "  platform utility   : " << format_pence(settlement.platform_realized_utility) << " p\n";
  out << "  carbon proxy       : " << settlement.carbon_g << " gCO2\n";
  std::int64_t unmet = 0;
  std::int64_t balancing = 0;
  for (Kwh k : settlement.unmet_demand) unmet += k.count();
  for (Kwh k : settlement.balancing_purchases) balancing += k.count();
  out << "  unmet demand       : " << unmet << " kWh\n";
  out << "  balancing imports  : " << balancing << " kWh\n";
  if (!settlement.payments.empty()) {
    out << "  per-fleet payments:\n";
    for (const auto& [fleet, payment] : settlement.payments) {
      out << "    fleet " << fleet << ": " << format_pence(payment) << " p (utility "
          << format_pence(settlement.fleet_realized_utilities.at(fleet)) << " p)\n";
    }
  }
  return out.str();
}

Settlement settlement_from_record(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::exception& e) {
    throw Error("io", std::string("settlement record is not valid JSON: ") + e.what());
  }
  StrictObject obj(root, "settlement");
  Settlement s;
  s.schema_version = static_cast<int>(to_int(obj.at("schema_version"), "schema_version"));
  s.allocation = allocation_from_json(obj.at("allocation"), "allocation");
  s.payments = id_money_map<FleetId>(obj.at("payments"), "payments", "fleet", "payment");
  s.honored = id_array(obj.at("honored"), "honored");
  s.defaulted = id_array(obj.at("defaulted"), "defaulted");
  s.fines_collected = to_money(obj.at("fines_collected"), "fines_collected");
  s.realized_supply = kwh_array(obj.at("realized_supply"), "realized_supply");
  s.unmet_demand = kwh_array(obj.at("unmet_demand"), "unmet_demand");
  const json& dispatch = obj.at("fr_dispatch_kwh");
  if (!dispatch.is_array()) throw Error("io", "fr_dispatch_kwh must be an array");
  for (std::size_t i = 0; i < dispatch.size(); ++i) {
    s.fr_dispatch_kwh.push_back(to_int(dispatch[i], "fr_dispatch_kwh[" + std::to_string(i) + "]"));
  }
  s.balancing_purchases = kwh_array(obj.at("balancing_purchases"), "balancing_purchases");
  s.curtailed = kwh_array(obj.at("curtailed"), "curtailed");
  s.fr_payment_total = to_money(obj.at("fr_payment_total"), "fr_payment_total");
  s.fr_payments = id_money_map<EvId>(obj.at("fr_payments"), "fr_payments", "ev", "payment");
  s.fleet_realized_utilities = id_money_map<FleetId>(obj.at("fleet_realized_utilities"),
                                                     "fleet_realized_utilities", "fleet", "utility");
  s.platform_realized_utility =
      to_money(obj.at("platform_realized_utility"), "platform_realized_utility");
  s.carbon_g = to_int(obj.at("carbon_g"), "carbon_g");
  obj.finish();
  return s;
}

std::string emit_sweep_report(const std::string& axis, const std::vector<SweepRow>& rows,
                              ReportFormat format) {
  if (format == ReportFormat::kMachineRecord) {
    json root;
    root["axis"] = axis;
    json jrows = json::array();
    for (const SweepRow& row : rows) {
      json r;
      r["value"] = row.axis_value;
      std::int64_t unmet = 0;
      std::int64_t balancing = 0;
      for (Kwh k : row.settlement.unmet_demand) unmet += k.count();
      for (Kwh k : row.settlement.balancing_purchases) balancing += k.count();
      Money payments_total{0};
      for (const auto& [fleet, payment] : row.settlement.payments) payments_total += payment;
      r["soc_save"] = format_pence(row.settlement.allocation.value);
      r["payments_total"] = format_pence(payments_total);
      r["fines_collected"] = format_pence(row.settlement.fines_collected);
      r["unmet_kwh"] = unmet;
      r["balancing_kwh"] = balancing;
      r["fr_payment_total"] = format_pence(row.settlement.fr_payment_total);
      r["platform_utility"] = format_pence(row.settlement.platform_realized_utility);
      r["carbon_g"] = row.settlement.carbon_g;
      jrows.push_back(r);
    }
    root["rows"] = jrows;
    return root.dump(2) + "\n";
  }

  std::ostringstream out;
  out << "sweep over " << axis << "\n";
  out << "value soc_save payments fines unmet_kwh balancing_kwh fr_total platform carbon_g\n";
  for (const SweepRow& row : rows) {
    std::int64_t unmet = 0;
    std::int64_t balancing = 0;
    for (Kwh k : row.settlement.unmet_demand) unmet += k.count();
    for (Kwh k : row.settlement.balancing_purchases) balancing += k.count();
    Money payments_total{0};
    for (const auto& [fleet, payment] : row.settlement.payments) payments_total += payment;
    out << row.axis_value << " " << format_pence(row.settlement.allocation.value) << " "
        << format_pence(payments_total) << " " << format_pence(row.settlement.fines_collected) << " "
        << unmet << " " << balancing << " " << format_pence(row.settlement.fr_payment_total) << " "
        << format_pence(row.settlement.platform_realized_utility) << " " << row.settlement.carbon_g
        << "\n";
  }
  return out.str();
}

}  // namespace v2x
