// Copyright 2026 The atrisk Authors. All Rights Reserved.
//
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

#include "report.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <iomanip>
#include <sstream>

#include "error.hpp"
#include "version.hpp"

namespace atrisk {

using nlohmann::json;

namespace {

json num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

json opt_num(const std::optional<double>& v) {
  return v ? num(*v) : json(nullptr);
}

json error_json(const Error& e) {
  json j = {{"code", error_code_name(e.code())}, {"message", e.what()}};
  if (auto* m = dynamic_cast<const MissingEstimateError*>(&e)) {
    j["attribute"] = m->attribute();
    j["leaves"] = m->leaves();
  }
  if (auto* x = dynamic_cast<const ScenarioExplosionError*>(&e)) {
    j["count"] = x->count();
    j["cap"] = x->cap();
  }
  return j;
}

const char* time_model_name(TimeModel m) {
  return m == TimeModel::kParallel ? "parallel" : "lone-attacker";
}

TimeModel parse_time_model(const std::string& s) {
  if (s == "parallel") return TimeModel::kParallel;
  if (s == "lone-attacker") return TimeModel::kLoneAttacker;
  throw Error(ErrorCode::kInvalidArgument,
              "time_model must be 'parallel' or 'lone-attacker', got '" + s +
                  "'");
}

double parse_amount(const std::string& s, const std::string& query) {
  double v = 0;
  auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || r.ec != std::errc() || r.ptr != s.data() + s.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                "bad number '" + s + "' in query '" + query + "'");
  }
  return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    auto p = s.find(sep, start);
    out.push_back(s.substr(start, p == std::string::npos ? p : p - start));
    if (p == std::string::npos) return out;
    start = p + 1;
  }
}

DeploymentParams params_from_json(const json& j) {
  DeploymentParams p;
  if (j.contains("params")) {
    for (const auto& [k, v] : j.at("params").items()) {
      if (!v.is_number_integer()) {
        throw Error(ErrorCode::kInvalidArgument,
                    "parameter '" + k + "' must be an integer");
      }
      p.bindings[k] = v.get<std::int64_t>();
    }
  }
  if (j.contains("payoff")) {
    for (const auto& [k, v] : j.at("payoff").items()) {
      p.payoff[k] = v.get<double>();
    }
  }
  return p;
}

json params_json(const DeploymentParams& p) {
  json j = json::object();
  for (const auto& [k, v] : p.bindings) j[k] = v;
  return j;
}

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
  return j.contains(key) ? j.at(key).get<T>() : fallback;
}

json metadata(const TreeLibrary& lib, const std::string& root,
              const DeploymentParams& params, TimeModel tm,
              const std::optional<std::string>& timestamp) {
  json m;
  m["tool"] = kToolName;
  m["tool_version"] = kToolVersion;
  m["corpus_version"] = lib.meta("version").value_or("");
  m["protocol_commit"] = lib.meta("protocol_commit").value_or("");
  m["root"] = root;
  m["params"] = params_json(params);
  m["time_model"] = time_model_name(tm);
  m["timestamp"] = timestamp ? *timestamp : report_timestamp();
  return m;
}

json monte_carlo_json(const MonteCarloSummary& s) {
  json ex = json::array();
  for (auto [x, p] : s.exceedance) ex.push_back({num(x), num(p)});
  return {{"domain", s.domain}, {"trials", s.trials},   {"seed", s.seed},
          {"generator", s.generator},                   {"mean", num(s.mean)},
          {"sd", num(s.sd)},     {"p5", num(s.p5)},     {"p50", num(s.p50)},
          {"p95", num(s.p95)},   {"min", num(s.min)},   {"max", num(s.max)},
          {"exceedance", ex}};
}

json scenario_list(const ExpandedTree& t, const std::vector<AttackScenario>& v) {
  json a = json::array();
  for (const auto& s : v) a.push_back(scenario_json(t, s));
  return a;
}

}  // namespace

std::string report_timestamp() {
  std::time_t t = 0;
  const char* sde = std::getenv("SOURCE_DATE_EPOCH");
  if (sde && *sde) {
    t = static_cast<std::time_t>(std::strtoll(sde, nullptr, 10));
  } else {
    t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  }
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

namespace {

// nlohmann writes non-finite floats as null, which loses information.
json finite_only(const json& j) {
  if (j.is_number_float()) return num(j.get<double>());
  if (j.is_array() || j.is_object()) {
    json out = j;
    for (auto& v : out) v = finite_only(v);
    return out;
  }
  return j;
}

}  // namespace

std::string dump_json(const json& j) { return finite_only(j).dump(2) + "\n"; }

json scenario_json(const ExpandedTree& tree, const AttackScenario& s) {
  json leaves = json::array();
  for (std::size_t k = 0; k < s.leaves.size(); ++k) {
    leaves.push_back({{"id", s.leaves[k].str()},
                      {"label", tree.node(s.leaf_nodes[k]).label}});
  }
  json order = json::array();
  for (auto [a, b] : s.ordering) order.push_back({a, b});
  return {{"leaves", leaves},
          {"cost", num(s.cost)},
          {"time", opt_num(s.time)},
          {"probability", num(s.probability)},
          {"ordering", order}};
}

AnalysisRequest AnalysisRequest::from_json(const json& j) {
  try {
    AnalysisRequest r;
    r.root = j.at("root").get<std::string>();
    r.params = params_from_json(j);
    r.estimates = get_or<std::string>(j, "estimates", "");
    if (j.contains("profile") && !j.at("profile").is_null()) {
      r.profile = j.at("profile").get<std::string>();
    }
    r.overlays = get_or<std::vector<std::string>>(j, "overlays", {});
    r.queries = get_or<std::vector<std::string>>(j, "queries", {});
    r.seed = get_or<std::uint64_t>(j, "seed", 0);
    r.threads = get_or<unsigned>(j, "threads", 1);
    r.time_model = parse_time_model(get_or<std::string>(j, "time_model", "parallel"));
    r.cap = get_or<std::size_t>(j, "cap", kDefaultScenarioCap);
    if (j.contains("timestamp") && !j.at("timestamp").is_null()) {
      r.timestamp = j.at("timestamp").get<std::string>();
    }
    return r;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kInvalidArgument,
                std::string("bad analysis request: ") + e.what());
  }
}

AnalysisOutcome analyze(const TreeLibrary& lib, const AnalysisRequest& req) {
  ExpandedTree full = expand(lib, req.root, req.params);
  std::vector<std::string> warnings;
  EstimateMap est = EstimateTable::parse(req.estimates).resolve(full, &warnings);

  json meta = metadata(lib, req.root, req.params, req.time_model, req.timestamp);
  meta["seed"] = req.seed;
  meta["generator"] = kGeneratorName;

  std::optional<ExpandedTree> tree = full;
  std::optional<AttackerProfile> profile;
  if (req.profile) {
    profile = AttackerProfile::parse(*req.profile);
    tree = prune(full, *profile, &warnings);
    est = apply_profile(est, full, *profile);
    meta["profile"] = profile->name;
  }
  json overlay_names = json::array();
  for (const auto& text : req.overlays) {
    auto o = CountermeasureOverlay::parse(text);
    est = apply_overlay(est, full, o);
    overlay_names.push_back(o.name);
  }
  meta["overlays"] = overlay_names;

  AttributeValues values = nominal_values(est);
  ScenarioOptions so;
  so.time_model = req.time_model;
  so.cap = req.cap;

  AnalysisOutcome out;
  json results = json::array();
  for (const std::string& q : req.queries) {
    json r = {{"query", q}};
    try {
      auto parts = split(q, ':');
      const std::string& kind = parts[0];
      auto want = [&](std::size_t n) {
        if (parts.size() != n) {
          throw Error(ErrorCode::kInvalidArgument, "malformed query '" + q + "'");
        }
      };
      if (kind == "aggregate") {
        want(2);
        AttributeDomain d = builtin_domain(parts[1], req.time_model);
        r["value"] = num(tree ? aggregate(*tree, d, values[d.attribute]).root
                              : d.or_combine.identity);
      } else if (kind == "cheapest" || kind == "most-likely") {
        want(1);
        if (!tree) {
          r["scenario"] = nullptr;
        } else {
          auto s = kind == "cheapest" ? cheapest_attack(*tree, values, so)
                                      : most_likely_attack(*tree, values, so);
          r["scenario"] = scenario_json(*tree, s);
        }
      } else if (kind == "budget") {
        double budget = 0;
        if (parts.size() == 1 && profile && profile->budget) {
          budget = *profile->budget;
        } else {
          want(2);
          budget = parse_amount(parts[1], q);
        }
        r["budget"] = num(budget);
        std::vector<AttackScenario> found;
        if (tree) found = attacks_within_budget(*tree, values, budget, so);
        r["count"] = found.size();
        r["scenarios"] = tree ? scenario_list(*tree, found) : json::array();
      } else if (kind == "pareto") {
        want(1);
        r["frontier"] = tree ? scenario_list(*tree, pareto_frontier(*tree, values, so))
                             : json::array();
      } else if (kind == "payoff") {
        double gain = 0;
        if (parts.size() == 1 && req.params.payoff.count(req.root)) {
          gain = req.params.payoff.at(req.root);
        } else {
          want(2);
          gain = parse_amount(parts[1], q);
        }
        r["gain"] = num(gain);
        if (!tree) {
          r["best"] = nullptr;
          r["scenario"] = nullptr;
        } else {
          auto c = cheapest_attack(*tree, values, so);
          auto m = most_likely_attack(*tree, values, so);
          double pc = expected_payoff(c, gain), pm = expected_payoff(m, gain);
          r["cheapest"] = num(pc);
          r["most_likely"] = num(pm);
          r["best"] = num(std::max(pc, pm));
          r["scenario"] = scenario_json(*tree, pm > pc ? m : c);
        }
      } else if (kind == "montecarlo") {
        want(3);
        AttributeDomain d = builtin_domain(parts[1], req.time_model);
        double trials_d = parse_amount(parts[2], q);
        if (trials_d < 1 || trials_d != std::floor(trials_d)) {
          throw Error(ErrorCode::kInvalidArgument,
                      "trial count must be a positive integer in '" + q + "'");
        }
        auto trials = static_cast<std::size_t>(trials_d);
        if (tree) {
          r["summary"] = monte_carlo_json(
              monte_carlo(*tree, est, d, trials, req.seed, req.threads));
        } else {
          r["summary"] = nullptr;
        }
      } else {
        throw Error(ErrorCode::kInvalidArgument, "unknown query '" + q + "'");
      }
      r["status"] = "ok";
    } catch (const Error& e) {
      r["status"] = "error";
      r["error"] = error_json(e);
      out.ok = false;
    }
    results.push_back(std::move(r));
  }

  json diags = json::array();
  for (const auto& w : warnings) {
    diags.push_back({{"severity", "warning"}, {"message", w}});
  }
  out.report = {{"metadata", meta},
                {"infeasible", !tree.has_value()},
                {"results", results},
                {"diagnostics", diags}};
  return out;
}

DiffRequest DiffRequest::from_json(const json& j) {
  try {
    DiffRequest r;
    r.root = j.at("root").get<std::string>();
    r.params = params_from_json(j);
    r.estimates = get_or<std::string>(j, "estimates", "");
    r.overlays = get_or<std::vector<std::string>>(j, "overlays", {});
    if (j.contains("gain") && !j.at("gain").is_null()) {
      r.gain = j.at("gain").get<double>();
    }
    r.time_model = parse_time_model(get_or<std::string>(j, "time_model", "parallel"));
    if (j.contains("timestamp") && !j.at("timestamp").is_null()) {
      r.timestamp = j.at("timestamp").get<std::string>();
    }
    return r;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kInvalidArgument,
                std::string("bad diff request: ") + e.what());
  }
}

json diff_report(const TreeLibrary& lib, const DiffRequest& req) {
  ExpandedTree tree = expand(lib, req.root, req.params);
  std::vector<std::string> warnings;
  EstimateMap est = EstimateTable::parse(req.estimates).resolve(tree, &warnings);
  std::vector<CountermeasureOverlay> overlays;
  for (const auto& text : req.overlays) {
    overlays.push_back(CountermeasureOverlay::parse(text));
  }
  DiffOptions opts;
  opts.time_model = req.time_model;
  opts.gain = req.gain;
  if (!opts.gain && req.params.payoff.count(req.root)) {
    opts.gain = req.params.payoff.at(req.root);
  }
  auto rows = diff_analysis(tree, est, overlays, opts);

  json jrows = json::array();
  for (const auto& r : rows) {
    jrows.push_back({{"name", r.name},
                     {"min_cost", num(r.min_cost)},
                     {"min_time", opt_num(r.min_time)},
                     {"success_prob", num(r.success_prob)},
                     {"cheapest", scenario_json(tree, r.cheapest)},
                     {"most_likely", scenario_json(tree, r.most_likely)},
                     {"expected_payoff", opt_num(r.expected_payoff)}});
  }
  json meta = metadata(lib, req.root, req.params, req.time_model, req.timestamp);
  meta["gain"] = opt_num(opts.gain);
  json diags = json::array();
  for (const auto& w : warnings) {
    diags.push_back({{"severity", "warning"}, {"message", w}});
  }
  return {{"metadata", meta},
          {"rows", jrows},
          {"diagnostics", diags},
          {"text", diff_table_text(rows)}};
}

std::string diff_table_text(const std::vector<DiffRow>& rows) {
  auto cell = [](const std::optional<double>& v) -> std::string {
    if (!v) return "-";
    if (std::isinf(*v)) return *v > 0 ? "inf" : "-inf";
    std::ostringstream os;
    os << std::setprecision(6) << *v;
    return os.str();
  };
  std::vector<std::vector<std::string>> cells = {
      {"row", "min_cost", "min_time", "success_prob", "cheapest_cost",
       "most_likely_p", "payoff"}};
  for (const auto& r : rows) {
    cells.push_back({r.name, cell(r.min_cost), cell(r.min_time),
                     cell(r.success_prob), cell(r.cheapest.cost),
                     cell(r.most_likely.probability), cell(r.expected_payoff)});
  }
  std::vector<std::size_t> width(cells[0].size(), 0);
  for (const auto& row : cells) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      width[c] = std::max(width[c], row[c].size());
    }
  }
  std::string out;
  for (const auto& row : cells) {
    std::string line;
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) line += "  ";
      std::string pad(width[c] - row[c].size(), ' ');
      line += c == 0 ? row[c] + pad : pad + row[c];
    }
    while (!line.empty() && line.back() == ' ') line.pop_back();
    out += line + "\n";
  }
  return out;
}

namespace {

std::string dot_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    if (c == '\n') {
      out += "\\n";
      continue;
    }
    out += c;
  }
  return out;
}

}  // namespace

std::string to_dot(const std::optional<ExpandedTree>& tree,
                   const std::string& name) {
  std::string out = "digraph \"" + dot_escape(name) + "\" {\n";
  out += "  node [fontname=\"Helvetica\"];\n";
  if (!tree) {
    out += "  n0 [label=\"infeasible\", shape=plaintext];\n}\n";
    return out;
  }
  for (std::size_t i = 0; i < tree->size(); ++i) {
    const ExpandedNode& n = tree->node(i);
    const char* shape = "ellipse";
    std::string gate;
    if (n.gate) {
      shape = *n.gate == GateKind::kOr ? "diamond" : "box";
      gate = gate_name(*n.gate);
      for (char& c : gate) c = static_cast<char>(std::toupper(c));
      gate += "\\n";
    }
    out += "  n" + std::to_string(i) + " [label=\"" + gate + dot_escape(n.label) +
           "\", shape=" + shape + ", tooltip=\"" + dot_escape(n.id.str()) +
           "\"];\n";
  }
  for (std::size_t i = 0; i < tree->size(); ++i) {
    const ExpandedNode& n = tree->node(i);
    for (std::size_t k = 0; k < n.children.size(); ++k) {
      out += "  n" + std::to_string(i) + " -> n" +
             std::to_string(n.children[k]);
      if (n.gate == GateKind::kSand) {
        out += " [label=\"" + std::to_string(k + 1) + "\"]";
      }
      out += ";\n";
    }
  }
  return out + "}\n";
}

}  // namespace atrisk
