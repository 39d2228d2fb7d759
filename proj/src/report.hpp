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

/// @file report.hpp
/// Analysis requests and their JSON reports, diff tables and DOT export.
/// Everything here is deterministic for fixed inputs except the report
/// timestamp, which honours SOURCE_DATE_EPOCH.

#ifndef ATRISK_REPORT_HPP_
#define ATRISK_REPORT_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "estimation.hpp"
#include "expansion.hpp"

namespace atrisk {

struct AnalysisRequest {
  std::string root;
  DeploymentParams params;
  /// Contents of an estimate file.
  std::string estimates;
  std::optional<std::string> profile;
  /// Contents of overlay files, applied in order.
  std::vector<std::string> overlays;
  /// aggregate:<domain>, cheapest, most-likely, budget[:<amount>], pareto,
  /// payoff[:<gain>], montecarlo:<domain>:<trials>.
  std::vector<std::string> queries;
  std::uint64_t seed = 0;
  /// Worker threads for Monte Carlo. Not part of the report.
  unsigned threads = 1;
  TimeModel time_model = TimeModel::kParallel;
  std::size_t cap = kDefaultScenarioCap;
  /// Overrides the clock and SOURCE_DATE_EPOCH.
  std::optional<std::string> timestamp;

  /// Keys: root, params, payoff, estimates, profile, overlays, queries,
  /// seed, threads, time_model ("parallel" | "lone-attacker"), cap,
  /// timestamp. Throws Error(kInvalidArgument).
  static AnalysisRequest from_json(const nlohmann::json& j);
};

struct AnalysisOutcome {
  nlohmann::json report;
  /// False if any query failed.
  bool ok = true;
};

/// Runs expansion, optional pruning and every query. Errors raised before
/// queries start (parse, expansion) propagate; per-query errors are
/// recorded in the report.
AnalysisOutcome analyze(const TreeLibrary& lib, const AnalysisRequest& req);

struct DiffRequest {
  std::string root;
  DeploymentParams params;
  std::string estimates;
  std::vector<std::string> overlays;
  std::optional<double> gain;
  TimeModel time_model = TimeModel::kParallel;
  std::optional<std::string> timestamp;

  /// Keys: root, params, payoff, estimates, overlays, gain, time_model,
  /// timestamp.
  static DiffRequest from_json(const nlohmann::json& j);
};

/// {"metadata": ..., "rows": [...]} plus a rendered text table under
/// "text".
nlohmann::json diff_report(const TreeLibrary& lib, const DiffRequest& req);

std::string diff_table_text(const std::vector<DiffRow>& rows);

/// Graphviz rendering: OR diamond, AND box, SAND box with numbered edges,
/// leaves as ellipses. Node names follow pre-order. nullopt renders a
/// single "infeasible" node.
std::string to_dot(const std::optional<ExpandedTree>& tree,
                   const std::string& name);

nlohmann::json scenario_json(const ExpandedTree& tree, const AttackScenario& s);

/// Two-space indented, sorted keys, trailing newline. Non-finite numbers
/// are written as the strings "inf", "-inf" or "nan".
std::string dump_json(const nlohmann::json& j);

/// ISO-8601 UTC from SOURCE_DATE_EPOCH, else the current time.
std::string report_timestamp();

}  // namespace atrisk

#endif  // ATRISK_REPORT_HPP_
