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

/// @file scenarios.hpp
/// Attack scenarios: minimal leaf selections taking one child per OR and
/// every child per AND/SAND, and the queries built on them.
///
/// Ties between scenarios are broken by leaf set: of two sets, the one that
/// contains the smallest NodeId of their symmetric difference comes first.
/// This order composes over disjoint sub-trees, so searches can decide ties
/// locally and still return the globally first scenario.

#ifndef ATRISK_SCENARIOS_HPP_
#define ATRISK_SCENARIOS_HPP_

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "aggregation.hpp"

namespace atrisk {

using ScenarioCount = boost::multiprecision::cpp_int;

inline constexpr std::size_t kDefaultScenarioCap = 100'000;

struct AttackScenario {
  /// Leaves sorted by NodeId.
  std::vector<NodeId> leaves;
  /// Matching node indices in the expanded tree.
  std::vector<std::size_t> leaf_nodes;
  double cost = 0;
  /// Present when time estimates cover every leaf of the scenario.
  std::optional<double> time;
  double probability = 0;
  /// Generating pairs (i, j) of the SAND order: leaves[i] happens before
  /// leaves[j]. Pairs link consecutive SAND children; the order is their
  /// transitive closure.
  std::vector<std::pair<std::size_t, std::size_t>> ordering;
};

struct ScenarioOptions {
  TimeModel time_model = TimeModel::kParallel;
  std::size_t cap = kDefaultScenarioCap;
};

/// Number of scenarios by the product rule (sum over OR, product over
/// AND/SAND).
ScenarioCount count_scenarios(const ExpandedTree& tree);

/// Every scenario, in generation order. Throws ScenarioExplosionError with
/// the exact count when it exceeds `opts.cap`.
std::vector<AttackScenario> enumerate_scenarios(const ExpandedTree& tree,
                                                const AttributeValues& est,
                                                const ScenarioOptions& opts = {});

/// Scenario with minimum total cost; its cost equals the min_cost aggregate.
AttackScenario cheapest_attack(const ExpandedTree& tree,
                               const AttributeValues& est,
                               const ScenarioOptions& opts = {});

/// Scenario with maximum product of leaf probabilities, searched in log
/// space.
AttackScenario most_likely_attack(const ExpandedTree& tree,
                                  const AttributeValues& est,
                                  const ScenarioOptions& opts = {});

/// All scenarios with cost <= budget, by ascending cost, then descending
/// probability. Exact branch and bound with min-cost lower bounds.
std::vector<AttackScenario> attacks_within_budget(
    const ExpandedTree& tree, const AttributeValues& est, double budget,
    const ScenarioOptions& opts = {});

/// Non-dominated scenarios under (minimise cost, maximise probability),
/// sorted by cost.
std::vector<AttackScenario> pareto_frontier(const ExpandedTree& tree,
                                            const AttributeValues& est,
                                            const ScenarioOptions& opts = {});

/// probability * gain - cost.
double expected_payoff(const AttackScenario& s, double gain);

/// Total order used for ties; true if `a` comes before `b`.
bool leaf_set_before(const std::vector<NodeId>& a, const std::vector<NodeId>& b);

/// Builds the scenario for an explicit leaf selection, computing its
/// metrics by folding over the selected structure. `leaf_nodes` must be a
/// valid scenario of `tree`.
AttackScenario evaluate_selection(const ExpandedTree& tree,
                                  const AttributeValues& est,
                                  std::vector<std::size_t> leaf_nodes,
                                  TimeModel time_model = TimeModel::kParallel);

}  // namespace atrisk

#endif  // ATRISK_SCENARIOS_HPP_
