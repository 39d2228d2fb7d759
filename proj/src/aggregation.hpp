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

/// @file aggregation.hpp
/// Bottom-up attribute computation over expanded trees.

#ifndef ATRISK_AGGREGATION_HPP_
#define ATRISK_AGGREGATION_HPP_

#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "expansion.hpp"

namespace atrisk {

/// Leaf attribute names used by estimates and the built-in domains.
namespace attr {
inline constexpr const char* kCost = "cost";
inline constexpr const char* kTime = "time";
inline constexpr const char* kProbability = "probability";
inline constexpr const char* kFeasible = "feasible";
}  // namespace attr

using LeafValues = std::map<NodeId, double>;
/// attribute name -> per-leaf values
using AttributeValues = std::map<std::string, LeafValues>;

/// Associative operator with identity. `fold`, when set, replaces the
/// left fold for whole child lists (used for log-space products).
struct Combiner {
  std::function<double(double, double)> op;
  double identity = 0;
  std::function<double(std::span<const double>)> fold;

  double combine(std::span<const double> values) const;
};

enum class ValueType { kNumber, kBoolean };

/// How AND children combine in time: parallel teams (max) or a lone
/// attacker working through them one after another (sum).
enum class TimeModel { kParallel, kLoneAttacker };

struct AttributeDomain {
  std::string name;
  /// Leaf attribute consumed by this domain, e.g. "cost".
  std::string attribute;
  ValueType value_type = ValueType::kNumber;
  std::optional<double> leaf_default;
  Combiner or_combine;
  Combiner and_combine;
  Combiner sand_combine;

  const Combiner& combiner(GateKind gate) const;

  static AttributeDomain min_cost();
  static AttributeDomain min_time(TimeModel model = TimeModel::kParallel);
  static AttributeDomain success_prob();
  static AttributeDomain feasible();
};

/// Looks up "min_cost", "min_time", "success_prob" or "feasible". Throws
/// Error(kInvalidArgument) for anything else.
AttributeDomain builtin_domain(const std::string& name,
                               TimeModel model = TimeModel::kParallel);

std::vector<std::string> builtin_domain_names();

struct Aggregation {
  double root = 0;
  /// Value for every node, indexed like ExpandedTree::nodes().
  std::vector<double> per_node;
};

/// Folds leaf values up to the root. Throws MissingEstimateError listing
/// every leaf without a value when the domain has no default.
Aggregation aggregate(const ExpandedTree& tree, const AttributeDomain& domain,
                      const LeafValues& values);

/// Probability helpers shared with scenario evaluation. Both switch to log
/// space when any input is below 1e-6.
double probability_all(std::span<const double> ps);
double probability_any(std::span<const double> ps);

/// Test harness: recomputes the root value by exhaustive scenario
/// enumeration (cost, time, feasibility) or naive recursion (probability
/// and custom domains) and compares with aggregate(). Throws
/// Error(kTooLarge) for trees with more than 20 leaves or 10^6 scenarios.
bool check_against_oracle(const ExpandedTree& tree,
                          const AttributeDomain& domain,
                          const LeafValues& values);

}  // namespace atrisk

#endif  // ATRISK_AGGREGATION_HPP_
