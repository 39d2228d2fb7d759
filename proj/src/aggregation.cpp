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

#include "aggregation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "error.hpp"

namespace atrisk {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kLogSpaceThreshold = 1e-6;

double min_op(double a, double b) { return std::min(a, b); }
double max_op(double a, double b) { return std::max(a, b); }
double sum_op(double a, double b) { return a + b; }

bool needs_log_space(std::span<const double> ps) {
  return std::any_of(ps.begin(), ps.end(),
                     [](double p) { return p < kLogSpaceThreshold; });
}

}  // namespace

double probability_all(std::span<const double> ps) {
  if (needs_log_space(ps)) {
    double log_sum = 0;
    for (double p : ps) {
      if (p <= 0) return 0;
      log_sum += std::log(p);
    }
    return std::exp(log_sum);
  }
  double prod = 1;
  for (double p : ps) prod *= p;
  return prod;
}

double probability_any(std::span<const double> ps) {
  if (needs_log_space(ps)) {
    double log_none = 0;
    for (double p : ps) {
      if (p >= 1) return 1;
      log_none += std::log1p(-p);
    }
    return -std::expm1(log_none);
  }
  double none = 1;
  for (double p : ps) none *= 1 - p;
  return 1 - none;
}

double Combiner::combine(std::span<const double> values) const {
  if (fold) return fold(values);
  double acc = identity;
  for (double v : values) acc = op(acc, v);
  return acc;
}

const Combiner& AttributeDomain::combiner(GateKind gate) const {
  switch (gate) {
    case GateKind::kOr: return or_combine;
    case GateKind::kAnd: return and_combine;
    case GateKind::kSand: return sand_combine;
    case GateKind::kPartition: break;
  }
  throw Error(ErrorCode::kInvalidArgument,
              "partition gates do not occur in expanded trees");
}

AttributeDomain AttributeDomain::min_cost() {
  return {"min_cost", attr::kCost, ValueType::kNumber, std::nullopt,
          {min_op, kInf, {}}, {sum_op, 0, {}}, {sum_op, 0, {}}};
}

AttributeDomain AttributeDomain::min_time(TimeModel model) {
  Combiner and_c = model == TimeModel::kParallel ? Combiner{max_op, 0, {}}
                                                 : Combiner{sum_op, 0, {}};
  return {"min_time", attr::kTime, ValueType::kNumber, std::nullopt,
          {min_op, kInf, {}}, and_c, {sum_op, 0, {}}};
}

AttributeDomain AttributeDomain::success_prob() {
  auto any = [](double a, double b) { return a + b - a * b; };
  auto all = [](double a, double b) { return a * b; };
  return {"success_prob", attr::kProbability, ValueType::kNumber, std::nullopt,
          {any, 0, probability_any},
          {all, 1, probability_all},
          {all, 1, probability_all}};
}

AttributeDomain AttributeDomain::feasible() {
  auto any = [](double a, double b) { return (a != 0 || b != 0) ? 1.0 : 0.0; };
  auto all = [](double a, double b) { return (a != 0 && b != 0) ? 1.0 : 0.0; };
  return {"feasible", attr::kFeasible, ValueType::kBoolean, 1.0,
          {any, 0, {}}, {all, 1, {}}, {all, 1, {}}};
}

AttributeDomain builtin_domain(const std::string& name, TimeModel model) {
  if (name == "min_cost") return AttributeDomain::min_cost();
  if (name == "min_time") return AttributeDomain::min_time(model);
  if (name == "success_prob") return AttributeDomain::success_prob();
  if (name == "feasible") return AttributeDomain::feasible();
  throw Error(ErrorCode::kInvalidArgument, "unknown attribute domain '" + name + "'");
}

std::vector<std::string> builtin_domain_names() {
  return {"feasible", "min_cost", "min_time", "success_prob"};
}

Aggregation aggregate(const ExpandedTree& tree, const AttributeDomain& domain,
                      const LeafValues& values) {
  Aggregation out;
  out.per_node.assign(tree.size(), 0);
  std::vector<std::string> missing;
  for (auto leaf : tree.leaves()) {
    const auto& id = tree.node(leaf).id;
    auto it = values.find(id);
    if (it != values.end())
      out.per_node[leaf] = it->second;
    else if (domain.leaf_default)
      out.per_node[leaf] = *domain.leaf_default;
    else
      missing.push_back(id.str());
  }
  if (!missing.empty())
    throw MissingEstimateError(domain.attribute, std::move(missing));

  // Children always follow their parent in pre-order.
  std::vector<double> buf;
  for (std::size_t i = tree.size(); i-- > 0;) {
    const auto& n = tree.node(i);
    if (n.is_leaf()) continue;
    buf.clear();
    for (auto c : n.children) buf.push_back(out.per_node[c]);
    out.per_node[i] = domain.combiner(*n.gate).combine(buf);
  }
  out.root = out.per_node[0];
  return out;
}

namespace {

using LeafSet = std::vector<std::size_t>;

constexpr std::size_t kOracleMaxLeaves = 20;
constexpr std::size_t kOracleMaxScenarios = 1'000'000;

std::vector<LeafSet> naive_scenarios(const ExpandedTree& t, std::size_t i) {
  const auto& n = t.node(i);
  if (n.is_leaf()) return {{i}};
  if (*n.gate == GateKind::kOr) {
    std::vector<LeafSet> out;
    for (auto c : n.children) {
      auto sub = naive_scenarios(t, c);
      out.insert(out.end(), sub.begin(), sub.end());
      if (out.size() > kOracleMaxScenarios)
        throw Error(ErrorCode::kTooLarge, "too many scenarios for the oracle");
    }
    return out;
  }
  std::vector<LeafSet> acc{{}};
  for (auto c : n.children) {
    auto sub = naive_scenarios(t, c);
    std::vector<LeafSet> next;
    for (const auto& a : acc)
      for (const auto& b : sub) {
        LeafSet s = a;
        s.insert(s.end(), b.begin(), b.end());
        next.push_back(std::move(s));
        if (next.size() > kOracleMaxScenarios)
          throw Error(ErrorCode::kTooLarge, "too many scenarios for the oracle");
      }
    acc = std::move(next);
  }
  return acc;
}

// Time of one scenario: the selected sub-structure folded with the domain's
// AND/SAND combiners.
double scenario_time(const ExpandedTree& t, std::size_t i,
                     const std::vector<char>& in, const std::vector<double>& v,
                     const AttributeDomain& d) {
  const auto& n = t.node(i);
  if (n.is_leaf()) return v[i];
  std::vector<double> kids;
  for (auto c : n.children)
    if (in[c]) kids.push_back(scenario_time(t, c, in, v, d));
  if (*n.gate == GateKind::kOr) return kids.front();
  return d.combiner(*n.gate).combine(kids);
}

double naive_recursive(const ExpandedTree& t, std::size_t i,
                       const std::vector<double>& v, const AttributeDomain& d) {
  const auto& n = t.node(i);
  if (n.is_leaf()) return v[i];
  double acc = d.combiner(*n.gate).identity;
  for (auto c : n.children)
    acc = d.combiner(*n.gate).op(acc, naive_recursive(t, c, v, d));
  return acc;
}

bool close(double a, double b) {
  if (a == b) return true;
  if (std::isinf(a) || std::isinf(b)) return false;
  return std::abs(a - b) <=
         1e-12 * std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace

bool check_against_oracle(const ExpandedTree& tree,
                          const AttributeDomain& domain,
                          const LeafValues& values) {
  if (tree.leaves().size() > kOracleMaxLeaves)
    throw Error(ErrorCode::kTooLarge,
                "oracle supports at most 20 leaves, tree has " +
                    std::to_string(tree.leaves().size()));
  const double got = aggregate(tree, domain, values).root;

  std::vector<double> v(tree.size(), 0);
  for (auto leaf : tree.leaves()) {
    auto it = values.find(tree.node(leaf).id);
    v[leaf] = it != values.end() ? it->second : domain.leaf_default.value_or(0);
  }

  const bool is_min = domain.name == "min_cost" || domain.name == "min_time";
  if (!is_min && domain.name != "feasible")
    return close(got, naive_recursive(tree, 0, v, domain));

  auto scenarios = naive_scenarios(tree, 0);
  if (domain.name == "feasible") {
    bool any = std::any_of(scenarios.begin(), scenarios.end(), [&](const LeafSet& s) {
      return std::all_of(s.begin(), s.end(), [&](std::size_t l) { return v[l] != 0; });
    });
    return (got != 0) == any;
  }

  auto parents = tree.parents();
  double best = kInf;
  for (const auto& s : scenarios) {
    double value;
    if (domain.name == "min_cost") {
      value = 0;
      for (auto l : s) value += v[l];
    } else {
      std::vector<char> in(tree.size(), 0);
      for (auto l : s) {
        for (std::size_t x = l;; x = parents[x]) {
          in[x] = 1;
          if (x == 0) break;
        }
      }
      value = scenario_time(tree, 0, in, v, domain);
    }
    best = std::min(best, value);
  }
  return close(got, best);
}

}  // namespace atrisk
