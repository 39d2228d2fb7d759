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

#include "scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "error.hpp"

namespace atrisk {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

using Ranks = std::vector<std::size_t>;

// Same rule as leaf_set_before, on sorted rank vectors.
bool ranks_before(const Ranks& a, const Ranks& b) {
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] == b[j]) {
      ++i;
      ++j;
    } else {
      return a[i] < b[j];
    }
  }
  return i < a.size();
}

Ranks merge_ranks(const Ranks& a, const Ranks& b) {
  Ranks out;
  out.reserve(a.size() + b.size());
  std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

std::vector<double> leaf_column(const ExpandedTree& tree,
                                const AttributeValues& est,
                                const std::string& attribute, bool required) {
  std::vector<double> col(tree.size(), std::numeric_limits<double>::quiet_NaN());
  auto it = est.find(attribute);
  std::vector<std::string> missing;
  for (auto leaf : tree.leaves()) {
    const auto& id = tree.node(leaf).id;
    if (it != est.end()) {
      auto v = it->second.find(id);
      if (v != it->second.end()) {
        col[leaf] = v->second;
        continue;
      }
    }
    missing.push_back(id.str());
  }
  if (required && !missing.empty())
    throw MissingEstimateError(attribute, std::move(missing));
  return col;
}

// Rank of every leaf in NodeId order.
std::vector<std::size_t> leaf_ranks(const ExpandedTree& tree) {
  std::vector<std::size_t> leaves = tree.leaves();
  std::sort(leaves.begin(), leaves.end(), [&](std::size_t a, std::size_t b) {
    return tree.node(a).id < tree.node(b).id;
  });
  std::vector<std::size_t> rank(tree.size(), 0);
  for (std::size_t r = 0; r < leaves.size(); ++r) rank[leaves[r]] = r;
  return rank;
}

struct Evaluator {
  const ExpandedTree& tree;
  const std::vector<double>& cost;
  const std::vector<double>& prob;
  const std::vector<double>& time;
  TimeModel model;
  std::vector<char> in;
  std::vector<std::pair<std::size_t, std::size_t>> order_nodes;
  bool time_ok = true;

  struct Result {
    double cost = 0;
    double time = 0;
    std::vector<std::size_t> leaves;
  };

  Result run(std::size_t i) {
    const auto& n = tree.node(i);
    if (n.is_leaf()) {
      if (std::isnan(time[i])) time_ok = false;
      return {cost[i], time[i], {i}};
    }
    std::vector<Result> kids;
    for (auto c : n.children)
      if (in[c]) kids.push_back(run(c));
    if (*n.gate == GateKind::kOr) return std::move(kids.front());

    Result out;
    double t = 0;
    for (std::size_t k = 0; k < kids.size(); ++k) {
      out.cost += kids[k].cost;
      if (*n.gate == GateKind::kSand || model == TimeModel::kLoneAttacker)
        t += kids[k].time;
      else
        t = std::max(t, kids[k].time);
      if (*n.gate == GateKind::kSand && k + 1 < kids.size())
        for (auto a : kids[k].leaves)
          for (auto b : kids[k + 1].leaves) order_nodes.emplace_back(a, b);
      out.leaves.insert(out.leaves.end(), kids[k].leaves.begin(),
                        kids[k].leaves.end());
    }
    out.time = t;
    return out;
  }
};

class Engine {
 public:
  Engine(const ExpandedTree& tree, const AttributeValues& est,
         const ScenarioOptions& opts)
      : tree_(tree),
        opts_(opts),
        cost_(leaf_column(tree, est, attr::kCost, true)),
        prob_(leaf_column(tree, est, attr::kProbability, true)),
        time_(leaf_column(tree, est, attr::kTime, false)),
        rank_(leaf_ranks(tree)) {}

  AttackScenario evaluate(std::vector<std::size_t> leaf_nodes) const {
    Evaluator ev{tree_, cost_, prob_, time_, opts_.time_model,
                 std::vector<char>(tree_.size(), 0), {}, true};
    auto parents = parents_();
    for (auto l : leaf_nodes)
      for (std::size_t x = l;; x = parents[x]) {
        if (ev.in[x]) break;
        ev.in[x] = 1;
        if (x == 0) break;
      }
    auto res = ev.run(0);

    AttackScenario s;
    std::vector<std::size_t> nodes = res.leaves;  // pre-order
    std::vector<double> ps;
    for (auto l : nodes) ps.push_back(prob_[l]);
    s.probability = probability_all(ps);
    s.cost = res.cost;
    if (ev.time_ok) s.time = res.time;

    std::sort(nodes.begin(), nodes.end(), [&](std::size_t a, std::size_t b) {
      return rank_[a] < rank_[b];
    });
    std::vector<std::size_t> pos(tree_.size(), 0);
    for (std::size_t k = 0; k < nodes.size(); ++k) {
      pos[nodes[k]] = k;
      s.leaves.push_back(tree_.node(nodes[k]).id);
    }
    s.leaf_nodes = std::move(nodes);
    for (auto [a, b] : ev.order_nodes) s.ordering.emplace_back(pos[a], pos[b]);
    std::sort(s.ordering.begin(), s.ordering.end());
    return s;
  }

  AttackScenario cheapest() const {
    std::vector<double> best(tree_.size(), 0);
    std::vector<Ranks> sets(tree_.size());
    for (std::size_t i = tree_.size(); i-- > 0;) {
      const auto& n = tree_.node(i);
      if (n.is_leaf()) {
        best[i] = cost_[i];
        sets[i] = {rank_[i]};
        continue;
      }
      if (*n.gate == GateKind::kOr) {
        std::size_t pick = n.children.front();
        for (auto c : n.children) {
          if (best[c] < best[pick] ||
              (best[c] == best[pick] && ranks_before(sets[c], sets[pick])))
            pick = c;
        }
        best[i] = best[pick];
        sets[i] = std::move(sets[pick]);
      } else {
        double sum = 0;
        Ranks acc;
        for (auto c : n.children) {
          sum += best[c];
          acc = merge_ranks(acc, sets[c]);
        }
        best[i] = sum;
        sets[i] = std::move(acc);
      }
      for (auto c : n.children) Ranks().swap(sets[c]);
    }
    return evaluate(from_ranks(sets[0]));
  }

  AttackScenario most_likely() const {
    std::vector<double> score(tree_.size(), 0);
    std::vector<Ranks> sets(tree_.size());
    for (std::size_t i = tree_.size(); i-- > 0;) {
      const auto& n = tree_.node(i);
      if (n.is_leaf()) {
        score[i] = prob_[i] > 0 ? std::log(prob_[i]) : -kInf;
        sets[i] = {rank_[i]};
        continue;
      }
      if (*n.gate == GateKind::kOr) {
        std::size_t pick = n.children.front();
        for (auto c : n.children) {
          if (score[c] > score[pick] ||
              (score[c] == score[pick] && ranks_before(sets[c], sets[pick])))
            pick = c;
        }
        score[i] = score[pick];
        sets[i] = std::move(sets[pick]);
      } else {
        double sum = 0;
        Ranks acc;
        for (auto c : n.children) {
          sum += score[c];
          acc = merge_ranks(acc, sets[c]);
        }
        score[i] = sum;
        sets[i] = std::move(acc);
      }
      for (auto c : n.children) Ranks().swap(sets[c]);
    }
    return evaluate(from_ranks(sets[0]));
  }

  std::vector<AttackScenario> enumerate() const {
    ScenarioCount count = count_scenarios(tree_);
    if (count > opts_.cap)
      throw ScenarioExplosionError(count.str(), opts_.cap);
    std::vector<AttackScenario> out;
    for (auto& sel : all_selections(0)) out.push_back(evaluate(std::move(sel)));
    return out;
  }

  std::vector<AttackScenario> within_budget(double budget) const {
    if (std::isnan(budget))
      throw Error(ErrorCode::kInvalidArgument, "budget is not a number");
    lower_bounds_ = min_costs();
    std::vector<AttackScenario> out;
    if (lower_bounds_[0] > slack(budget)) return out;
    for (auto& p : bounded(0, budget)) {
      auto s = evaluate(std::move(p.leaves));
      if (s.cost <= budget) out.push_back(std::move(s));
    }
    std::sort(out.begin(), out.end(), [](const AttackScenario& a,
                                          const AttackScenario& b) {
      if (a.cost != b.cost) return a.cost < b.cost;
      if (a.probability != b.probability) return a.probability > b.probability;
      return leaf_set_before(a.leaves, b.leaves);
    });
    return out;
  }

 private:
  struct Partial {
    double cost = 0;
    std::vector<std::size_t> leaves;
  };

  std::vector<std::size_t> parents_() const { return tree_.parents(); }

  std::vector<std::size_t> from_ranks(const Ranks& ranks) const {
    std::vector<std::size_t> by_rank(tree_.leaves().size());
    for (auto l : tree_.leaves()) by_rank[rank_[l]] = l;
    std::vector<std::size_t> out;
    for (auto r : ranks) out.push_back(by_rank[r]);
    std::sort(out.begin(), out.end());
    return out;
  }

  std::vector<std::vector<std::size_t>> all_selections(std::size_t i) const {
    const auto& n = tree_.node(i);
    if (n.is_leaf()) return {{i}};
    std::vector<std::vector<std::size_t>> out;
    if (*n.gate == GateKind::kOr) {
      for (auto c : n.children) {
        auto sub = all_selections(c);
        std::move(sub.begin(), sub.end(), std::back_inserter(out));
      }
      return out;
    }
    out.push_back({});
    for (auto c : n.children) {
      auto sub = all_selections(c);
      std::vector<std::vector<std::size_t>> next;
      next.reserve(out.size() * sub.size());
      for (const auto& a : out)
        for (const auto& b : sub) {
          auto s = a;
          s.insert(s.end(), b.begin(), b.end());
          next.push_back(std::move(s));
        }
      out = std::move(next);
    }
    return out;
  }

  std::vector<double> min_costs() const {
    std::vector<double> lb(tree_.size(), 0);
    for (std::size_t i = tree_.size(); i-- > 0;) {
      const auto& n = tree_.node(i);
      if (n.is_leaf()) {
        lb[i] = cost_[i];
      } else if (*n.gate == GateKind::kOr) {
        lb[i] = kInf;
        for (auto c : n.children) lb[i] = std::min(lb[i], lb[c]);
      } else {
        lb[i] = 0;
        for (auto c : n.children) lb[i] += lb[c];
      }
    }
    return lb;
  }

  // Pruning keeps a relative slack so rounding in partial sums never drops
  // a scenario; the exact filter runs on evaluated costs.
  static double slack(double budget) {
    return budget + 1e-9 * std::max(1.0, std::abs(budget));
  }

  void check_cap(std::size_t n) const {
    if (n > opts_.cap)
      throw ScenarioExplosionError("more than " + std::to_string(opts_.cap),
                                   opts_.cap);
  }

  std::vector<Partial> bounded(std::size_t i, double budget) const {
    const auto& n = tree_.node(i);
    const double limit = slack(budget);
    if (n.is_leaf()) {
      if (cost_[i] <= limit) return {{cost_[i], {i}}};
      return {};
    }
    std::vector<Partial> out;
    if (*n.gate == GateKind::kOr) {
      for (auto c : n.children) {
        if (lower_bounds_[c] > limit) continue;
        auto sub = bounded(c, budget);
        std::move(sub.begin(), sub.end(), std::back_inserter(out));
        check_cap(out.size());
      }
      return out;
    }
    const auto& kids = n.children;
    std::vector<double> suffix(kids.size() + 1, 0);
    for (std::size_t k = kids.size(); k-- > 0;)
      suffix[k] = suffix[k + 1] + lower_bounds_[kids[k]];
    double others_total = suffix[0];

    out.push_back({});
    for (std::size_t k = 0; k < kids.size(); ++k) {
      double child_budget = budget - (others_total - lower_bounds_[kids[k]]);
      auto sub = bounded(kids[k], child_budget);
      std::sort(sub.begin(), sub.end(),
                [](const Partial& a, const Partial& b) { return a.cost < b.cost; });
      std::vector<Partial> next;
      for (const auto& p : out) {
        for (const auto& q : sub) {
          if (p.cost + q.cost + suffix[k + 1] > limit) break;
          Partial r{p.cost + q.cost, p.leaves};
          r.leaves.insert(r.leaves.end(), q.leaves.begin(), q.leaves.end());
          next.push_back(std::move(r));
          check_cap(next.size());
        }
      }
      out = std::move(next);
      if (out.empty()) break;
    }
    return out;
  }

  const ExpandedTree& tree_;
  ScenarioOptions opts_;
  std::vector<double> cost_;
  std::vector<double> prob_;
  std::vector<double> time_;
  std::vector<std::size_t> rank_;
  mutable std::vector<double> lower_bounds_;
};

}  // namespace

bool leaf_set_before(const std::vector<NodeId>& a,
                     const std::vector<NodeId>& b) {
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] == b[j]) {
      ++i;
      ++j;
    } else {
      return a[i] < b[j];
    }
  }
  return i < a.size();
}

ScenarioCount count_scenarios(const ExpandedTree& tree) {
  std::vector<ScenarioCount> count(tree.size());
  for (std::size_t i = tree.size(); i-- > 0;) {
    const auto& n = tree.node(i);
    if (n.is_leaf()) {
      count[i] = 1;
    } else if (*n.gate == GateKind::kOr) {
      count[i] = 0;
      for (auto c : n.children) count[i] += count[c];
    } else {
      count[i] = 1;
      for (auto c : n.children) count[i] *= count[c];
    }
  }
  return count[0];
}

std::vector<AttackScenario> enumerate_scenarios(const ExpandedTree& tree,
                                                const AttributeValues& est,
                                                const ScenarioOptions& opts) {
  return Engine(tree, est, opts).enumerate();
}

AttackScenario cheapest_attack(const ExpandedTree& tree,
                               const AttributeValues& est,
                               const ScenarioOptions& opts) {
  return Engine(tree, est, opts).cheapest();
}

AttackScenario most_likely_attack(const ExpandedTree& tree,
                                  const AttributeValues& est,
                                  const ScenarioOptions& opts) {
  return Engine(tree, est, opts).most_likely();
}

std::vector<AttackScenario> attacks_within_budget(const ExpandedTree& tree,
                                                  const AttributeValues& est,
                                                  double budget,
                                                  const ScenarioOptions& opts) {
  return Engine(tree, est, opts).within_budget(budget);
}

std::vector<AttackScenario> pareto_frontier(const ExpandedTree& tree,
                                            const AttributeValues& est,
                                            const ScenarioOptions& opts) {
  auto all = Engine(tree, est, opts).enumerate();
  std::sort(all.begin(), all.end(), [](const AttackScenario& a,
                                       const AttackScenario& b) {
    if (a.cost != b.cost) return a.cost < b.cost;
    if (a.probability != b.probability) return a.probability > b.probability;
    return leaf_set_before(a.leaves, b.leaves);
  });
  std::vector<AttackScenario> out;
  double best_p = -kInf;
  for (auto& s : all) {
    bool keep = s.probability > best_p ||
                (s.probability == best_p && !out.empty() &&
                 out.back().cost == s.cost &&
                 out.back().probability == s.probability);
    best_p = std::max(best_p, s.probability);
    if (keep) out.push_back(std::move(s));
  }
  return out;
}

double expected_payoff(const AttackScenario& s, double gain) {
  return s.probability * gain - s.cost;
}

AttackScenario evaluate_selection(const ExpandedTree& tree,
                                  const AttributeValues& est,
                                  std::vector<std::size_t> leaf_nodes,
                                  TimeModel time_model) {
  ScenarioOptions opts;
  opts.time_model = time_model;
  return Engine(tree, est, opts).evaluate(std::move(leaf_nodes));
}

}  // namespace atrisk
