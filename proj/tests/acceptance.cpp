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

// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Usage: acceptance <path-to-cli> <source-dir>

#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "aggregation.hpp"
#include "corpus.hpp"
#include "dsl.hpp"
#include "error.hpp"
#include "estimation.hpp"
#include "expansion.hpp"
#include "scenarios.hpp"
#include "support/generators.hpp"

namespace {

using namespace atrisk;
using namespace atrisk::testing;

std::string g_cli;
std::string g_src;

// Thrown by check() with a short reason for the FAIL line.
struct Failure {
  std::string why;
};

void check(bool ok, const std::string& why) {
  if (!ok) throw Failure{why};
}

DeploymentParams golden_params() {
  DeploymentParams p;
  p.bindings = {{"N", 3}, {"M", 2}, {"K", 2}, {"W_total", 3},
                {"|D|", 1}, {"|U|", 1}, {"|E|", 1}};
  return p;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Failure{"cannot read " + path};
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> leaf_ids(const ExpandedTree& t,
                                  const std::vector<std::size_t>& nodes) {
  std::vector<std::string> out;
  for (auto i : nodes) out.push_back(t.node(i).id.str());
  std::sort(out.begin(), out.end());
  return out;
}

// 1. parse(serialize(L)) == L.
void criterion1() {
  auto roundtrip = [](const TreeLibrary& lib) {
    auto docs = serialize_library(lib);
    auto parsed = parse_library(docs);
    return parsed.library && *parsed.library == lib;
  };
  check(roundtrip(load_corpus()), "corpus round-trip differs");
  Rng rng(20260101);
  for (int i = 0; i < 1000; ++i) {
    TreeLibrary lib = random_library(rng, 6, 5);
    check(roundtrip(lib), "random library #" + std::to_string(i) + " differs");
  }
}

// 2. Corpus validates; closures match the cited references; 22 trees.
void criterion2() {
  TreeLibrary lib = load_corpus();
  check(validate_library(lib).empty(), "corpus has diagnostics");
  using S = std::set<std::string>;
  check(reference_closure(lib, "f") == S{"f", "a", "b", "c", "g"}, "closure(f)");
  check(reference_closure(lib, "H") == S{"H", "g", "a"}, "closure(H)");
  auto g = reference_closure(lib, "G");
  for (const char* k : {"G", "F", "A", "k"}) check(g.count(k), std::string("closure(G) lacks ") + k);
  auto a = reference_closure(lib, "A");
  for (const char* k : {"A", "d", "a", "g"}) check(a.count(k), std::string("closure(A) lacks ") + k);
  check(lib.trees.size() == 22, "tree count " + std::to_string(lib.trees.size()));
  for (char c = 'a'; c <= 'k'; ++c) {
    check(lib.trees.count(std::string(1, c)), std::string("missing ") + c);
    check(lib.trees.count(std::string(1, static_cast<char>(c - 'a' + 'A'))),
          std::string("missing upper ") + c);
  }
}

// 3. Aggregates and cheapest attack against brute force; success_prob
// against exact naive recursion.
void criterion3() {
  Rng rng(3);
  for (int i = 0; i < 500; ++i) {
    ExpandedTree t = random_expanded(rng, 15);
    std::vector<Rational> exact;
    AttributeValues v = random_values(rng, t, &exact);
    double brute = INFINITY;
    for (const auto& s : brute_scenarios(t)) brute = std::min(brute, scenario_cost(t, v, s));
    double agg = aggregate(t, AttributeDomain::min_cost(), v[attr::kCost]).root;
    double cheap = cheapest_attack(t, v).cost;
    check(agg == brute, "min_cost aggregate != brute force on tree " + std::to_string(i));
    check(cheap == brute, "cheapest cost != brute force on tree " + std::to_string(i));
    double p = aggregate(t, AttributeDomain::success_prob(), v[attr::kProbability]).root;
    double want = naive_success(t, exact).convert_to<double>();
    check(std::abs(p - want) <= 1e-12, "success_prob off by " + std::to_string(p - want));
  }
}

// 4. PARTITION over T instances and k alternatives has k^T scenarios.
void criterion4() {
  for (int k = 2; k <= 3; ++k) {
    for (int T = 1; T <= 4; ++T) {
      std::string vars = k == 2 ? "A+B" : "A+B+C";
      std::string text = "param T;\ntree p \"P\" partition(" + vars + "=T) {\n"
                         "  leaf \"x\" times(A);\n  leaf \"y\" times(B);\n";
      if (k == 3) text += "  leaf \"z\" times(C);\n";
      text += "}\n";
      auto parsed = parse_library("p.atk", text);
      check(parsed.library.has_value(), "partition library does not parse");
      DeploymentParams params;
      params.bindings["T"] = T;
      ExpandedTree t = expand(*parsed.library, "p", params);
      // Independent count: sum over compositions of the multinomial.
      std::int64_t multinomial_sum = 0;
      auto fact = [](int n) { std::int64_t f = 1; for (int i = 2; i <= n; ++i) f *= i; return f; };
      for (int a = 0; a <= T; ++a) {
        for (int b = 0; a + b <= T; ++b) {
          int c = T - a - b;
          if (k == 2 && c != 0) continue;
          multinomial_sum += fact(T) / (fact(a) * fact(b) * fact(c));
        }
      }
      std::int64_t power = 1;
      for (int i = 0; i < T; ++i) power *= k;
      check(multinomial_sum == power, "multinomial oracle");
      check(count_scenarios(t) == power,
            "count k=" + std::to_string(k) + " T=" + std::to_string(T));
      check(static_cast<std::int64_t>(brute_scenarios(t).size()) == power,
            "enumeration k=" + std::to_string(k) + " T=" + std::to_string(T));
      AttributeValues v;
      for (auto i : t.leaves()) {
        v[attr::kCost][t.node(i).id] = 1;
        v[attr::kProbability][t.node(i).id] = 0.5;
      }
      check(static_cast<std::int64_t>(enumerate_scenarios(t, v).size()) == power,
            "engine enumeration");
    }
  }
}

// 5. Budget query equals the brute-force filter and grows with the budget.
void criterion5() {
  Rng rng(5);
  for (int i = 0; i < 200; ++i) {
    ExpandedTree t = random_expanded(rng, 12);
    AttributeValues v = random_values(rng, t);
    auto all = brute_scenarios(t);
    double max_cost = 0;
    for (const auto& s : all) max_cost = std::max(max_cost, scenario_cost(t, v, s));
    std::set<std::vector<std::size_t>> prev;
    for (int b = 0; b < 20; ++b) {
      double budget = std::floor(max_cost * b / 19.0);
      std::set<std::vector<std::size_t>> want;
      for (const auto& s : all) {
        if (scenario_cost(t, v, s) <= budget) want.insert(s);
      }
      std::set<std::vector<std::size_t>> got;
      double last_cost = -1;
      for (const auto& s : attacks_within_budget(t, v, budget)) {
        auto nodes = s.leaf_nodes;
        std::sort(nodes.begin(), nodes.end());
        got.insert(nodes);
        check(s.cost >= last_cost, "budget results not sorted by cost");
        last_cost = s.cost;
      }
      check(got == want, "budget set differs on tree " + std::to_string(i));
      check(std::includes(got.begin(), got.end(), prev.begin(), prev.end()),
            "budget monotonicity");
      prev = got;
    }
  }
}

// 6. Monte Carlo: degenerate inputs reproduce aggregation; beta(2,2) mean;
// fixed-seed determinism.
void criterion6() {
  Rng rng(6);
  for (int i = 0; i < 50; ++i) {
    ExpandedTree t = random_expanded(rng, 15);
    AttributeValues v = random_values(rng, t);
    EstimateMap est;
    for (auto& [a, leaves] : v) {
      for (auto& [id, x] : leaves) est[a][id] = Estimate{Distribution::point(x)};
    }
    auto cost = monte_carlo(t, est, AttributeDomain::min_cost(), 100, 1);
    double agg = aggregate(t, AttributeDomain::min_cost(), v[attr::kCost]).root;
    check(cost.mean == agg && cost.sd == 0, "point cost mean != aggregate");
    auto prob = monte_carlo(t, est, AttributeDomain::success_prob(), 100, 1);
    double pagg = aggregate(t, AttributeDomain::success_prob(), v[attr::kProbability]).root;
    check(std::abs(prob.mean - pagg) <= 1e-12 && prob.sd == 0, "point probability mean");
  }
  ExpandedTree single = flatten("s", {}, NodeSpec{{"s", {}, {}}, "leaf", std::nullopt, {}});
  EstimateMap est;
  est[attr::kProbability][single.root().id] = Estimate{Distribution::beta(2, 2)};
  auto run = [&] {
    return monte_carlo(single, est, AttributeDomain::success_prob(), 1'000'000, 42, 1);
  };
  auto a = run();
  check(std::abs(a.mean - 0.5) < 0.002, "beta(2,2) mean " + std::to_string(a.mean));
  auto b = run();
  auto dump = [](const MonteCarloSummary& s) {
    std::ostringstream os;
    os.precision(17);
    os << s.mean << ' ' << s.sd << ' ' << s.p5 << ' ' << s.p50 << ' ' << s.p95;
    for (auto [x, p] : s.exceedance) os << ' ' << x << ':' << p;
    return os.str();
  };
  check(dump(a) == dump(b), "fixed-seed runs differ");
}

// 7. Conjugate update.
void criterion7() {
  BetaParams p = bayes_update({1, 1}, 1, 0);
  check(p.alpha() == 2 && p.beta() == 1 && p.mean() == 2.0 / 3.0, "beta(1,1)+1 success");
  Rng rng(7);
  for (int i = 0; i < 100; ++i) {
    BetaParams prior{std::uniform_real_distribution<double>(0.1, 10)(rng),
                     std::uniform_real_distribution<double>(0.1, 10)(rng)};
    std::uint64_t s = rng() % 1000, f = rng() % 1000;
    std::uint64_t s1 = s ? rng() % (s + 1) : 0, f1 = f ? rng() % (f + 1) : 0;
    BetaParams split = bayes_update(bayes_update(prior, s1, f1), s - s1, f - f1);
    BetaParams batch = bayes_update(prior, s, f);
    check(split == batch && split.mean() == batch.mean(), "batch commutativity");
  }
}

// 8. Pruning soundness.
void criterion8() {
  Rng rng(8);
  for (int i = 0; i < 200; ++i) {
    ExpandedTree t = random_expanded(rng, 12);
    AttackerProfile prof;
    prof.name = "random";
    int n = std::uniform_int_distribution<int>(0, 3)(rng);
    for (int k = 0; k < n; ++k) {
      auto leaf = t.leaves()[rng() % t.leaves().size()];
      // Alternate between label globs and exact ids.
      prof.excluded_leaves.push_back(k % 2 ? t.node(leaf).id.str() : t.node(leaf).label);
    }
    auto excluded = [&](const ExpandedNode& leaf) {
      for (const auto& p : prof.excluded_leaves) if (matches(p, leaf)) return true;
      return false;
    };
    std::set<std::vector<std::string>> original;
    for (const auto& s : brute_scenarios(t)) original.insert(leaf_ids(t, s));
    std::set<std::vector<std::string>> allowed;
    for (const auto& s : brute_scenarios(t)) {
      bool clean = std::none_of(s.begin(), s.end(), [&](auto i) { return excluded(t.node(i)); });
      if (clean) allowed.insert(leaf_ids(t, s));
    }
    auto pruned = prune(t, prof);
    std::set<std::vector<std::string>> got;
    if (pruned) {
      for (const auto& s : brute_scenarios(*pruned)) {
        auto ids = leaf_ids(*pruned, s);
        check(original.count(ids), "pruned scenario not in original");
        for (auto j : s) check(!excluded(pruned->node(j)), "pruned scenario has excluded leaf");
        got.insert(ids);
      }
    }
    check(got == allowed, "pruned scenarios != clean original scenarios");
  }
  TreeLibrary lib = load_corpus();
  ExpandedTree a = expand(lib, "a", golden_params());
  AttackerProfile p;
  p.excluded_leaves = {"Coerce participant", "Corrupt participant"};
  check(!prune(a, p).has_value(), "a should be infeasible");
}

// 9. Golden corpus statistics.
void criterion9() {
  std::string want = read_file(g_src + "/tests/golden/corpus_stats.tsv");
  std::string got = format_corpus_stats(corpus_stats(load_corpus(), golden_params()));
  check(got == want, "corpus_stats differs from golden table");
}

std::string run_cli(const std::string& args) {
  std::string cmd = g_cli + " " + args;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) throw Failure{"cannot run " + cmd};
  std::string out;
  std::array<char, 4096> buf;
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) out.append(buf.data(), n);
  int rc = pclose(p);
  if (rc != 0) throw Failure{"cli exited with " + std::to_string(rc) + ": " + cmd};
  return out;
}

std::string without_timestamp(const std::string& report) {
  auto j = nlohmann::json::parse(report);
  j["metadata"].erase("timestamp");
  return j.dump(2);
}

// 10. Analyze reports are identical modulo timestamp across runs and
// thread counts.
void criterion10() {
  std::string args =
      "analyze B --params N=3 M=2 K=2 W_total=3 '|D|=1' --estimates " + g_src +
      "/corpus/estimates/baseline.tsv --seed 42 --query aggregate:min_cost"
      " --query aggregate:success_prob --query cheapest --query most-likely"
      " --query budget:10000 --query montecarlo:min_cost:20000"
      " --query montecarlo:success_prob:20000";
  std::string r1 = run_cli(args + " --threads 1");
  std::string r2 = run_cli(args + " --threads 1");
  std::string r4 = run_cli(args + " --threads 4");
  check(without_timestamp(r1) == without_timestamp(r2), "two runs differ");
  check(without_timestamp(r1) == without_timestamp(r4), "1 vs 4 threads differ");
  // Byte-level check with a pinned timestamp.
  std::string pinned = "SOURCE_DATE_EPOCH=1700000000 ";
  std::string saved = g_cli;
  g_cli = pinned + saved;
  std::string b1 = run_cli(args + " --threads 1");
  std::string b4 = run_cli(args + " --threads 4");
  g_cli = saved;
  check(b1 == b4, "pinned-timestamp reports not byte-identical");
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 3) {
    std::cerr << "usage: acceptance <cli> <source-dir>\n";
    return 2;
  }
  g_cli = argv[1];
  g_src = argv[2];
  struct Item {
    int n;
    const char* name;
    std::function<void()> run;
  };
  const std::vector<Item> items = {
      {1, "parser round-trip (corpus + 1000 random libraries)", criterion1},
      {2, "corpus fidelity (validation, closures, 22 trees)", criterion2},
      {3, "oracle equivalence on 500 random trees", criterion3},
      {4, "PARTITION scenario count k^T", criterion4},
      {5, "budget query soundness and monotonicity", criterion5},
      {6, "Monte Carlo degenerate, beta(2,2) and determinism", criterion6},
      {7, "Bayesian update conjugacy and batch commutativity", criterion7},
      {8, "pruning soundness on 200 random profiles", criterion8},
      {9, "corpus_stats golden table", criterion9},
      {10, "analyze determinism across runs and thread counts", criterion10},
  };
  int failed = 0;
  for (const auto& it : items) {
    std::string why;
    try {
      it.run();
    } catch (const Failure& f) {
      why = f.why;
    } catch (const std::exception& e) {
      why = std::string("exception: ") + e.what();
    }
    if (why.empty()) {
      std::cout << "PASS " << it.n << " " << it.name << "\n";
    } else {
      ++failed;
      std::cout << "FAIL " << it.n << " " << it.name << ": " << why << "\n";
    }
    std::cout.flush();
  }
  return failed ? 1 : 0;
}
