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

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "error.hpp"
#include "helpers.hpp"
#include "support/generators.hpp"

using namespace atrisk;
using namespace atrisk::testing;

namespace {

const double kInf = std::numeric_limits<double>::infinity();

double root_of(const std::string& dsl, const AttributeDomain& d) {
  auto t = tree_of(dsl);
  return aggregate(t, d, label_values(t)).root;
}

}  // namespace

TEST_CASE("min_cost gates") {
  auto d = AttributeDomain::min_cost();
  CHECK(root_of("tree t or { leaf \"3\"; leaf \"7\"; }", d) == 3);
  CHECK(root_of("tree t and { leaf \"3\"; leaf \"7\"; }", d) == 10);
  CHECK(root_of("tree t sand { leaf \"3\"; leaf \"7\"; }", d) == 10);
  CHECK(root_of("tree t or { leaf \"inf\"; leaf \"7\"; }", d) == 7);
}

TEST_CASE("min_time follows the time model") {
  const std::string dsl = "tree t or { and { leaf \"3\"; leaf \"7\"; } sand { leaf \"4\"; leaf \"5\"; } }";
  CHECK(root_of(dsl, AttributeDomain::min_time(TimeModel::kParallel)) == 7);
  CHECK(root_of(dsl, AttributeDomain::min_time(TimeModel::kLoneAttacker)) == 9);
}

TEST_CASE("success_prob gates") {
  auto d = AttributeDomain::success_prob();
  CHECK(root_of("tree t or { leaf \"0.2\"; leaf \"0.5\"; }", d) == doctest::Approx(0.6));
  CHECK(root_of("tree t and { leaf \"0.2\"; leaf \"0.5\"; }", d) == doctest::Approx(0.1));
  CHECK(root_of("tree t sand { leaf \"0.2\"; leaf \"0.5\"; }", d) == doctest::Approx(0.1));
}

TEST_CASE("feasibility is boolean") {
  auto d = AttributeDomain::feasible();
  CHECK(root_of("tree t or { leaf \"0\"; leaf \"1\"; }", d) == 1);
  CHECK(root_of("tree t and { leaf \"0\"; leaf \"1\"; }", d) == 0);
}

TEST_CASE("missing values are listed") {
  auto t = tree_of("tree t or { leaf \"a\"; leaf \"b\"; }");
  LeafValues v{{t.node(1).id, 1.0}};
  try {
    aggregate(t, AttributeDomain::min_cost(), v);
    FAIL("no error");
  } catch (const MissingEstimateError& e) {
    CHECK(e.code() == ErrorCode::kMissingEstimate);
    CHECK(e.attribute() == "cost");
    REQUIRE(e.leaves().size() == 1);
    CHECK(e.leaves()[0] == t.node(2).id.str());
  }
}

TEST_CASE("aggregates agree with the brute-force oracle") {
  Rng rng(1);
  for (int i = 0; i < 200; ++i) {
    auto t = random_expanded(rng, 12);
    auto v = random_values(rng, t);
    CHECK(check_against_oracle(t, AttributeDomain::min_cost(), v.at("cost")));
    CHECK(check_against_oracle(t, AttributeDomain::min_time(), v.at("time")));
    CHECK(check_against_oracle(t, AttributeDomain::min_time(TimeModel::kLoneAttacker),
                               v.at("time")));
    CHECK(check_against_oracle(t, AttributeDomain::success_prob(),
                               v.at("probability")));
  }
}

TEST_CASE("success probability matches exact rational recursion") {
  Rng rng(2);
  for (int i = 0; i < 200; ++i) {
    auto t = random_expanded(rng, 15);
    std::vector<Rational> exact;
    auto v = random_values(rng, t, &exact);
    double got = aggregate(t, AttributeDomain::success_prob(), v.at("probability")).root;
    double want = static_cast<double>(naive_success(t, exact));
    CHECK(got == doctest::Approx(want).epsilon(1e-12));
  }
}

TEST_CASE("min_cost equals the cheapest brute-force scenario") {
  Rng rng(3);
  for (int i = 0; i < 200; ++i) {
    auto t = random_expanded(rng, 12);
    auto v = random_values(rng, t);
    double best = kInf;
    for (const auto& s : brute_scenarios(t)) best = std::min(best, scenario_cost(t, v, s));
    CHECK(aggregate(t, AttributeDomain::min_cost(), v.at("cost")).root == best);
  }
}

TEST_CASE("lowering a leaf never raises min_cost nor lowers success_prob") {
  Rng rng(4);
  for (int i = 0; i < 200; ++i) {
    auto t = random_expanded(rng, 12);
    auto v = random_values(rng, t);
    const NodeId& leaf = t.node(t.leaves()[rng() % t.leaves().size()]).id;
    double c0 = aggregate(t, AttributeDomain::min_cost(), v.at("cost")).root;
    double p0 = aggregate(t, AttributeDomain::success_prob(), v.at("probability")).root;
    v["cost"][leaf] = v["cost"][leaf] / 2;
    v["probability"][leaf] = std::min(1.0, v["probability"][leaf] + 0.1);
    CHECK(aggregate(t, AttributeDomain::min_cost(), v.at("cost")).root <= c0);
    CHECK(aggregate(t, AttributeDomain::success_prob(), v.at("probability")).root >=
          p0 - 1e-15);
  }
}

TEST_CASE("SAND and AND agree outside the time domain") {
  Rng rng(5);
  for (int i = 0; i < 100; ++i) {
    auto t = random_expanded(rng, 12);
    auto v = random_values(rng, t);
    std::vector<ExpandedNode> nodes = t.nodes();
    for (auto& n : nodes)
      if (n.gate == GateKind::kSand) n.gate = GateKind::kAnd;
    ExpandedTree u(t.root_key(), t.params(), nodes);
    for (const char* d : {"min_cost", "success_prob"}) {
      auto dom = builtin_domain(d);
      CHECK(aggregate(t, dom, v.at(dom.attribute)).root ==
            aggregate(u, dom, v.at(dom.attribute)).root);
    }
  }
}

TEST_CASE("child order does not change aggregates") {
  Rng rng(6);
  for (int i = 0; i < 100; ++i) {
    auto t = random_expanded(rng, 12);
    auto v = random_values(rng, t);
    std::vector<ExpandedNode> nodes = t.nodes();
    for (auto& n : nodes) std::reverse(n.children.begin(), n.children.end());
    ExpandedTree u(t.root_key(), t.params(), nodes);
    for (const char* d : {"min_cost", "min_time", "success_prob"}) {
      auto dom = builtin_domain(d);
      CHECK(aggregate(t, dom, v.at(dom.attribute)).root ==
            doctest::Approx(aggregate(u, dom, v.at(dom.attribute)).root).epsilon(1e-12));
    }
  }
}

TEST_CASE("tiny probabilities keep their precision") {
  std::vector<double> ps(20, 1e-9);
  double all = probability_all(ps);
  CHECK(all > 0);
  CHECK(std::log(all) == doctest::Approx(20 * std::log(1e-9)));
  double any = probability_any(ps);
  CHECK(any == doctest::Approx(20e-9).epsilon(1e-6));
}

TEST_CASE("unknown domain name") {
  CHECK_THROWS_AS(builtin_domain("max_fun"), Error);
  CHECK(builtin_domain_names().size() == 4);
}
