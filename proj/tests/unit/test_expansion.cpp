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

#include <set>

#include "error.hpp"
#include "helpers.hpp"
#include "scenarios.hpp"

using namespace atrisk;
using namespace atrisk::testing;

namespace {

ErrorCode expand_error(const std::string& dsl,
                       std::map<std::string, std::int64_t> params = {}) {
  try {
    tree_of(dsl, std::move(params));
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expansion did not throw");
  return ErrorCode::kInvalidArgument;
}

DeploymentParams with(std::map<std::string, std::int64_t> extra) {
  DeploymentParams p = golden_params();
  for (auto& [k, v] : extra) p.bindings[k] = v;
  return p;
}

}  // namespace

TEST_CASE("leaf with multiplicity under AND unrolls to tagged copies") {
  auto t = tree_of("param N; tree t and { leaf \"x\" times(N); leaf \"y\"; }",
                   {{"N", 3}});
  // AND(AND(x#1, x#2, x#3), y)
  CHECK(t.size() == 6);
  REQUIRE(t.leaves().size() == 4);
  const auto& group = t.node(1);
  CHECK(group.gate == GateKind::kAnd);
  CHECK(group.children.size() == 3);
  std::set<std::string> ids;
  for (auto i : t.leaves()) ids.insert(t.node(i).id.str());
  CHECK(ids.size() == 4);
  CHECK(t.node(t.leaves()[0]).id.str() == "t:1#1/t:1");
  CHECK(t.node(t.leaves()[2]).id.str() == "t:1#3/t:1");
}

TEST_CASE("multiplicity one keeps the node in place") {
  auto t = tree_of("param N; tree t and { leaf \"x\" times(N); leaf \"y\"; }",
                   {{"N", 1}});
  CHECK(t.size() == 3);
  CHECK(t.node(1).is_leaf());
  CHECK(t.node(1).id.str() == "t:1#1/t:1");
}

TEST_CASE("multiplicity zero drops an OR branch") {
  auto t = tree_of("param N; tree t or { leaf \"x\" times(N); leaf \"y\"; }",
                   {{"N", 0}});
  CHECK(t.size() == 2);
  CHECK(t.node(1).label == "y");
}

TEST_CASE("multiplicity zero under a conjunction is an error") {
  CHECK(expand_error("param N; tree t and { leaf \"x\" times(N); leaf \"y\"; }",
                     {{"N", 0}}) == ErrorCode::kZeroMultiplicityUnderConjunction);
  CHECK(expand_error("param N; tree t sand { leaf \"x\" times(N); leaf \"y\"; }",
                     {{"N", 0}}) == ErrorCode::kZeroMultiplicityUnderConjunction);
  CHECK(expand_error("param N; tree t leaf \"x\" times(N);", {{"N", 0}}) ==
        ErrorCode::kZeroMultiplicityUnderConjunction);
}

TEST_CASE("OR left without children is an error") {
  CHECK(expand_error("param N; tree t and { or { leaf \"x\" times(N); } leaf \"y\"; }",
                     {{"N", 0}}) == ErrorCode::kZeroMultiplicityUnderConjunction);
}

TEST_CASE("negative multiplicity is rejected") {
  CHECK(expand_error("param N; tree t and { leaf \"x\" times(N-3); leaf \"y\"; }",
                     {{"N", 2}}) == ErrorCode::kInvalidMultiplicity);
}

TEST_CASE("unbound and unknown inputs") {
  CHECK(expand_error("param N; tree t and { leaf \"x\" times(N); leaf \"y\"; }") ==
        ErrorCode::kUnboundParameter);
  DeploymentParams p;
  CHECK_THROWS_AS(expand(library_of("tree t leaf \"x\";"), "nope", p), Error);
}

TEST_CASE("partition totals") {
  const std::string dsl =
      "param T; tree t partition(A+B=T) { leaf \"a\" times(A); leaf \"b\" times(B); }";
  SUBCASE("T = 1 gives one choice") {
    auto t = tree_of(dsl, {{"T", 1}});
    CHECK(count_scenarios(t) == 2);
    CHECK(t.leaves().size() == 2);
  }
  SUBCASE("T = 3 gives three independent choices") {
    auto t = tree_of(dsl, {{"T", 3}});
    CHECK(t.root().gate == GateKind::kAnd);
    CHECK(t.root().children.size() == 3);
    CHECK(count_scenarios(t) == 8);
  }
  SUBCASE("T = 0 cannot be satisfied") {
    CHECK(expand_error(dsl, {{"T", 0}}) ==
          ErrorCode::kZeroMultiplicityUnderConjunction);
  }
}

TEST_CASE("references copy the target and tag the context") {
  auto lib = library_of(
      "tree t and { ref s; ref s \"again\"; }\n"
      "tree s or { leaf \"p\"; leaf \"q\"; }");
  DeploymentParams p;
  auto t = expand(lib, "t", p);
  REQUIRE(t.leaves().size() == 4);
  CHECK(t.node(t.leaves()[0]).id.str() == "t:1/s:1");
  CHECK(t.node(t.leaves()[2]).id.str() == "t:2/s:1");
  CHECK(t.node(1).gate == GateKind::kOr);
}

TEST_CASE("sub-tree h is the conjunction of its three references") {
  auto g = expand(corpus(), "g", golden_params());
  auto d = expand(corpus(), "d", golden_params());
  auto h = expand(corpus(), "h", golden_params());
  CHECK(h.root().gate == GateKind::kAnd);
  CHECK(h.leaves().size() == g.leaves().size() + 2 * d.leaves().size());
  CHECK(count_scenarios(h) == count_scenarios(g) * count_scenarios(d) * count_scenarios(d));
}

TEST_CASE("sub-tree k inventory") {
  auto k = expand(corpus(), "k", golden_params());
  auto inv = leaf_inventory(k);
  REQUIRE(inv.size() == 2);
  CHECK(k.root().gate == GateKind::kSand);
  CHECK(count_scenarios(k) == 1);
}

TEST_CASE("tree B at two deposits matches the frozen oracle") {
  auto p = with({{"|D|", 2}});
  auto b2 = expand(corpus(), "B", p);
  CHECK(b2.size() == 652);
  CHECK(b2.leaves().size() == 367);
  CHECK(count_scenarios(b2) == ScenarioCount("267177164800000000000000"));
}

TEST_CASE("golden parameters for f") {
  auto f = expand(corpus(), "f", golden_params());
  CHECK(f.size() == 40);
  CHECK(f.leaves().size() == 23);
  CHECK(count_scenarios(f) == 20);
  auto F = expand(corpus(), "F", golden_params());
  CHECK(F.size() == 17);
  CHECK(F.leaves().size() == 9);
  CHECK(count_scenarios(F) == 7);
}

TEST_CASE("expansion is deterministic") {
  CHECK(expand(corpus(), "E", golden_params()) ==
        expand(corpus(), "E", golden_params()));
}

TEST_CASE("leaf ids are distinct in every corpus tree") {
  for (const auto& [key, tree] : corpus().trees) {
    CAPTURE(key);
    ExpandedTree t = [&] {
      try {
        return expand(corpus(), key, golden_params());
      } catch (const Error&) {
        return ExpandedTree(key, {}, {ExpandedNode{}});
      }
    }();
    std::set<NodeId> ids;
    for (const auto& n : t.nodes()) ids.insert(n.id);
    CHECK(ids.size() == t.size());
  }
}

TEST_CASE("node count grows with each cardinality parameter") {
  for (const char* name : {"|D|", "|U|", "|E|", "N"}) {
    CAPTURE(name);
    for (const char* root : {"B", "C", "D", "E"}) {
      CAPTURE(root);
      std::size_t prev = 0;
      for (std::int64_t v = 1; v <= 3; ++v) {
        auto p = with({{name, v}});
        if (std::string(name) == "N") p.bindings["W_total"] = v;
        auto t = expand(corpus(), root, p);
        CHECK(t.size() >= prev);
        prev = t.size();
      }
    }
  }
}
