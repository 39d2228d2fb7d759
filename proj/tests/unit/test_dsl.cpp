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

#include <random>

#include "dsl.hpp"
#include "helpers.hpp"
#include "support/generators.hpp"

using namespace atrisk;
using namespace atrisk::testing;

TEST_CASE("braced tree with an OR over three references") {
  auto r = parse_library("f.atk",
                         "tree f \"Get signature\" { or { ref a; ref b; ref c; } }");
  REQUIRE(r.library);
  const Tree& f = r.library->trees.at("f");
  CHECK(f.title == "Get signature");
  CHECK(f.root.gate == GateKind::kOr);
  REQUIRE(f.root.children.size() == 3);
  CHECK(f.root.children[1].reference == "b");
  CHECK(f.root.children[1].label.empty());
}

TEST_CASE("empty document set gives an empty library") {
  auto r = parse_library(std::span<const SourceDocument>{});
  REQUIRE(r.library);
  CHECK(r.library->trees.empty());
  CHECK(r.diagnostics.empty());
}

TEST_CASE("empty gate is rejected at the braces") {
  auto r = parse_library("x.atk", "tree x { or { } }");
  CHECK_FALSE(r.library);
  REQUIRE(r.diagnostics.size() == 1);
  CHECK(r.diagnostics[0].message == "gate requires at least one child");
  CHECK(r.diagnostics[0].span.line_start == 1);
  CHECK(r.diagnostics[0].span.col_start == 13);
  CHECK(r.diagnostics[0].span.col_end == 16);  // exclusive
}

TEST_CASE("parser resynchronises at the next tree") {
  auto r = parse_library("e.atk",
                         "tree a or { leaf \"x\" }\n"      // missing ';'
                         "tree b and { leaf; }\n"          // missing label
                         "tree c leaf \"fine\";\n");
  CHECK_FALSE(r.library);
  CHECK(r.diagnostics.size() == 2);
  CHECK(r.diagnostics[0].span.line_start == 1);
  CHECK(r.diagnostics[1].span.line_start == 2);
}

TEST_CASE("cardinality parameters keep their bars") {
  auto lib = library_of("param |D| \"deposits\";\ntree t leaf \"x\" times(|D|);");
  CHECK(lib.parameters[0].name == "|D|");
  CHECK(lib.trees.at("t").root.multiplicity->str() == "|D|");
}

TEST_CASE("string escapes round-trip") {
  auto lib = library_of(R"(tree t leaf "a \"q\" \\ \n\t end";)");
  CHECK(lib.trees.at("t").root.label == "a \"q\" \\ \n\t end");
  auto again = parse_library(serialize_library(lib));
  REQUIRE(again.library);
  CHECK(*again.library == lib);
}

TEST_CASE("unterminated string is an error") {
  CHECK_FALSE(parse_library("s.atk", "tree t leaf \"abc;").library);
  CHECK_FALSE(parse_library("s.atk", "tree t leaf \"ab\nc\";").library);
}

TEST_CASE("duplicates across documents are errors") {
  std::vector<SourceDocument> docs = {{"one.atk", "tree t leaf \"x\";"},
                                      {"two.atk", "tree t leaf \"y\";"}};
  CHECK_FALSE(parse_library(docs).library);
  docs = {{"one.atk", "param N;"}, {"two.atk", "param N;"}};
  CHECK_FALSE(parse_library(docs).library);
}

TEST_CASE("single leaf tree serialises to one node line") {
  auto lib = library_of("tree t leaf \"only\";");
  auto docs = serialize_library(lib);
  REQUIRE(docs.size() == 1);
  CHECK(docs[0].text == "\ntree t\nleaf \"only\";\n");
  CHECK(*parse_library(docs).library == lib);
}

TEST_CASE("partition constraint text is preserved") {
  auto lib = library_of(
      "param M; param K;\n"
      "tree t partition(A+B+C=M-K+1) { ref x times(A); leaf \"y\" times(B); leaf \"z\" times(C); }\n"
      "tree x leaf \"x\";");
  auto text = serialize_library(lib)[0].text;
  CHECK(text.find("partition(A+B+C=M-K+1)") != std::string::npos);
  CHECK(*parse_library(serialize_library(lib)).library == lib);
}

TEST_CASE("corpus round-trips") {
  auto again = parse_library(serialize_library(corpus()));
  REQUIRE(again.library);
  CHECK(*again.library == corpus());
}

TEST_CASE("random libraries round-trip") {
  Rng rng(11);
  for (int i = 0; i < 200; ++i) {
    TreeLibrary lib = random_library(rng);
    auto again = parse_library(serialize_library(lib));
    REQUIRE(again.library);
    CHECK(*again.library == lib);
  }
}

TEST_CASE("parsing is deterministic") {
  std::string text = serialize_library(corpus())[0].text;
  auto a = parse_library("c.atk", text);
  auto b = parse_library("c.atk", text);
  CHECK(*a.library == *b.library);
  auto e1 = parse_library("c.atk", text.substr(0, text.size() / 2));
  auto e2 = parse_library("c.atk", text.substr(0, text.size() / 2));
  CHECK(e1.diagnostics == e2.diagnostics);
}

TEST_CASE("mutated input never crashes and errors carry spans") {
  std::string base = serialize_library(corpus())[0].text;
  std::mt19937_64 rng(99);
  const std::string alphabet = "{}();=+-|\"\\ \nabcXYZ019#tree leaf or and";
  for (int i = 0; i < 500; ++i) {
    std::string text = base;
    int edits = 1 + static_cast<int>(rng() % 8);
    for (int e = 0; e < edits; ++e) {
      std::size_t pos = rng() % text.size();
      switch (rng() % 3) {
        case 0: text.erase(pos, 1 + rng() % 5); break;
        case 1: text.insert(pos, 1, alphabet[rng() % alphabet.size()]); break;
        default: text[pos] = static_cast<char>(rng() % 256); break;
      }
      if (text.empty()) text = "x";
    }
    auto r = parse_library("fuzz.atk", text);
    if (!r.library) {
      REQUIRE_FALSE(r.diagnostics.empty());
      for (const auto& d : r.diagnostics) CHECK_FALSE(d.message.empty());
    }
  }
}
