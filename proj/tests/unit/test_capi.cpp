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

// Exercises the shared library through its C interface only.

#include <doctest.h>

#include <algorithm>
#include <string>

#include <json.hpp>

#include "atrisk/atrisk.h"

using nlohmann::json;

namespace {

struct Str {
  char* p = nullptr;
  ~Str() { atk_string_free(p); }
  std::string s() const { return p ? p : ""; }
};

struct Lib {
  atk_library* p = nullptr;
  ~Lib() { atk_library_free(p); }
};

const char* kParams =
    R"({"N":3,"M":2,"K":2,"W_total":3,"|D|":1,"|U|":1,"|E|":1})";

}  // namespace

TEST_CASE("status names and version") {
  CHECK(std::string(atk_status_name(ATK_OK)) == "ok");
  CHECK(std::string(atk_status_name(ATK_ERR_PARSE)) == "ParseError");
  CHECK(std::string(atk_version()) == "0.1.0");
}

TEST_CASE("parse errors come back as JSON diagnostics") {
  const char* names[] = {"bad.atk"};
  const char* texts[] = {"tree x { or { } }"};
  Lib lib;
  Str diags;
  CHECK(atk_library_parse(names, texts, 1, &lib.p, &diags.p) == ATK_ERR_PARSE);
  CHECK(lib.p == nullptr);
  json d = json::parse(diags.s());
  REQUIRE(d.size() == 1);
  CHECK(d[0].at("message") == "gate requires at least one child");
  CHECK(std::string(atk_last_error()).size() > 0);
}

TEST_CASE("validation findings") {
  const char* names[] = {"c.atk"};
  const char* texts[] = {"tree p ref q;\ntree q ref p;\n"};
  Lib lib;
  REQUIRE(atk_library_parse(names, texts, 1, &lib.p, nullptr) == ATK_OK);
  Str diags;
  CHECK(atk_library_validate(lib.p, &diags.p) == ATK_ERR_FINDINGS);
  json d = json::parse(diags.s());
  REQUIRE(d.size() == 1);
  CHECK(d[0].at("kind") == "ReferenceCycle");
}

TEST_CASE("null arguments are rejected") {
  CHECK(atk_library_load_corpus(nullptr) == ATK_ERR_INVALID_ARGUMENT);
  CHECK(atk_expand(nullptr, "a", nullptr, nullptr) == ATK_ERR_INVALID_ARGUMENT);
  atk_library_free(nullptr);
  atk_expanded_free(nullptr);
  atk_string_free(nullptr);
}

TEST_CASE("corpus through the C API") {
  Lib lib;
  REQUIRE(atk_library_load_corpus(&lib.p) == ATK_OK);
  Str diags;
  CHECK(atk_library_validate(lib.p, &diags.p) == ATK_OK);
  CHECK(json::parse(diags.s()).empty());

  atk_expanded* t = nullptr;
  REQUIRE(atk_expand(lib.p, "f", kParams, &t) == ATK_OK);
  CHECK(atk_expanded_node_count(t) == 40);
  CHECK(atk_expanded_leaf_count(t) == 23);
  Str count;
  CHECK(atk_expanded_scenario_count(t, &count.p) == ATK_OK);
  CHECK(count.s() == "20");
  Str inv;
  CHECK(atk_expanded_inventory(t, &inv.p) == ATK_OK);
  std::string lines = inv.s();
  CHECK(std::count(lines.begin(), lines.end(), '\n') == 23);
  atk_expanded_free(t);

  t = nullptr;
  CHECK(atk_expand(lib.p, "Z", kParams, &t) == ATK_ERR_UNKNOWN_KEY);
  CHECK(atk_expand(lib.p, "B", "{}", &t) == ATK_ERR_UNBOUND_PARAMETER);
  CHECK(atk_expand(lib.p, "f", "{not json", &t) == ATK_ERR_INVALID_ARGUMENT);
  CHECK(t == nullptr);
}

TEST_CASE("DOT export with and without a profile") {
  Lib lib;
  REQUIRE(atk_library_load_corpus(&lib.p) == ATK_OK);
  atk_expanded* t = nullptr;
  REQUIRE(atk_expand(lib.p, "a", kParams, &t) == ATK_OK);
  Str dot;
  CHECK(atk_expanded_to_dot(t, nullptr, &dot.p) == ATK_OK);
  CHECK(dot.s().find("shape=diamond") != std::string::npos);
  Str pruned;
  CHECK(atk_expanded_to_dot(t, "exclude\tCoerce participant\nexclude\tCorrupt participant\n",
                            &pruned.p) == ATK_OK);
  CHECK(pruned.s().find("infeasible") != std::string::npos);
  atk_expanded_free(t);
}

TEST_CASE("analysis through the C API") {
  Lib lib;
  REQUIRE(atk_library_load_corpus(&lib.p) == ATK_OK);
  json req = {{"root", "a"},
              {"params", json::parse(kParams)},
              {"estimates", "*\tcost\t10\n*\tprobability\t0.5\n"},
              {"queries", {"aggregate:min_cost", "cheapest"}},
              {"timestamp", "2000-01-01T00:00:00Z"}};
  Str report;
  CHECK(atk_analyze(lib.p, req.dump().c_str(), &report.p) == ATK_OK);
  json r = json::parse(report.s());
  CHECK(r.at("results").size() == 2);

  req["queries"] = {"aggregate:min_time"};
  Str failed;
  CHECK(atk_analyze(lib.p, req.dump().c_str(), &failed.p) == ATK_ERR_FINDINGS);
  CHECK(json::parse(failed.s()).at("results").size() == 1);

  Str bad;
  CHECK(atk_analyze(lib.p, "[]", &bad.p) == ATK_ERR_INVALID_ARGUMENT);
  CHECK(bad.p == nullptr);
}
