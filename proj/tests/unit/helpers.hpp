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

#ifndef ATRISK_TESTS_UNIT_HELPERS_HPP_
#define ATRISK_TESTS_UNIT_HELPERS_HPP_

#include <map>
#include <stdexcept>
#include <string>

#include "aggregation.hpp"
#include "corpus.hpp"
#include "dsl.hpp"
#include "expansion.hpp"

namespace atrisk::testing {

inline TreeLibrary library_of(const std::string& dsl) {
  auto r = parse_library("test.atk", dsl);
  if (!r.library) {
    throw std::runtime_error("test library does not parse: " +
                             r.diagnostics.front().message);
  }
  return *r.library;
}

/// Expands tree "t" of a one-off library.
inline ExpandedTree tree_of(const std::string& dsl,
                            std::map<std::string, std::int64_t> params = {}) {
  DeploymentParams p;
  p.bindings = std::move(params);
  return expand(library_of(dsl), "t", p);
}

/// Leaf values keyed by label; every leaf must be listed.
inline LeafValues by_label(const ExpandedTree& t,
                           const std::map<std::string, double>& values) {
  LeafValues out;
  for (auto i : t.leaves()) out[t.node(i).id] = values.at(t.node(i).label);
  return out;
}

/// Numeric labels double as values: leaf "3" costs 3.
inline LeafValues label_values(const ExpandedTree& t) {
  LeafValues out;
  for (auto i : t.leaves()) out[t.node(i).id] = std::stod(t.node(i).label);
  return out;
}

inline DeploymentParams golden_params() {
  DeploymentParams p;
  p.bindings = {{"N", 3}, {"M", 2}, {"K", 2}, {"W_total", 3},
                {"|D|", 1}, {"|U|", 1}, {"|E|", 1}};
  return p;
}

inline const TreeLibrary& corpus() {
  static const TreeLibrary lib = load_corpus(bundled_corpus());
  return lib;
}

}  // namespace atrisk::testing

#endif  // ATRISK_TESTS_UNIT_HELPERS_HPP_
