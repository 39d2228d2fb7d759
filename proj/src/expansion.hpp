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

#ifndef ATRISK_EXPANSION_HPP_
#define ATRISK_EXPANSION_HPP_

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "model.hpp"

namespace atrisk {

/// Node of an expanded tree. `gate` is one of OR, AND, SAND, or absent for
/// a leaf. Children are indices into the owning ExpandedTree.
struct ExpandedNode {
  NodeId id;
  std::string label;
  std::optional<GateKind> gate;
  std::vector<std::size_t> children;

  bool is_leaf() const { return !gate; }
  bool operator==(const ExpandedNode&) const = default;
};

/// Reference-free, multiplicity-unrolled tree. Nodes are stored in
/// pre-order; node 0 is the root.
class ExpandedTree {
 public:
  ExpandedTree(std::string root_key, DeploymentParams params,
               std::vector<ExpandedNode> nodes);

  const std::string& root_key() const { return root_key_; }
  const DeploymentParams& params() const { return params_; }
  const std::vector<ExpandedNode>& nodes() const { return nodes_; }
  const ExpandedNode& node(std::size_t i) const { return nodes_[i]; }
  const ExpandedNode& root() const { return nodes_.front(); }
  std::size_t size() const { return nodes_.size(); }

  /// Leaf indices in pre-order.
  const std::vector<std::size_t>& leaves() const { return leaves_; }

  /// Maps each node to its parent; the root maps to itself.
  std::vector<std::size_t> parents() const;

  bool operator==(const ExpandedTree& o) const { return nodes_ == o.nodes_; }

 private:
  std::string root_key_;
  DeploymentParams params_;
  std::vector<ExpandedNode> nodes_;
  std::vector<std::size_t> leaves_;
};

/// Builder used by expansion, pruning and tests: a recursive node that is
/// flattened into pre-order.
struct NodeSpec {
  NodeId id;
  std::string label;
  std::optional<GateKind> gate;
  std::vector<NodeSpec> children;
};

ExpandedTree flatten(std::string root_key, DeploymentParams params,
                     const NodeSpec& root);

/// Resolves references, unrolls multiplicities and partitions.
///
/// - A reference becomes a copy of the target tree; the copy keeps the
///   target's key and paths and gains a "key:path" context tag.
/// - A node with multiplicity m becomes an AND over m copies tagged
///   "key:path#1".."key:path#m"; m = 1 keeps the node in place (still
///   tagged #1); m = 0 drops the node from an OR parent and is an error
///   under AND, SAND or at the root.
/// - A partition with total T becomes an AND over T instances of an OR over
///   its alternatives, one free choice per instance.
///
/// Throws Error with kUnknownKey, kUnboundParameter, kInvalidMultiplicity,
/// kZeroMultiplicityUnderConjunction or kValidation.
ExpandedTree expand(const TreeLibrary& lib, const std::string& root_key,
                    const DeploymentParams& params);

/// Leaves in pre-order with their labels: the estimation template.
std::vector<std::pair<NodeId, std::string>> leaf_inventory(
    const ExpandedTree& tree);

}  // namespace atrisk

#endif  // ATRISK_EXPANSION_HPP_
