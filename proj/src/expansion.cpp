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

#include "expansion.hpp"

#include <utility>

#include "error.hpp"

namespace atrisk {

ExpandedTree::ExpandedTree(std::string root_key, DeploymentParams params,
                           std::vector<ExpandedNode> nodes)
    : root_key_(std::move(root_key)),
      params_(std::move(params)),
      nodes_(std::move(nodes)) {
  if (nodes_.empty())
    throw Error(ErrorCode::kInvalidArgument, "expanded tree has no nodes");
  for (std::size_t i = 0; i < nodes_.size(); ++i)
    if (nodes_[i].is_leaf()) leaves_.push_back(i);
}

std::vector<std::size_t> ExpandedTree::parents() const {
  std::vector<std::size_t> parent(nodes_.size(), 0);
  for (std::size_t i = 0; i < nodes_.size(); ++i)
    for (auto c : nodes_[i].children) parent[c] = i;
  return parent;
}

namespace {

void flatten_into(const NodeSpec& spec, std::vector<ExpandedNode>& out) {
  std::size_t self = out.size();
  out.push_back({spec.id, spec.label, spec.gate, {}});
  std::vector<std::size_t> kids;
  kids.reserve(spec.children.size());
  for (const auto& c : spec.children) {
    kids.push_back(out.size());
    flatten_into(c, out);
  }
  out[self].children = std::move(kids);
}

class Expander {
 public:
  Expander(const TreeLibrary& lib, const DeploymentParams& params)
      : lib_(lib), params_(params) {}

  NodeSpec root(const std::string& key) {
    const Tree& tree = lookup(key);
    auto out = expand(tree.root, key, {}, {}, label_for(tree.root, tree));
    if (!out)
      throw Error(ErrorCode::kZeroMultiplicityUnderConjunction,
                  "tree '" + key + "' is vacuous under these parameters");
    return std::move(*out);
  }

 private:
  const Tree& lookup(const std::string& key) const {
    const Tree* t = lib_.find(key);
    if (!t) throw Error(ErrorCode::kUnknownKey, "unknown tree '" + key + "'");
    return *t;
  }

  static std::string label_for(const TreeNode& root, const Tree& tree) {
    return root.label.empty() ? tree.title : root.label;
  }

  static std::string tag(const std::string& key, const std::vector<int>& path) {
    return key + ":" + NodeId{key, path, {}}.path_str();
  }

  std::int64_t eval(const IntExpr& e, const std::string& key,
                    const std::vector<int>& path) const {
    std::int64_t v = e.evaluate(
        [&](const std::string& n) { return params_.get(n); });
    if (v < 0)
      throw Error(ErrorCode::kInvalidMultiplicity,
                  "multiplicity " + e.str() + " at " + tag(key, path) +
                      " evaluates to " + std::to_string(v));
    return v;
  }

  // Expands `node` including its multiplicity. nullopt means the node drops
  // out (zero copies).
  std::optional<NodeSpec> expand(const TreeNode& node, const std::string& key,
                                 const std::vector<int>& path,
                                 const std::vector<std::string>& ctx,
                                 const std::string& label) {
    if (!node.multiplicity) return body(node, key, path, ctx, label, false);
    std::int64_t m = eval(*node.multiplicity, key, path);
    if (m == 0) return std::nullopt;
    const std::string base = tag(key, path);
    if (m == 1) {
      auto inner = ctx;
      inner.push_back(base + "#1");
      return body(node, key, path, inner, label, true);
    }
    NodeSpec group{{key, path, ctx}, label, GateKind::kAnd, {}};
    for (std::int64_t j = 1; j <= m; ++j) {
      auto inner = ctx;
      inner.push_back(base + "#" + std::to_string(j));
      auto copy = body(node, key, path, inner, label, true);
      if (!copy) return std::nullopt;
      group.children.push_back(std::move(*copy));
    }
    return group;
  }

  std::optional<NodeSpec> body(const TreeNode& node, const std::string& key,
                               const std::vector<int>& path,
                               const std::vector<std::string>& ctx,
                               const std::string& label, bool tagged) {
    if (node.reference) {
      const Tree& target = lookup(*node.reference);
      auto inner = ctx;
      if (!tagged) inner.push_back(tag(key, path));
      std::string lbl = !node.label.empty() ? node.label
                                            : label_for(target.root, target);
      return expand(target.root, target.key, {}, inner, lbl);
    }
    if (!node.gate) return NodeSpec{{key, path, ctx}, label, std::nullopt, {}};
    if (*node.gate == GateKind::kPartition)
      return partition(node, key, path, ctx, label);

    NodeSpec out{{key, path, ctx}, label, node.gate, {}};
    for (std::size_t i = 0; i < node.children.size(); ++i) {
      const TreeNode& child = node.children[i];
      auto cpath = path;
      cpath.push_back(static_cast<int>(i + 1));
      auto sub = expand(child, key, cpath, ctx, child.label);
      if (sub) {
        out.children.push_back(std::move(*sub));
      } else if (*node.gate != GateKind::kOr) {
        throw Error(ErrorCode::kZeroMultiplicityUnderConjunction,
                    "child " + tag(key, cpath) + " of " +
                        gate_name(*node.gate) +
                        " gate has zero multiplicity");
      }
    }
    if (out.children.empty()) return std::nullopt;
    return out;
  }

  std::optional<NodeSpec> partition(const TreeNode& node,
                                    const std::string& key,
                                    const std::vector<int>& path,
                                    const std::vector<std::string>& ctx,
                                    const std::string& label) {
    if (!node.constraint)
      throw Error(ErrorCode::kValidation,
                  "partition at " + tag(key, path) + " has no constraint");
    std::int64_t total = eval(node.constraint->total, key, path);
    if (total == 0) return std::nullopt;
    const std::string base = tag(key, path);

    auto instance = [&](std::int64_t j) -> std::optional<NodeSpec> {
      auto inner = ctx;
      inner.push_back(base + "#" + std::to_string(j));
      NodeSpec alt_or{{key, path, inner}, label, GateKind::kOr, {}};
      for (std::size_t i = 0; i < node.children.size(); ++i) {
        const TreeNode& alt = node.children[i];
        auto cpath = path;
        cpath.push_back(static_cast<int>(i + 1));
        // The alternative's own multiplicity names its count variable and is
        // consumed by the partition.
        auto sub = body(alt, key, cpath, inner, alt.label, true);
        if (sub) alt_or.children.push_back(std::move(*sub));
      }
      if (alt_or.children.empty()) return std::nullopt;
      return alt_or;
    };

    if (total == 1) return instance(1);
    NodeSpec group{{key, path, ctx}, label, GateKind::kAnd, {}};
    for (std::int64_t j = 1; j <= total; ++j) {
      auto inst = instance(j);
      if (!inst) return std::nullopt;
      group.children.push_back(std::move(*inst));
    }
    return group;
  }

  const TreeLibrary& lib_;
  const DeploymentParams& params_;
};

}  // namespace

ExpandedTree flatten(std::string root_key, DeploymentParams params,
                     const NodeSpec& root) {
  std::vector<ExpandedNode> nodes;
  flatten_into(root, nodes);
  return ExpandedTree(std::move(root_key), std::move(params), std::move(nodes));
}

ExpandedTree expand(const TreeLibrary& lib, const std::string& root_key,
                    const DeploymentParams& params) {
  if (!lib.find(root_key))
    throw Error(ErrorCode::kUnknownKey, "unknown tree '" + root_key + "'");
  auto diags = validate_library(lib);
  if (!diags.empty())
    throw Error(ErrorCode::kValidation,
                "library is invalid: " + diags.front().message);
  for (const auto& d : check_params(lib, root_key, params)) {
    if (d.kind == Diagnostic::Kind::kUnboundParameter)
      throw Error(ErrorCode::kUnboundParameter, d.message);
    throw Error(ErrorCode::kInvalidArgument, d.message);
  }
  NodeSpec root = Expander(lib, params).root(root_key);
  return flatten(root_key, params, root);
}

std::vector<std::pair<NodeId, std::string>> leaf_inventory(
    const ExpandedTree& tree) {
  std::vector<std::pair<NodeId, std::string>> out;
  for (auto i : tree.leaves()) out.emplace_back(tree.node(i).id, tree.node(i).label);
  return out;
}

}  // namespace atrisk
