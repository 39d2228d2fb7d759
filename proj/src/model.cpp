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

#include "model.hpp"

#include <algorithm>
#include <utility>

#include "error.hpp"

namespace atrisk {

std::string SourceSpan::str() const {
  if (line_start == 0) return file.empty() ? "<unknown>" : file;
  return file + ":" + std::to_string(line_start) + ":" +
         std::to_string(col_start);
}

std::string NodeId::path_str() const {
  std::string out;
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (i) out += '.';
    out += std::to_string(path[i]);
  }
  return out;
}

std::string NodeId::str() const {
  std::string out;
  for (const auto& tag : instance_tags) out += tag + "/";
  return out + library_key + ":" + path_str();
}

const char* gate_name(GateKind kind) {
  switch (kind) {
    case GateKind::kOr: return "or";
    case GateKind::kAnd: return "and";
    case GateKind::kSand: return "sand";
    case GateKind::kPartition: return "partition";
  }
  return "?";
}

// IntExpr

IntExpr IntExpr::literal(std::int64_t v) {
  return IntExpr({Term{false, v}});
}

IntExpr IntExpr::name(std::string n) {
  return IntExpr({Term{false, std::move(n)}});
}

std::vector<std::string> IntExpr::names() const {
  std::vector<std::string> out;
  for (const auto& t : terms_)
    if (auto* s = std::get_if<std::string>(&t.value)) out.push_back(*s);
  return out;
}

std::int64_t IntExpr::evaluate(
    const std::function<std::optional<std::int64_t>(const std::string&)>&
        lookup) const {
  std::int64_t sum = 0;
  for (const auto& t : terms_) {
    std::int64_t v;
    if (auto* lit = std::get_if<std::int64_t>(&t.value)) {
      v = *lit;
    } else {
      const auto& n = std::get<std::string>(t.value);
      auto bound = lookup(n);
      if (!bound)
        throw Error(ErrorCode::kUnboundParameter,
                    "parameter '" + n + "' is not bound");
      v = *bound;
    }
    sum += t.negative ? -v : v;
  }
  return sum;
}

std::string IntExpr::str() const {
  std::string out;
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    const auto& t = terms_[i];
    if (t.negative)
      out += '-';
    else if (i)
      out += '+';
    if (auto* lit = std::get_if<std::int64_t>(&t.value))
      out += std::to_string(*lit);
    else
      out += std::get<std::string>(t.value);
  }
  return out;
}

std::optional<std::string> IntExpr::as_single_name() const {
  if (terms_.size() != 1 || terms_[0].negative) return std::nullopt;
  if (auto* s = std::get_if<std::string>(&terms_[0].value)) return *s;
  return std::nullopt;
}

std::string PartitionConstraint::str() const {
  std::string out;
  for (std::size_t i = 0; i < variables.size(); ++i) {
    if (i) out += '+';
    out += variables[i];
  }
  return out + "=" + total.str();
}

// TreeNode

TreeNode TreeNode::leaf(std::string label) {
  TreeNode n;
  n.label = std::move(label);
  return n;
}

TreeNode TreeNode::ref(std::string key, std::string label) {
  TreeNode n;
  n.reference = std::move(key);
  n.label = std::move(label);
  return n;
}

TreeNode TreeNode::gate_node(GateKind kind, std::vector<TreeNode> children,
                             std::string label) {
  TreeNode n;
  n.gate = kind;
  n.children = std::move(children);
  n.label = std::move(label);
  return n;
}

bool TreeNode::operator==(const TreeNode& o) const {
  return label == o.label && gate == o.gate && constraint == o.constraint &&
         reference == o.reference && multiplicity == o.multiplicity &&
         children == o.children;
}

// TreeLibrary

const Tree* TreeLibrary::find(const std::string& key) const {
  auto it = trees.find(key);
  return it == trees.end() ? nullptr : &it->second;
}

bool TreeLibrary::declares(const std::string& param) const {
  return std::any_of(parameters.begin(), parameters.end(),
                     [&](const ParamDecl& p) { return p.name == param; });
}

std::optional<std::string> TreeLibrary::meta(const std::string& key) const {
  for (const auto& [k, v] : metadata)
    if (k == key) return v;
  return std::nullopt;
}

std::optional<std::int64_t> DeploymentParams::get(
    const std::string& name) const {
  auto it = bindings.find(name);
  if (it == bindings.end()) return std::nullopt;
  return it->second;
}

const char* diagnostic_kind_name(Diagnostic::Kind kind) {
  using K = Diagnostic::Kind;
  switch (kind) {
    case K::kUnknownReference: return "UnknownReference";
    case K::kReferenceCycle: return "ReferenceCycle";
    case K::kUnboundParameter: return "UnboundParameter";
    case K::kEmptyGate: return "EmptyGate";
    case K::kPartitionWithoutConstraint: return "PartitionWithoutConstraint";
    case K::kPartitionArity: return "PartitionArity";
    case K::kPartitionChild: return "PartitionChild";
    case K::kMalformedNode: return "MalformedNode";
    case K::kInvalidParams: return "InvalidParams";
  }
  return "?";
}

// Validation

namespace {

std::string path_text(const std::vector<int>& path) {
  return NodeId{"", path, {}}.path_str();
}

class Validator {
 public:
  explicit Validator(const TreeLibrary& lib) : lib_(lib) {}

  std::vector<Diagnostic> run() {
    for (const auto& [key, tree] : lib_.trees) {
      std::vector<int> path;
      visit(key, tree.root, path, false);
    }
    find_cycles();
    return std::move(out_);
  }

 private:
  void add(Diagnostic::Kind kind, const std::string& tree,
           const std::vector<int>& path, std::string msg,
           std::vector<std::string> related, const SourceSpan& span) {
    out_.push_back({kind, tree, path, std::move(msg), std::move(related), span});
  }

  void check_names(const std::string& tree, const std::vector<int>& path,
                   const IntExpr& expr, const SourceSpan& span) {
    for (const auto& name : expr.names()) {
      if (!lib_.declares(name))
        add(Diagnostic::Kind::kUnboundParameter, tree, path,
            "parameter '" + name + "' is used but not declared", {name}, span);
    }
  }

  void visit(const std::string& tree, const TreeNode& node,
             std::vector<int>& path, bool partition_child) {
    using K = Diagnostic::Kind;
    const std::string where = tree + ":" + path_text(path);
    if (node.reference && (node.gate || !node.children.empty()))
      add(K::kMalformedNode, tree, path,
          "node " + where + " has both a reference and children", {},
          node.span);
    if (!node.gate && !node.children.empty())
      add(K::kMalformedNode, tree, path,
          "node " + where + " has children but no gate", {}, node.span);
    if (node.constraint && node.gate != GateKind::kPartition)
      add(K::kMalformedNode, tree, path,
          "node " + where + " carries a constraint but is not a partition",
          {}, node.span);

    if (node.reference && !lib_.find(*node.reference))
      add(K::kUnknownReference, tree, path,
          "node " + where + " references unknown tree '" + *node.reference +
              "'",
          {*node.reference}, node.span);

    if (node.multiplicity && !partition_child)
      check_names(tree, path, *node.multiplicity, node.span);

    if (node.gate && node.children.empty())
      add(K::kEmptyGate, tree, path,
          "gate at " + where + " requires at least one child", {}, node.span);

    if (node.gate == GateKind::kPartition) check_partition(tree, node, path);

    for (std::size_t i = 0; i < node.children.size(); ++i) {
      path.push_back(static_cast<int>(i + 1));
      visit(tree, node.children[i], path,
            node.gate == GateKind::kPartition);
      path.pop_back();
    }
  }

  void check_partition(const std::string& tree, const TreeNode& node,
                       const std::vector<int>& path) {
    using K = Diagnostic::Kind;
    const std::string where = tree + ":" + path_text(path);
    if (!node.constraint) {
      add(K::kPartitionWithoutConstraint, tree, path,
          "partition at " + where + " has no constraint", {}, node.span);
      return;
    }
    const auto& vars = node.constraint->variables;
    check_names(tree, path, node.constraint->total, node.span);
    if (node.children.size() < 2)
      add(K::kPartitionArity, tree, path,
          "partition at " + where + " needs at least two alternatives", {},
          node.span);
    if (vars.size() != node.children.size())
      add(K::kPartitionArity, tree, path,
          "partition at " + where + " has " + std::to_string(vars.size()) +
              " count variables for " + std::to_string(node.children.size()) +
              " alternatives",
          {}, node.span);
    std::set<std::string> seen;
    for (const auto& v : vars)
      if (!seen.insert(v).second)
        add(K::kPartitionArity, tree, path,
            "partition at " + where + " repeats count variable '" + v + "'",
            {v}, node.span);
    std::set<std::string> used;
    for (std::size_t i = 0; i < node.children.size(); ++i) {
      const auto& child = node.children[i];
      std::optional<std::string> var;
      if (child.multiplicity) var = child.multiplicity->as_single_name();
      std::vector<int> cpath = path;
      cpath.push_back(static_cast<int>(i + 1));
      if (!var || std::find(vars.begin(), vars.end(), *var) == vars.end()) {
        add(K::kPartitionChild, tree, cpath,
            "alternative " + tree + ":" + path_text(cpath) +
                " must be replicated by exactly one count variable of " +
                node.constraint->str(),
            {}, child.span);
      } else if (!used.insert(*var).second) {
        add(K::kPartitionChild, tree, cpath,
            "count variable '" + *var + "' used by more than one alternative",
            {*var}, child.span);
      }
    }
  }

  static void collect_refs(const TreeNode& n, std::set<std::string>& out) {
    if (n.reference) out.insert(*n.reference);
    for (const auto& c : n.children) collect_refs(c, out);
  }

  void find_cycles() {
    std::map<std::string, std::set<std::string>> edges;
    for (const auto& [key, tree] : lib_.trees) collect_refs(tree.root, edges[key]);

    std::map<std::string, int> color;  // 0 new, 1 on stack, 2 done
    std::vector<std::string> stack;
    std::set<std::vector<std::string>> reported;

    std::function<void(const std::string&)> dfs = [&](const std::string& k) {
      color[k] = 1;
      stack.push_back(k);
      for (const auto& next : edges[k]) {
        if (!lib_.find(next)) continue;
        if (color[next] == 1) {
          auto it = std::find(stack.begin(), stack.end(), next);
          std::vector<std::string> cycle(it, stack.end());
          std::rotate(cycle.begin(),
                      std::min_element(cycle.begin(), cycle.end()),
                      cycle.end());
          if (reported.insert(cycle).second) {
            std::vector<std::string> related = cycle;
            related.push_back(cycle.front());
            std::string text;
            for (std::size_t i = 0; i < related.size(); ++i)
              text += (i ? "->" : "") + related[i];
            out_.push_back({Diagnostic::Kind::kReferenceCycle, cycle.front(),
                            {}, "reference cycle " + text, related,
                            lib_.find(cycle.front())->span});
          }
        } else if (color[next] == 0) {
          dfs(next);
        }
      }
      stack.pop_back();
      color[k] = 2;
    };
    for (const auto& [key, tree] : lib_.trees)
      if (color[key] == 0) dfs(key);
  }

  const TreeLibrary& lib_;
  std::vector<Diagnostic> out_;
};

void collect_params(const TreeNode& n, bool partition_child,
                    std::set<std::string>& out) {
  if (n.multiplicity && !partition_child)
    for (const auto& name : n.multiplicity->names()) out.insert(name);
  if (n.constraint)
    for (const auto& name : n.constraint->total.names()) out.insert(name);
  for (const auto& c : n.children)
    collect_params(c, n.gate == GateKind::kPartition, out);
}

}  // namespace

std::vector<Diagnostic> validate_library(const TreeLibrary& lib) {
  return Validator(lib).run();
}

std::set<std::string> reference_closure(const TreeLibrary& lib,
                                        const std::string& root_key) {
  if (!lib.find(root_key))
    throw Error(ErrorCode::kUnknownKey, "unknown tree '" + root_key + "'");
  std::set<std::string> seen{root_key};
  std::vector<std::string> work{root_key};
  std::function<void(const TreeNode&)> walk = [&](const TreeNode& n) {
    if (n.reference && lib.find(*n.reference) &&
        seen.insert(*n.reference).second)
      work.push_back(*n.reference);
    for (const auto& c : n.children) walk(c);
  };
  while (!work.empty()) {
    std::string k = work.back();
    work.pop_back();
    walk(lib.find(k)->root);
  }
  return seen;
}

std::set<std::string> required_parameters(const TreeLibrary& lib,
                                          const std::string& root_key) {
  std::set<std::string> out;
  for (const auto& key : reference_closure(lib, root_key))
    collect_params(lib.find(key)->root, false, out);
  return out;
}

std::vector<Diagnostic> check_params(const TreeLibrary& lib,
                                     const std::string& root_key,
                                     const DeploymentParams& params) {
  std::vector<Diagnostic> out;
  for (const auto& name : required_parameters(lib, root_key)) {
    if (!params.get(name))
      out.push_back({Diagnostic::Kind::kUnboundParameter, root_key, {},
                     "parameter '" + name + "' is not bound",
                     {name}, {}});
  }
  for (const auto& [name, value] : params.bindings) {
    if (value < 0)
      out.push_back({Diagnostic::Kind::kInvalidParams, root_key, {},
                     "parameter '" + name + "' is negative", {name}, {}});
  }
  auto k = params.get("K");
  auto m = params.get("M");
  if (k && m && *k > *m)
    out.push_back({Diagnostic::Kind::kInvalidParams, root_key, {},
                   "spend threshold K=" + std::to_string(*k) +
                       " exceeds manager count M=" + std::to_string(*m),
                   {"K", "M"}, {}});
  return out;
}

}  // namespace atrisk
