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

/// @file model.hpp
/// Attack-tree object model: libraries of named trees, gates, references,
/// multiplicities and deployment parameters.

#ifndef ATRISK_MODEL_HPP_
#define ATRISK_MODEL_HPP_

#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

namespace atrisk {

/// Location of a construct in a source document. Lines and columns are
/// 1-based; a default span means "no source".
struct SourceSpan {
  std::string file;
  int line_start = 0;
  int col_start = 0;
  int line_end = 0;
  int col_end = 0;

  std::string str() const;
  bool operator==(const SourceSpan&) const = default;
};

/// Identity of a node. Library nodes carry an empty tag list; expansion
/// appends one tag per reference or replication context so that copies of
/// the same sub-tree stay distinct.
struct NodeId {
  std::string library_key;
  std::vector<int> path;
  std::vector<std::string> instance_tags;

  /// "B:3#1/i:2/d:1.1" style rendering: tags, then key:path.
  std::string str() const;
  std::string path_str() const;

  auto operator<=>(const NodeId&) const = default;
  bool operator==(const NodeId&) const = default;
};

enum class GateKind { kOr, kAnd, kSand, kPartition };

const char* gate_name(GateKind kind);

/// Integer expression over literals, parameter names and partition count
/// variables, combined with + and -.
class IntExpr {
 public:
  struct Term {
    bool negative = false;
    std::variant<std::int64_t, std::string> value;
    bool operator==(const Term&) const = default;
  };

  IntExpr() = default;
  explicit IntExpr(std::vector<Term> terms) : terms_(std::move(terms)) {}
  static IntExpr literal(std::int64_t v);
  static IntExpr name(std::string n);

  const std::vector<Term>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }

  /// Names referenced by the expression, in order of appearance.
  std::vector<std::string> names() const;

  /// Evaluates with `lookup`, which returns nullopt for unbound names.
  /// Throws Error(kUnboundParameter) on the first unbound name.
  std::int64_t evaluate(
      const std::function<std::optional<std::int64_t>(const std::string&)>&
          lookup) const;

  /// Canonical text, e.g. "M-K+1" or "|D|".
  std::string str() const;

  /// True for a single name term, e.g. the "A" in times(A).
  std::optional<std::string> as_single_name() const;

  bool operator==(const IntExpr&) const = default;

 private:
  std::vector<Term> terms_;
};

/// Count variables of a PARTITION and the total they must sum to.
struct PartitionConstraint {
  std::vector<std::string> variables;
  IntExpr total;

  std::string str() const;
  bool operator==(const PartitionConstraint&) const = default;
};

/// A node of a library tree. Exactly one of: a reference, a gate over
/// children, or a plain leaf. Children order is significant.
struct TreeNode {
  std::string label;
  std::optional<GateKind> gate;
  std::optional<PartitionConstraint> constraint;
  std::vector<TreeNode> children;
  std::optional<std::string> reference;
  /// Absent means the default multiplicity of 1.
  std::optional<IntExpr> multiplicity;
  SourceSpan span;

  bool is_leaf() const { return !gate && !reference; }
  bool is_reference() const { return reference.has_value(); }

  static TreeNode leaf(std::string label);
  static TreeNode ref(std::string key, std::string label = {});
  static TreeNode gate_node(GateKind kind, std::vector<TreeNode> children,
                            std::string label = {});

  /// Structural equality; source spans are ignored.
  bool operator==(const TreeNode& other) const;
};

struct Tree {
  std::string key;
  std::string title;
  TreeNode root;
  SourceSpan span;

  bool operator==(const Tree& o) const {
    return key == o.key && title == o.title && root == o.root;
  }
};

struct ParamDecl {
  std::string name;
  std::string doc;
  SourceSpan span;

  bool operator==(const ParamDecl& o) const {
    return name == o.name && doc == o.doc;
  }
};

struct TreeLibrary {
  std::map<std::string, Tree> trees;
  /// Ordered as declared. Keys include title, version and notes.
  std::vector<std::pair<std::string, std::string>> metadata;
  std::vector<ParamDecl> parameters;

  const Tree* find(const std::string& key) const;
  bool declares(const std::string& param) const;
  std::optional<std::string> meta(const std::string& key) const;

  bool operator==(const TreeLibrary&) const = default;
};

struct DeploymentParams {
  std::map<std::string, std::int64_t> bindings;
  /// Funds at risk per root tree key.
  std::map<std::string, double> payoff;

  std::optional<std::int64_t> get(const std::string& name) const;
};

/// Finding produced by validation. Kinds mirror the model invariants.
struct Diagnostic {
  enum class Kind {
    kUnknownReference,
    kReferenceCycle,
    kUnboundParameter,
    kEmptyGate,
    kPartitionWithoutConstraint,
    kPartitionArity,
    kPartitionChild,
    kMalformedNode,
    kInvalidParams,
  };

  Kind kind;
  std::string tree;
  std::vector<int> path;
  std::string message;
  /// Extra operands: the unknown key, the cycle members, the parameter.
  std::vector<std::string> related;
  SourceSpan span;

  bool operator==(const Diagnostic& o) const {
    return kind == o.kind && tree == o.tree && path == o.path &&
           message == o.message && related == o.related;
  }
};

const char* diagnostic_kind_name(Diagnostic::Kind kind);

/// Checks every library invariant; returns one diagnostic per violation,
/// empty when the library is well-formed.
std::vector<Diagnostic> validate_library(const TreeLibrary& lib);

/// All keys reachable from `root_key` through references, root included.
/// Throws Error(kUnknownKey) if `root_key` is not in the library. Unknown
/// targets met on the way are skipped (validation reports them).
std::set<std::string> reference_closure(const TreeLibrary& lib,
                                        const std::string& root_key);

/// Parameter names used by multiplicities and partition totals of the trees
/// reachable from `root_key`. Partition count variables are excluded.
std::set<std::string> required_parameters(const TreeLibrary& lib,
                                          const std::string& root_key);

/// Checks `params` against what expanding `root_key` needs: every required
/// name bound, and K <= M when both are bound.
std::vector<Diagnostic> check_params(const TreeLibrary& lib,
                                     const std::string& root_key,
                                     const DeploymentParams& params);

}  // namespace atrisk

#endif  // ATRISK_MODEL_HPP_
