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

/// @file dsl.hpp
/// The `.atk` text format for tree libraries.
///
///   library    := { meta_decl | param_decl | tree_decl } ;
///   meta_decl  := "meta" IDENT STRING ";" ;
///   param_decl := "param" NAME [STRING] ";" ;
///   tree_decl  := "tree" KEY [STRING] ( node | "{" node "}" ) ;
///   node       := leaf | gate_node | ref_node ;
///   leaf       := "leaf" STRING [times] ";" ;
///   ref_node   := "ref" KEY [STRING] [times] ";" ;
///   gate_node  := ("or" | "and" | "sand" | "partition" "(" constraint ")")
///                 [STRING] [times] "{" node { node } "}" ;
///   times      := "times" "(" int_expr ")" ;
///   constraint := IDENT { "+" IDENT } "=" int_expr ;
///   int_expr   := term { ("+" | "-") term } ;
///   term       := INT | NAME ;
///   NAME       := IDENT | "|" IDENT "|" ;
///
/// `#` starts a comment that runs to the end of the line. Strings use `\"`,
/// `\\`, `\n`, `\t` and `\r` escapes.

#ifndef ATRISK_DSL_HPP_
#define ATRISK_DSL_HPP_

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "model.hpp"

namespace atrisk {

struct SourceDocument {
  std::string name;
  std::string text;
};

struct ParseDiagnostic {
  enum class Severity { kError, kWarning };
  Severity severity = Severity::kError;
  std::string message;
  SourceSpan span;

  bool operator==(const ParseDiagnostic&) const = default;
};

struct ParseResult {
  /// Present iff no diagnostic has error severity.
  std::optional<TreeLibrary> library;
  std::vector<ParseDiagnostic> diagnostics;
};

/// Parses and merges `docs` in lexicographic order of document name. Never
/// throws on malformed input: every problem becomes a diagnostic, and the
/// parser resumes at the next top-level declaration.
ParseResult parse_library(std::span<const SourceDocument> docs);

ParseResult parse_library(const std::string& name, const std::string& text);

/// Renders `lib` as a single document named `name`. Parsing the result
/// yields a library equal to `lib`.
std::vector<SourceDocument> serialize_library(
    const TreeLibrary& lib, const std::string& name = "library.atk");

/// Quotes and escapes `s` as a DSL string literal.
std::string quote_string(const std::string& s);

}  // namespace atrisk

#endif  // ATRISK_DSL_HPP_
