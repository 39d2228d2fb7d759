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

/// @file corpus.hpp
/// The Revault custody risk model shipped with the library.

#ifndef ATRISK_CORPUS_HPP_
#define ATRISK_CORPUS_HPP_

#include <string>
#include <utility>
#include <vector>

#include "dsl.hpp"
#include "model.hpp"
#include "scenarios.hpp"

namespace atrisk {

/// Environment variable naming a directory that replaces the bundled files.
inline constexpr const char* kCorpusDirEnv = "RISK_CORPUS_DIR";

/// Files compiled into the library (*.atk and assumptions.txt).
const std::vector<SourceDocument>& bundled_corpus();

/// The corpus files in use: every regular file of $RISK_CORPUS_DIR if set,
/// else the bundled copy. Throws Error(kIo).
std::vector<SourceDocument> corpus_documents();

/// Parses and validates the *.atk documents. Throws Error(kParse) or
/// Error(kValidation) with the first diagnostic.
TreeLibrary load_corpus();
TreeLibrary load_corpus(const std::vector<SourceDocument>& docs);

struct CorpusManifest {
  std::vector<std::string> files;
  std::vector<ParamDecl> params;
  /// (key, title) in key order.
  std::vector<std::pair<std::string, std::string>> trees;
  /// (tag, statement) preconditions of the model.
  std::vector<std::pair<std::string, std::string>> assumptions;
  std::string version;
  std::string protocol_commit;
};

CorpusManifest corpus_manifest(const std::vector<SourceDocument>& docs,
                               const TreeLibrary& lib);

struct CorpusStatsRow {
  std::string key;
  /// False when the tree has no scenario at these parameters (every
  /// alternative dropped, or a zero multiplicity under a conjunction).
  bool satisfiable = true;
  std::size_t nodes = 0;
  std::size_t leaves = 0;
  ScenarioCount scenarios = 0;
};

std::vector<CorpusStatsRow> corpus_stats(const TreeLibrary& lib,
                                         const DeploymentParams& params);

/// "tree<TAB>nodes<TAB>leaves<TAB>scenarios" with a header line; an
/// unsatisfiable tree shows "vacuous" in every column.
std::string format_corpus_stats(const std::vector<CorpusStatsRow>& rows);

}  // namespace atrisk

#endif  // ATRISK_CORPUS_HPP_
