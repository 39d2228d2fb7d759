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

#include "corpus.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "error.hpp"
#include "expansion.hpp"

namespace atrisk {

namespace {

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() &&
         s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

}  // namespace

std::vector<SourceDocument> corpus_documents() {
  const char* dir = std::getenv(kCorpusDirEnv);
  if (!dir || !*dir) return bundled_corpus();
  namespace fs = std::filesystem;
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) {
    throw Error(ErrorCode::kIo, std::string(kCorpusDirEnv) + "=" + dir +
                                    " is not a directory");
  }
  std::vector<SourceDocument> docs;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    std::string name = entry.path().filename().string();
    if (!ends_with(name, ".atk") && name != "assumptions.txt") continue;
    std::ifstream in(entry.path(), std::ios::binary);
    if (!in) throw Error(ErrorCode::kIo, "cannot read " + entry.path().string());
    std::ostringstream ss;
    ss << in.rdbuf();
    docs.push_back({name, ss.str()});
  }
  std::sort(docs.begin(), docs.end(),
            [](const auto& a, const auto& b) { return a.name < b.name; });
  return docs;
}

TreeLibrary load_corpus() { return load_corpus(corpus_documents()); }

TreeLibrary load_corpus(const std::vector<SourceDocument>& docs) {
  std::vector<SourceDocument> atk;
  for (const auto& d : docs) {
    if (ends_with(d.name, ".atk")) atk.push_back(d);
  }
  if (atk.empty()) throw Error(ErrorCode::kIo, "corpus contains no .atk file");
  ParseResult parsed = parse_library(atk);
  if (!parsed.library) {
    const auto& d = parsed.diagnostics.front();
    throw Error(ErrorCode::kParse, d.span.str() + ": " + d.message);
  }
  auto diags = validate_library(*parsed.library);
  if (!diags.empty()) {
    throw Error(ErrorCode::kValidation,
                diags.front().tree + ": " + diags.front().message);
  }
  return std::move(*parsed.library);
}

CorpusManifest corpus_manifest(const std::vector<SourceDocument>& docs,
                               const TreeLibrary& lib) {
  CorpusManifest m;
  for (const auto& d : docs) {
    m.files.push_back(d.name);
    if (d.name != "assumptions.txt") continue;
    std::istringstream in(d.text);
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty() || line[0] == '#') continue;
      auto tab = line.find('\t');
      if (tab == std::string::npos) continue;
      m.assumptions.emplace_back(line.substr(0, tab), line.substr(tab + 1));
    }
  }
  m.params = lib.parameters;
  for (const auto& [key, tree] : lib.trees) m.trees.emplace_back(key, tree.title);
  m.version = lib.meta("version").value_or("");
  m.protocol_commit = lib.meta("protocol_commit").value_or("");
  return m;
}

std::vector<CorpusStatsRow> corpus_stats(const TreeLibrary& lib,
                                         const DeploymentParams& params) {
  std::vector<CorpusStatsRow> rows;
  for (const auto& [key, tree] : lib.trees) {
    CorpusStatsRow row;
    row.key = key;
    try {
      ExpandedTree t = expand(lib, key, params);
      row.nodes = t.size();
      row.leaves = t.leaves().size();
      row.scenarios = count_scenarios(t);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kZeroMultiplicityUnderConjunction) throw;
      row.satisfiable = false;
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string format_corpus_stats(const std::vector<CorpusStatsRow>& rows) {
  std::string out = "tree\tnodes\tleaves\tscenarios\n";
  for (const auto& r : rows) {
    out += r.key;
    if (!r.satisfiable) {
      out += "\tvacuous\tvacuous\tvacuous\n";
      continue;
    }
    out += "\t" + std::to_string(r.nodes) + "\t" + std::to_string(r.leaves) +
           "\t" + r.scenarios.str() + "\n";
  }
  return out;
}

}  // namespace atrisk
