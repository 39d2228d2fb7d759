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

#include "atrisk/atrisk.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include <json.hpp>

#include "corpus.hpp"
#include "dsl.hpp"
#include "error.hpp"
#include "estimation.hpp"
#include "expansion.hpp"
#include "report.hpp"
#include "version.hpp"

struct atk_library {
  atrisk::TreeLibrary lib;
};

struct atk_expanded {
  atrisk::ExpandedTree tree;
};

namespace {

using atrisk::ErrorCode;
using nlohmann::json;

thread_local std::string g_last_error;

atk_status to_status(ErrorCode c) {
  switch (c) {
    case ErrorCode::kInvalidArgument: return ATK_ERR_INVALID_ARGUMENT;
    case ErrorCode::kIo: return ATK_ERR_IO;
    case ErrorCode::kParse: return ATK_ERR_PARSE;
    case ErrorCode::kValidation: return ATK_ERR_VALIDATION;
    case ErrorCode::kUnknownKey: return ATK_ERR_UNKNOWN_KEY;
    case ErrorCode::kUnboundParameter: return ATK_ERR_UNBOUND_PARAMETER;
    case ErrorCode::kInvalidMultiplicity: return ATK_ERR_INVALID_MULTIPLICITY;
    case ErrorCode::kZeroMultiplicityUnderConjunction:
      return ATK_ERR_ZERO_MULTIPLICITY;
    case ErrorCode::kMissingEstimate: return ATK_ERR_MISSING_ESTIMATE;
    case ErrorCode::kScenarioExplosion: return ATK_ERR_SCENARIO_EXPLOSION;
    case ErrorCode::kTooLarge: return ATK_ERR_TOO_LARGE;
    case ErrorCode::kInvalidDistribution: return ATK_ERR_INVALID_DISTRIBUTION;
  }
  return ATK_ERR_INTERNAL;
}

char* dup(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (!p) throw std::bad_alloc();
  std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

atk_status fail(atk_status st, const std::string& msg) {
  g_last_error = msg;
  return st;
}

// Runs `body`, translating exceptions into status codes.
template <typename F>
atk_status guarded(F&& body) {
  try {
    g_last_error.clear();
    return body();
  } catch (const atrisk::Error& e) {
    return fail(to_status(e.code()), e.what());
  } catch (const json::exception& e) {
    return fail(ATK_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::bad_alloc&) {
    return fail(ATK_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(ATK_ERR_INTERNAL, e.what());
  }
}

#define ATK_REQUIRE(cond, what)                                  \
  do {                                                           \
    if (!(cond)) return fail(ATK_ERR_INVALID_ARGUMENT, what);    \
  } while (0)

atrisk::DeploymentParams parse_params(const char* params_json) {
  atrisk::DeploymentParams p;
  if (!params_json || !*params_json) return p;
  json j = json::parse(params_json);
  if (!j.is_object()) {
    throw atrisk::Error(ErrorCode::kInvalidArgument,
                        "parameters must be a JSON object");
  }
  for (const auto& [k, v] : j.items()) {
    if (!v.is_number_integer()) {
      throw atrisk::Error(ErrorCode::kInvalidArgument,
                          "parameter '" + k + "' must be an integer");
    }
    p.bindings[k] = v.get<std::int64_t>();
  }
  return p;
}

json span_json(const atrisk::SourceSpan& s) {
  return {{"file", s.file},         {"line", s.line_start},
          {"column", s.col_start},  {"end_line", s.line_end},
          {"end_column", s.col_end}};
}

}  // namespace

extern "C" {

const char* atk_version(void) { return atrisk::kToolVersion; }

const char* atk_status_name(atk_status status) {
  switch (status) {
    case ATK_OK: return "ok";
    case ATK_ERR_FINDINGS: return "Findings";
    case ATK_ERR_INTERNAL: return "InternalError";
    default:
      if (status > ATK_OK && status < ATK_ERR_FINDINGS) {
        return atrisk::error_code_name(static_cast<ErrorCode>(status - 1));
      }
      return "Unknown";
  }
}

const char* atk_last_error(void) { return g_last_error.c_str(); }

void atk_string_free(char* s) { std::free(s); }

atk_status atk_library_parse(const char* const* names,
                             const char* const* texts, size_t count,
                             atk_library** out, char** diagnostics) {
  ATK_REQUIRE(out, "out is NULL");
  *out = nullptr;
  if (diagnostics) *diagnostics = nullptr;
  ATK_REQUIRE(count == 0 || (names && texts), "names or texts is NULL");
  return guarded([&]() -> atk_status {
    std::vector<atrisk::SourceDocument> docs;
    for (size_t i = 0; i < count; ++i) {
      ATK_REQUIRE(names[i] && texts[i], "NULL document");
      docs.push_back({names[i], texts[i]});
    }
    auto r = atrisk::parse_library(docs);
    json diags = json::array();
    for (const auto& d : r.diagnostics) {
      diags.push_back(
          {{"severity", d.severity == atrisk::ParseDiagnostic::Severity::kError
                            ? "error"
                            : "warning"},
           {"kind", "Parse"},
           {"message", d.message},
           {"span", span_json(d.span)}});
    }
    if (diagnostics) *diagnostics = dup(atrisk::dump_json(diags));
    if (!r.library) {
      const auto& d = r.diagnostics.front();
      return fail(ATK_ERR_PARSE, d.span.str() + ": " + d.message);
    }
    *out = new atk_library{std::move(*r.library)};
    return ATK_OK;
  });
}

atk_status atk_library_load_corpus(atk_library** out) {
  ATK_REQUIRE(out, "out is NULL");
  *out = nullptr;
  return guarded([&] {
    *out = new atk_library{atrisk::load_corpus()};
    return ATK_OK;
  });
}

void atk_library_free(atk_library* lib) { delete lib; }

atk_status atk_library_validate(const atk_library* lib, char** diagnostics) {
  ATK_REQUIRE(lib && diagnostics, "NULL argument");
  *diagnostics = nullptr;
  return guarded([&] {
    auto diags = atrisk::validate_library(lib->lib);
    json a = json::array();
    for (const auto& d : diags) {
      std::string path;
      for (std::size_t i = 0; i < d.path.size(); ++i) {
        path += (i ? "." : "") + std::to_string(d.path[i]);
      }
      a.push_back({{"severity", "error"},
                   {"kind", atrisk::diagnostic_kind_name(d.kind)},
                   {"tree", d.tree},
                   {"path", path},
                   {"message", d.message},
                   {"related", d.related},
                   {"span", span_json(d.span)}});
    }
    *diagnostics = dup(atrisk::dump_json(a));
    return diags.empty() ? ATK_OK : ATK_ERR_FINDINGS;
  });
}

atk_status atk_library_serialize(const atk_library* lib, char** out) {
  ATK_REQUIRE(lib && out, "NULL argument");
  *out = nullptr;
  return guarded([&] {
    std::string text;
    for (const auto& d : atrisk::serialize_library(lib->lib)) text += d.text;
    *out = dup(text);
    return ATK_OK;
  });
}

atk_status atk_library_trees(const atk_library* lib, char** out) {
  ATK_REQUIRE(lib && out, "NULL argument");
  *out = nullptr;
  return guarded([&] {
    json a = json::array();
    for (const auto& [key, t] : lib->lib.trees) {
      a.push_back({{"key", key}, {"title", t.title}});
    }
    *out = dup(atrisk::dump_json(a));
    return ATK_OK;
  });
}

atk_status atk_corpus_manifest(char** out) {
  ATK_REQUIRE(out, "out is NULL");
  *out = nullptr;
  return guarded([&] {
    auto docs = atrisk::corpus_documents();
    auto lib = atrisk::load_corpus(docs);
    auto m = atrisk::corpus_manifest(docs, lib);
    json params = json::array();
    for (const auto& p : m.params) {
      params.push_back({{"name", p.name}, {"doc", p.doc}});
    }
    json trees = json::array();
    for (const auto& [k, t] : m.trees) trees.push_back({{"key", k}, {"title", t}});
    json assumptions = json::array();
    for (const auto& [tag, s] : m.assumptions) {
      assumptions.push_back({{"tag", tag}, {"statement", s}});
    }
    json j = {{"files", m.files},         {"params", params},
              {"trees", trees},           {"assumptions", assumptions},
              {"version", m.version},     {"protocol_commit", m.protocol_commit}};
    *out = dup(atrisk::dump_json(j));
    return ATK_OK;
  });
}

atk_status atk_corpus_stats(const atk_library* lib, const char* params_json,
                            char** out) {
  ATK_REQUIRE(lib && out, "NULL argument");
  *out = nullptr;
  return guarded([&] {
    auto rows = atrisk::corpus_stats(lib->lib, parse_params(params_json));
    *out = dup(atrisk::format_corpus_stats(rows));
    return ATK_OK;
  });
}

atk_status atk_expand(const atk_library* lib, const char* root_key,
                      const char* params_json, atk_expanded** out) {
  ATK_REQUIRE(lib && root_key && out, "NULL argument");
  *out = nullptr;
  return guarded([&] {
    *out = new atk_expanded{
        atrisk::expand(lib->lib, root_key, parse_params(params_json))};
    return ATK_OK;
  });
}

void atk_expanded_free(atk_expanded* tree) { delete tree; }

size_t atk_expanded_node_count(const atk_expanded* tree) {
  return tree ? tree->tree.size() : 0;
}

size_t atk_expanded_leaf_count(const atk_expanded* tree) {
  return tree ? tree->tree.leaves().size() : 0;
}

atk_status atk_expanded_scenario_count(const atk_expanded* tree, char** out) {
  ATK_REQUIRE(tree && out, "NULL argument");
  *out = nullptr;
  return guarded([&] {
    *out = dup(atrisk::count_scenarios(tree->tree).str());
    return ATK_OK;
  });
}

atk_status atk_expanded_inventory(const atk_expanded* tree, char** out) {
  ATK_REQUIRE(tree && out, "NULL argument");
  *out = nullptr;
  return guarded([&] {
    std::string text;
    for (const auto& [id, label] : atrisk::leaf_inventory(tree->tree)) {
      text += id.str() + "\t" + label + "\n";
    }
    *out = dup(text);
    return ATK_OK;
  });
}

atk_status atk_expanded_to_dot(const atk_expanded* tree,
                               const char* profile_text, char** out) {
  ATK_REQUIRE(tree && out, "NULL argument");
  *out = nullptr;
  return guarded([&] {
    std::optional<atrisk::ExpandedTree> t = tree->tree;
    if (profile_text) {
      t = atrisk::prune(tree->tree, atrisk::AttackerProfile::parse(profile_text));
    }
    *out = dup(atrisk::to_dot(t, tree->tree.root_key()));
    return ATK_OK;
  });
}

atk_status atk_analyze(const atk_library* lib, const char* request_json,
                       char** report_json) {
  ATK_REQUIRE(lib && request_json && report_json, "NULL argument");
  *report_json = nullptr;
  return guarded([&] {
    auto req = atrisk::AnalysisRequest::from_json(json::parse(request_json));
    auto outcome = atrisk::analyze(lib->lib, req);
    *report_json = dup(atrisk::dump_json(outcome.report));
    if (!outcome.ok) {
      return fail(ATK_ERR_FINDINGS, "one or more queries failed");
    }
    return ATK_OK;
  });
}

atk_status atk_diff(const atk_library* lib, const char* request_json,
                    char** report_json) {
  ATK_REQUIRE(lib && request_json && report_json, "NULL argument");
  *report_json = nullptr;
  return guarded([&] {
    auto req = atrisk::DiffRequest::from_json(json::parse(request_json));
    *report_json = dup(atrisk::dump_json(atrisk::diff_report(lib->lib, req)));
    return ATK_OK;
  });
}

}  // extern "C"
