/*
 * Copyright 2026 The atrisk Authors. All Rights Reserved.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/*
 * C interface of the atrisk attack-tree engine.
 *
 * Conventions:
 *   - Every function returning atk_status leaves a message for
 *     atk_last_error() on failure (thread-local, valid until the next call
 *     on the same thread).
 *   - Strings returned through char** are heap-allocated, NUL-terminated
 *     UTF-8 and must be released with atk_string_free().
 *   - Output pointers are set to NULL on failure unless stated otherwise.
 *   - Parameter sets are JSON objects mapping names to integers, e.g.
 *     {"N": 3, "|D|": 1}.
 */

#ifndef ATRISK_ATRISK_H_
#define ATRISK_ATRISK_H_

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define ATK_API __declspec(dllexport)
#else
#define ATK_API __attribute__((visibility("default")))
#endif

typedef enum atk_status {
  ATK_OK = 0,
  ATK_ERR_INVALID_ARGUMENT = 1,
  ATK_ERR_IO = 2,
  ATK_ERR_PARSE = 3,
  ATK_ERR_VALIDATION = 4,
  ATK_ERR_UNKNOWN_KEY = 5,
  ATK_ERR_UNBOUND_PARAMETER = 6,
  ATK_ERR_INVALID_MULTIPLICITY = 7,
  ATK_ERR_ZERO_MULTIPLICITY = 8,
  ATK_ERR_MISSING_ESTIMATE = 9,
  ATK_ERR_SCENARIO_EXPLOSION = 10,
  ATK_ERR_TOO_LARGE = 11,
  ATK_ERR_INVALID_DISTRIBUTION = 12,
  /* The call produced its output but it reports failures (a query error,
   * validation diagnostics). */
  ATK_ERR_FINDINGS = 13,
  ATK_ERR_INTERNAL = 14
} atk_status;

typedef struct atk_library atk_library;
typedef struct atk_expanded atk_expanded;

ATK_API const char* atk_version(void);
ATK_API const char* atk_status_name(atk_status status);
ATK_API const char* atk_last_error(void);
ATK_API void atk_string_free(char* s);

/* Parses and merges `count` documents. On ATK_ERR_PARSE `*diagnostics`
 * (if non-NULL) receives a JSON array of parse diagnostics. */
ATK_API atk_status atk_library_parse(const char* const* names,
                                     const char* const* texts, size_t count,
                                     atk_library** out, char** diagnostics);

/* Bundled corpus, or the files in $RISK_CORPUS_DIR. */
ATK_API atk_status atk_library_load_corpus(atk_library** out);

ATK_API void atk_library_free(atk_library* lib);

/* JSON array of validation diagnostics; ATK_ERR_FINDINGS when non-empty. */
ATK_API atk_status atk_library_validate(const atk_library* lib,
                                        char** diagnostics);

/* Canonical DSL text of the whole library. */
ATK_API atk_status atk_library_serialize(const atk_library* lib, char** out);

/* JSON array of {"key", "title"}. */
ATK_API atk_status atk_library_trees(const atk_library* lib, char** out);

/* JSON manifest of the corpus in use: files, params, trees, assumptions,
 * version, protocol_commit. */
ATK_API atk_status atk_corpus_manifest(char** out);

/* Tab-separated node, leaf and scenario counts for every tree. */
ATK_API atk_status atk_corpus_stats(const atk_library* lib,
                                    const char* params_json, char** out);

ATK_API atk_status atk_expand(const atk_library* lib, const char* root_key,
                              const char* params_json, atk_expanded** out);

ATK_API void atk_expanded_free(atk_expanded* tree);

ATK_API size_t atk_expanded_node_count(const atk_expanded* tree);
ATK_API size_t atk_expanded_leaf_count(const atk_expanded* tree);

/* Decimal scenario count (arbitrary precision). */
ATK_API atk_status atk_expanded_scenario_count(const atk_expanded* tree,
                                               char** out);

/* "id<TAB>label" per leaf in pre-order: a template for estimate files. */
ATK_API atk_status atk_expanded_inventory(const atk_expanded* tree,
                                          char** out);

/* Graphviz DOT. With a non-NULL `profile_text` the tree is pruned first
 * and may render as a single "infeasible" node. */
ATK_API atk_status atk_expanded_to_dot(const atk_expanded* tree,
                                       const char* profile_text, char** out);

/* Runs an analysis request (JSON) and returns the report (JSON). Returns
 * ATK_ERR_FINDINGS with a complete report when some query failed.
 *
 * Request keys: "root" (required), "queries" (required, array of query
 * strings), "params" (object of integers), "payoff" (object: root key ->
 * funds at risk), "estimates", "profile" and "overlays" (file contents),
 * "seed", "threads", "time_model" ("parallel" or "lone-attacker"), "cap",
 * "timestamp". */
ATK_API atk_status atk_analyze(const atk_library* lib,
                               const char* request_json, char** report_json);

/* Countermeasure comparison; the report carries a "text" table.
 *
 * Request keys: "root", "params", "payoff", "estimates", "overlays",
 * "gain", "time_model", "timestamp". */
ATK_API atk_status atk_diff(const atk_library* lib, const char* request_json,
                            char** report_json);

#ifdef __cplusplus
}
#endif

#endif /* ATRISK_ATRISK_H_ */
