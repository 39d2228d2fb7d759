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

// Command-line front end. Talks to the engine only through atrisk.h.
//
// Exit codes: 0 success, 1 findings (diagnostics, failed queries, analysis
// errors), 2 usage or I/O errors.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "atrisk/atrisk.h"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitFindings = 1;
constexpr int kExitUsage = 2;

// Carries an exit code to main().
struct Exit {
  int code;
};

struct CString {
  char* p = nullptr;
  ~CString() { atk_string_free(p); }
  std::string str() const { return p ? p : ""; }
};

using Library = std::unique_ptr<atk_library, decltype(&atk_library_free)>;
using Expanded = std::unique_ptr<atk_expanded, decltype(&atk_expanded_free)>;

[[noreturn]] void die(int code, const std::string& msg) {
  std::cerr << "atrisk: " << msg << "\n";
  throw Exit{code};
}

int exit_for(atk_status st) {
  return st == ATK_ERR_IO || st == ATK_ERR_INVALID_ARGUMENT ? kExitUsage
                                                            : kExitFindings;
}

[[noreturn]] void die_status(atk_status st) {
  die(exit_for(st), std::string(atk_status_name(st)) + ": " + atk_last_error());
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) die(kExitUsage, "cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::string& out_path, const std::string& text) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out || !(out << text)) die(kExitUsage, "cannot write '" + out_path + "'");
}

// "k=v" pairs, split at the last '=' so keys like "|D|" need no escaping.
json parse_params(const std::vector<std::string>& kvs) {
  json j = json::object();
  for (const auto& kv : kvs) {
    auto eq = kv.rfind('=');
    if (eq == std::string::npos || eq == 0) {
      die(kExitUsage, "parameter '" + kv + "' is not of the form NAME=VALUE");
    }
    std::string value = kv.substr(eq + 1);
    std::size_t used = 0;
    long long v = 0;
    try {
      v = std::stoll(value, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != value.size()) {
      die(kExitUsage, "parameter '" + kv + "' needs an integer value");
    }
    j[kv.substr(0, eq)] = v;
  }
  return j;
}

Library load_library(const std::vector<std::string>& files) {
  atk_library* lib = nullptr;
  if (files.empty()) {
    atk_status st = atk_library_load_corpus(&lib);
    if (st != ATK_OK) die_status(st);
    return Library(lib, atk_library_free);
  }
  std::vector<std::string> texts;
  for (const auto& f : files) texts.push_back(read_file(f));
  std::vector<const char*> names, ptrs;
  for (std::size_t i = 0; i < files.size(); ++i) {
    names.push_back(files[i].c_str());
    ptrs.push_back(texts[i].c_str());
  }
  CString diags;
  atk_status st =
      atk_library_parse(names.data(), ptrs.data(), files.size(), &lib, &diags.p);
  if (st != ATK_OK) die_status(st);
  return Library(lib, atk_library_free);
}

struct Common {
  std::vector<std::string> library;
  std::vector<std::string> params;
  std::string out;
};

void add_common(CLI::App* cmd, Common& c, bool with_params = true) {
  cmd->add_option("--library", c.library,
                  "DSL files to use instead of the corpus");
  if (with_params) {
    cmd->add_option("--params", c.params,
                    "deployment parameters NAME=VALUE (quote keys like \"|D|\")");
  }
  cmd->add_option("--out", c.out, "write output here instead of stdout");
}

int cmd_validate(const std::vector<std::string>& files, const std::string& format) {
  std::vector<std::string> texts;
  for (const auto& f : files) texts.push_back(read_file(f));
  atk_library* raw = nullptr;
  CString parse_diags;
  atk_status st;
  if (files.empty()) {
    st = atk_library_load_corpus(&raw);
  } else {
    std::vector<const char*> names, ptrs;
    for (std::size_t i = 0; i < files.size(); ++i) {
      names.push_back(files[i].c_str());
      ptrs.push_back(texts[i].c_str());
    }
    st = atk_library_parse(names.data(), ptrs.data(), files.size(), &raw,
                           &parse_diags.p);
  }
  Library lib(raw, atk_library_free);
  json diags = json::array();
  if (st == ATK_ERR_PARSE && parse_diags.p) {
    diags = json::parse(parse_diags.str());
  } else if (st != ATK_OK) {
    diags.push_back({{"severity", "error"},
                     {"kind", atk_status_name(st)},
                     {"message", atk_last_error()}});
  } else {
    CString v;
    st = atk_library_validate(lib.get(), &v.p);
    if (st != ATK_OK && st != ATK_ERR_FINDINGS) die_status(st);
    diags = json::parse(v.str());
  }
  bool errors = false;
  for (const auto& d : diags) errors |= d.value("severity", "error") == "error";
  if (format == "json") {
    std::cerr << diags.dump(2) << "\n";
  } else {
    for (const auto& d : diags) {
      std::string where;
      if (d.contains("span") && d["span"].value("line", 0) > 0) {
        where = d["span"].value("file", "") + ":" +
                std::to_string(d["span"].value("line", 0)) + ":" +
                std::to_string(d["span"].value("column", 0)) + ": ";
      } else if (d.contains("tree")) {
        where = d.value("tree", "") + ": ";
      }
      std::cerr << where << d.value("severity", "error") << ": "
                << d.value("message", "") << "\n";
    }
  }
  return errors ? kExitFindings : kExitOk;
}

Expanded expand_root(const Library& lib, const std::string& root,
                     const json& params) {
  atk_expanded* raw = nullptr;
  atk_status st = atk_expand(lib.get(), root.c_str(), params.dump().c_str(), &raw);
  if (st != ATK_OK) die_status(st);
  return Expanded(raw, atk_expanded_free);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Attack-tree risk analysis"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(atk_version()));

  // validate
  std::vector<std::string> v_files;
  std::string v_format = "text";
  auto* validate = app.add_subcommand(
      "validate", "Check DSL files (default: the corpus); diagnostics on stderr");
  validate->add_option("files", v_files, "DSL files");
  validate->add_option("--format", v_format)->check(CLI::IsMember({"text", "json"}));

  // analyze
  Common a;
  std::string a_root, a_estimates, a_profile, a_time_model = "parallel";
  std::vector<std::string> a_overlays, a_queries;
  std::uint64_t a_seed = 0;
  unsigned a_threads = 1;
  std::size_t a_cap = 100000;
  auto* analyze = app.add_subcommand("analyze", "Run queries and print a JSON report");
  analyze->add_option("root", a_root, "tree key")->required();
  add_common(analyze, a);
  analyze->add_option("--estimates", a_estimates, "estimate file");
  analyze->add_option("--profile", a_profile, "attacker profile file");
  analyze->add_option("--overlay", a_overlays, "countermeasure overlay file");
  analyze->add_option("--query", a_queries,
                      "aggregate:<domain> | cheapest | most-likely | "
                      "budget[:<amount>] | pareto | payoff:<gain> | "
                      "montecarlo:<domain>:<trials>")
      ->required();
  analyze->add_option("--seed", a_seed, "Monte Carlo seed");
  analyze->add_option("--threads", a_threads, "Monte Carlo worker threads")
      ->check(CLI::Range(1u, 256u));
  analyze->add_option("--time-model", a_time_model)
      ->check(CLI::IsMember({"parallel", "lone-attacker"}));
  analyze->add_option("--cap", a_cap, "scenario enumeration cap");

  // export-dot
  Common d;
  std::string d_root, d_profile;
  auto* dot = app.add_subcommand("export-dot", "Render the expanded tree as DOT");
  dot->add_option("root", d_root, "tree key")->required();
  add_common(dot, d);
  dot->add_option("--profile", d_profile, "prune with this attacker profile");

  // diff
  Common f;
  std::string f_root, f_estimates, f_format = "text", f_time_model = "parallel";
  std::vector<std::string> f_overlays;
  double f_gain = 0;
  auto* diff = app.add_subcommand("diff", "Compare countermeasure overlays");
  diff->add_option("root", f_root, "tree key")->required();
  add_common(diff, f);
  diff->add_option("--estimates", f_estimates, "estimate file")->required();
  diff->add_option("--overlay", f_overlays, "overlay file");
  auto* gain_opt = diff->add_option("--gain", f_gain, "funds at risk");
  diff->add_option("--format", f_format)->check(CLI::IsMember({"text", "json"}));
  diff->add_option("--time-model", f_time_model)
      ->check(CLI::IsMember({"parallel", "lone-attacker"}));

  // stats
  Common s;
  auto* stats = app.add_subcommand("stats", "Node, leaf and scenario counts per tree");
  add_common(stats, s);

  // inventory
  Common n;
  std::string n_root;
  auto* inventory = app.add_subcommand(
      "inventory", "List expanded leaves (id<TAB>label), a template for estimates");
  inventory->add_option("root", n_root, "tree key")->required();
  add_common(inventory, n);

  // manifest
  std::string m_out;
  auto* manifest = app.add_subcommand("manifest", "Describe the corpus in use (JSON)");
  manifest->add_option("--out", m_out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*validate) return cmd_validate(v_files, v_format);

    if (*analyze) {
      Library lib = load_library(a.library);
      json req = {{"root", a_root},
                  {"params", parse_params(a.params)},
                  {"estimates", a_estimates.empty() ? "" : read_file(a_estimates)},
                  {"queries", a_queries},
                  {"seed", a_seed},
                  {"threads", a_threads},
                  {"time_model", a_time_model},
                  {"cap", a_cap}};
      if (!a_profile.empty()) req["profile"] = read_file(a_profile);
      json overlays = json::array();
      for (const auto& o : a_overlays) overlays.push_back(read_file(o));
      req["overlays"] = overlays;
      CString report;
      atk_status st = atk_analyze(lib.get(), req.dump().c_str(), &report.p);
      if (!report.p) die_status(st);
      write_output(a.out, report.str());
      return st == ATK_OK ? kExitOk : kExitFindings;
    }

    if (*dot) {
      Library lib = load_library(d.library);
      Expanded t = expand_root(lib, d_root, parse_params(d.params));
      std::string profile = d_profile.empty() ? "" : read_file(d_profile);
      CString text;
      atk_status st = atk_expanded_to_dot(
          t.get(), d_profile.empty() ? nullptr : profile.c_str(), &text.p);
      if (st != ATK_OK) die_status(st);
      write_output(d.out, text.str());
      return kExitOk;
    }

    if (*diff) {
      Library lib = load_library(f.library);
      json req = {{"root", f_root},
                  {"params", parse_params(f.params)},
                  {"estimates", read_file(f_estimates)},
                  {"time_model", f_time_model}};
      json overlays = json::array();
      for (const auto& o : f_overlays) overlays.push_back(read_file(o));
      req["overlays"] = overlays;
      if (*gain_opt) req["gain"] = f_gain;
      CString report;
      atk_status st = atk_diff(lib.get(), req.dump().c_str(), &report.p);
      if (st != ATK_OK) die_status(st);
      if (f_format == "json") {
        write_output(f.out, report.str());
      } else {
        write_output(f.out, json::parse(report.str())["text"].get<std::string>());
      }
      return kExitOk;
    }

    if (*stats) {
      Library lib = load_library(s.library);
      CString text;
      atk_status st =
          atk_corpus_stats(lib.get(), parse_params(s.params).dump().c_str(), &text.p);
      if (st != ATK_OK) die_status(st);
      write_output(s.out, text.str());
      return kExitOk;
    }

    if (*inventory) {
      Library lib = load_library(n.library);
      Expanded t = expand_root(lib, n_root, parse_params(n.params));
      CString text;
      atk_status st = atk_expanded_inventory(t.get(), &text.p);
      if (st != ATK_OK) die_status(st);
      write_output(n.out, text.str());
      return kExitOk;
    }

    if (*manifest) {
      CString text;
      atk_status st = atk_corpus_manifest(&text.p);
      if (st != ATK_OK) die_status(st);
      write_output(m_out, text.str());
      return kExitOk;
    }
  } catch (const Exit& e) {
    return e.code;
  }
  return kExitUsage;
}
