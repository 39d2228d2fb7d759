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

#include "estimation.hpp"

#include <fnmatch.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>
#include <thread>

#include "error.hpp"

namespace atrisk {

namespace {

// z such that Phi(z) = 0.9.
constexpr double kZ90 = 1.2815515655446004;

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

std::string fmt(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

// Strict: the whole (trimmed) string must be a number or +-inf.
std::optional<double> parse_number(const std::string& text) {
  std::string t = lower(trim(text));
  if (t == "inf" || t == "+inf" || t == "infinity") {
    return std::numeric_limits<double>::infinity();
  }
  if (t.empty()) return std::nullopt;
  const char* begin = t.data();
  if (*begin == '+') ++begin;
  double v = 0;
  auto r = std::from_chars(begin, t.data() + t.size(), v);
  if (r.ec != std::errc() || r.ptr != t.data() + t.size()) return std::nullopt;
  return v;
}

double gamma_sample(double shape, CounterStream& rng) {
  // Marsaglia and Tsang; shapes below 1 are boosted by u^(1/shape).
  if (shape < 1) {
    double u = rng.uniform();
    return gamma_sample(shape + 1, rng) * std::pow(u, 1 / shape);
  }
  double d = shape - 1.0 / 3.0;
  double c = 1 / std::sqrt(9 * d);
  for (;;) {
    double x = rng.normal();
    double v = 1 + c * x;
    if (v <= 0) continue;
    v = v * v * v;
    double u = rng.uniform();
    if (std::log(u) < 0.5 * x * x + d - d * v + d * std::log(v)) return d * v;
  }
}

double beta_sample(double a, double b, CounterStream& rng) {
  double x = gamma_sample(a, rng);
  double y = gamma_sample(b, rng);
  return x / (x + y);
}

struct Line {
  int number;
  std::vector<std::string> fields;
};

// Tab-separated rows; '#' starts a comment line, blank lines are skipped.
std::vector<Line> split_rows(const std::string& text) {
  std::vector<Line> out;
  std::istringstream in(text);
  std::string raw;
  int n = 0;
  while (std::getline(in, raw)) {
    ++n;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    std::string t = trim(raw);
    if (t.empty() || t[0] == '#') continue;
    Line line{n, {}};
    std::size_t start = 0;
    for (;;) {
      std::size_t tab = raw.find('\t', start);
      line.fields.push_back(trim(std::string_view(raw).substr(
          start, tab == std::string::npos ? std::string::npos : tab - start)));
      if (tab == std::string::npos) break;
      start = tab + 1;
    }
    while (!line.fields.empty() && line.fields.back().empty()) {
      line.fields.pop_back();
    }
    out.push_back(std::move(line));
  }
  return out;
}

[[noreturn]] void row_error(const Line& l, const std::string& msg) {
  throw Error(ErrorCode::kParse, "line " + std::to_string(l.number) + ": " + msg);
}

void expect_fields(const Line& l, std::size_t n, const char* shape) {
  if (l.fields.size() != n) {
    row_error(l, std::string("expected ") + shape);
  }
}

Distribution parse_dist_at(const Line& l, const std::string& text) {
  try {
    return Distribution::parse(text);
  } catch (const Error& e) {
    row_error(l, e.what());
  }
}

double parse_value_at(const Line& l, const std::string& text) {
  auto v = parse_number(text);
  if (!v) row_error(l, "not a number: '" + text + "'");
  return *v;
}

bool is_known_attribute(const std::string& a) {
  return a == attr::kCost || a == attr::kTime || a == attr::kProbability ||
         a == attr::kFeasible;
}

void check_attribute(const Line& l, const std::string& a) {
  if (!is_known_attribute(a)) {
    row_error(l, "unknown attribute '" + a +
                     "' (expected cost, time, probability or feasible)");
  }
}

}  // namespace

// --- Distribution ---------------------------------------------------------

Distribution Distribution::point(double value) {
  return Distribution(Kind::kPoint, {value});
}
Distribution Distribution::triangular(double low, double mode, double high) {
  return Distribution(Kind::kTriangular, {low, mode, high});
}
Distribution Distribution::pert(double low, double mode, double high) {
  return Distribution(Kind::kPert, {low, mode, high});
}
Distribution Distribution::lognormal(double median, double p90) {
  return Distribution(Kind::kLognormal, {median, p90});
}
Distribution Distribution::beta(double alpha, double beta) {
  return Distribution(Kind::kBeta, {alpha, beta});
}

Distribution Distribution::parse(const std::string& text) {
  std::string t = lower(trim(text));
  if (t == "true") return point(1);
  if (t == "false") return point(0);
  if (auto v = parse_number(t)) return point(*v);

  auto open = t.find('(');
  if (open == std::string::npos || t.back() != ')') {
    throw Error(ErrorCode::kInvalidDistribution,
                "cannot parse distribution '" + text + "'");
  }
  std::string kind = trim(std::string_view(t).substr(0, open));
  std::vector<double> args;
  std::string inner = t.substr(open + 1, t.size() - open - 2);
  std::size_t start = 0;
  for (;;) {
    std::size_t comma = inner.find(',', start);
    std::string item = inner.substr(
        start, comma == std::string::npos ? std::string::npos : comma - start);
    auto v = parse_number(item);
    if (!v) {
      throw Error(ErrorCode::kInvalidDistribution,
                  "bad parameter '" + trim(item) + "' in '" + text + "'");
    }
    args.push_back(*v);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  struct Shape {
    const char* name;
    Kind kind;
    std::size_t arity;
  };
  static constexpr Shape kShapes[] = {
      {"point", Kind::kPoint, 1},         {"triangular", Kind::kTriangular, 3},
      {"pert", Kind::kPert, 3},           {"lognormal", Kind::kLognormal, 2},
      {"beta", Kind::kBeta, 2},
  };
  for (const Shape& s : kShapes) {
    if (kind != s.name) continue;
    if (args.size() != s.arity) {
      throw Error(ErrorCode::kInvalidDistribution,
                  kind + " takes " + std::to_string(s.arity) + " parameters");
    }
    Distribution d(s.kind, std::move(args));
    d.validate();
    return d;
  }
  throw Error(ErrorCode::kInvalidDistribution,
              "unknown distribution '" + kind + "'");
}

void Distribution::validate() const {
  auto fail = [&](const std::string& why) {
    throw Error(ErrorCode::kInvalidDistribution, str() + ": " + why);
  };
  for (double p : params_) {
    if (std::isnan(p)) fail("NaN parameter");
  }
  switch (kind_) {
    case Kind::kPoint:
      break;
    case Kind::kTriangular:
    case Kind::kPert:
      if (!(params_[0] <= params_[1] && params_[1] <= params_[2])) {
        fail("requires low <= mode <= high");
      }
      if (std::isinf(params_[0]) || std::isinf(params_[2])) {
        fail("bounds must be finite");
      }
      break;
    case Kind::kLognormal:
      if (!(params_[0] > 0 && params_[1] >= params_[0]) ||
          std::isinf(params_[1])) {
        fail("requires 0 < median <= p90 < inf");
      }
      break;
    case Kind::kBeta:
      if (!(params_[0] > 0 && params_[1] > 0) || std::isinf(params_[0]) ||
          std::isinf(params_[1])) {
        fail("requires alpha, beta > 0");
      }
      break;
  }
}

double Distribution::mean() const {
  const auto& p = params_;
  switch (kind_) {
    case Kind::kPoint:
      return p[0];
    case Kind::kTriangular:
      return (p[0] + p[1] + p[2]) / 3;
    case Kind::kPert:
      return (p[0] + 4 * p[1] + p[2]) / 6;
    case Kind::kLognormal: {
      double sigma = std::log(p[1] / p[0]) / kZ90;
      return p[0] * std::exp(0.5 * sigma * sigma);
    }
    case Kind::kBeta:
      return p[0] / (p[0] + p[1]);
  }
  return 0;
}

double Distribution::sample(CounterStream& rng) const {
  const auto& p = params_;
  switch (kind_) {
    case Kind::kPoint:
      return p[0];
    case Kind::kTriangular: {
      double lo = p[0], m = p[1], hi = p[2];
      if (hi == lo) return lo;
      double u = rng.uniform();
      double fm = (m - lo) / (hi - lo);
      if (u < fm) return lo + std::sqrt(u * (hi - lo) * (m - lo));
      return hi - std::sqrt((1 - u) * (hi - lo) * (hi - m));
    }
    case Kind::kPert: {
      double lo = p[0], m = p[1], hi = p[2];
      if (hi == lo) return lo;
      double a = 1 + 4 * (m - lo) / (hi - lo);
      double b = 1 + 4 * (hi - m) / (hi - lo);
      return lo + (hi - lo) * beta_sample(a, b, rng);
    }
    case Kind::kLognormal: {
      double sigma = std::log(p[1] / p[0]) / kZ90;
      return p[0] * std::exp(sigma * rng.normal());
    }
    case Kind::kBeta:
      return beta_sample(p[0], p[1], rng);
  }
  return 0;
}

std::pair<double, double> Distribution::support() const {
  const auto& p = params_;
  switch (kind_) {
    case Kind::kPoint:
      return {p[0], p[0]};
    case Kind::kTriangular:
    case Kind::kPert:
      return {p[0], p[2]};
    case Kind::kLognormal:
      return {0, std::numeric_limits<double>::infinity()};
    case Kind::kBeta:
      return {0, 1};
  }
  return {0, 0};
}

std::string Distribution::str() const {
  static constexpr const char* kNames[] = {"point", "triangular", "pert",
                                           "lognormal", "beta"};
  std::string s = kNames[static_cast<int>(kind_)];
  s += '(';
  for (std::size_t i = 0; i < params_.size(); ++i) {
    if (i) s += ", ";
    s += fmt(params_[i]);
  }
  return s + ')';
}

// --- Estimates ------------------------------------------------------------

double clamp_to_domain(const std::string& attribute, double v) {
  if (attribute == attr::kProbability || attribute == attr::kFeasible) {
    return std::clamp(v, 0.0, 1.0);
  }
  return std::max(v, 0.0);
}

bool matches(const std::string& pattern, const ExpandedNode& leaf) {
  return fnmatch(pattern.c_str(), leaf.label.c_str(), 0) == 0 ||
         fnmatch(pattern.c_str(), leaf.id.str().c_str(), 0) == 0;
}

EstimateTable EstimateTable::parse(const std::string& text) {
  EstimateTable t;
  for (const Line& l : split_rows(text)) {
    expect_fields(l, 3, "pattern<TAB>attribute<TAB>distribution");
    check_attribute(l, l.fields[1]);
    t.rows.push_back({l.fields[0], l.fields[1], parse_dist_at(l, l.fields[2]),
                      l.number});
  }
  return t;
}

namespace {

void warn_range(const std::string& attribute, const Distribution& d,
                const std::string& where, std::vector<std::string>* warnings) {
  if (!warnings) return;
  auto [lo, hi] = d.support();
  bool unit = attribute == attr::kProbability || attribute == attr::kFeasible;
  if ((unit && (lo < 0 || hi > 1)) || (!unit && lo < 0)) {
    warnings->push_back(where + ": " + d.str() + " leaves the " + attribute +
                        " range; samples are clamped");
  }
}

}  // namespace

EstimateMap EstimateTable::resolve(const ExpandedTree& tree,
                                   std::vector<std::string>* warnings) const {
  EstimateMap out;
  for (const EstimateRow& row : rows) {
    warn_range(row.attribute, row.dist, "line " + std::to_string(row.line),
               warnings);
    bool any = false;
    for (std::size_t i : tree.leaves()) {
      const ExpandedNode& leaf = tree.node(i);
      if (!matches(row.pattern, leaf)) continue;
      out[row.attribute][leaf.id] = Estimate{row.dist};
      any = true;
    }
    if (!any && warnings) {
      warnings->push_back("line " + std::to_string(row.line) + ": pattern '" +
                          row.pattern + "' matches no leaf of " +
                          tree.root_key());
    }
  }
  return out;
}

AttributeValues nominal_values(const EstimateMap& est) {
  AttributeValues out;
  for (const auto& [attribute, leaves] : est) {
    LeafValues& dst = out[attribute];
    for (const auto& [id, e] : leaves) {
      dst.emplace(id, clamp_to_domain(attribute, e.nominal()));
    }
  }
  return out;
}

// --- Profiles ---------------------------------------------------------------

AttackerProfile AttackerProfile::parse(const std::string& text) {
  AttackerProfile p;
  for (const Line& l : split_rows(text)) {
    const std::string& kw = l.fields[0];
    if (kw == "name") {
      expect_fields(l, 2, "name<TAB>text");
      p.name = l.fields[1];
    } else if (kw == "notes") {
      expect_fields(l, 2, "notes<TAB>text");
      if (!p.notes.empty()) p.notes += '\n';
      p.notes += l.fields[1];
    } else if (kw == "budget") {
      expect_fields(l, 2, "budget<TAB>amount");
      double b = parse_value_at(l, l.fields[1]);
      if (b < 0) row_error(l, "budget must be >= 0");
      p.budget = b;
    } else if (kw == "exclude") {
      expect_fields(l, 2, "exclude<TAB>pattern");
      p.excluded_leaves.push_back(l.fields[1]);
    } else if (kw == "override") {
      expect_fields(l, 4, "override<TAB>pattern<TAB>attribute<TAB>distribution");
      check_attribute(l, l.fields[2]);
      p.attribute_overrides.push_back(
          {l.fields[1], l.fields[2], parse_dist_at(l, l.fields[3])});
    } else {
      row_error(l, "unknown profile row '" + kw + "'");
    }
  }
  return p;
}

std::optional<ExpandedTree> prune(const ExpandedTree& tree,
                                  const AttackerProfile& profile,
                                  std::vector<std::string>* warnings) {
  std::vector<bool> hit(profile.excluded_leaves.size(), false);
  auto excluded = [&](const ExpandedNode& leaf) {
    bool out = false;
    for (std::size_t k = 0; k < profile.excluded_leaves.size(); ++k) {
      if (matches(profile.excluded_leaves[k], leaf)) {
        hit[k] = true;
        out = true;
      }
    }
    return out;
  };
  auto build = [&](auto&& self, std::size_t i) -> std::optional<NodeSpec> {
    const ExpandedNode& n = tree.node(i);
    NodeSpec spec{n.id, n.label, n.gate, {}};
    if (n.is_leaf()) {
      if (excluded(n)) return std::nullopt;
      return spec;
    }
    // Visit every child so that pattern hits are recorded consistently.
    bool broken = false;
    for (std::size_t c : n.children) {
      auto child = self(self, c);
      if (child) {
        spec.children.push_back(std::move(*child));
      } else if (*n.gate != GateKind::kOr) {
        broken = true;
      }
    }
    if (broken || spec.children.empty()) return std::nullopt;
    return spec;
  };
  auto root = build(build, 0);
  if (warnings) {
    for (std::size_t k = 0; k < hit.size(); ++k) {
      if (!hit[k]) {
        warnings->push_back("profile '" + profile.name + "': pattern '" +
                            profile.excluded_leaves[k] +
                            "' matches no leaf of " + tree.root_key());
      }
    }
  }
  if (!root) return std::nullopt;
  return flatten(tree.root_key(), tree.params(), *root);
}

EstimateMap apply_profile(const EstimateMap& est, const ExpandedTree& tree,
                          const AttackerProfile& profile) {
  EstimateMap out = est;
  for (const auto& o : profile.attribute_overrides) {
    for (std::size_t i : tree.leaves()) {
      const ExpandedNode& leaf = tree.node(i);
      if (matches(o.pattern, leaf)) out[o.attribute][leaf.id] = Estimate{o.dist};
    }
  }
  return out;
}

// --- Overlays ---------------------------------------------------------------

CountermeasureOverlay CountermeasureOverlay::parse(const std::string& text) {
  using Op = Modification::Op;
  CountermeasureOverlay o;
  for (const Line& l : split_rows(text)) {
    const std::string& kw = l.fields[0];
    if (kw == "name") {
      expect_fields(l, 2, "name<TAB>text");
      o.name = l.fields[1];
    } else if (kw == "notes") {
      expect_fields(l, 2, "notes<TAB>text");
      if (!o.notes.empty()) o.notes += '\n';
      o.notes += l.fields[1];
    } else if (kw == "scale" || kw == "add" || kw == "set") {
      expect_fields(l, 4, "op<TAB>pattern<TAB>attribute<TAB>value");
      check_attribute(l, l.fields[2]);
      Modification m;
      m.pattern = l.fields[1];
      m.attribute = l.fields[2];
      if (kw == "set") {
        m.op = Op::kSet;
        m.dist = parse_dist_at(l, l.fields[3]);
      } else {
        m.op = kw == "scale" ? Op::kScale : Op::kAdd;
        m.value = parse_value_at(l, l.fields[3]);
        if (std::isinf(m.value) && m.op == Op::kScale) {
          row_error(l, "scale factor must be finite; use set for inf");
        }
      }
      o.modifications.push_back(std::move(m));
    } else {
      row_error(l, "unknown overlay row '" + kw + "'");
    }
  }
  return o;
}

EstimateMap apply_overlay(const EstimateMap& est, const ExpandedTree& tree,
                          const CountermeasureOverlay& overlay) {
  using Op = CountermeasureOverlay::Modification::Op;
  EstimateMap out = est;
  for (const auto& m : overlay.modifications) {
    for (std::size_t i : tree.leaves()) {
      const ExpandedNode& leaf = tree.node(i);
      if (!matches(m.pattern, leaf)) continue;
      auto& slot = out[m.attribute];
      if (m.op == Op::kSet) {
        slot[leaf.id] = Estimate{m.dist};
        continue;
      }
      auto it = slot.find(leaf.id);
      if (it == slot.end()) continue;  // nothing to modify
      Estimate& e = it->second;
      if (m.op == Op::kScale) {
        e.scale *= m.value;
        e.shift *= m.value;
      } else {
        e.shift += m.value;
      }
    }
  }
  return out;
}

// --- Monte Carlo ------------------------------------------------------------

namespace {

double quantile(const std::vector<double>& sorted, double q) {
  double h = (static_cast<double>(sorted.size()) - 1) * q;
  auto lo = static_cast<std::size_t>(std::floor(h));
  std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  double frac = h - static_cast<double>(lo);
  if (frac == 0) return sorted[lo];
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

constexpr int kExceedancePoints = 21;

}  // namespace

MonteCarloSummary monte_carlo(const ExpandedTree& tree, const EstimateMap& est,
                              const AttributeDomain& domain,
                              std::size_t trials, std::uint64_t seed,
                              unsigned threads) {
  if (trials == 0) {
    throw Error(ErrorCode::kInvalidArgument, "trials must be positive");
  }
  const auto& leaves = tree.leaves();
  std::vector<const Estimate*> leaf_est(leaves.size(), nullptr);
  std::optional<Estimate> fallback;
  if (domain.leaf_default) fallback = Estimate{Distribution::point(*domain.leaf_default)};
  auto slot = est.find(domain.attribute);
  std::vector<std::string> missing;
  for (std::size_t k = 0; k < leaves.size(); ++k) {
    const ExpandedNode& leaf = tree.node(leaves[k]);
    if (slot != est.end()) {
      auto it = slot->second.find(leaf.id);
      if (it != slot->second.end()) {
        it->second.dist.validate();
        leaf_est[k] = &it->second;
        continue;
      }
    }
    if (fallback) {
      leaf_est[k] = &*fallback;
    } else {
      missing.push_back(leaf.id.str());
    }
  }
  if (!missing.empty()) throw MissingEstimateError(domain.attribute, missing);

  std::vector<std::size_t> leaf_pos(tree.size(), 0);
  for (std::size_t k = 0; k < leaves.size(); ++k) leaf_pos[leaves[k]] = k;

  std::vector<double> results(trials);
  auto run = [&](std::size_t begin, std::size_t end) {
    std::vector<double> value(tree.size());
    std::vector<double> scratch;
    for (std::size_t t = begin; t < end; ++t) {
      for (std::size_t i = tree.size(); i-- > 0;) {
        const ExpandedNode& n = tree.node(i);
        if (n.is_leaf()) {
          auto k = leaf_pos[i];
          CounterStream rng(seed, t, static_cast<std::uint32_t>(k));
          value[i] = clamp_to_domain(domain.attribute, leaf_est[k]->sample(rng));
          continue;
        }
        scratch.clear();
        for (std::size_t c : n.children) scratch.push_back(value[c]);
        value[i] = domain.combiner(*n.gate).combine(scratch);
      }
      results[t] = value[0];
    }
  };
  unsigned workers = std::max(1u, std::min<unsigned>(
      threads, static_cast<unsigned>(std::min<std::size_t>(trials, 1024))));
  if (workers == 1) {
    run(0, trials);
  } else {
    std::vector<std::thread> pool;
    std::size_t chunk = (trials + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
      std::size_t b = std::min(trials, w * chunk);
      std::size_t e = std::min(trials, b + chunk);
      pool.emplace_back(run, b, e);
    }
    for (auto& th : pool) th.join();
  }

  MonteCarloSummary s;
  s.domain = domain.name;
  s.trials = trials;
  s.seed = seed;
  // Welford in trial order: identical samples give mean == sample, sd == 0.
  double mean = 0, m2 = 0;
  for (std::size_t t = 0; t < trials; ++t) {
    double x = results[t];
    double delta = x - mean;
    mean += delta / static_cast<double>(t + 1);
    m2 += delta * (x - mean);
  }
  s.mean = mean;
  s.sd = trials > 1 ? std::sqrt(m2 / static_cast<double>(trials - 1)) : 0;

  std::vector<double> sorted = results;
  std::sort(sorted.begin(), sorted.end());
  s.min = sorted.front();
  s.max = sorted.back();
  s.p5 = quantile(sorted, 0.05);
  s.p50 = quantile(sorted, 0.50);
  s.p95 = quantile(sorted, 0.95);
  int points = s.min == s.max || !std::isfinite(s.max - s.min) ? 1 : kExceedancePoints;
  for (int k = 0; k < points; ++k) {
    double x = points == 1 ? s.min
                           : s.min + (s.max - s.min) * k / (points - 1);
    auto above = sorted.end() - std::upper_bound(sorted.begin(), sorted.end(), x);
    s.exceedance.emplace_back(x, static_cast<double>(above) /
                                     static_cast<double>(trials));
  }
  return s;
}

BetaParams bayes_update(const BetaParams& prior, std::uint64_t successes,
                        std::uint64_t failures) {
  BetaParams out = prior;
  out.successes += successes;
  out.failures += failures;
  return out;
}

// --- Differential analysis --------------------------------------------------

std::vector<DiffRow> diff_analysis(
    const ExpandedTree& tree, const EstimateMap& est,
    const std::vector<CountermeasureOverlay>& overlays,
    const DiffOptions& opts) {
  auto row_for = [&](const std::string& name, const EstimateMap& e) {
    AttributeValues values = nominal_values(e);
    DiffRow row;
    row.name = name;
    row.min_cost = aggregate(tree, AttributeDomain::min_cost(),
                             values[attr::kCost]).root;
    row.success_prob = aggregate(tree, AttributeDomain::success_prob(),
                                 values[attr::kProbability]).root;
    try {
      row.min_time = aggregate(tree, AttributeDomain::min_time(opts.time_model),
                               values[attr::kTime]).root;
    } catch (const MissingEstimateError&) {
      // time is optional
    }
    ScenarioOptions so;
    so.time_model = opts.time_model;
    row.cheapest = cheapest_attack(tree, values, so);
    row.most_likely = most_likely_attack(tree, values, so);
    if (opts.gain) {
      row.expected_payoff =
          std::max(expected_payoff(row.cheapest, *opts.gain),
                   expected_payoff(row.most_likely, *opts.gain));
    }
    return row;
  };
  std::vector<DiffRow> rows;
  rows.push_back(row_for("baseline", est));
  for (const auto& o : overlays) {
    rows.push_back(row_for(o.name, apply_overlay(est, tree, o)));
  }
  return rows;
}

}  // namespace atrisk
