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

/// @file estimation.hpp
/// Uncertain leaf estimates and what is done with them: tabular estimate,
/// profile and overlay files, attacker-profile pruning, Monte Carlo
/// propagation, conjugate Bayesian updates and countermeasure comparison.

#ifndef ATRISK_ESTIMATION_HPP_
#define ATRISK_ESTIMATION_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "aggregation.hpp"
#include "random.hpp"
#include "scenarios.hpp"

namespace atrisk {

class Distribution {
 public:
  enum class Kind { kPoint, kTriangular, kPert, kLognormal, kBeta };

  static Distribution point(double value);
  static Distribution triangular(double low, double mode, double high);
  static Distribution pert(double low, double mode, double high);
  /// Lognormal given its median and 90th percentile.
  static Distribution lognormal(double median, double p90);
  static Distribution beta(double alpha, double beta);

  /// Accepts "5", "inf", "true"/"false", "point(5)", "triangular(l,m,h)",
  /// "pert(l,m,h)", "lognormal(median,p90)" and "beta(a,b)". Throws
  /// Error(kInvalidDistribution).
  static Distribution parse(const std::string& text);

  Kind kind() const { return kind_; }
  const std::vector<double>& params() const { return params_; }

  /// Throws Error(kInvalidDistribution) if the parameters are inconsistent.
  void validate() const;
  double mean() const;
  double sample(CounterStream& rng) const;
  /// Lowest and highest value in the support.
  std::pair<double, double> support() const;

  std::string str() const;

  bool operator==(const Distribution&) const = default;

 private:
  Distribution(Kind kind, std::vector<double> params)
      : kind_(kind), params_(std::move(params)) {}

  Kind kind_ = Kind::kPoint;
  std::vector<double> params_;
};

/// A distribution followed by an affine transform, which is how overlays
/// scale or shift estimates.
struct Estimate {
  Distribution dist = Distribution::point(0);
  double scale = 1;
  double shift = 0;

  /// Value used by deterministic queries: the transformed mean.
  double nominal() const { return scale * dist.mean() + shift; }
  double sample(CounterStream& rng) const {
    return scale * dist.sample(rng) + shift;
  }
  bool operator==(const Estimate&) const = default;
};

/// attribute -> leaf -> estimate
using EstimateMap = std::map<std::string, std::map<NodeId, Estimate>>;

/// Clamps into the attribute's range: [0, 1] for probability and
/// feasibility, [0, inf] for cost and time.
double clamp_to_domain(const std::string& attribute, double v);

/// Leaf pattern: a shell glob matched against the leaf label and against
/// the rendered NodeId (tags included).
bool matches(const std::string& pattern, const ExpandedNode& leaf);

struct EstimateRow {
  std::string pattern;
  std::string attribute;
  Distribution dist;
  int line = 0;
};

/// Rows of "pattern<TAB>attribute<TAB>distribution". Later rows override
/// earlier ones for the leaves they match.
struct EstimateTable {
  std::vector<EstimateRow> rows;

  /// Throws Error(kParse) with the line number.
  static EstimateTable parse(const std::string& text);

  /// Assigns each leaf the last matching row per attribute. Rows that match
  /// nothing produce a warning.
  EstimateMap resolve(const ExpandedTree& tree,
                      std::vector<std::string>* warnings = nullptr) const;
};

/// Nominal, clamped point values for deterministic queries.
AttributeValues nominal_values(const EstimateMap& est);

struct AttackerProfile {
  std::string name;
  std::vector<std::string> excluded_leaves;
  struct Override {
    std::string pattern;
    std::string attribute;
    Distribution dist;
  };
  std::vector<Override> attribute_overrides;
  std::optional<double> budget;
  std::string notes;

  /// "name", "budget", "exclude", "override" and "notes" rows.
  static AttackerProfile parse(const std::string& text);
};

/// Removes excluded leaves. An OR left without children disappears; an
/// AND/SAND losing any child is unsatisfiable and disappears too. Returns
/// nullopt when the root itself becomes unsatisfiable.
std::optional<ExpandedTree> prune(const ExpandedTree& tree,
                                  const AttackerProfile& profile,
                                  std::vector<std::string>* warnings = nullptr);

/// Replaces estimates with the profile's overrides, in declaration order.
EstimateMap apply_profile(const EstimateMap& est, const ExpandedTree& tree,
                          const AttackerProfile& profile);

struct CountermeasureOverlay {
  struct Modification {
    enum class Op { kScale, kAdd, kSet };
    Op op = Op::kScale;
    std::string pattern;
    std::string attribute;
    double value = 0;
    Distribution dist = Distribution::point(0);
  };
  std::string name;
  std::vector<Modification> modifications;
  std::string notes;

  /// "name", "notes", "scale", "add" and "set" rows.
  static CountermeasureOverlay parse(const std::string& text);
};

/// Applies modifications in declaration order. Scale and add compose onto
/// the existing estimate; set replaces it.
EstimateMap apply_overlay(const EstimateMap& est, const ExpandedTree& tree,
                          const CountermeasureOverlay& overlay);

struct MonteCarloSummary {
  std::string domain;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  std::string generator = kGeneratorName;
  double mean = 0;
  double sd = 0;
  double p5 = 0;
  double p50 = 0;
  double p95 = 0;
  double min = 0;
  double max = 0;
  /// (x, P(value > x)) at evenly spaced x from min to max.
  std::vector<std::pair<double, double>> exceedance;
};

/// Samples every leaf independently per trial and aggregates. Results are
/// identical for any `threads` value.
MonteCarloSummary monte_carlo(const ExpandedTree& tree, const EstimateMap& est,
                              const AttributeDomain& domain,
                              std::size_t trials, std::uint64_t seed,
                              unsigned threads = 1);

/// Beta distribution kept as prior plus integer evidence, so updates in
/// any batching give identical results.
struct BetaParams {
  double prior_alpha = 1;
  double prior_beta = 1;
  std::uint64_t successes = 0;
  std::uint64_t failures = 0;

  double alpha() const { return prior_alpha + static_cast<double>(successes); }
  double beta() const { return prior_beta + static_cast<double>(failures); }
  double mean() const { return alpha() / (alpha() + beta()); }
  Distribution distribution() const { return Distribution::beta(alpha(), beta()); }
  bool operator==(const BetaParams&) const = default;
};

BetaParams bayes_update(const BetaParams& prior, std::uint64_t successes,
                        std::uint64_t failures);

struct DiffOptions {
  TimeModel time_model = TimeModel::kParallel;
  /// Funds at risk; enables the expected pay-off column.
  std::optional<double> gain;
};

struct DiffRow {
  std::string name;
  double min_cost = 0;
  std::optional<double> min_time;
  double success_prob = 0;
  AttackScenario cheapest;
  AttackScenario most_likely;
  /// Better pay-off of the cheapest and the most likely attack.
  std::optional<double> expected_payoff;
};

/// Baseline row followed by one row per overlay, each recomputed from
/// scratch.
std::vector<DiffRow> diff_analysis(
    const ExpandedTree& tree, const EstimateMap& est,
    const std::vector<CountermeasureOverlay>& overlays,
    const DiffOptions& opts = {});

}  // namespace atrisk

#endif  // ATRISK_ESTIMATION_HPP_
