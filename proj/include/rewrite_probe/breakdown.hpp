// Copyright 2026 The rewrite-probe Authors.
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

#ifndef REWRITE_PROBE_BREAKDOWN_HPP_
#define REWRITE_PROBE_BREAKDOWN_HPP_

#include <array>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rewrite_probe/answer_metrics.hpp"
#include "rewrite_probe/errors.hpp"
#include "rewrite_probe/types.hpp"

namespace rprobe {

enum class Comparator { kGreater, kAtLeast, kEquals };

inline constexpr double kCompareTolerance = 1e-9;

// "<metric><cmp><threshold>" with cmp one of >, >=, =.
struct CorrectnessRule {
  MetricId metric;
  Comparator comparator = Comparator::kAtLeast;
  double threshold = 0.0;

  // Throws UsageError on bad syntax or a threshold outside [0, 1].
  static CorrectnessRule parse(std::string_view text);
  // Comma-separated list of rules.
  static std::vector<CorrectnessRule> parse_list(std::string_view text);

  bool accepts(double value) const;
  // Canonical mini-grammar form, e.g. "ndcg@3>=0.5".
  std::string str() const;
  // Column heading, e.g. "NDCG@3 ≥ 0.5".
  std::string label() const;
};

// Correctness of (original, model, human). Bin index = original + 2*model + 4*human,
// so bins 0..3 are the human-incorrect rows and 4..7 the human-correct rows.
struct OutcomePattern {
  bool original_correct = false;
  bool model_correct = false;
  bool human_correct = false;

  static OutcomePattern from_bin(int bin);
  // Accepts three symbols, each one of ✓/v/1 (correct) or ×/x/0 (incorrect).
  static OutcomePattern parse(std::string_view symbols);

  int bin() const { return int(original_correct) + 2 * int(model_correct) + 4 * int(human_correct); }
  // "×✓✓" style, in original, model, human order.
  std::string symbols() const;

  friend bool operator==(const OutcomePattern&, const OutcomePattern&) = default;
};

// One question's metric values, keyed by metric. Variant values that are
// absent are NaN.
struct EvaluatedSample {
  std::string qid;
  bool human_equals_original = false;
  std::map<MetricId, VariantScores> scores;
};

// Throws DataError naming qid and variant when a value is missing.
OutcomePattern evaluate_correctness(const std::string& qid, const VariantScores& values,
                                    const CorrectnessRule& rule);

struct BreakdownColumn {
  std::string label;  // rule heading
  std::string key;    // rule mini-grammar form
  std::array<std::size_t, 8> counts{};
  std::array<std::size_t, 8> subcounts{};  // Human = Original among counts
};

struct BreakdownTable {
  std::vector<BreakdownColumn> columns;
  std::size_t total = 0;
  std::size_t total_human_equals_original = 0;
};

// Counts samples per bin for every rule. Samples flagged Human = Original
// whose original and human outcomes differ are reported in warnings; for a
// deterministic backend over identical texts this cannot happen.
BreakdownTable build_breakdown(std::span<const EvaluatedSample> samples,
                               std::span<const CorrectnessRule> rules,
                               Warnings* warnings = nullptr,
                               Execution exec = Execution::kParallel);
// A question already classified under a set of rules.
// fixtures take this form).
struct OutcomeRecord {
  std::string qid;
  bool human_equals_original = false;
  // (rule key, pattern) in file order.
  std::vector<std::pair<std::string, OutcomePattern>> outcomes;

  const OutcomePattern* find(std::string_view rule_key) const;
};

// JSON-lines {qid, human_equals_original, outcomes:{"<rule>": "×✓✓", ...}}.
// Every record must classify under the same rule keys.
std::vector<OutcomeRecord> parse_outcome_records(std::istream& in);

// Columns follow the rule-key order of the first record unless rule_keys
// is given.
BreakdownTable build_breakdown(std::span<const OutcomeRecord> records,
                               std::vector<std::string> rule_keys = {});

enum class ImpactScope { kAll, kHumanDiffers };

// Share of human-answerable questions the original question already answers:
// bins {5,7} over bins {4,5,6,7}; with kHumanDiffers the Human = Original
// subcounts are removed from every bin involved.
double rewriting_impact_fraction(const BreakdownColumn& column, ImpactScope scope);

struct RegionCounts {
  std::size_t qa_error = 0;
  std::size_t qr_error = 0;
  std::size_t correct_with_rewriting = 0;
  std::size_t correct_without_rewriting = 0;

  std::size_t total() const {
    return qa_error + qr_error + correct_with_rewriting + correct_without_rewriting;
  }
  void add(const OutcomePattern& p);
  friend bool operator==(const RegionCounts&, const RegionCounts&) = default;
};

struct SweepPoint {
  double threshold = 0.0;
  double qa_error = 0.0;
  double qr_error = 0.0;
  double correct_with_rewriting = 0.0;
  double correct_without_rewriting = 0.0;
};

struct SweepSeries {
  double step = 0.02;
  std::size_t samples = 0;
  std::vector<SweepPoint> points;
};

// Thresholds 0, step, 2*step, ... up to 1.
std::vector<double> threshold_grid(double step);

// The rule applied at one sweep threshold: "> 0" at t = 0, ">= t" elsewhere.
CorrectnessRule sweep_rule(const MetricId& metric, double threshold);

// Region proportions per grid threshold. Throws UsageError unless 0 < step <= 1.
SweepSeries threshold_sweep(std::span<const VariantScores> values, double step,
                            const MetricId& metric = MetricId::ndcg(3),
                            Execution exec = Execution::kParallel);

}  // namespace rprobe

#endif  // REWRITE_PROBE_BREAKDOWN_HPP_
