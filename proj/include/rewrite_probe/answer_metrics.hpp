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

#ifndef REWRITE_PROBE_ANSWER_METRICS_HPP_
#define REWRITE_PROBE_ANSWER_METRICS_HPP_

#include <compare>
#include <span>
#include <string>
#include <string_view>

#include "rewrite_probe/similarity.hpp"
#include "rewrite_probe/types.hpp"

namespace rprobe {

// Identifies a QA metric, e.g. "ndcg@3", "p@1", "recall@1000", "span_f1".
struct MetricId {
  enum class Kind { kNdcg, kPrecision, kRecall, kSpanF1 };

  Kind kind = Kind::kNdcg;
  int k = 0;  // cutoff; 0 for span_f1

  static MetricId ndcg(int k) { return {Kind::kNdcg, k}; }
  static MetricId precision_at_1() { return {Kind::kPrecision, 1}; }
  static MetricId recall(int k) { return {Kind::kRecall, k}; }
  static MetricId span_f1() { return {Kind::kSpanF1, 0}; }

  // Throws UsageError on unknown names. Accepts "f1" as span_f1.
  static MetricId parse(std::string_view name);

  std::string str() const;
  // Column heading style: "NDCG@3", "P@1", "R@1000", "F1".
  std::string display() const;

  friend auto operator<=>(const MetricId&, const MetricId&) = default;
};

struct MetricValue {
  std::string qid;
  Variant variant = Variant::kOriginal;
  MetricId metric;
  double value = 0.0;
};

struct CutoffConfig {
  int ndcg_k = 3;
  int recall_k = 1000;
  int binarization_grade = JudgmentSet::kDefaultBinarizationGrade;
};

// Graded gains (gain = grade), log2(rank + 1) discount. The ideal ranking is
// built from the qid's judged grades only; 0 when no judged grade is positive.
double ndcg_at_k(const RankedRun& run, const JudgmentSet& judgments, int k);

// 1 when the top document's grade reaches the binarization grade.
double precision_at_1(const RankedRun& run, const JudgmentSet& judgments, int grade_threshold);

// Fraction of the reference run's top-k docids also in the candidate's top-k.
double answer_set_recall(const RankedRun& reference, const RankedRun& candidate, int k);

// Max over golds of token-overlap F1. Both token lists empty gives 1.0,
// exactly one empty gives 0.0.
double span_f1(std::string_view prediction, std::span<const std::string> golds,
               const TokenizationPolicy& policy = {});

}  // namespace rprobe

#endif  // REWRITE_PROBE_ANSWER_METRICS_HPP_
