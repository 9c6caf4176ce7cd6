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

#include "rewrite_probe/answer_metrics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>
#include <map>
#include <unordered_set>

#include "rewrite_probe/errors.hpp"

namespace rprobe {
namespace {

int parse_cutoff(std::string_view name, std::string_view digits) {
  int k = 0;
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), k);
  if (ec != std::errc() || ptr != digits.data() + digits.size() || k < 1) {
    throw UsageError("bad cutoff in metric \"" + std::string(name) + "\"");
  }
  return k;
}

double discount(std::size_t rank) { return 1.0 / std::log2(static_cast<double>(rank) + 1.0); }

}  // namespace

MetricId MetricId::parse(std::string_view name) {
  if (name == "span_f1" || name == "f1") return span_f1();
  auto at = name.find('@');
  if (at == std::string_view::npos) throw UsageError("unknown metric \"" + std::string(name) + "\"");
  auto head = name.substr(0, at);
  int k = parse_cutoff(name, name.substr(at + 1));
  if (head == "ndcg") return ndcg(k);
  if (head == "recall" || head == "r") return recall(k);
  if (head == "p") {
    if (k != 1) throw UsageError("only p@1 is supported");
    return precision_at_1();
  }
  throw UsageError("unknown metric \"" + std::string(name) + "\"");
}

std::string MetricId::str() const {
  switch (kind) {
    case Kind::kNdcg:
      return "ndcg@" + std::to_string(k);
    case Kind::kPrecision:
      return "p@" + std::to_string(k);
    case Kind::kRecall:
      return "recall@" + std::to_string(k);
    case Kind::kSpanF1:
      return "span_f1";
  }
  return "unknown";
}

std::string MetricId::display() const {
  switch (kind) {
    case Kind::kNdcg:
      return "NDCG@" + std::to_string(k);
    case Kind::kPrecision:
      return "P@" + std::to_string(k);
    case Kind::kRecall:
      return "R@" + std::to_string(k);
    case Kind::kSpanF1:
      return "F1";
  }
  return "?";
}

double ndcg_at_k(const RankedRun& run, const JudgmentSet& judgments, int k) {
  if (k < 1) throw UsageError("ndcg cutoff must be >= 1");
  if (run.entries.empty()) throw DataError("ndcg: empty run for qid " + run.qid);
  const auto depth = static_cast<std::size_t>(k);

  auto ideal = judgments.grades_for(run.qid);
  std::sort(ideal.begin(), ideal.end(), std::greater<>());
  if (ideal.empty() || ideal.front() <= 0) return 0.0;

  double idcg = 0.0;
  for (std::size_t i = 0; i < std::min(depth, ideal.size()); ++i) idcg += ideal[i] * discount(i + 1);

  double dcg = 0.0;
  for (std::size_t i = 0; i < std::min(depth, run.entries.size()); ++i) {
    dcg += judgments.grade(run.qid, run.entries[i].docid) * discount(i + 1);
  }
  return dcg / idcg;
}

double precision_at_1(const RankedRun& run, const JudgmentSet& judgments, int grade_threshold) {
  if (run.entries.empty()) throw DataError("p@1: empty run for qid " + run.qid);
  return judgments.grade(run.qid, run.entries.front().docid) >= grade_threshold ? 1.0 : 0.0;
}

double answer_set_recall(const RankedRun& reference, const RankedRun& candidate, int k) {
  if (k < 1) throw UsageError("recall cutoff must be >= 1");
  if (reference.entries.empty()) {
    throw UndefinedMetricError("answer-set recall: empty reference run for qid " + reference.qid);
  }
  const auto depth = static_cast<std::size_t>(k);
  std::unordered_set<std::string_view> top_candidate;
  for (std::size_t i = 0; i < std::min(depth, candidate.entries.size()); ++i) {
    top_candidate.insert(candidate.entries[i].docid);
  }
  const std::size_t ref_depth = std::min(depth, reference.entries.size());
  std::size_t shared = 0;
  for (std::size_t i = 0; i < ref_depth; ++i) shared += top_candidate.count(reference.entries[i].docid);
  return static_cast<double>(shared) / static_cast<double>(ref_depth);
}

double span_f1(std::string_view prediction, std::span<const std::string> golds,
               const TokenizationPolicy& policy) {
  if (golds.empty()) throw DataError("span F1: no gold answers");
  const auto pred = tokenize(prediction, policy);
  std::map<std::string, std::size_t> pred_counts;
  for (const auto& t : pred) ++pred_counts[t];

  double best = 0.0;
  for (const auto& gold : golds) {
    const auto ref = tokenize(gold, policy);
    if (pred.empty() || ref.empty()) {
      best = std::max(best, pred.empty() && ref.empty() ? 1.0 : 0.0);
      continue;
    }
    std::map<std::string, std::size_t> ref_counts;
    for (const auto& t : ref) ++ref_counts[t];
    std::size_t overlap = 0;
    for (const auto& [token, n] : ref_counts) {
      auto it = pred_counts.find(token);
      if (it != pred_counts.end()) overlap += std::min(n, it->second);
    }
    if (overlap == 0) continue;
    double precision = static_cast<double>(overlap) / static_cast<double>(pred.size());
    double recall = static_cast<double>(overlap) / static_cast<double>(ref.size());
    best = std::max(best, 2.0 * precision * recall / (precision + recall));
  }
  return best;
}

}  // namespace rprobe
