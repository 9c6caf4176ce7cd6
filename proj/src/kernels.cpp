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

#include "rewrite_probe/kernels.hpp"

#include <cmath>
#include <limits>

#include "rewrite_probe/errors.hpp"

namespace rprobe::kernels {
namespace {

constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();

std::uint8_t bin_of(const VariantScores& v, const CorrectnessRule& rule) {
  return static_cast<std::uint8_t>(int(rule.accepts(v[0])) + 2 * int(rule.accepts(v[1])) +
                                   4 * int(rule.accepts(v[2])));
}

// First sample (by index) with a missing value, or size when there is none.
std::size_t first_missing(std::span<const VariantScores> values) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    for (double x : values[i]) {
      if (std::isnan(x)) return i;
    }
  }
  return values.size();
}

[[noreturn]] void throw_missing(std::span<const VariantScores> values, std::span<const std::string> qids,
                                std::size_t i, const MetricId& metric) {
  std::string qid = i < qids.size() ? qids[i] : "#" + std::to_string(i);
  for (Variant v : kAllVariants) {
    if (std::isnan(values[i][static_cast<std::size_t>(v)])) {
      throw DataError("qid " + qid + ": no " + metric.str() + " value for " + std::string(to_string(v)));
    }
  }
  throw DataError("qid " + qid + ": missing value");
}

const RankedRun* find_run(const RunSet* runs, const std::string& qid) {
  if (runs == nullptr) return nullptr;
  auto it = runs->find(qid);
  return it == runs->end() ? nullptr : &it->second;
}

RetrievalScores retrieval_one(const std::string& qid, const RetrievalInputs& in) {
  RetrievalScores s;
  s.ndcg.fill(kMissing);
  s.precision_at_1.fill(kMissing);
  for (Variant v : kAllVariants) {
    const RankedRun* run = find_run(in.runs[v], qid);
    if (run == nullptr || run->entries.empty()) continue;
    const auto slot = static_cast<std::size_t>(v);
    s.ndcg[slot] = ndcg_at_k(*run, *in.judgments, in.cutoffs.ndcg_k);
    s.precision_at_1[slot] = precision_at_1(*run, *in.judgments, in.cutoffs.binarization_grade);
  }
  return s;
}

VariantScores reading_one(const std::string& qid, const ReadingInputs& in) {
  VariantScores f1;
  f1.fill(kMissing);
  auto gold = in.gold->find(qid);
  if (gold == in.gold->end()) return f1;
  for (Variant v : kAllVariants) {
    const SpanPredictionSet* spans = in.spans[v];
    if (spans == nullptr) continue;
    auto it = spans->find(qid);
    if (it == spans->end()) continue;
    f1[static_cast<std::size_t>(v)] = span_f1(it->second, gold->second, in.policy);
  }
  return f1;
}

}  // namespace

void ErrorSlot::capture(std::size_t index) {
#pragma omp critical(rprobe_error_slot)
  {
    if (!error_ || index < index_) {
      index_ = index;
      error_ = std::current_exception();
    }
  }
}

void ErrorSlot::rethrow_if_set() const {
  if (error_) std::rethrow_exception(error_);
}

namespace serial {

std::vector<std::uint8_t> classify(std::span<const VariantScores> values, std::span<const std::string> qids,
                                   const CorrectnessRule& rule) {
  std::vector<std::uint8_t> bins(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    for (double x : values[i]) {
      if (std::isnan(x)) throw_missing(values, qids, i, rule.metric);
    }
    bins[i] = bin_of(values[i], rule);
  }
  return bins;
}

BinTally tally(std::span<const std::uint8_t> bins, std::span<const std::uint8_t> human_equals_original) {
  BinTally t;
  for (std::size_t i = 0; i < bins.size(); ++i) {
    ++t.counts[bins[i]];
    if (human_equals_original[i]) ++t.subcounts[bins[i]];
  }
  return t;
}

std::vector<RegionCounts> sweep_counts(std::span<const VariantScores> values, std::span<const double> thresholds,
                                       const MetricId& metric) {
  if (auto bad = first_missing(values); bad < values.size()) throw_missing(values, {}, bad, metric);
  std::vector<RegionCounts> out(thresholds.size());
  for (std::size_t t = 0; t < thresholds.size(); ++t) {
    const auto rule = sweep_rule(metric, thresholds[t]);
    for (const auto& v : values) out[t].add(OutcomePattern::from_bin(bin_of(v, rule)));
  }
  return out;
}

std::vector<RetrievalScores> retrieval_scores(std::span<const std::string> qids, const RetrievalInputs& in) {
  std::vector<RetrievalScores> out;
  out.reserve(qids.size());
  for (const auto& qid : qids) out.push_back(retrieval_one(qid, in));
  return out;
}

std::vector<VariantScores> reading_scores(std::span<const std::string> qids, const ReadingInputs& in) {
  std::vector<VariantScores> out;
  out.reserve(qids.size());
  for (const auto& qid : qids) out.push_back(reading_one(qid, in));
  return out;
}

}  // namespace serial

namespace omp {

std::vector<std::uint8_t> classify(std::span<const VariantScores> values, std::span<const std::string> qids,
                                   const CorrectnessRule& rule) {
  if (auto bad = first_missing(values); bad < values.size()) throw_missing(values, qids, bad, rule.metric);
  std::vector<std::uint8_t> bins(values.size());
  const auto n = static_cast<std::ptrdiff_t>(values.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) bins[i] = bin_of(values[i], rule);
  return bins;
}

BinTally tally(std::span<const std::uint8_t> bins, std::span<const std::uint8_t> human_equals_original) {
  std::size_t counts[8] = {};
  std::size_t subcounts[8] = {};
  const auto n = static_cast<std::ptrdiff_t>(bins.size());
#pragma omp parallel for schedule(static) reduction(+ : counts[:8], subcounts[:8])
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    ++counts[bins[i]];
    if (human_equals_original[i]) ++subcounts[bins[i]];
  }
  BinTally t;
  for (int b = 0; b < 8; ++b) {
    t.counts[b] = counts[b];
    t.subcounts[b] = subcounts[b];
  }
  return t;
}

std::vector<RegionCounts> sweep_counts(std::span<const VariantScores> values, std::span<const double> thresholds,
                                       const MetricId& metric) {
  if (auto bad = first_missing(values); bad < values.size()) throw_missing(values, {}, bad, metric);
  std::vector<RegionCounts> out(thresholds.size());
  const auto nt = static_cast<std::ptrdiff_t>(thresholds.size());
  const auto ns = static_cast<std::ptrdiff_t>(values.size());
  // Few thresholds, many samples: reduce over samples per threshold.
  for (std::ptrdiff_t t = 0; t < nt; ++t) {
    const auto rule = sweep_rule(metric, thresholds[t]);
    std::size_t qa = 0, qr = 0, with = 0, without = 0;
#pragma omp parallel for schedule(static) reduction(+ : qa, qr, with, without)
    for (std::ptrdiff_t i = 0; i < ns; ++i) {
      const auto b = bin_of(values[i], rule);
      if (!(b & 4)) {
        ++qa;
      } else if (!(b & 2)) {
        ++qr;
      } else if (b & 1) {
        ++without;
      } else {
        ++with;
      }
    }
    out[t] = {qa, qr, with, without};
  }
  return out;
}

std::vector<RetrievalScores> retrieval_scores(std::span<const std::string> qids, const RetrievalInputs& in) {
  return map_indices<RetrievalScores>(qids.size(), Execution::kParallel,
                                      [&](std::size_t i) { return retrieval_one(qids[i], in); });
}

std::vector<VariantScores> reading_scores(std::span<const std::string> qids, const ReadingInputs& in) {
  return map_indices<VariantScores>(qids.size(), Execution::kParallel,
                                    [&](std::size_t i) { return reading_one(qids[i], in); });
}

}  // namespace omp
}  // namespace rprobe::kernels
