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

#ifndef REWRITE_PROBE_KERNELS_HPP_
#define REWRITE_PROBE_KERNELS_HPP_

// Data-parallel inner loops. Each kernel exists twice: an OpenMP version in
// rprobe::kernels::omp and a plain loop in rprobe::kernels::serial that is
// kept as the reference. Both produce identical results; outputs are indexed
// by input position and reductions are over integers.

#include <array>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <span>
#include <string>
#include <vector>

#include "rewrite_probe/answer_metrics.hpp"
#include "rewrite_probe/breakdown.hpp"
#include "rewrite_probe/similarity.hpp"
#include "rewrite_probe/types.hpp"

namespace rprobe::kernels {

struct BinTally {
  std::array<std::size_t, 8> counts{};
  std::array<std::size_t, 8> subcounts{};
  friend bool operator==(const BinTally&, const BinTally&) = default;
};

struct RetrievalScores {
  VariantScores ndcg{};
  VariantScores precision_at_1{};
};

struct RetrievalInputs {
  PerVariant<const RunSet*> runs{};
  const JudgmentSet* judgments = nullptr;
  CutoffConfig cutoffs;
};

struct ReadingInputs {
  PerVariant<const SpanPredictionSet*> spans{};
  const GoldAnswerSet* gold = nullptr;
  TokenizationPolicy policy;
};

namespace serial {

// Bin index per sample; qids[i] names sample i in the missing-value error.
std::vector<std::uint8_t> classify(std::span<const VariantScores> values,
                                   std::span<const std::string> qids,
                                   const CorrectnessRule& rule);
BinTally tally(std::span<const std::uint8_t> bins,
               std::span<const std::uint8_t> human_equals_original);
std::vector<RegionCounts> sweep_counts(std::span<const VariantScores> values,
                                       std::span<const double> thresholds,
                                       const MetricId& metric);
std::vector<RetrievalScores> retrieval_scores(std::span<const std::string> qids,
                                              const RetrievalInputs& in);
std::vector<VariantScores> reading_scores(std::span<const std::string> qids,
                                          const ReadingInputs& in);

}  // namespace serial

namespace omp {

std::vector<std::uint8_t> classify(std::span<const VariantScores> values,
                                   std::span<const std::string> qids,
                                   const CorrectnessRule& rule);
BinTally tally(std::span<const std::uint8_t> bins,
               std::span<const std::uint8_t> human_equals_original);
std::vector<RegionCounts> sweep_counts(std::span<const VariantScores> values,
                                       std::span<const double> thresholds,
                                       const MetricId& metric);
std::vector<RetrievalScores> retrieval_scores(std::span<const std::string> qids,
                                              const RetrievalInputs& in);
std::vector<VariantScores> reading_scores(std::span<const std::string> qids,
                                          const ReadingInputs& in);

}  // namespace omp

// Collects the first exception (by index) thrown inside a parallel loop so it
// can be rethrown on the calling thread.
class ErrorSlot {
 public:
  void capture(std::size_t index);
  void rethrow_if_set() const;

 private:
  std::size_t index_ = static_cast<std::size_t>(-1);
  std::exception_ptr error_;
};

// out[i] = fn(i) for i in [0, n), in parallel when asked.
template <typename T, typename Fn>
std::vector<T> map_indices(std::size_t n, Execution exec, Fn&& fn) {
  std::vector<T> out(n);
  if (exec == Execution::kSerial) {
    for (std::size_t i = 0; i < n; ++i) out[i] = fn(i);
    return out;
  }
  ErrorSlot errors;
  const auto count = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(dynamic, 64)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    try {
      out[static_cast<std::size_t>(i)] = fn(static_cast<std::size_t>(i));
    } catch (...) {
      errors.capture(static_cast<std::size_t>(i));
    }
  }
  errors.rethrow_if_set();
  return out;
}

}  // namespace rprobe::kernels

#endif  // REWRITE_PROBE_KERNELS_HPP_
