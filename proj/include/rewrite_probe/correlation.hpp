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

#ifndef REWRITE_PROBE_CORRELATION_HPP_
#define REWRITE_PROBE_CORRELATION_HPP_

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rewrite_probe/breakdown.hpp"
#include "rewrite_probe/similarity.hpp"
#include "rewrite_probe/types.hpp"

namespace rprobe {

struct CorrelationSample {
  std::string qid;
  double qr_similarity = 0.0;
  double qa_score = 0.0;
};

struct CorrelationReport {
  std::size_t n = 0;
  double pearson_r = 0.0;
  std::string qr_metric;
  std::string qa_metric;
  std::string filter_rule;  // "none" when unfiltered
  std::vector<CorrelationSample> series;
};

// Product-moment correlation computed in two passes (means, then centered
// sums). Throws UndefinedCorrelationError for fewer than two points or a
// constant series, and std::invalid_argument for unequal lengths.
double pearson(std::span<const double> x, std::span<const double> y);

// Keeps the samples whose human-rewrite value satisfies the rule.
std::vector<EvaluatedSample> filter_human_correct(std::span<const EvaluatedSample> samples,
                                                  const CorrectnessRule& rule);

// QA-side quantity paired with question similarity.
struct QaMeasure {
  enum class Kind {
    kModelMetric,      // the model rewrite's value of a per-variant metric
    kAnswerSetRecall,  // recall@k of the model run against the human run
    kSpanJaccard,      // token Jaccard of the model and human predicted spans
  };
  Kind kind = Kind::kModelMetric;
  MetricId metric = MetricId::precision_at_1();

  // "p@1", "ndcg@3", "span_f1", "recall@1000", "span_jaccard".
  static QaMeasure parse(std::string_view name);
  std::string str() const;
};

struct CorrelationRequest {
  SimilarityMetric qr_metric = SimilarityMetric::kRouge1Recall;
  QaMeasure qa_measure;
  std::optional<CorrectnessRule> filter;  // nullopt keeps every sample
};

// Everything correlate() may draw from. triples and samples are aligned by
// index; artifacts not needed by the request may be left null.
struct CorrelationCorpus {
  std::span<const QuestionTriple> triples;
  std::span<const EvaluatedSample> samples;
  PerVariant<const RunSet*> runs{};
  PerVariant<const SpanPredictionSet*> spans{};
  PerVariant<const EmbeddingStore*> embeddings{};
  TokenizationPolicy policy;
};

// QR similarity is measured with the model rewrite as candidate and the human
// rewrite as reference. Cosine enters the series mapped to [0, 1].
std::vector<CorrelationSample> correlation_samples(const CorrelationRequest& request,
                                                   const CorrelationCorpus& corpus,
                                                   Execution exec = Execution::kParallel);

// Filters, pairs and correlates. The series is qid-sorted.
CorrelationReport correlate(const CorrelationRequest& request, const CorrelationCorpus& corpus,
                            Execution exec = Execution::kParallel);

}  // namespace rprobe

#endif  // REWRITE_PROBE_CORRELATION_HPP_
