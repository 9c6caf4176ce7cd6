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

#include "rewrite_probe/correlation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_set>

#include "rewrite_probe/errors.hpp"
#include "rewrite_probe/kernels.hpp"

namespace rprobe {
namespace {

bool constant(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [&](double x) { return x == v.front(); });
}

double mean(std::span<const double> v) {
  double sum = 0.0;
  for (double x : v) sum += x;
  return sum / static_cast<double>(v.size());
}

template <typename Map>
const auto& lookup(const Map* map, const std::string& qid, Variant v, const char* what) {
  if (map == nullptr) throw DataError(std::string("correlation needs ") + what + " for " + std::string(to_string(v)));
  auto it = map->find(qid);
  if (it == map->end()) {
    throw DataError("qid " + qid + ": no " + what + " for " + std::string(to_string(v)));
  }
  return it->second;
}

double qr_value(SimilarityMetric metric, std::size_t i, const CorrelationCorpus& corpus) {
  const auto& t = corpus.triples[i];
  switch (metric) {
    case SimilarityMetric::kRouge1Recall:
      return rouge1_recall(t.model_rewrite, t.human_rewrite, corpus.policy).value;
    case SimilarityMetric::kJaccard:
      return jaccard_tokens(t.model_rewrite, t.human_rewrite, corpus.policy).value;
    case SimilarityMetric::kCosine: {
      const auto* model = corpus.embeddings[Variant::kModelRewrite];
      const auto* human = corpus.embeddings[Variant::kHumanRewrite];
      const auto& u = lookup(model ? &model->vectors : nullptr, t.qid, Variant::kModelRewrite, "embedding");
      const auto& v = lookup(human ? &human->vectors : nullptr, t.qid, Variant::kHumanRewrite, "embedding");
      return cosine_similarity(u, v).value;
    }
  }
  return 0.0;
}

double qa_value(const QaMeasure& measure, std::size_t i, const CorrelationCorpus& corpus) {
  const auto& qid = corpus.triples[i].qid;
  switch (measure.kind) {
    case QaMeasure::Kind::kModelMetric: {
      const auto& scores = corpus.samples[i].scores;
      auto it = scores.find(measure.metric);
      double v = it == scores.end() ? std::nan("") : it->second[static_cast<std::size_t>(Variant::kModelRewrite)];
      if (std::isnan(v)) throw DataError("qid " + qid + ": no " + measure.metric.str() + " for model_rewrite");
      return v;
    }
    case QaMeasure::Kind::kAnswerSetRecall: {
      const auto& human = lookup(corpus.runs[Variant::kHumanRewrite], qid, Variant::kHumanRewrite, "run");
      const auto& model = lookup(corpus.runs[Variant::kModelRewrite], qid, Variant::kModelRewrite, "run");
      return answer_set_recall(human, model, measure.metric.k);
    }
    case QaMeasure::Kind::kSpanJaccard: {
      const auto& human = lookup(corpus.spans[Variant::kHumanRewrite], qid, Variant::kHumanRewrite, "span");
      const auto& model = lookup(corpus.spans[Variant::kModelRewrite], qid, Variant::kModelRewrite, "span");
      return jaccard_tokens(model, human, corpus.policy).value;
    }
  }
  return 0.0;
}

}  // namespace

double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("pearson: sequences differ in length");
  if (x.size() < 2) throw UndefinedCorrelationError("pearson: fewer than two points");
  if (constant(x) || constant(y)) throw UndefinedCorrelationError("pearson: constant series");
  const double mx = mean(x);
  const double my = mean(y);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

std::vector<EvaluatedSample> filter_human_correct(std::span<const EvaluatedSample> samples,
                                                  const CorrectnessRule& rule) {
  std::vector<EvaluatedSample> kept;
  for (const auto& s : samples) {
    auto it = s.scores.find(rule.metric);
    double human = it == s.scores.end() ? std::nan("") : it->second[static_cast<std::size_t>(Variant::kHumanRewrite)];
    if (std::isnan(human)) throw DataError("qid " + s.qid + ": no " + rule.metric.str() + " for human_rewrite");
    if (rule.accepts(human)) kept.push_back(s);
  }
  return kept;
}

QaMeasure QaMeasure::parse(std::string_view name) {
  if (name == "span_jaccard") return {Kind::kSpanJaccard, MetricId::span_f1()};
  MetricId metric = MetricId::parse(name);
  if (metric.kind == MetricId::Kind::kRecall) return {Kind::kAnswerSetRecall, metric};
  return {Kind::kModelMetric, metric};
}

std::string QaMeasure::str() const { return kind == Kind::kSpanJaccard ? "span_jaccard" : metric.str(); }

std::vector<CorrelationSample> correlation_samples(const CorrelationRequest& request,
                                                   const CorrelationCorpus& corpus, Execution exec) {
  if (corpus.samples.size() != corpus.triples.size()) {
    throw std::invalid_argument("correlation: triples and samples are not aligned");
  }
  return kernels::map_indices<CorrelationSample>(corpus.triples.size(), exec, [&](std::size_t i) {
    return CorrelationSample{corpus.triples[i].qid, qr_value(request.qr_metric, i, corpus),
                             qa_value(request.qa_measure, i, corpus)};
  });
}

CorrelationReport correlate(const CorrelationRequest& request, const CorrelationCorpus& corpus, Execution exec) {
  CorrelationReport report;
  report.qr_metric = std::string(to_string(request.qr_metric));
  report.qa_metric = request.qa_measure.str();
  report.filter_rule = request.filter ? request.filter->str() : "none";

  std::vector<QuestionTriple> triples;
  std::vector<EvaluatedSample> samples;
  if (request.filter) {
    std::unordered_set<std::string> keep;
    for (const auto& s : filter_human_correct(corpus.samples, *request.filter)) keep.insert(s.qid);
    for (std::size_t i = 0; i < corpus.triples.size(); ++i) {
      if (keep.contains(corpus.triples[i].qid)) {
        triples.push_back(corpus.triples[i]);
        samples.push_back(corpus.samples[i]);
      }
    }
  } else {
    triples.assign(corpus.triples.begin(), corpus.triples.end());
    samples.assign(corpus.samples.begin(), corpus.samples.end());
  }

  CorrelationCorpus kept = corpus;
  kept.triples = triples;
  kept.samples = samples;
  report.series = correlation_samples(request, kept, exec);
  std::sort(report.series.begin(), report.series.end(),
            [](const CorrelationSample& a, const CorrelationSample& b) { return a.qid < b.qid; });
  report.n = report.series.size();
  if (report.n < 2) {
    throw UndefinedCorrelationError("correlation: " + std::to_string(report.n) +
                                    " sample(s) left after filtering; need at least 2");
  }
  std::vector<double> x, y;
  for (const auto& s : report.series) {
    x.push_back(s.qr_similarity);
    y.push_back(s.qa_score);
  }
  report.pearson_r = pearson(x, y);
  return report;
}

}  // namespace rprobe
