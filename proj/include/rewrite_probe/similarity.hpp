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

#ifndef REWRITE_PROBE_SIMILARITY_HPP_
#define REWRITE_PROBE_SIMILARITY_HPP_

#include <istream>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace rprobe {

struct TokenizationPolicy {
  bool case_fold = true;
  bool strip_punctuation = true;
  // SQuAD-style "a/an/the" removal, used by span F1 only when requested.
  bool drop_articles = false;
  std::unordered_set<std::string> stopwords;
};

// Splits on Unicode whitespace, then folds case, strips punctuation and
// removes stop-words/articles as the policy says. Empty tokens are dropped.
std::vector<std::string> tokenize(std::string_view text, const TokenizationPolicy& policy = {});

// Simple (one-to-one) lower-casing of Latin, Greek and Cyrillic letters.
std::string fold_case(std::string_view text);

// One token per line. Entries are normalized with the policy's case and
// punctuation settings so they match tokenizer output.
std::unordered_set<std::string> load_stopwords(std::istream& in, const TokenizationPolicy& policy = {});

enum class SimilarityMetric { kRouge1Recall, kJaccard, kCosine };

std::string_view to_string(SimilarityMetric m);

struct SimilarityScore {
  SimilarityMetric metric = SimilarityMetric::kRouge1Recall;
  // In [0, 1]. For cosine this is (raw + 1) / 2.
  double value = 0.0;
  // Unmapped value; equals value except for cosine where it is in [-1, 1].
  double raw = 0.0;
};

// Clipped unigram recall of reference tokens covered by the candidate.
// Throws UndefinedMetricError when the reference has no tokens.
SimilarityScore rouge1_recall(std::string_view candidate, std::string_view reference,
                              const TokenizationPolicy& policy = {});

// Token-set Jaccard. Both sides empty gives 1.0.
SimilarityScore jaccard_tokens(std::string_view a, std::string_view b,
                               const TokenizationPolicy& policy = {});

// Throws UndefinedMetricError on dimension mismatch or a zero vector.
SimilarityScore cosine_similarity(std::span<const double> u, std::span<const double> v);

}  // namespace rprobe

#endif  // REWRITE_PROBE_SIMILARITY_HPP_
