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

#include "rewrite_probe/similarity.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <set>
#include <string>

#include "rewrite_probe/errors.hpp"

namespace rprobe {
namespace {

// Decodes one code point at text[i], advancing i. Malformed bytes decode to
// themselves so that arbitrary input never throws.
char32_t next_code_point(std::string_view text, std::size_t& i) {
  const auto lead = static_cast<unsigned char>(text[i]);
  int extra = 0;
  char32_t cp = lead;
  if (lead >= 0xF0 && lead <= 0xF4) {
    extra = 3;
    cp = lead & 0x07;
  } else if (lead >= 0xE0) {
    extra = lead <= 0xEF ? 2 : 0;
    cp = lead & 0x0F;
  } else if (lead >= 0xC2) {
    extra = 1;
    cp = lead & 0x1F;
  }
  if (extra == 0 || i + static_cast<std::size_t>(extra) >= text.size()) {
    ++i;
    return lead;
  }
  for (int k = 1; k <= extra; ++k) {
    const auto c = static_cast<unsigned char>(text[i + k]);
    if ((c & 0xC0) != 0x80) {
      ++i;
      return lead;
    }
    cp = (cp << 6) | (c & 0x3F);
  }
  i += 1 + extra;
  return cp;
}

void append_utf8(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

bool is_space(char32_t cp) {
  return (cp >= 0x09 && cp <= 0x0D) || cp == 0x20 || cp == 0x85 || cp == 0xA0 || cp == 0x1680 ||
         (cp >= 0x2000 && cp <= 0x200A) || cp == 0x2028 || cp == 0x2029 || cp == 0x202F ||
         cp == 0x205F || cp == 0x3000;
}

bool is_punct(char32_t cp) {
  if (cp < 0x80) return cp > 0x20 && cp < 0x7F && !std::isalnum(static_cast<int>(cp));
  switch (cp) {
    case 0xA1: case 0xA7: case 0xAB: case 0xB6: case 0xB7: case 0xBB: case 0xBF:
      return true;
    default:
      break;
  }
  return (cp >= 0x2010 && cp <= 0x2027) || (cp >= 0x2030 && cp <= 0x205E) ||
         (cp >= 0x3001 && cp <= 0x3003) || (cp >= 0x3008 && cp <= 0x3011) ||
         (cp >= 0xFF01 && cp <= 0xFF0F);
}

char32_t lower(char32_t cp) {
  if (cp >= 'A' && cp <= 'Z') return cp + 0x20;
  if (cp < 0x80) return cp;
  if (cp >= 0xC0 && cp <= 0xDE && cp != 0xD7) return cp + 0x20;  // Latin-1
  if (cp >= 0x391 && cp <= 0x3A9 && cp != 0x3A2) return cp + 0x20;  // Greek
  if (cp >= 0x410 && cp <= 0x42F) return cp + 0x20;  // Cyrillic
  if (cp >= 0x400 && cp <= 0x40F) return cp + 0x50;
  return cp;
}

const std::set<std::string, std::less<>>& articles() {
  static const std::set<std::string, std::less<>> kArticles = {"a", "an", "the"};
  return kArticles;
}

std::map<std::string, std::size_t> counts_of(const std::vector<std::string>& tokens) {
  std::map<std::string, std::size_t> counts;
  for (const auto& t : tokens) ++counts[t];
  return counts;
}

}  // namespace

std::string fold_case(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (std::size_t i = 0; i < text.size();) append_utf8(out, lower(next_code_point(text, i)));
  return out;
}

std::vector<std::string> tokenize(std::string_view text, const TokenizationPolicy& policy) {
  std::vector<std::string> tokens;
  std::string current;
  auto flush = [&] {
    if (current.empty()) return;
    bool drop = policy.stopwords.contains(current) ||
                (policy.drop_articles && articles().contains(current));
    if (!drop) tokens.push_back(std::move(current));
    current.clear();
  };
  for (std::size_t i = 0; i < text.size();) {
    char32_t cp = next_code_point(text, i);
    if (is_space(cp)) {
      flush();
      continue;
    }
    if (policy.strip_punctuation && is_punct(cp)) continue;
    append_utf8(current, policy.case_fold ? lower(cp) : cp);
  }
  flush();
  return tokens;
}

std::unordered_set<std::string> load_stopwords(std::istream& in, const TokenizationPolicy& policy) {
  TokenizationPolicy normalize = policy;
  normalize.stopwords.clear();
  normalize.drop_articles = false;
  std::unordered_set<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    for (auto& token : tokenize(line, normalize)) words.insert(std::move(token));
  }
  return words;
}

std::string_view to_string(SimilarityMetric m) {
  switch (m) {
    case SimilarityMetric::kRouge1Recall:
      return "rouge1_recall";
    case SimilarityMetric::kJaccard:
      return "jaccard";
    case SimilarityMetric::kCosine:
      return "cosine";
  }
  return "unknown";
}

SimilarityScore rouge1_recall(std::string_view candidate, std::string_view reference,
                              const TokenizationPolicy& policy) {
  const auto ref_tokens = tokenize(reference, policy);
  if (ref_tokens.empty()) throw UndefinedMetricError("ROUGE-1 recall: reference has no tokens");
  const auto cand_counts = counts_of(tokenize(candidate, policy));
  std::size_t matched = 0;
  for (const auto& [token, ref_count] : counts_of(ref_tokens)) {
    auto it = cand_counts.find(token);
    if (it != cand_counts.end()) matched += std::min(ref_count, it->second);
  }
  double value = static_cast<double>(matched) / static_cast<double>(ref_tokens.size());
  return {SimilarityMetric::kRouge1Recall, value, value};
}

SimilarityScore jaccard_tokens(std::string_view a, std::string_view b, const TokenizationPolicy& policy) {
  auto ta = tokenize(a, policy);
  auto tb = tokenize(b, policy);
  std::set<std::string> sa(ta.begin(), ta.end());
  std::set<std::string> sb(tb.begin(), tb.end());
  if (sa.empty() && sb.empty()) return {SimilarityMetric::kJaccard, 1.0, 1.0};
  std::size_t common = 0;
  for (const auto& t : sa) common += sb.count(t);
  double value = static_cast<double>(common) / static_cast<double>(sa.size() + sb.size() - common);
  return {SimilarityMetric::kJaccard, value, value};
}

SimilarityScore cosine_similarity(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size()) {
    throw UndefinedMetricError("cosine: dimension mismatch (" + std::to_string(u.size()) + " vs " +
                               std::to_string(v.size()) + ")");
  }
  double dot = 0.0, uu = 0.0, vv = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    dot += u[i] * v[i];
    uu += u[i] * u[i];
    vv += v[i] * v[i];
  }
  if (uu == 0.0 || vv == 0.0) throw UndefinedMetricError("cosine: zero vector");
  double raw = std::clamp(dot / (std::sqrt(uu) * std::sqrt(vv)), -1.0, 1.0);
  return {SimilarityMetric::kCosine, (raw + 1.0) / 2.0, raw};
}

}  // namespace rprobe
