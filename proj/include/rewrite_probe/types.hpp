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

#ifndef REWRITE_PROBE_TYPES_HPP_
#define REWRITE_PROBE_TYPES_HPP_

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace rprobe {

// Selects the OpenMP kernels or their serial reference versions.
enum class Execution { kSerial, kParallel };

// The three formulations of one conversational turn.
enum class Variant : std::size_t { kOriginal = 0, kModelRewrite = 1, kHumanRewrite = 2 };

inline constexpr std::array<Variant, 3> kAllVariants = {
    Variant::kOriginal, Variant::kModelRewrite, Variant::kHumanRewrite};

std::string_view to_string(Variant v);
std::optional<Variant> parse_variant(std::string_view name);

// A value per variant, indexed by Variant.
template <typename T>
struct PerVariant {
  std::array<T, 3> slots{};

  T& operator[](Variant v) { return slots[static_cast<std::size_t>(v)]; }
  const T& operator[](Variant v) const { return slots[static_cast<std::size_t>(v)]; }
};

using VariantScores = std::array<double, 3>;  // original, model, human

struct QuestionTriple {
  std::string qid;
  std::string original;
  std::string model_rewrite;
  std::string human_rewrite;
  bool human_equals_original = false;

  const std::string& text(Variant v) const;
};

struct RunEntry {
  std::string docid;
  int rank = 0;
  double score = 0.0;

  friend bool operator==(const RunEntry&, const RunEntry&) = default;
};

// Ranked documents for one (qid, variant). Entries are in rank order and
// ranks are 1..n.
struct RankedRun {
  std::string qid;
  Variant variant = Variant::kOriginal;
  std::vector<RunEntry> entries;

  friend bool operator==(const RankedRun&, const RankedRun&) = default;
};

using RunSet = std::map<std::string, RankedRun>;  // keyed by qid

// Graded relevance judgments. Unjudged pairs have grade 0.
class JudgmentSet {
 public:
  static constexpr int kDefaultBinarizationGrade = 2;

  void set(const std::string& qid, const std::string& docid, int grade);
  // Returns the stored grade, or nullopt when the pair is unjudged.
  std::optional<int> find(const std::string& qid, const std::string& docid) const;
  int grade(const std::string& qid, const std::string& docid) const;
  // All grades judged for qid (any order).
  std::vector<int> grades_for(const std::string& qid) const;
  bool has_qid(const std::string& qid) const { return by_qid_.contains(qid); }
  std::vector<std::string> qids() const;
  std::size_t size() const;

  int binarization_grade = kDefaultBinarizationGrade;

 private:
  std::unordered_map<std::string, std::unordered_map<std::string, int>> by_qid_;
};

using SpanPredictionSet = std::map<std::string, std::string>;           // qid -> answer
using GoldAnswerSet = std::map<std::string, std::vector<std::string>>;  // qid -> answers

struct EmbeddingStore {
  std::size_t dimension = 0;
  std::map<std::string, std::vector<double>> vectors;
};

}  // namespace rprobe

#endif  // REWRITE_PROBE_TYPES_HPP_
