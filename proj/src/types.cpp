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

#include "rewrite_probe/types.hpp"

#include <algorithm>

namespace rprobe {

std::string_view to_string(Variant v) {
  switch (v) {
    case Variant::kOriginal:
      return "original";
    case Variant::kModelRewrite:
      return "model_rewrite";
    case Variant::kHumanRewrite:
      return "human_rewrite";
  }
  return "unknown";
}

std::optional<Variant> parse_variant(std::string_view name) {
  for (Variant v : kAllVariants) {
    if (to_string(v) == name) return v;
  }
  if (name == "model") return Variant::kModelRewrite;
  if (name == "human") return Variant::kHumanRewrite;
  return std::nullopt;
}

const std::string& QuestionTriple::text(Variant v) const {
  switch (v) {
    case Variant::kOriginal:
      return original;
    case Variant::kModelRewrite:
      return model_rewrite;
    case Variant::kHumanRewrite:
      break;
  }
  return human_rewrite;
}

void JudgmentSet::set(const std::string& qid, const std::string& docid, int grade) {
  by_qid_[qid][docid] = grade;
}

std::optional<int> JudgmentSet::find(const std::string& qid, const std::string& docid) const {
  auto q = by_qid_.find(qid);
  if (q == by_qid_.end()) return std::nullopt;
  auto d = q->second.find(docid);
  if (d == q->second.end()) return std::nullopt;
  return d->second;
}

int JudgmentSet::grade(const std::string& qid, const std::string& docid) const {
  return find(qid, docid).value_or(0);
}

std::vector<int> JudgmentSet::grades_for(const std::string& qid) const {
  std::vector<int> grades;
  auto q = by_qid_.find(qid);
  if (q == by_qid_.end()) return grades;
  grades.reserve(q->second.size());
  for (const auto& [docid, g] : q->second) grades.push_back(g);
  return grades;
}

std::vector<std::string> JudgmentSet::qids() const {
  std::vector<std::string> out;
  out.reserve(by_qid_.size());
  for (const auto& [qid, docs] : by_qid_) out.push_back(qid);
  std::sort(out.begin(), out.end());
  return out;
}

std::size_t JudgmentSet::size() const {
  std::size_t n = 0;
  for (const auto& [qid, docs] : by_qid_) n += docs.size();
  return n;
}

}  // namespace rprobe
