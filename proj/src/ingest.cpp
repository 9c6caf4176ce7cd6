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

#include "rewrite_probe/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "rewrite_probe/similarity.hpp"

namespace rprobe {
namespace {

using nlohmann::json;

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i > start) fields.push_back(line.substr(start, i - start));
  }
  return fields;
}

std::string at_line(std::size_t line_no) { return "line " + std::to_string(line_no) + ": "; }

template <typename T>
bool parse_number(std::string_view text, T& out) {
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, out);
  return ec == std::errc() && ptr == end;
}

// Calls fn(record, line_no) for every non-blank line of a JSON-lines stream.
void for_each_record(std::istream& in, const std::function<void(const json&, std::size_t)>& fn) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (split_fields(line).empty()) continue;
    json record;
    try {
      record = json::parse(line);
    } catch (const json::parse_error& e) {
      throw DataError(at_line(line_no) + "invalid JSON (" + e.what() + ")");
    }
    if (!record.is_object()) throw DataError(at_line(line_no) + "record is not a JSON object");
    fn(record, line_no);
  }
}

std::string required_string(const json& record, const char* key, std::size_t line_no) {
  auto it = record.find(key);
  if (it == record.end()) throw DataError(at_line(line_no) + "missing key \"" + key + "\"");
  if (!it->is_string()) throw DataError(at_line(line_no) + "key \"" + key + "\" is not a string");
  return it->get<std::string>();
}

std::string required_qid(const json& record, std::size_t line_no) {
  std::string qid = required_string(record, "qid", line_no);
  if (qid.empty()) throw DataError(at_line(line_no) + "empty qid");
  return qid;
}

bool blank(std::string_view text) { return split_fields(text).empty(); }

struct RawEntry {
  std::string docid;
  long rank;
  double score;
};

RankedRun normalize(const std::string& qid, Variant variant, std::vector<RawEntry> raw,
                    Warnings* warnings) {
  std::sort(raw.begin(), raw.end(), [](const RawEntry& a, const RawEntry& b) {
    return a.rank != b.rank ? a.rank < b.rank : a.docid < b.docid;
  });
  bool consistent = true;
  for (std::size_t i = 1; i < raw.size() && consistent; ++i) {
    consistent = raw[i - 1].rank < raw[i].rank && raw[i - 1].score >= raw[i].score;
  }
  if (!consistent) {
    std::sort(raw.begin(), raw.end(), [](const RawEntry& a, const RawEntry& b) {
      return a.score != b.score ? a.score > b.score : a.docid < b.docid;
    });
    if (warnings) {
      warnings->push_back("run " + std::string(to_string(variant)) + ", qid " + qid +
                          ": rank column disagrees with scores; re-sorted by score");
    }
  }
  RankedRun run{qid, variant, {}};
  run.entries.reserve(raw.size());
  int rank = 0;
  for (auto& e : raw) run.entries.push_back({std::move(e.docid), ++rank, e.score});
  return run;
}

}  // namespace

RunSet parse_run_file(std::istream& in, Variant variant, Warnings* warnings) {
  std::map<std::string, std::vector<RawEntry>> grouped;
  std::map<std::string, std::unordered_set<std::string>> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto fields = split_fields(line);
    if (fields.empty()) continue;
    if (fields.size() != 6) {
      throw DataError(at_line(line_no) + "expected 6 fields (qid Q0 docid rank score tag), got " +
                      std::to_string(fields.size()));
    }
    RawEntry entry{std::string(fields[2]), 0, 0.0};
    if (!parse_number(fields[3], entry.rank) || entry.rank < 0) {
      throw DataError(at_line(line_no) + "rank \"" + std::string(fields[3]) +
                      "\" is not a non-negative integer");
    }
    if (!parse_number(fields[4], entry.score) || !std::isfinite(entry.score)) {
      throw DataError(at_line(line_no) + "score \"" + std::string(fields[4]) +
                      "\" is not a finite number");
    }
    std::string qid(fields[0]);
    if (!seen[qid].insert(entry.docid).second) {
      throw DataError(at_line(line_no) + "duplicate document " + entry.docid + " for qid " + qid);
    }
    grouped[qid].push_back(std::move(entry));
  }
  RunSet runs;
  for (auto& [qid, raw] : grouped) runs.emplace(qid, normalize(qid, variant, std::move(raw), warnings));
  return runs;
}

void write_run_file(std::ostream& out, const RunSet& runs, std::string_view tag) {
  char score[64];
  for (const auto& [qid, run] : runs) {
    for (const auto& e : run.entries) {
      std::snprintf(score, sizeof score, "%.17g", e.score);
      out << qid << " Q0 " << e.docid << ' ' << e.rank << ' ' << score << ' ' << tag << '\n';
    }
  }
}

JudgmentSet parse_qrels(std::istream& in, Warnings* warnings) {
  JudgmentSet judgments;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto fields = split_fields(line);
    if (fields.empty()) continue;
    if (fields.size() != 4) {
      throw DataError(at_line(line_no) + "expected 4 fields (qid 0 docid grade), got " +
                      std::to_string(fields.size()));
    }
    int grade = 0;
    if (!parse_number(fields[3], grade)) {
      throw DataError(at_line(line_no) + "grade \"" + std::string(fields[3]) + "\" is not an integer");
    }
    if (grade < 0) throw DataError(at_line(line_no) + "negative grade " + std::to_string(grade));
    std::string qid(fields[0]);
    std::string docid(fields[2]);
    if (auto previous = judgments.find(qid, docid)) {
      if (warnings) {
        warnings->push_back(at_line(line_no) + "duplicate judgment for (" + qid + ", " + docid +
                            "); keeping grade " + std::to_string(std::max(*previous, grade)));
      }
      grade = std::max(*previous, grade);
    }
    judgments.set(qid, docid, grade);
  }
  return judgments;
}

bool same_question_text(std::string_view a, std::string_view b) {
  TokenizationPolicy words_only;
  words_only.strip_punctuation = false;
  return tokenize(a, words_only) == tokenize(b, words_only);
}

std::vector<QuestionTriple> parse_triples(std::istream& in) {
  std::vector<QuestionTriple> triples;
  std::unordered_set<std::string> qids;
  for_each_record(in, [&](const json& record, std::size_t line_no) {
    QuestionTriple t;
    t.qid = required_qid(record, line_no);
    t.original = required_string(record, "original", line_no);
    t.model_rewrite = required_string(record, "model_rewrite", line_no);
    t.human_rewrite = required_string(record, "human_rewrite", line_no);
    for (Variant v : kAllVariants) {
      if (blank(t.text(v))) {
        throw DataError(at_line(line_no) + "qid " + t.qid + ": empty " + std::string(to_string(v)));
      }
    }
    if (auto flag = record.find("human_equals_original"); flag != record.end() && !flag->is_null()) {
      if (!flag->is_boolean()) {
        throw DataError(at_line(line_no) + "qid " + t.qid + ": human_equals_original is not a boolean");
      }
      t.human_equals_original = flag->get<bool>();
    } else {
      t.human_equals_original = same_question_text(t.original, t.human_rewrite);
    }
    if (!qids.insert(t.qid).second) throw DataError(at_line(line_no) + "duplicate qid " + t.qid);
    triples.push_back(std::move(t));
  });
  return triples;
}

SpanPredictionSet parse_spans(std::istream& in, Variant variant) {
  SpanPredictionSet spans;
  for_each_record(in, [&](const json& record, std::size_t line_no) {
    std::string qid = required_qid(record, line_no);
    std::string answer = required_string(record, "answer", line_no);
    if (!spans.emplace(qid, std::move(answer)).second) {
      throw DataError(at_line(line_no) + "duplicate qid " + qid + " in " +
                      std::string(to_string(variant)) + " spans");
    }
  });
  return spans;
}

GoldAnswerSet parse_gold(std::istream& in) {
  GoldAnswerSet gold;
  for_each_record(in, [&](const json& record, std::size_t line_no) {
    std::string qid = required_qid(record, line_no);
    auto it = record.find("answers");
    if (it == record.end() || !it->is_array()) {
      throw DataError(at_line(line_no) + "qid " + qid + ": \"answers\" must be an array");
    }
    if (it->empty()) throw DataError(at_line(line_no) + "qid " + qid + ": empty gold answer list");
    std::vector<std::string> answers;
    for (const auto& a : *it) {
      if (!a.is_string()) throw DataError(at_line(line_no) + "qid " + qid + ": gold answer is not a string");
      answers.push_back(a.get<std::string>());
    }
    if (!gold.emplace(qid, std::move(answers)).second) {
      throw DataError(at_line(line_no) + "duplicate qid " + qid + " in gold answers");
    }
  });
  return gold;
}

EmbeddingStore parse_embeddings(std::istream& in, Variant variant) {
  EmbeddingStore store;
  for_each_record(in, [&](const json& record, std::size_t line_no) {
    std::string qid = required_qid(record, line_no);
    auto it = record.find("vector");
    if (it == record.end() || !it->is_array() || it->empty()) {
      throw DataError(at_line(line_no) + "qid " + qid + ": \"vector\" must be a non-empty array");
    }
    std::vector<double> vec;
    vec.reserve(it->size());
    bool nonzero = false;
    for (const auto& x : *it) {
      if (!x.is_number() || !std::isfinite(x.get<double>())) {
        throw DataError(at_line(line_no) + "qid " + qid + ": vector component is not a finite number");
      }
      vec.push_back(x.get<double>());
      nonzero = nonzero || vec.back() != 0.0;
    }
    if (!nonzero) throw DataError(at_line(line_no) + "qid " + qid + ": all-zero embedding");
    if (store.dimension == 0) {
      store.dimension = vec.size();
    } else if (vec.size() != store.dimension) {
      throw DataError(at_line(line_no) + "qid " + qid + ": dimension " + std::to_string(vec.size()) +
                      " differs from " + std::to_string(store.dimension));
    }
    if (!store.vectors.emplace(qid, std::move(vec)).second) {
      throw DataError(at_line(line_no) + "duplicate qid " + qid + " in " +
                      std::string(to_string(variant)) + " embeddings");
    }
  });
  return store;
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot read " + path.string());
  return in;
}

ArtifactCoverage coverage_of(std::string name, const JudgmentSet& judgments) {
  ArtifactCoverage c{std::move(name), {}};
  for (auto& qid : judgments.qids()) c.qids.insert(std::move(qid));
  return c;
}

ValidationReport validate_corpus(const std::vector<QuestionTriple>& triples,
                                 const std::vector<ArtifactCoverage>& artifacts,
                                 ValidationMode mode) {
  ValidationReport report;
  std::set<std::string> triple_qids;
  for (const auto& t : triples) triple_qids.insert(t.qid);

  std::set<std::string> incomplete;
  for (const auto& artifact : artifacts) {
    for (const auto& qid : triple_qids) {
      if (!artifact.qids.contains(qid)) {
        report.missing.push_back({artifact.name, qid});
        incomplete.insert(qid);
      }
    }
    for (const auto& qid : artifact.qids) {
      if (!triple_qids.contains(qid)) report.extra.push_back({artifact.name, qid});
    }
  }
  for (const auto& qid : triple_qids) {
    if (!incomplete.contains(qid)) report.kept.push_back(qid);
  }
  report.dropped = triple_qids.size() - report.kept.size();

  if (mode == ValidationMode::kStrict && !report.clean()) {
    std::ostringstream msg;
    msg << "strict validation failed:";
    for (const auto& g : report.missing) msg << ' ' << g.qid << " (missing from " << g.artifact << ')';
    for (const auto& g : report.extra) msg << ' ' << g.qid << " (only in " << g.artifact << ')';
    throw DataError(msg.str());
  }
  return report;
}

std::vector<QuestionTriple> restrict_to(const std::vector<QuestionTriple>& triples,
                                        const std::vector<std::string>& keep) {
  std::unordered_set<std::string> wanted(keep.begin(), keep.end());
  std::vector<QuestionTriple> out;
  for (const auto& t : triples) {
    if (wanted.contains(t.qid)) out.push_back(t);
  }
  return out;
}

}  // namespace rprobe
