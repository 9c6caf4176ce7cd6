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

#ifndef REWRITE_PROBE_INGEST_HPP_
#define REWRITE_PROBE_INGEST_HPP_

#include <filesystem>
#include <istream>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include "rewrite_probe/errors.hpp"
#include "rewrite_probe/types.hpp"

namespace rprobe {

// TREC run format: "<qid> Q0 <docid> <rank> <score> <tag>".
//
// Entries are grouped per qid. When the rank column disagrees with score
// order (duplicate ranks, or a higher rank carrying a higher score), the
// entries of that qid are re-sorted by score descending then docid ascending
// and a warning is appended. Ranks are always rewritten to 1..n.
RunSet parse_run_file(std::istream& in, Variant variant, Warnings* warnings = nullptr);

// Writes one line per entry using the given run tag. Scores are printed with
// round-trip precision.
void write_run_file(std::ostream& out, const RunSet& runs, std::string_view tag = "rprobe");

// Qrels: "<qid> 0 <docid> <grade>". Duplicate pairs keep the maximum grade.
JudgmentSet parse_qrels(std::istream& in, Warnings* warnings = nullptr);

// JSON-lines {qid, original, model_rewrite, human_rewrite[, human_equals_original]}.
std::vector<QuestionTriple> parse_triples(std::istream& in);

// Case-folded, whitespace-collapsed equality used for the Human=Original flag
// when the input record does not carry it.
bool same_question_text(std::string_view a, std::string_view b);

// JSON-lines {qid, answer}. Empty answers are allowed.
SpanPredictionSet parse_spans(std::istream& in, Variant variant);
// JSON-lines {qid, answers:[...]}, at least one answer per record.
GoldAnswerSet parse_gold(std::istream& in);
// JSON-lines {qid, vector:[...]}; one shared dimension, no all-zero vector.
EmbeddingStore parse_embeddings(std::istream& in, Variant variant);

// Opens path for reading or throws DataError naming it.
std::ifstream open_input(const std::filesystem::path& path);

enum class ValidationMode { kLenient, kStrict };

// The qid set one per-variant (or shared) artifact covers.
struct ArtifactCoverage {
  std::string name;
  std::set<std::string> qids;
};

struct CoverageGap {
  std::string artifact;
  std::string qid;
  friend bool operator==(const CoverageGap&, const CoverageGap&) = default;
};

struct ValidationReport {
  std::vector<CoverageGap> missing;  // qid in triples, absent in artifact
  std::vector<CoverageGap> extra;    // qid in artifact, absent in triples
  std::vector<std::string> kept;     // intersection of all qid sets, sorted
  std::size_t dropped = 0;           // triples removed in lenient mode

  std::size_t issue_count() const { return missing.size() + extra.size(); }
  bool clean() const { return issue_count() == 0; }
};

// Cross-checks the triples against every artifact. Strict mode throws a
// DataError listing the qids of any missing gap; lenient mode reports gaps
// and keeps only the intersection.
ValidationReport validate_corpus(const std::vector<QuestionTriple>& triples,
                                 const std::vector<ArtifactCoverage>& artifacts,
                                 ValidationMode mode);

template <typename Map>
ArtifactCoverage coverage_of(std::string name, const Map& keyed_by_qid) {
  ArtifactCoverage c{std::move(name), {}};
  for (const auto& [qid, unused] : keyed_by_qid) c.qids.insert(qid);
  return c;
}
ArtifactCoverage coverage_of(std::string name, const JudgmentSet& judgments);

// Returns the triples whose qid is in keep, preserving order.
std::vector<QuestionTriple> restrict_to(const std::vector<QuestionTriple>& triples,
                                        const std::vector<std::string>& keep);

}  // namespace rprobe

#endif  // REWRITE_PROBE_INGEST_HPP_
