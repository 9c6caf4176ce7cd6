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

#include <filesystem>
#include <sstream>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "rewrite_probe/cli.hpp"
#include "rewrite_probe/report_io.hpp"
#include "test_support.hpp"

namespace rprobe {
namespace {

namespace fs = std::filesystem;
using testing::data_dir;
using testing::read_lines;
using testing::read_text;
using testing::ScratchDir;
using testing::write_text;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result invoke(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

// One question of a hand-built retrieval corpus.
struct SynthQuestion {
  std::string qid;
  std::string model_rewrite;
  std::string human_rewrite;
  std::array<std::vector<std::string>, 3> ranked;  // original, model, human
  std::vector<std::pair<std::string, int>> qrels;
};

void write_retrieval_corpus(const fs::path& dir, const std::vector<SynthQuestion>& questions) {
  fs::create_directories(dir);
  std::string triples, qrels;
  std::array<std::string, 3> runs;
  for (const auto& q : questions) {
    triples += nlohmann::json{{"qid", q.qid},
                              {"original", "original text of " + q.qid},
                              {"model_rewrite", q.model_rewrite},
                              {"human_rewrite", q.human_rewrite}}
                   .dump() +
               "\n";
    for (const auto& [doc, g] : q.qrels) qrels += q.qid + " 0 " + doc + " " + std::to_string(g) + "\n";
    for (int v = 0; v < 3; ++v) {
      int rank = 0;
      for (const auto& doc : q.ranked[v]) {
        ++rank;
        runs[v] += q.qid + " Q0 " + doc + " " + std::to_string(rank) + " " + std::to_string(100 - rank) + " t\n";
      }
    }
  }
  write_text(dir / "triples.jsonl", triples);
  write_text(dir / "qrels.txt", qrels);
  write_text(dir / "run_original.txt", runs[0]);
  write_text(dir / "run_model.txt", runs[1]);
  write_text(dir / "run_human.txt", runs[2]);
}

TEST(Cli, MetricsWritesOneRowPerQidVariantMetric) {
  ScratchDir tmp("cli");
  std::vector<SynthQuestion> qs;
  for (const char* id : {"a", "b", "c"}) {
    qs.push_back({id, "m " + std::string(id), "h " + std::string(id), {{{"d1", "d2"}, {"d2", "d1"}, {"d1"}}},
                  {{"d1", 2}, {"d2", 1}}});
  }
  write_retrieval_corpus(tmp / "corpus", qs);
  auto r = invoke(testing::retrieval_args("metrics", tmp / "corpus", tmp / "out"));
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  auto lines = read_lines(tmp / "out" / "metrics.csv");
  ASSERT_EQ(lines.size(), 1u + 18u);
  EXPECT_EQ(lines[0], "qid,variant,metric,value");
  std::istringstream csv(read_text(tmp / "out" / "metrics.csv"));
  auto rows = read_metrics_csv(csv);
  for (const auto& row : rows) {
    if (row.metric == MetricId::precision_at_1()) {
      EXPECT_EQ(row.value, row.variant == Variant::kModelRewrite ? 0.0 : 1.0);
    }
  }
}

TEST(Cli, UsageAndDataErrors) {
  ScratchDir tmp("cli");
  auto corpus = data_dir() / "retrieval";
  auto args = testing::retrieval_args("metrics", corpus, tmp / "out");
  auto no_qrels = args;
  no_qrels.erase(no_qrels.begin() + 5, no_qrels.begin() + 7);
  EXPECT_EQ(invoke(no_qrels).code, cli::kExitUsage);
  EXPECT_EQ(invoke({"frobnicate"}).code, cli::kExitUsage);
  auto bad_step = testing::retrieval_args("sweep", corpus, tmp / "out");
  bad_step.insert(bad_step.end(), {"--step", "0"});
  EXPECT_EQ(invoke(bad_step).code, cli::kExitUsage);
  auto unreadable = args;
  unreadable[8] = (tmp / "does-not-exist.txt").string();
  auto r = invoke(unreadable);
  EXPECT_EQ(r.code, cli::kExitData);
  EXPECT_NE(r.err.find("does-not-exist"), std::string::npos);
}

TEST(Cli, BreakdownFromOutcomeFixtures) {
  ScratchDir tmp("cli");
  auto r = invoke({"breakdown", "--outcomes", (data_dir() / "cast_table1_outcomes.jsonl").string(), "--out",
                   (tmp / "cast").string()});
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  EXPECT_NE(r.out.find("173 (53)"), std::string::npos);
  EXPECT_NE(read_text(tmp / "cast" / "breakdown.md").find("173 (53)"), std::string::npos);
  auto impact = read_lines(tmp / "cast" / "impact.csv");
  ASSERT_EQ(impact.size(), 5u);
  EXPECT_EQ(impact[0], "rule,all,human_differs");
  EXPECT_EQ(impact[1], "p@1=1,0.450820,0.211765");

  r = invoke({"breakdown", "--outcomes", (data_dir() / "canard_table2_outcomes.jsonl").string(), "--out",
              (tmp / "canard").string()});
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  EXPECT_NE(r.out.find("5571 (666)"), std::string::npos);
}

TEST(Cli, StrictValidationFailsOnGaps) {
  ScratchDir tmp("cli");
  std::vector<SynthQuestion> qs = {{"a", "m", "h", {{{"d1"}, {"d1"}, {"d1"}}}, {{"d1", 2}}}};
  write_retrieval_corpus(tmp / "corpus", qs);
  write_text(tmp / "corpus" / "run_model.txt", "");
  auto args = testing::retrieval_args("breakdown", tmp / "corpus", tmp / "out");
  EXPECT_EQ(invoke(args).code, cli::kExitData);  // nothing left after dropping
  args.push_back("--strict");
  EXPECT_EQ(invoke(args).code, cli::kExitData);
}

TEST(Cli, SweepWritesGridAndSvg) {
  ScratchDir tmp("cli");
  auto r = invoke(testing::retrieval_args("sweep", data_dir() / "retrieval", tmp / "out"));
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  auto lines = read_lines(tmp / "out" / "sweep.csv");
  EXPECT_EQ(lines.size(), 52u);
  EXPECT_EQ(lines[0], "threshold,qa_error,qr_error,correct_with_rewriting,correct_without_rewriting");
  EXPECT_NE(read_text(tmp / "out" / "sweep.svg").find("<svg"), std::string::npos);
}

TEST(Cli, SweepAllHumanIncorrect) {
  ScratchDir tmp("cli");
  std::vector<SynthQuestion> qs;
  for (const char* id : {"a", "b"}) {
    qs.push_back({id, "m", "h", {{{"d1"}, {"d1"}, {"d9"}}}, {{"d1", 2}, {"d9", 0}}});
  }
  write_retrieval_corpus(tmp / "corpus", qs);
  auto r = invoke(testing::retrieval_args("sweep", tmp / "corpus", tmp / "out"));
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  std::istringstream csv(read_text(tmp / "out" / "sweep.csv"));
  auto series = read_sweep_csv(csv);
  ASSERT_EQ(series.points.size(), 51u);
  for (const auto& p : series.points) EXPECT_EQ(p.qa_error, 1.0);
}

std::vector<SynthQuestion> recall_corpus() {
  // Rouge-1 recall 0.25/0.75/0.5/1 against answer-set recall 0.25/0.5/0.75/1.
  const std::vector<std::string> model = {"a", "a b c", "a b", "a b c d"};
  std::vector<SynthQuestion> qs;
  for (int q = 0; q < 4; ++q) {
    SynthQuestion s{"q" + std::to_string(q + 1), model[q], "a b c d", {}, {{"h0", 2}}};
    for (int d = 0; d < 4; ++d) {
      s.ranked[2].push_back("h" + std::to_string(d));
      s.ranked[1].push_back(d <= q ? "h" + std::to_string(d) : "m" + std::to_string(d));
    }
    s.ranked[0] = s.ranked[2];
    qs.push_back(s);
  }
  return qs;
}

TEST(Cli, CorrelateHandBuiltCorpus) {
  ScratchDir tmp("cli");
  write_retrieval_corpus(tmp / "corpus", recall_corpus());
  auto r = invoke(testing::retrieval_args("correlate", tmp / "corpus", tmp / "out"));
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  std::istringstream json(read_text(tmp / "out" / "correlation.json"));
  auto report = read_correlation_json(json);
  EXPECT_EQ(report.n, 4u);
  EXPECT_NEAR(report.pearson_r, 0.8, 1e-12);
  EXPECT_EQ(report.qr_metric, "rouge1_recall");
  EXPECT_EQ(report.qa_metric, "recall@1000");
  EXPECT_EQ(report.filter_rule, "p@1=1");
  EXPECT_EQ(read_lines(tmp / "out" / "scatter.csv").size(), 5u);
}

TEST(Cli, CorrelateWithOneSampleIsDataError) {
  ScratchDir tmp("cli");
  auto qs = recall_corpus();
  for (std::size_t i = 1; i < qs.size(); ++i) qs[i].qrels = {{"h0", 0}};
  write_retrieval_corpus(tmp / "corpus", qs);
  auto r = invoke(testing::retrieval_args("correlate", tmp / "corpus", tmp / "out"));
  EXPECT_EQ(r.code, cli::kExitData);
  EXPECT_NE(r.err.find("undefined correlation"), std::string::npos) << r.err;
}

TEST(Cli, CorrelateIdentityReadingCorpus) {
  ScratchDir tmp("cli");
  const fs::path dir = tmp / "corpus";
  fs::create_directories(dir);
  const std::vector<std::pair<std::string, std::string>> rewrites = {
      {"what did he find", "what did Miescher find"},
      {"when", "when was nuclein named"},
      {"who funded it", "who funded the lab"},
  };
  std::string triples, gold;
  std::array<std::string, 3> spans;
  int i = 0;
  for (const auto& [model, human] : rewrites) {
    const std::string qid = "r" + std::to_string(++i);
    triples += nlohmann::json{{"qid", qid}, {"original", "o"}, {"model_rewrite", model}, {"human_rewrite", human}}
                   .dump() + "\n";
    gold += nlohmann::json{{"qid", qid}, {"answers", nlohmann::json::array({human})}}.dump() + "\n";
    spans[0] += nlohmann::json{{"qid", qid}, {"answer", "nothing"}}.dump() + "\n";
    spans[1] += nlohmann::json{{"qid", qid}, {"answer", model}}.dump() + "\n";
    spans[2] += nlohmann::json{{"qid", qid}, {"answer", human}}.dump() + "\n";
  }
  write_text(dir / "triples.jsonl", triples);
  write_text(dir / "gold.jsonl", gold);
  write_text(dir / "spans_original.jsonl", spans[0]);
  write_text(dir / "spans_model.jsonl", spans[1]);
  write_text(dir / "spans_human.jsonl", spans[2]);
  auto args = testing::reading_args("correlate", dir, tmp / "out");
  args.insert(args.end(), {"--qr-metric", "jaccard", "--qa-metric", "span_jaccard"});
  auto r = invoke(args);
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  std::istringstream json(read_text(tmp / "out" / "correlation.json"));
  auto report = read_correlation_json(json);
  EXPECT_EQ(report.n, 3u);
  EXPECT_NEAR(report.pearson_r, 1.0, 1e-12);
}

TEST(Cli, ValidateReportsCoverage) {
  ScratchDir tmp("cli");
  auto corpus = data_dir() / "retrieval";
  auto args = testing::retrieval_args("validate", corpus, tmp / "out");
  auto r = invoke(args);
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  EXPECT_NE(r.out.find("0 issues, 10 complete questions"), std::string::npos) << r.out;

  fs::create_directories(tmp / "gap");
  for (const auto& entry : fs::directory_iterator(corpus)) fs::copy(entry.path(), tmp / "gap" / entry.path().filename());
  std::string model_run;
  for (const auto& line : read_lines(corpus / "run_model.txt")) {
    if (line.rfind("q05 ", 0) != 0) model_run += line + "\n";
  }
  write_text(tmp / "gap" / "run_model.txt", model_run);
  auto gap_args = testing::retrieval_args("validate", tmp / "gap", tmp / "out2");
  r = invoke(gap_args);
  EXPECT_EQ(r.code, cli::kExitOk);
  EXPECT_NE(r.out.find("missing: q05"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("1 issues, 9 complete questions"), std::string::npos) << r.out;
  gap_args.push_back("--strict");
  EXPECT_EQ(invoke(gap_args).code, cli::kExitData);

  auto triples = read_text(corpus / "triples.jsonl");
  write_text(tmp / "gap" / "triples.jsonl", triples + triples.substr(0, triples.find('\n') + 1));
  EXPECT_EQ(invoke(gap_args).code, cli::kExitData);
}

}  // namespace
}  // namespace rprobe
