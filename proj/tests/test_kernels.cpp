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

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "rewrite_probe/kernels.hpp"

namespace rprobe {
namespace {

std::vector<std::string> qids_for(std::size_t n) {
  std::vector<std::string> qids(n);
  for (std::size_t i = 0; i < n; ++i) qids[i] = "q" + std::to_string(i);
  return qids;
}

bool same(double a, double b) { return a == b || (std::isnan(a) && std::isnan(b)); }

TEST(Kernels, ClassifyAndTallyMatchSerial) {
  std::mt19937_64 rng(3);
  auto rules = CorrectnessRule::parse_list("ndcg@3>0,ndcg@3>=0.5,ndcg@3=1");
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 1 + rng() % 5000;
    auto values = testing::random_scores(rng, n);
    auto qids = qids_for(n);
    std::vector<std::uint8_t> flags(n);
    for (auto& f : flags) f = static_cast<std::uint8_t>(rng() % 2);
    for (const auto& rule : rules) {
      auto a = kernels::serial::classify(values, qids, rule);
      auto b = kernels::omp::classify(values, qids, rule);
      ASSERT_EQ(a, b);
      EXPECT_EQ(kernels::serial::tally(a, flags), kernels::omp::tally(b, flags));
    }
  }
}

TEST(Kernels, ClassifyReportsFirstMissingValue) {
  std::mt19937_64 rng(1);
  auto values = testing::random_scores(rng, 300);
  values[120][1] = std::nan("");
  values[250][0] = std::nan("");
  auto qids = qids_for(values.size());
  auto rule = CorrectnessRule::parse("ndcg@3>0");
  try {
    kernels::omp::classify(values, qids, rule);
    FAIL() << "expected DataError";
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("q120"), std::string::npos) << e.what();
  }
}

TEST(Kernels, SweepCountsMatchSerial) {
  std::mt19937_64 rng(4);
  for (double step : {0.02, 0.1, 0.3, 1.0}) {
    auto values = testing::random_scores(rng, 1 + rng() % 3000);
    auto grid = threshold_grid(step);
    EXPECT_EQ(kernels::serial::sweep_counts(values, grid, MetricId::ndcg(3)),
              kernels::omp::sweep_counts(values, grid, MetricId::ndcg(3)));
  }
}

TEST(Kernels, RetrievalScoresMatchSerial) {
  std::mt19937_64 rng(6);
  const std::size_t n = 400;
  auto qids = qids_for(n);
  JudgmentSet judgments;
  PerVariant<RunSet> runs;
  for (const auto& q : qids) {
    for (int d = 0; d < 8; ++d) {
      if (rng() % 2) judgments.set(q, "d" + std::to_string(d), static_cast<int>(rng() % 4));
    }
    for (Variant v : kAllVariants) {
      if (q == "q7" && v == Variant::kHumanRewrite) continue;
      RankedRun run{q, v, {}};
      for (int r = 1; r <= 1 + static_cast<int>(rng() % 8); ++r) {
        run.entries.push_back({"d" + std::to_string(rng() % 10) + "_" + std::to_string(r), r, -r * 1.0});
      }
      runs[v][q] = run;
    }
  }
  kernels::RetrievalInputs in;
  for (Variant v : kAllVariants) in.runs[v] = &runs[v];
  in.judgments = &judgments;
  auto a = kernels::serial::retrieval_scores(qids, in);
  auto b = kernels::omp::retrieval_scores(qids, in);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t v = 0; v < 3; ++v) {
      EXPECT_TRUE(same(a[i].ndcg[v], b[i].ndcg[v]));
      EXPECT_TRUE(same(a[i].precision_at_1[v], b[i].precision_at_1[v]));
    }
  }
  EXPECT_TRUE(std::isnan(a[7].ndcg[2]));
}

TEST(Kernels, ReadingScoresMatchSerial) {
  static const std::vector<std::string> vocab = {"the", "cell", "nucleus", "1869", "Miescher", "acid", "DNA"};
  std::mt19937_64 rng(9);
  const std::size_t n = 500;
  auto qids = qids_for(n);
  PerVariant<SpanPredictionSet> spans;
  GoldAnswerSet gold;
  auto phrase = [&] {
    std::string s;
    for (std::size_t i = 0, len = rng() % 5; i < len; ++i) s += vocab[rng() % vocab.size()] + " ";
    return s;
  };
  for (const auto& q : qids) {
    gold[q] = {phrase(), phrase()};
    for (Variant v : kAllVariants) spans[v][q] = phrase();
  }
  kernels::ReadingInputs in;
  for (Variant v : kAllVariants) in.spans[v] = &spans[v];
  in.gold = &gold;
  auto a = kernels::serial::reading_scores(qids, in);
  auto b = kernels::omp::reading_scores(qids, in);
  EXPECT_EQ(a, b);
}

TEST(Kernels, MapIndicesRethrowsLowestIndex) {
  try {
    kernels::map_indices<int>(1000, Execution::kParallel, [](std::size_t i) -> int {
      if (i % 97 == 5) throw DataError("bad " + std::to_string(i));
      return static_cast<int>(i);
    });
    FAIL() << "expected DataError";
  } catch (const DataError& e) {
    EXPECT_STREQ(e.what(), "bad 5");
  }
}

}  // namespace
}  // namespace rprobe
