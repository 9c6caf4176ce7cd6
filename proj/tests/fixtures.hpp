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

#ifndef REWRITE_PROBE_TESTS_FIXTURES_HPP_
#define REWRITE_PROBE_TESTS_FIXTURES_HPP_

#include <cmath>
#include <fstream>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "rewrite_probe/breakdown.hpp"
#include "test_support.hpp"

namespace rprobe::testing {

inline std::vector<OutcomeRecord> load_outcomes(const std::string& name) {
  std::ifstream in(data_dir() / name);
  if (!in) throw std::runtime_error("missing fixture " + name);
  return parse_outcome_records(in);
}

inline BreakdownTable cast_table() {
  auto records = load_outcomes("cast_table1_outcomes.jsonl");
  return build_breakdown(records);
}

inline BreakdownTable canard_table() {
  auto records = load_outcomes("canard_table2_outcomes.jsonl");
  return build_breakdown(records);
}

// Rewriting impact values of the retrieval and reading tables, rounded to 2 decimals.
struct ImpactRow {
  const char* key;
  double all;
  double human_differs;
};

inline const std::vector<ImpactRow>& cast_impact() {
  static const std::vector<ImpactRow> rows = {
      {"p@1=1", 0.45, 0.21},
      {"ndcg@3>0", 0.55, 0.34},
      {"ndcg@3>=0.5", 0.38, 0.13},
      {"ndcg@3=1", 0.21, 0.00},
  };
  return rows;
}

inline const std::vector<ImpactRow>& canard_impact() {
  static const std::vector<ImpactRow> rows = {
      {"span_f1>0", 0.92, 0.91},
      {"span_f1>=0.5", 0.82, 0.79},
      {"span_f1=1", 0.80, 0.77},
  };
  return rows;
}

inline double round2(double v) { return std::round(v * 100.0) / 100.0; }

// Random metric values drawn from a small grid so that ties with thresholds occur.
inline std::vector<VariantScores> random_scores(std::mt19937_64& rng, std::size_t n) {
  std::uniform_int_distribution<int> coin(0, 3);
  std::uniform_int_distribution<int> grid(0, 50);
  std::uniform_real_distribution<double> real(0.0, 1.0);
  std::vector<VariantScores> out(n);
  for (auto& v : out) {
    for (auto& x : v) {
      switch (coin(rng)) {
        case 0: x = 0.0; break;
        case 1: x = grid(rng) / 50.0; break;
        default: x = real(rng); break;
      }
    }
  }
  return out;
}

}  // namespace rprobe::testing

#endif  // REWRITE_PROBE_TESTS_FIXTURES_HPP_
