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

#ifndef REWRITE_PROBE_CLI_HPP_
#define REWRITE_PROBE_CLI_HPP_

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "rewrite_probe/answer_metrics.hpp"
#include "rewrite_probe/breakdown.hpp"
#include "rewrite_probe/correlation.hpp"
#include "rewrite_probe/ingest.hpp"

namespace rprobe::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;

enum class Task { kRetrieval, kReading };

struct RunConfig {
  std::string command;
  std::optional<Task> task;
  std::filesystem::path triples;
  std::filesystem::path qrels;
  std::filesystem::path gold;
  PerVariant<std::filesystem::path> runs;
  PerVariant<std::filesystem::path> spans;
  PerVariant<std::filesystem::path> embeddings;
  std::filesystem::path outcomes;  // pre-classified records (breakdown only)
  std::filesystem::path stopwords;
  std::vector<CorrectnessRule> rules;
  std::optional<MetricId> sweep_metric;
  double step = 0.02;
  SimilarityMetric qr_metric = SimilarityMetric::kRouge1Recall;
  std::optional<QaMeasure> qa_measure;
  std::optional<CorrectnessRule> filter_rule;
  bool filter_disabled = false;
  bool drop_articles = false;
  CutoffConfig cutoffs;
  ValidationMode validation = ValidationMode::kLenient;
  std::filesystem::path out_dir;

  // Throws UsageError when the file set for the task is incomplete or a
  // numeric option is out of range.
  void check() const;
};

// Parses argv-style arguments (without the program name) and runs the
// subcommand. Returns the process exit code; diagnostics go to err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int cmd_metrics(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_breakdown(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_sweep(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_correlate(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_validate(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace rprobe::cli

#endif  // REWRITE_PROBE_CLI_HPP_
