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

#include "rewrite_probe/breakdown.hpp"

#include <charconv>
#include <cmath>
#include <set>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "rewrite_probe/kernels.hpp"

namespace rprobe {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::string shortest(double value) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

constexpr std::string_view kCheck = "✓";
constexpr std::string_view kCross = "×";

}  // namespace

CorrectnessRule CorrectnessRule::parse(std::string_view text) {
  const std::string_view rule = trim(text);
  std::size_t pos = rule.find_first_of("><=");
  if (pos == std::string_view::npos || pos == 0) {
    throw UsageError("rule \"" + std::string(rule) + "\" is not <metric><cmp><value>");
  }
  CorrectnessRule r;
  r.metric = MetricId::parse(trim(rule.substr(0, pos)));
  std::string_view rest = rule.substr(pos);
  if (rest.starts_with(">=")) {
    r.comparator = Comparator::kAtLeast;
    rest.remove_prefix(2);
  } else if (rest.starts_with(">")) {
    r.comparator = Comparator::kGreater;
    rest.remove_prefix(1);
  } else if (rest.starts_with("=")) {
    r.comparator = Comparator::kEquals;
    rest.remove_prefix(rest.starts_with("==") ? 2 : 1);
  }
  rest = trim(rest);
  auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), r.threshold);
  if (rest.empty() || ec != std::errc() || ptr != rest.data() + rest.size()) {
    throw UsageError("rule \"" + std::string(rule) + "\" has no numeric threshold");
  }
  if (!(r.threshold >= 0.0 && r.threshold <= 1.0)) {
    throw UsageError("rule \"" + std::string(rule) + "\" threshold outside [0, 1]");
  }
  return r;
}

std::vector<CorrectnessRule> CorrectnessRule::parse_list(std::string_view text) {
  std::vector<CorrectnessRule> rules;
  while (!trim(text).empty()) {
    auto comma = text.find(',');
    rules.push_back(parse(text.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return rules;
}

bool CorrectnessRule::accepts(double value) const {
  switch (comparator) {
    case Comparator::kGreater:
      return value > threshold + kCompareTolerance;
    case Comparator::kAtLeast:
      return value >= threshold - kCompareTolerance;
    case Comparator::kEquals:
      return std::abs(value - threshold) <= kCompareTolerance;
  }
  return false;
}

std::string CorrectnessRule::str() const {
  const char* cmp = comparator == Comparator::kGreater ? ">" : comparator == Comparator::kAtLeast ? ">=" : "=";
  return metric.str() + cmp + shortest(threshold);
}

std::string CorrectnessRule::label() const {
  const char* cmp = comparator == Comparator::kGreater   ? " > "
                    : comparator == Comparator::kAtLeast ? " ≥ "
                                                         : " = ";
  return metric.display() + cmp + shortest(threshold);
}

OutcomePattern OutcomePattern::from_bin(int bin) {
  if (bin < 0 || bin > 7) throw std::out_of_range("bin index " + std::to_string(bin));
  return {(bin & 1) != 0, (bin & 2) != 0, (bin & 4) != 0};
}

OutcomePattern OutcomePattern::parse(std::string_view symbols) {
  std::vector<bool> marks;
  std::string_view rest = trim(symbols);
  while (!rest.empty()) {
    if (rest.starts_with(kCheck)) {
      marks.push_back(true);
      rest.remove_prefix(kCheck.size());
    } else if (rest.starts_with(kCross)) {
      marks.push_back(false);
      rest.remove_prefix(kCross.size());
    } else {
      char c = rest.front();
      rest.remove_prefix(1);
      if (c == 'v' || c == 'V' || c == '1') {
        marks.push_back(true);
      } else if (c == 'x' || c == 'X' || c == '0') {
        marks.push_back(false);
      } else {
        throw DataError("bad outcome pattern \"" + std::string(symbols) + "\"");
      }
    }
  }
  if (marks.size() != 3) throw DataError("outcome pattern \"" + std::string(symbols) + "\" needs 3 marks");
  return {marks[0], marks[1], marks[2]};
}

std::string OutcomePattern::symbols() const {
  std::string out;
  for (bool ok : {original_correct, model_correct, human_correct}) out += ok ? kCheck : kCross;
  return out;
}

OutcomePattern evaluate_correctness(const std::string& qid, const VariantScores& values,
                                    const CorrectnessRule& rule) {
  for (Variant v : kAllVariants) {
    if (std::isnan(values[static_cast<std::size_t>(v)])) {
      throw DataError("qid " + qid + ": no " + rule.metric.str() + " value for " + std::string(to_string(v)));
    }
  }
  return {rule.accepts(values[0]), rule.accepts(values[1]), rule.accepts(values[2])};
}

BreakdownTable build_breakdown(std::span<const EvaluatedSample> samples,
                               std::span<const CorrectnessRule> rules, Warnings* warnings,
                               Execution exec) {
  if (samples.empty()) throw DataError("breakdown: no samples");
  if (rules.empty()) throw UsageError("breakdown: no correctness rules");

  std::vector<std::string> qids;
  std::vector<std::uint8_t> same;
  qids.reserve(samples.size());
  same.reserve(samples.size());
  for (const auto& s : samples) {
    qids.push_back(s.qid);
    same.push_back(s.human_equals_original ? 1 : 0);
  }

  BreakdownTable table;
  table.total = samples.size();
  for (auto flag : same) table.total_human_equals_original += flag;

  for (const auto& rule : rules) {
    std::vector<VariantScores> values;
    values.reserve(samples.size());
    for (const auto& s : samples) {
      auto it = s.scores.find(rule.metric);
      if (it == s.scores.end()) throw DataError("qid " + s.qid + ": metric " + rule.metric.str() + " not computed");
      values.push_back(it->second);
    }
    auto bins = exec == Execution::kSerial ? kernels::serial::classify(values, qids, rule)
                                           : kernels::omp::classify(values, qids, rule);
    auto tally = exec == Execution::kSerial ? kernels::serial::tally(bins, same) : kernels::omp::tally(bins, same);
    table.columns.push_back({rule.label(), rule.str(), tally.counts, tally.subcounts});

    if (warnings) {
      for (std::size_t i = 0; i < bins.size(); ++i) {
        const auto p = OutcomePattern::from_bin(bins[i]);
        if (same[i] && p.original_correct != p.human_correct) {
          warnings->push_back("qid " + qids[i] + ": Human = Original but " + rule.str() +
                              " outcomes differ between original and human (" + p.symbols() + ")");
        }
      }
    }
  }
  return table;
}

const OutcomePattern* OutcomeRecord::find(std::string_view rule_key) const {
  for (const auto& [key, pattern] : outcomes) {
    if (key == rule_key) return &pattern;
  }
  return nullptr;
}

std::vector<OutcomeRecord> parse_outcome_records(std::istream& in) {
  using nlohmann::ordered_json;
  std::vector<OutcomeRecord> records;
  std::unordered_set<std::string> qids;
  std::string line;
  std::size_t line_no = 0;
  auto fail = [&](const std::string& what) {
    throw DataError("line " + std::to_string(line_no) + ": " + what);
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    ordered_json j;
    try {
      j = ordered_json::parse(line);
    } catch (const ordered_json::parse_error& e) {
      fail(std::string("invalid JSON (") + e.what() + ")");
    }
    if (!j.is_object() || !j.contains("qid") || !j["qid"].is_string()) fail("record needs a string qid");
    OutcomeRecord r;
    r.qid = j["qid"].get<std::string>();
    if (r.qid.empty()) fail("empty qid");
    if (auto it = j.find("human_equals_original"); it != j.end()) {
      if (!it->is_boolean()) fail("human_equals_original is not a boolean");
      r.human_equals_original = it->get<bool>();
    }
    auto outcomes = j.find("outcomes");
    if (outcomes == j.end() || !outcomes->is_object() || outcomes->empty()) fail("record needs an outcomes object");
    for (const auto& [key, value] : outcomes->items()) {
      if (!value.is_string()) fail("outcome for " + key + " is not a string");
      r.outcomes.emplace_back(key, OutcomePattern::parse(value.get<std::string>()));
    }
    if (!records.empty()) {
      const auto& first = records.front().outcomes;
      bool same_keys = first.size() == r.outcomes.size();
      for (const auto& [key, unused] : first) same_keys = same_keys && r.find(key) != nullptr;
      if (!same_keys) fail("qid " + r.qid + " is classified under a different rule set");
    }
    if (!qids.insert(r.qid).second) fail("duplicate qid " + r.qid);
    records.push_back(std::move(r));
  }
  return records;
}

BreakdownTable build_breakdown(std::span<const OutcomeRecord> records, std::vector<std::string> rule_keys) {
  if (records.empty()) throw DataError("breakdown: no outcome records");
  if (rule_keys.empty()) {
    for (const auto& [key, unused] : records.front().outcomes) rule_keys.push_back(key);
  }
  BreakdownTable table;
  table.total = records.size();
  for (const auto& r : records) table.total_human_equals_original += r.human_equals_original ? 1 : 0;
  for (const auto& key : rule_keys) {
    BreakdownColumn column;
    column.key = key;
    try {
      column.label = CorrectnessRule::parse(key).label();
    } catch (const UsageError&) {
      column.label = key;
    }
    for (const auto& r : records) {
      const OutcomePattern* p = r.find(key);
      if (p == nullptr) throw DataError("qid " + r.qid + ": no outcome for rule " + key);
      ++column.counts[p->bin()];
      if (r.human_equals_original) ++column.subcounts[p->bin()];
    }
    table.columns.push_back(std::move(column));
  }
  return table;
}

double rewriting_impact_fraction(const BreakdownColumn& column, ImpactScope scope) {
  auto cell = [&](int bin) {
    double n = static_cast<double>(column.counts[bin]);
    if (scope == ImpactScope::kHumanDiffers) n -= static_cast<double>(column.subcounts[bin]);
    return n;
  };
  const double answered_by_original = cell(5) + cell(7);
  const double answered_by_human = cell(4) + cell(5) + cell(6) + cell(7);
  if (answered_by_human <= 0.0) {
    throw UndefinedMetricError("rewriting impact: no question answered from the human rewrite in " + column.key);
  }
  return answered_by_original / answered_by_human;
}

void RegionCounts::add(const OutcomePattern& p) {
  if (!p.human_correct) {
    ++qa_error;
  } else if (!p.model_correct) {
    ++qr_error;
  } else if (p.original_correct) {
    ++correct_without_rewriting;
  } else {
    ++correct_with_rewriting;
  }
}

std::vector<double> threshold_grid(double step) {
  if (!(step > 0.0 && step <= 1.0)) throw UsageError("sweep step must be in (0, 1]");
  std::vector<double> grid;
  const auto intervals = std::llround(1.0 / step);
  if (std::abs(static_cast<double>(intervals) * step - 1.0) < 1e-9) {
    for (long long i = 0; i <= intervals; ++i) grid.push_back(static_cast<double>(i) / static_cast<double>(intervals));
  } else {
    for (long long i = 0; static_cast<double>(i) * step <= 1.0 + 1e-12; ++i) grid.push_back(static_cast<double>(i) * step);
  }
  return grid;
}

CorrectnessRule sweep_rule(const MetricId& metric, double threshold) {
  if (threshold == 0.0) return {metric, Comparator::kGreater, 0.0};
  return {metric, Comparator::kAtLeast, threshold};
}

SweepSeries threshold_sweep(std::span<const VariantScores> values, double step, const MetricId& metric,
                            Execution exec) {
  const auto grid = threshold_grid(step);
  if (values.empty()) throw DataError("sweep: no samples");
  auto counts = exec == Execution::kSerial ? kernels::serial::sweep_counts(values, grid, metric)
                                           : kernels::omp::sweep_counts(values, grid, metric);
  SweepSeries series;
  series.step = step;
  series.samples = values.size();
  const auto n = static_cast<double>(values.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto& c = counts[i];
    series.points.push_back({grid[i], static_cast<double>(c.qa_error) / n, static_cast<double>(c.qr_error) / n,
                             static_cast<double>(c.correct_with_rewriting) / n,
                             static_cast<double>(c.correct_without_rewriting) / n});
  }
  return series;
}

}  // namespace rprobe
