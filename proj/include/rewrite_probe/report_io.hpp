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

#ifndef REWRITE_PROBE_REPORT_IO_HPP_
#define REWRITE_PROBE_REPORT_IO_HPP_

// Artifact writers and their matching readers. CSV values use 6 decimals,
// JSON keeps full precision. Nothing written here depends on time or locale.

#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "rewrite_probe/answer_metrics.hpp"
#include "rewrite_probe/breakdown.hpp"
#include "rewrite_probe/correlation.hpp"

namespace rprobe {

std::string fixed6(double value);

// Header "qid,variant,metric,value". Rows are written in the given order.
void write_metrics_csv(std::ostream& out, const std::vector<MetricValue>& rows);
std::vector<MetricValue> read_metrics_csv(std::istream& in);
// Sorts by (qid, variant, metric) with variants ordered original, model, human.
void sort_metric_rows(std::vector<MetricValue>& rows);

void write_breakdown_json(std::ostream& out, const BreakdownTable& table);
BreakdownTable read_breakdown_json(std::istream& in);
// Eight rows in bin order with "count (subcount)" cells, then a
// "Total N (M)" line.
void write_breakdown_markdown(std::ostream& out, const BreakdownTable& table);

void write_sweep_csv(std::ostream& out, const SweepSeries& series);
SweepSeries read_sweep_csv(std::istream& in);
// Stacked areas, bottom to top: correct_without_rewriting,
// correct_with_rewriting, qr_error, qa_error. Each area's id is its region.
void write_sweep_svg(std::ostream& out, const SweepSeries& series, const std::string& title);

void write_correlation_json(std::ostream& out, const CorrelationReport& report);
CorrelationReport read_correlation_json(std::istream& in);
// Header "qid,qr_metric,qr_value,qa_metric,qa_value".
void write_scatter_csv(std::ostream& out, const CorrelationReport& report);
std::vector<CorrelationSample> read_scatter_csv(std::istream& in);
// Scatter plot with both axes fixed to [0, 1].
void write_scatter_svg(std::ostream& out, const CorrelationReport& report);

}  // namespace rprobe

#endif  // REWRITE_PROBE_REPORT_IO_HPP_
