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

#include "rewrite_probe/report_io.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cstdio>
#include <sstream>
#include <tuple>

#include <nlohmann/json.hpp>

#include "rewrite_probe/errors.hpp"

namespace rprobe {
namespace {

using nlohmann::ordered_json;

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        fields.back() += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        fields.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.emplace_back();
    } else if (c != '\r') {
      fields.back() += c;
    }
  }
  return fields;
}

double parse_double(const std::string& text, std::size_t line_no) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw DataError("line " + std::to_string(line_no) + ": \"" + text + "\" is not a number");
  }
  return v;
}

// Reads rows of a CSV whose first line must equal header.
std::vector<std::vector<std::string>> read_csv(std::istream& in, std::string_view header, std::size_t columns) {
  std::string line;
  if (!std::getline(in, line) || line != header) {
    throw DataError("expected CSV header \"" + std::string(header) + "\"");
  }
  std::vector<std::vector<std::string>> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    auto fields = split_csv(line);
    if (fields.size() != columns) {
      throw DataError("line " + std::to_string(line_no) + ": expected " + std::to_string(columns) + " columns");
    }
    rows.push_back(std::move(fields));
  }
  return rows;
}

std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

// Plot frame shared by both figures: 640x420 canvas, unit square mapped to
// the inner rectangle.
struct Frame {
  static constexpr double kWidth = 640, kHeight = 420;
  static constexpr double kLeft = 60, kRight = 170, kTop = 40, kBottom = 50;

  static double x(double u) { return kLeft + u * (kWidth - kLeft - kRight); }
  static double y(double v) { return kHeight - kBottom - v * (kHeight - kTop - kBottom); }
};

void svg_open(std::ostream& out, const std::string& title) {
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << Frame::kWidth << "\" height=\"" << Frame::kHeight
      << "\" viewBox=\"0 0 " << Frame::kWidth << ' ' << Frame::kHeight << "\">\n"
      << "<rect x=\"0\" y=\"0\" width=\"" << Frame::kWidth << "\" height=\"" << Frame::kHeight
      << "\" fill=\"white\"/>\n"
      << "<text x=\"" << num(Frame::x(0.5)) << "\" y=\"22\" text-anchor=\"middle\" font-family=\"sans-serif\" "
      << "font-size=\"14\">" << xml_escape(title) << "</text>\n";
}

void svg_axes(std::ostream& out, const std::string& x_label, const std::string& y_label) {
  out << "<g id=\"axes\" stroke=\"black\" stroke-width=\"1\" fill=\"none\">\n"
      << "<path d=\"M" << num(Frame::x(0)) << ' ' << num(Frame::y(1)) << " L" << num(Frame::x(0)) << ' '
      << num(Frame::y(0)) << " L" << num(Frame::x(1)) << ' ' << num(Frame::y(0)) << "\"/>\n";
  for (int i = 0; i <= 5; ++i) {
    double u = i / 5.0;
    out << "<path d=\"M" << num(Frame::x(u)) << ' ' << num(Frame::y(0)) << " L" << num(Frame::x(u)) << ' '
        << num(Frame::y(0) + 5) << "\"/>\n"
        << "<path d=\"M" << num(Frame::x(0) - 5) << ' ' << num(Frame::y(u)) << " L" << num(Frame::x(0)) << ' '
        << num(Frame::y(u)) << "\"/>\n";
  }
  out << "</g>\n<g font-family=\"sans-serif\" font-size=\"11\" fill=\"black\">\n";
  for (int i = 0; i <= 5; ++i) {
    double u = i / 5.0;
    out << "<text x=\"" << num(Frame::x(u)) << "\" y=\"" << num(Frame::y(0) + 18)
        << "\" text-anchor=\"middle\">" << num(u).substr(0, 3) << "</text>\n"
        << "<text x=\"" << num(Frame::x(0) - 8) << "\" y=\"" << num(Frame::y(u) + 4)
        << "\" text-anchor=\"end\">" << num(u).substr(0, 3) << "</text>\n";
  }
  out << "<text x=\"" << num(Frame::x(0.5)) << "\" y=\"" << num(Frame::kHeight - 12)
      << "\" text-anchor=\"middle\">" << xml_escape(x_label) << "</text>\n"
      << "<text x=\"16\" y=\"" << num(Frame::y(0.5)) << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
      << num(Frame::y(0.5)) << ")\">" << xml_escape(y_label) << "</text>\n</g>\n";
}

}  // namespace

std::string fixed6(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", value);
  if (std::string_view(buf) == "-0.000000") return "0.000000";
  return buf;
}

void write_metrics_csv(std::ostream& out, const std::vector<MetricValue>& rows) {
  out << "qid,variant,metric,value\n";
  for (const auto& r : rows) {
    out << csv_field(r.qid) << ',' << to_string(r.variant) << ',' << r.metric.str() << ',' << fixed6(r.value) << '\n';
  }
}

std::vector<MetricValue> read_metrics_csv(std::istream& in) {
  std::vector<MetricValue> rows;
  std::size_t line_no = 1;
  for (auto& f : read_csv(in, "qid,variant,metric,value", 4)) {
    ++line_no;
    auto variant = parse_variant(f[1]);
    if (!variant) throw DataError("line " + std::to_string(line_no) + ": unknown variant " + f[1]);
    rows.push_back({f[0], *variant, MetricId::parse(f[2]), parse_double(f[3], line_no)});
  }
  return rows;
}

void sort_metric_rows(std::vector<MetricValue>& rows) {
  std::sort(rows.begin(), rows.end(), [](const MetricValue& a, const MetricValue& b) {
    return std::forward_as_tuple(a.qid, a.variant, a.metric) < std::forward_as_tuple(b.qid, b.variant, b.metric);
  });
}

void write_breakdown_json(std::ostream& out, const BreakdownTable& table) {
  ordered_json j;
  j["rules"] = ordered_json::array();
  for (const auto& c : table.columns) j["rules"].push_back({{"key", c.key}, {"label", c.label}});
  j["bins"] = ordered_json::array();
  for (int bin = 0; bin < 8; ++bin) {
    ordered_json row;
    row["bin"] = bin;
    row["pattern"] = OutcomePattern::from_bin(bin).symbols();
    row["counts"] = ordered_json::array();
    row["subcounts"] = ordered_json::array();
    for (const auto& c : table.columns) {
      row["counts"].push_back(c.counts[bin]);
      row["subcounts"].push_back(c.subcounts[bin]);
    }
    j["bins"].push_back(std::move(row));
  }
  j["totals"] = {{"samples", table.total}, {"human_equals_original", table.total_human_equals_original}};
  out << j.dump(2) << '\n';
}

BreakdownTable read_breakdown_json(std::istream& in) {
  BreakdownTable table;
  try {
    auto j = ordered_json::parse(in);
    for (const auto& r : j.at("rules")) {
      table.columns.push_back({r.at("label").get<std::string>(), r.at("key").get<std::string>(), {}, {}});
    }
    for (const auto& row : j.at("bins")) {
      auto bin = row.at("bin").get<int>();
      auto pattern = OutcomePattern::parse(row.at("pattern").get<std::string>());
      if (bin < 0 || bin > 7 || pattern.bin() != bin) throw DataError("breakdown JSON: bin/pattern mismatch");
      const auto& counts = row.at("counts");
      const auto& subcounts = row.at("subcounts");
      if (counts.size() != table.columns.size() || subcounts.size() != table.columns.size()) {
        throw DataError("breakdown JSON: bin " + std::to_string(bin) + " has the wrong number of columns");
      }
      for (std::size_t c = 0; c < table.columns.size(); ++c) {
        table.columns[c].counts[bin] = counts[c].get<std::size_t>();
        table.columns[c].subcounts[bin] = subcounts[c].get<std::size_t>();
      }
    }
    table.total = j.at("totals").at("samples").get<std::size_t>();
    table.total_human_equals_original = j.at("totals").at("human_equals_original").get<std::size_t>();
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("breakdown JSON: ") + e.what());
  }
  return table;
}

void write_breakdown_markdown(std::ostream& out, const BreakdownTable& table) {
  out << "| Original | QR | Human |";
  for (const auto& c : table.columns) out << ' ' << c.label << " |";
  out << "\n|:---:|:---:|:---:|";
  for (std::size_t i = 0; i < table.columns.size(); ++i) out << "---:|";
  out << '\n';
  for (int bin = 0; bin < 8; ++bin) {
    auto p = OutcomePattern::from_bin(bin);
    out << "| " << (p.original_correct ? "✓" : "×") << " | " << (p.model_correct ? "✓" : "×") << " | "
        << (p.human_correct ? "✓" : "×") << " |";
    for (const auto& c : table.columns) {
      out << ' ' << c.counts[bin];
      if (c.subcounts[bin] > 0) out << " (" << c.subcounts[bin] << ')';
      out << " |";
    }
    out << '\n';
  }
  out << "\nTotal " << table.total << " (" << table.total_human_equals_original << ")\n";
}

void write_sweep_csv(std::ostream& out, const SweepSeries& series) {
  out << "threshold,qa_error,qr_error,correct_with_rewriting,correct_without_rewriting\n";
  for (const auto& p : series.points) {
    out << fixed6(p.threshold) << ',' << fixed6(p.qa_error) << ',' << fixed6(p.qr_error) << ','
        << fixed6(p.correct_with_rewriting) << ',' << fixed6(p.correct_without_rewriting) << '\n';
  }
}

SweepSeries read_sweep_csv(std::istream& in) {
  SweepSeries series;
  std::size_t line_no = 1;
  for (const auto& f : read_csv(in, "threshold,qa_error,qr_error,correct_with_rewriting,correct_without_rewriting", 5)) {
    ++line_no;
    series.points.push_back({parse_double(f[0], line_no), parse_double(f[1], line_no), parse_double(f[2], line_no),
                             parse_double(f[3], line_no), parse_double(f[4], line_no)});
  }
  if (series.points.size() >= 2) series.step = series.points[1].threshold - series.points[0].threshold;
  return series;
}

void write_sweep_svg(std::ostream& out, const SweepSeries& series, const std::string& title) {
  struct Layer {
    const char* id;
    const char* fill;
    double SweepPoint::*value;
  };
  // Bottom to top.
  static constexpr std::array<Layer, 4> kLayers = {{
      {"correct_without_rewriting", "#f4a6c6", &SweepPoint::correct_without_rewriting},
      {"correct_with_rewriting", "#b5e3a1", &SweepPoint::correct_with_rewriting},
      {"qr_error", "#f7b267", &SweepPoint::qr_error},
      {"qa_error", "#6c9bd2", &SweepPoint::qa_error},
  }};
  svg_open(out, title);
  std::vector<double> base(series.points.size(), 0.0);
  out << "<g id=\"regions\" stroke=\"none\">\n";
  for (const auto& layer : kLayers) {
    std::vector<double> top(base);
    for (std::size_t i = 0; i < top.size(); ++i) top[i] += series.points[i].*layer.value;
    out << "<path id=\"" << layer.id << "\" fill=\"" << layer.fill << "\" d=\"";
    for (std::size_t i = 0; i < top.size(); ++i) {
      out << (i == 0 ? "M" : " L") << num(Frame::x(series.points[i].threshold)) << ' '
          << num(Frame::y(std::min(top[i], 1.0)));
    }
    for (std::size_t i = top.size(); i-- > 0;) {
      out << " L" << num(Frame::x(series.points[i].threshold)) << ' ' << num(Frame::y(std::min(base[i], 1.0)));
    }
    out << " Z\"/>\n";
    base = std::move(top);
  }
  out << "</g>\n";
  svg_axes(out, "threshold", "proportion of samples");
  out << "<g id=\"legend\" font-family=\"sans-serif\" font-size=\"11\">\n";
  for (std::size_t k = 0; k < kLayers.size(); ++k) {
    const auto& layer = kLayers[kLayers.size() - 1 - k];
    double y = Frame::kTop + 10 + 20.0 * static_cast<double>(k);
    out << "<rect x=\"" << num(Frame::x(1) + 15) << "\" y=\"" << num(y) << "\" width=\"12\" height=\"12\" fill=\""
        << layer.fill << "\"/>\n"
        << "<text x=\"" << num(Frame::x(1) + 32) << "\" y=\"" << num(y + 10) << "\">" << layer.id << "</text>\n";
  }
  out << "</g>\n</svg>\n";
}

void write_correlation_json(std::ostream& out, const CorrelationReport& report) {
  ordered_json j;
  j["n"] = report.n;
  j["pearson_r"] = report.pearson_r;
  j["qr_metric"] = report.qr_metric;
  j["qa_metric"] = report.qa_metric;
  j["filter_rule"] = report.filter_rule;
  out << j.dump(2) << '\n';
}

CorrelationReport read_correlation_json(std::istream& in) {
  CorrelationReport report;
  try {
    auto j = ordered_json::parse(in);
    report.n = j.at("n").get<std::size_t>();
    report.pearson_r = j.at("pearson_r").get<double>();
    report.qr_metric = j.at("qr_metric").get<std::string>();
    report.qa_metric = j.at("qa_metric").get<std::string>();
    report.filter_rule = j.value("filter_rule", "none");
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("correlation JSON: ") + e.what());
  }
  return report;
}

void write_scatter_csv(std::ostream& out, const CorrelationReport& report) {
  out << "qid,qr_metric,qr_value,qa_metric,qa_value\n";
  for (const auto& s : report.series) {
    out << csv_field(s.qid) << ',' << report.qr_metric << ',' << fixed6(s.qr_similarity) << ',' << report.qa_metric
        << ',' << fixed6(s.qa_score) << '\n';
  }
}

std::vector<CorrelationSample> read_scatter_csv(std::istream& in) {
  std::vector<CorrelationSample> samples;
  std::size_t line_no = 1;
  for (const auto& f : read_csv(in, "qid,qr_metric,qr_value,qa_metric,qa_value", 5)) {
    ++line_no;
    samples.push_back({f[0], parse_double(f[2], line_no), parse_double(f[4], line_no)});
  }
  return samples;
}

void write_scatter_svg(std::ostream& out, const CorrelationReport& report) {
  std::ostringstream title;
  title << report.qr_metric << " vs " << report.qa_metric << " (n = " << report.n
        << ", Pearson " << num(report.pearson_r) << ")";
  svg_open(out, title.str());
  out << "<g id=\"points\" fill=\"#1f77b4\" fill-opacity=\"0.6\" stroke=\"none\">\n";
  for (const auto& s : report.series) {
    out << "<circle cx=\"" << num(Frame::x(std::clamp(s.qr_similarity, 0.0, 1.0))) << "\" cy=\""
        << num(Frame::y(std::clamp(s.qa_score, 0.0, 1.0))) << "\" r=\"3\"/>\n";
  }
  out << "</g>\n";
  svg_axes(out, report.qr_metric, report.qa_metric);
  out << "</svg>\n";
}

}  // namespace rprobe
