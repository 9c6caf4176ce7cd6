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

#include "rewrite_probe/cli.hpp"

#include <algorithm>
#include <fstream>
#include <future>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "rewrite_probe/errors.hpp"
#include "rewrite_probe/kernels.hpp"
#include "rewrite_probe/report_io.hpp"

namespace rprobe::cli {
namespace {

namespace fs = std::filesystem;

struct Corpus {
  std::vector<QuestionTriple> triples;  // qid-sorted
  JudgmentSet judgments;
  GoldAnswerSet gold;
  PerVariant<RunSet> runs;
  PerVariant<SpanPredictionSet> spans;
  PerVariant<std::optional<EmbeddingStore>> embeddings;
  TokenizationPolicy policy;
  ValidationReport validation;
  Warnings warnings;
};

std::string flag_suffix(Variant v) {
  return v == Variant::kOriginal ? "original" : v == Variant::kModelRewrite ? "model" : "human";
}

std::string artifact_name(const char* kind, Variant v) { return std::string(kind) + " " + std::string(to_string(v)); }

// Parses every input file. Run/span files of the three variants are read
// concurrently; their warnings are merged in variant order.
Corpus read_inputs(const RunConfig& config) {
  Corpus corpus;
  {
    auto in = open_input(config.triples);
    corpus.triples = parse_triples(in);
  }
  if (!config.stopwords.empty()) {
    auto in = open_input(config.stopwords);
    corpus.policy.stopwords = load_stopwords(in, corpus.policy);
  }
  corpus.policy.drop_articles = config.drop_articles;

  if (*config.task == Task::kRetrieval) {
    auto qrels = open_input(config.qrels);
    corpus.judgments = parse_qrels(qrels, &corpus.warnings);
    corpus.judgments.binarization_grade = config.cutoffs.binarization_grade;
    std::array<std::future<std::pair<RunSet, Warnings>>, 3> pending;
    for (Variant v : kAllVariants) {
      pending[static_cast<std::size_t>(v)] = std::async(std::launch::async, [&config, v] {
        Warnings w;
        auto in = open_input(config.runs[v]);
        RunSet runs = parse_run_file(in, v, &w);
        return std::pair{std::move(runs), std::move(w)};
      });
    }
    for (Variant v : kAllVariants) {
      auto [runs, w] = pending[static_cast<std::size_t>(v)].get();
      corpus.runs[v] = std::move(runs);
      corpus.warnings.insert(corpus.warnings.end(), w.begin(), w.end());
    }
  } else {
    auto gold = open_input(config.gold);
    corpus.gold = parse_gold(gold);
    std::array<std::future<SpanPredictionSet>, 3> pending;
    for (Variant v : kAllVariants) {
      pending[static_cast<std::size_t>(v)] = std::async(std::launch::async, [&config, v] {
        auto in = open_input(config.spans[v]);
        return parse_spans(in, v);
      });
    }
    for (Variant v : kAllVariants) corpus.spans[v] = pending[static_cast<std::size_t>(v)].get();
  }
  for (Variant v : kAllVariants) {
    if (config.embeddings[v].empty()) continue;
    auto in = open_input(config.embeddings[v]);
    corpus.embeddings[v] = parse_embeddings(in, v);
  }
  return corpus;
}

std::vector<ArtifactCoverage> coverage(const RunConfig& config, const Corpus& corpus) {
  std::vector<ArtifactCoverage> artifacts;
  if (*config.task == Task::kRetrieval) {
    for (Variant v : kAllVariants) artifacts.push_back(coverage_of(artifact_name("run", v), corpus.runs[v]));
    artifacts.push_back(coverage_of("qrels", corpus.judgments));
  } else {
    for (Variant v : kAllVariants) artifacts.push_back(coverage_of(artifact_name("spans", v), corpus.spans[v]));
    artifacts.push_back(coverage_of("gold", corpus.gold));
  }
  for (Variant v : kAllVariants) {
    if (corpus.embeddings[v]) {
      artifacts.push_back(coverage_of(artifact_name("embeddings", v), corpus.embeddings[v]->vectors));
    }
  }
  return artifacts;
}

// Reads, validates and restricts the corpus to fully covered qids.
Corpus load_corpus(const RunConfig& config) {
  Corpus corpus = read_inputs(config);
  corpus.validation = validate_corpus(corpus.triples, coverage(config, corpus), config.validation);
  if (corpus.validation.dropped > 0) {
    std::ostringstream msg;
    msg << "dropped " << corpus.validation.dropped << " incomplete qid(s):";
    std::set<std::string> dropped;
    for (const auto& g : corpus.validation.missing) dropped.insert(g.qid);
    for (const auto& qid : dropped) msg << ' ' << qid;
    corpus.warnings.push_back(msg.str());
    corpus.triples = restrict_to(corpus.triples, corpus.validation.kept);
  }
  std::sort(corpus.triples.begin(), corpus.triples.end(),
            [](const QuestionTriple& a, const QuestionTriple& b) { return a.qid < b.qid; });
  if (corpus.triples.empty()) throw DataError("no samples left after validation");
  return corpus;
}

std::vector<EvaluatedSample> evaluate(const RunConfig& config, const Corpus& corpus) {
  std::vector<std::string> qids;
  for (const auto& t : corpus.triples) qids.push_back(t.qid);
  std::vector<EvaluatedSample> samples(qids.size());
  for (std::size_t i = 0; i < qids.size(); ++i) {
    samples[i].qid = qids[i];
    samples[i].human_equals_original = corpus.triples[i].human_equals_original;
  }
  if (*config.task == Task::kRetrieval) {
    kernels::RetrievalInputs in;
    for (Variant v : kAllVariants) in.runs[v] = &corpus.runs[v];
    in.judgments = &corpus.judgments;
    in.cutoffs = config.cutoffs;
    auto scores = kernels::omp::retrieval_scores(qids, in);
    for (std::size_t i = 0; i < qids.size(); ++i) {
      samples[i].scores[MetricId::ndcg(config.cutoffs.ndcg_k)] = scores[i].ndcg;
      samples[i].scores[MetricId::precision_at_1()] = scores[i].precision_at_1;
    }
  } else {
    kernels::ReadingInputs in;
    for (Variant v : kAllVariants) in.spans[v] = &corpus.spans[v];
    in.gold = &corpus.gold;
    in.policy = corpus.policy;
    auto scores = kernels::omp::reading_scores(qids, in);
    for (std::size_t i = 0; i < qids.size(); ++i) samples[i].scores[MetricId::span_f1()] = scores[i];
  }
  return samples;
}

void report_warnings(const Warnings& warnings, std::ostream& err) {
  for (const auto& w : warnings) err << "warning: " << w << '\n';
}

void write_file(const fs::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << contents;
  if (!out) throw DataError("cannot write " + path.string());
}

// Per-variant metrics available for a task, after cutoff adjustments.
void require_task_metric(const RunConfig& config, const MetricId& metric) {
  const bool retrieval = *config.task == Task::kRetrieval;
  bool ok = retrieval ? (metric == MetricId::ndcg(config.cutoffs.ndcg_k) || metric == MetricId::precision_at_1())
                      : metric == MetricId::span_f1();
  if (!ok) {
    throw UsageError("metric " + metric.str() + " is not computed for task " +
                     (retrieval ? std::string("retrieval") : std::string("reading")));
  }
}

// NDCG cutoff follows the ndcg@k named by rules, sweep metric or filter.
RunConfig with_cutoffs(RunConfig config) {
  std::set<int> ndcg_ks;
  auto note = [&](const MetricId& m) {
    if (m.kind == MetricId::Kind::kNdcg) ndcg_ks.insert(m.k);
  };
  for (const auto& r : config.rules) note(r.metric);
  if (config.sweep_metric) note(*config.sweep_metric);
  if (config.filter_rule) note(config.filter_rule->metric);
  if (config.qa_measure && config.qa_measure->kind == QaMeasure::Kind::kModelMetric) note(config.qa_measure->metric);
  if (ndcg_ks.size() > 1) throw UsageError("only one NDCG cutoff may be used per invocation");
  if (ndcg_ks.size() == 1) config.cutoffs.ndcg_k = *ndcg_ks.begin();
  return config;
}

std::vector<CorrectnessRule> default_rules(Task task) {
  return CorrectnessRule::parse_list(task == Task::kRetrieval ? "p@1=1,ndcg@3>0,ndcg@3>=0.5,ndcg@3=1"
                                                              : "span_f1>0,span_f1>=0.5,span_f1=1");
}

std::string impact_csv(const BreakdownTable& table) {
  std::ostringstream out;
  out << "rule,all,human_differs\n";
  for (const auto& c : table.columns) {
    out << c.key;
    for (ImpactScope scope : {ImpactScope::kAll, ImpactScope::kHumanDiffers}) {
      try {
        out << ',' << fixed6(rewriting_impact_fraction(c, scope));
      } catch (const UndefinedMetricError&) {
        out << ",undefined";
      }
    }
    out << '\n';
  }
  return out.str();
}

template <typename Fn>
int guarded(std::ostream& err, Fn&& fn) {
  try {
    return fn();
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const UndefinedCorrelationError& e) {
    err << "error: undefined correlation: " << e.what() << '\n';
    return kExitData;
  } catch (const UndefinedMetricError& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const DataError& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  }
}

void prepare_out_dir(const RunConfig& config) { fs::create_directories(config.out_dir); }

}  // namespace

void RunConfig::check() const {
  const bool outcomes_only = command == "breakdown" && !outcomes.empty();
  if (command != "validate" && out_dir.empty()) throw UsageError("--out is required");
  if (!(step > 0.0 && step <= 1.0)) throw UsageError("--step must be in (0, 1]");
  if (outcomes_only) return;
  if (!task) throw UsageError("--task is required");
  if (triples.empty()) throw UsageError("--triples is required");
  if (*task == Task::kRetrieval) {
    if (qrels.empty()) throw UsageError("--qrels is required for task retrieval");
    for (Variant v : kAllVariants) {
      if (runs[v].empty()) throw UsageError("--run-" + flag_suffix(v) + " is required for task retrieval");
    }
  } else {
    if (gold.empty()) throw UsageError("--gold is required for task reading");
    for (Variant v : kAllVariants) {
      if (spans[v].empty()) throw UsageError("--spans-" + flag_suffix(v) + " is required for task reading");
    }
  }
}

int cmd_metrics(const RunConfig& raw, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    raw.check();
    const RunConfig config = with_cutoffs(raw);
    Corpus corpus = load_corpus(config);
    report_warnings(corpus.warnings, err);
    auto samples = evaluate(config, corpus);
    std::vector<MetricValue> rows;
    for (const auto& s : samples) {
      for (const auto& [metric, values] : s.scores) {
        for (Variant v : kAllVariants) rows.push_back({s.qid, v, metric, values[static_cast<std::size_t>(v)]});
      }
    }
    sort_metric_rows(rows);
    std::ostringstream csv;
    write_metrics_csv(csv, rows);
    prepare_out_dir(config);
    write_file(config.out_dir / "metrics.csv", csv.str());
    out << "wrote " << rows.size() << " metric rows for " << samples.size() << " questions\n";
    return kExitOk;
  });
}

int cmd_breakdown(const RunConfig& raw, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    raw.check();
    BreakdownTable table;
    if (!raw.outcomes.empty()) {
      auto in = open_input(raw.outcomes);
      auto records = parse_outcome_records(in);
      std::vector<std::string> keys;
      for (const auto& r : raw.rules) keys.push_back(r.str());
      table = build_breakdown(records, keys);
    } else {
      RunConfig config = raw;
      if (config.rules.empty()) config.rules = default_rules(*config.task);
      config = with_cutoffs(config);
      for (const auto& r : config.rules) require_task_metric(config, r.metric);
      Corpus corpus = load_corpus(config);
      auto samples = evaluate(config, corpus);
      table = build_breakdown(samples, config.rules, &corpus.warnings);
      report_warnings(corpus.warnings, err);
    }
    std::ostringstream json, markdown;
    write_breakdown_json(json, table);
    write_breakdown_markdown(markdown, table);
    prepare_out_dir(raw);
    write_file(raw.out_dir / "breakdown.json", json.str());
    write_file(raw.out_dir / "breakdown.md", markdown.str());
    write_file(raw.out_dir / "impact.csv", impact_csv(table));
    out << markdown.str();
    return kExitOk;
  });
}

int cmd_sweep(const RunConfig& raw, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    raw.check();
    RunConfig config = raw;
    if (!config.sweep_metric) {
      config.sweep_metric = *config.task == Task::kRetrieval ? MetricId::ndcg(3) : MetricId::span_f1();
    }
    const MetricId metric = *config.sweep_metric;
    if (metric.kind != MetricId::Kind::kNdcg && metric.kind != MetricId::Kind::kSpanF1) {
      throw UsageError("sweep needs a continuous metric (ndcg@k or span_f1), got " + metric.str());
    }
    config = with_cutoffs(config);
    require_task_metric(config, metric);
    Corpus corpus = load_corpus(config);
    report_warnings(corpus.warnings, err);
    auto samples = evaluate(config, corpus);
    std::vector<VariantScores> values;
    for (const auto& s : samples) values.push_back(s.scores.at(metric));
    auto series = threshold_sweep(values, config.step, metric);
    std::ostringstream csv, svg;
    write_sweep_csv(csv, series);
    write_sweep_svg(svg, series, "Outcome regions by " + metric.display() + " threshold");
    prepare_out_dir(config);
    write_file(config.out_dir / "sweep.csv", csv.str());
    write_file(config.out_dir / "sweep.svg", svg.str());
    out << "wrote " << series.points.size() << " sweep rows over " << series.samples << " questions\n";
    return kExitOk;
  });
}

int cmd_correlate(const RunConfig& raw, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    raw.check();
    RunConfig config = raw;
    const bool retrieval = *config.task == Task::kRetrieval;
    if (!config.qa_measure) {
      config.qa_measure = retrieval ? QaMeasure::parse("recall@" + std::to_string(config.cutoffs.recall_k))
                                    : QaMeasure::parse("span_jaccard");
    }
    if (!config.filter_rule && !config.filter_disabled) {
      config.filter_rule = CorrectnessRule::parse(retrieval ? "p@1=1" : "span_f1=1");
    }
    config = with_cutoffs(config);
    const QaMeasure qa = *config.qa_measure;
    if (qa.kind == QaMeasure::Kind::kModelMetric) require_task_metric(config, qa.metric);
    if (qa.kind == QaMeasure::Kind::kAnswerSetRecall && !retrieval) throw UsageError("recall@k needs task retrieval");
    if (qa.kind == QaMeasure::Kind::kSpanJaccard && retrieval) throw UsageError("span_jaccard needs task reading");
    if (config.filter_rule && !config.filter_disabled) require_task_metric(config, config.filter_rule->metric);
    if (config.qr_metric == SimilarityMetric::kCosine &&
        (config.embeddings[Variant::kModelRewrite].empty() || config.embeddings[Variant::kHumanRewrite].empty())) {
      throw UsageError("--qr-metric cosine needs --embeddings-model and --embeddings-human");
    }

    Corpus corpus = load_corpus(config);
    report_warnings(corpus.warnings, err);
    auto samples = evaluate(config, corpus);

    CorrelationRequest request;
    request.qr_metric = config.qr_metric;
    request.qa_measure = qa;
    if (!config.filter_disabled) request.filter = config.filter_rule;
    CorrelationCorpus view;
    view.triples = corpus.triples;
    view.samples = samples;
    for (Variant v : kAllVariants) {
      view.runs[v] = &corpus.runs[v];
      view.spans[v] = &corpus.spans[v];
      view.embeddings[v] = corpus.embeddings[v] ? &*corpus.embeddings[v] : nullptr;
    }
    view.policy = corpus.policy;
    CorrelationReport report = correlate(request, view);

    std::ostringstream json, csv, svg;
    write_correlation_json(json, report);
    write_scatter_csv(csv, report);
    write_scatter_svg(svg, report);
    prepare_out_dir(config);
    write_file(config.out_dir / "correlation.json", json.str());
    write_file(config.out_dir / "scatter.csv", csv.str());
    write_file(config.out_dir / "scatter.svg", svg.str());
    out << report.qr_metric << " vs " << report.qa_metric << ": n = " << report.n << ", pearson_r = "
        << fixed6(report.pearson_r) << '\n';
    return kExitOk;
  });
}

int cmd_validate(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    config.check();
    Corpus corpus = read_inputs(config);
    std::ostringstream text;
    int code = kExitOk;
    auto report = validate_corpus(corpus.triples, coverage(config, corpus), ValidationMode::kLenient);
    for (const auto& g : report.missing) text << "missing: " << g.qid << " has no entry in " << g.artifact << '\n';
    for (const auto& g : report.extra) text << "extra: " << g.qid << " in " << g.artifact << " is not in the triples\n";
    for (const auto& w : corpus.warnings) text << "warning: " << w << '\n';
    text << report.issue_count() << " issues, " << report.kept.size() << " complete questions\n";
    if (config.validation == ValidationMode::kStrict && !report.clean()) code = kExitData;
    out << text.str();
    if (!config.out_dir.empty()) {
      prepare_out_dir(config);
      write_file(config.out_dir / "validation.txt", text.str());
    }
    return code;
  });
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Question-rewriting robustness analysis for conversational QA runs", "rewrite-probe"};
  app.require_subcommand(1);

  RunConfig config;
  std::string task, rules, metric, qr_metric, qa_metric, filter_rule;
  std::string triples, qrels, gold, outcomes, stopwords, out_dir;
  std::array<std::string, 3> runs, spans, embeddings;
  bool strict = false;

  const std::vector<std::pair<std::string, std::string>> commands = {
      {"metrics", "Per-question metric table (metrics.csv)"},
      {"breakdown", "Eight-bin outcome breakdown (breakdown.json, breakdown.md, impact.csv)"},
      {"sweep", "Outcome regions over a threshold grid (sweep.csv, sweep.svg)"},
      {"correlate", "Question similarity vs answer quality (correlation.json, scatter.csv, scatter.svg)"},
      {"validate", "Coverage and consistency report for the inputs"},
  };
  const std::array<std::string, 3> suffix = {"original", "model", "human"};
  for (const auto& [name, description] : commands) {
    CLI::App* sub = app.add_subcommand(name, description);
    sub->add_option("--task", task, "retrieval or reading")->check(CLI::IsMember({"retrieval", "reading"}));
    sub->add_option("--triples", triples, "Question triples (JSON-lines)");
    sub->add_option("--qrels", qrels, "Relevance judgments");
    sub->add_option("--gold", gold, "Gold answers (JSON-lines)");
    for (std::size_t i = 0; i < 3; ++i) {
      sub->add_option("--run-" + suffix[i], runs[i], "Run file for the " + suffix[i] + " question");
      sub->add_option("--spans-" + suffix[i], spans[i], "Predicted spans for the " + suffix[i] + " question");
      sub->add_option("--embeddings-" + suffix[i], embeddings[i], "Sentence vectors for the " + suffix[i] + " question");
    }
    sub->add_option("--rules", rules, "Correctness rules, e.g. \"p@1=1,ndcg@3>=0.5\"");
    sub->add_option("--step", config.step, "Sweep step")->capture_default_str();
    sub->add_option("--metric", metric, "Sweep metric (ndcg@k or span_f1)");
    sub->add_option("--qr-metric", qr_metric, "rouge1_recall, jaccard or cosine");
    sub->add_option("--qa-metric", qa_metric, "recall@k, p@1, ndcg@k, span_f1 or span_jaccard");
    sub->add_option("--filter-rule", filter_rule, "Keep samples whose human rewrite satisfies this rule; \"none\" keeps all");
    sub->add_option("--grade", config.cutoffs.binarization_grade, "Relevance grade counted as relevant for P@1")
        ->capture_default_str();
    sub->add_flag("--drop-articles", config.drop_articles, "Remove a/an/the before span F1");
    sub->add_option("--stopwords", stopwords, "Stop-word list, one per line");
    sub->add_option("--outcomes", outcomes, "Pre-classified outcome records (breakdown only)");
    sub->add_flag("--strict", strict, "Fail on any coverage gap instead of dropping questions");
    sub->add_option("--out", out_dir, "Output directory");
  }

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    config.command = app.get_subcommands().front()->get_name();
    if (!task.empty()) config.task = task == "retrieval" ? Task::kRetrieval : Task::kReading;
    config.triples = triples;
    config.qrels = qrels;
    config.gold = gold;
    config.outcomes = outcomes;
    config.stopwords = stopwords;
    config.out_dir = out_dir;
    for (Variant v : kAllVariants) {
      config.runs[v] = runs[static_cast<std::size_t>(v)];
      config.spans[v] = spans[static_cast<std::size_t>(v)];
      config.embeddings[v] = embeddings[static_cast<std::size_t>(v)];
    }
    config.validation = strict ? ValidationMode::kStrict : ValidationMode::kLenient;
    if (!rules.empty()) config.rules = CorrectnessRule::parse_list(rules);
    if (!metric.empty()) config.sweep_metric = MetricId::parse(metric);
    if (!qr_metric.empty()) {
      if (qr_metric == "rouge1_recall" || qr_metric == "rouge") {
        config.qr_metric = SimilarityMetric::kRouge1Recall;
      } else if (qr_metric == "jaccard") {
        config.qr_metric = SimilarityMetric::kJaccard;
      } else if (qr_metric == "cosine") {
        config.qr_metric = SimilarityMetric::kCosine;
      } else {
        throw UsageError("unknown --qr-metric " + qr_metric);
      }
    }
    if (!qa_metric.empty()) config.qa_measure = QaMeasure::parse(qa_metric);
    if (filter_rule == "none") {
      config.filter_disabled = true;
    } else if (!filter_rule.empty()) {
      config.filter_rule = CorrectnessRule::parse(filter_rule);
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  if (config.command == "metrics") return cmd_metrics(config, out, err);
  if (config.command == "breakdown") return cmd_breakdown(config, out, err);
  if (config.command == "sweep") return cmd_sweep(config, out, err);
  if (config.command == "correlate") return cmd_correlate(config, out, err);
  return cmd_validate(config, out, err);
}

}  // namespace rprobe::cli
