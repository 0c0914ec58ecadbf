// Copyright 2026 The GlossWeave Authors.
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

#include "glossweave/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>

#include <CLI11.hpp>
#include <json.hpp>

#include "glossweave/config.hpp"
#include "glossweave/corpus.hpp"
#include "glossweave/ctc.hpp"
#include "glossweave/error.hpp"
#include "glossweave/llm_gloss.hpp"
#include "glossweave/mlc.hpp"
#include "glossweave/pipeline.hpp"
#include "glossweave/reorder.hpp"
#include "glossweave/simulator.hpp"
#include "log.hpp"

namespace glossweave {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Options {
  std::string config;
  std::string corpus;
  std::string out;
  std::string clf;
  std::string rec;
  std::string audit;
  std::string mock;
  std::string endpoint;
  std::string model;
  std::string examples;
  std::string targets;
  std::string convention;
  std::vector<std::string> inputs;
  int num_examples = -1;
  std::uint64_t seed = 0;
  int epochs = 0;
  bool quiet = false;
};

fs::path corpus_file(const std::string& arg) {
  if (arg.empty()) throw config_error("--corpus is required");
  fs::path p(arg);
  if (fs::is_directory(p)) return p / "corpus.jsonl";
  return p;
}

std::optional<fs::path> dev_file(const std::string& arg) {
  fs::path p = corpus_file(arg).parent_path() / "dev.jsonl";
  if (fs::exists(p)) return p;
  return std::nullopt;
}

fs::path out_corpus_file(const std::string& out) {
  if (out.empty()) throw config_error("--out is required");
  fs::path p(out);
  if (p.extension() == ".jsonl") return p;
  return p / "corpus.jsonl";
}

ToolkitConfig effective_config(const Options& o, CLI::App* sub) {
  ToolkitConfig c = o.config.empty() ? ToolkitConfig{} : load_config(o.config);
  if (sub->count("--seed")) c.set_seed(o.seed);
  if (sub->count("--epochs")) {
    c.mlc.epochs = o.epochs;
    c.ctc.epochs = o.epochs;
  }
  c.validate();
  log::debug("effective config:\n{}", config_to_json_text(c));
  return c;
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw io_error("cannot open for writing: " + path.string());
  out << text;
}

// --- subcommands ---------------------------------------------------------

int cmd_simulate(const Options& o, CLI::App* sub) {
  auto c = effective_config(o, sub);
  if (o.out.empty()) throw config_error("--out is required");
  auto corpus = generate_corpus(c.sim);
  write_sim_corpus(o.out, corpus);
  write_text(fs::path(o.out) / "config.json", config_to_json_text(c) + "\n");
  log::info("wrote {} train / {} dev records to {}", corpus.train.size(), corpus.dev.size(), o.out);
  return 0;
}

void write_failures(const fs::path& path, const std::vector<GenerationFailure>& failures) {
  std::string text;
  for (const auto& f : failures) text += json{{"id", f.id}, {"error", f.message}}.dump() + "\n";
  write_text(path, text);
}

int cmd_gengloss(const Options& o, CLI::App* sub) {
  auto c = effective_config(o, sub);
  if (!o.mock.empty()) c.llm.client.mock_path = o.mock;
  if (!o.endpoint.empty()) c.llm.client.endpoint = o.endpoint;
  if (!o.model.empty()) c.llm.client.model = o.model;
  if (!o.examples.empty()) c.llm.examples_path = o.examples;
  if (sub->count("--num-examples")) c.llm.num_examples = o.num_examples;
  if (!o.convention.empty()) c.llm.convention = parse_convention(o.convention);
  c.validate();

  std::vector<ExamplePair> pairs;
  if (!c.llm.examples_path.empty()) pairs = load_example_pairs(c.llm.examples_path);
  if (c.llm.num_examples >= 0 && static_cast<std::size_t>(c.llm.num_examples) < pairs.size())
    pairs.resize(static_cast<std::size_t>(c.llm.num_examples));
  PromptSpec spec = PromptSpec::for_convention(c.llm.convention, std::move(pairs));
  if (c.llm.queries_per_call > 0) spec.queries_per_call = c.llm.queries_per_call;

  std::unique_ptr<Transport> transport;
  if (!c.llm.client.mock_path.empty())
    transport = std::make_unique<MockTransport>(fs::path(c.llm.client.mock_path));
  else
    transport = std::make_unique<HttpTransport>(c.llm.client);
  const RetryPolicy retry{c.llm.client.max_retries, c.llm.client.backoff_ms};

  const fs::path out = out_corpus_file(o.out);
  std::vector<std::pair<fs::path, fs::path>> jobs = {{corpus_file(o.corpus), out}};
  if (auto dev = dev_file(o.corpus)) jobs.push_back({*dev, out.parent_path() / "dev.jsonl"});

  std::size_t ok = 0;
  std::vector<GenerationFailure> failures;
  for (const auto& [in, dst] : jobs) {
    auto result = generate(load_corpus(in), spec, *transport, retry);
    if (c.llm.max_gloss_len > 0)
      for (auto& r : result.records)
        r.llm_gloss = cap_length(r.llm_gloss, static_cast<std::size_t>(c.llm.max_gloss_len), remove_words());
    save_corpus(dst, result.records);
    ok += result.records.size();
    failures.insert(failures.end(), result.errors.begin(), result.errors.end());
  }
  for (const auto& f : failures) log::warn("gengloss: record '{}' failed: {}", f.id, f.message);
  write_failures(out.parent_path() / "gengloss_errors.jsonl", failures);
  log::info("gengloss: {} records glossed, {} failed, {} transport calls, {} network calls", ok, failures.size(),
            transport->calls(), network_call_count());
  return ok == 0 && !failures.empty() ? 2 : 0;
}

int cmd_baseline(const Options& o, CLI::App* sub) {
  auto c = effective_config(o, sub);
  if (!o.convention.empty()) c.llm.convention = parse_convention(o.convention);
  const fs::path out = out_corpus_file(o.out);
  std::vector<std::pair<fs::path, fs::path>> jobs = {{corpus_file(o.corpus), out}};
  if (auto dev = dev_file(o.corpus)) jobs.push_back({*dev, out.parent_path() / "dev.jsonl"});
  for (const auto& [in, dst] : jobs) {
    auto records = load_corpus(in);
    for (auto& r : records) {
      std::string text;
      for (const auto& w : r.text) text += (text.empty() ? "" : " ") + w;
      r.llm_gloss = stopword_baseline(text, remove_words(), c.llm.convention);
      if (r.llm_gloss.empty()) log::warn("baseline-gloss: record '{}' has an empty gloss", r.id);
    }
    save_corpus(dst, records);
  }
  return 0;
}

std::vector<SampleRecord> with_gloss(std::vector<SampleRecord> records) {
  std::vector<SampleRecord> out;
  for (auto& r : records) {
    if (r.llm_gloss.empty())
      log::warn("record '{}' has an empty llm_gloss; skipped", r.id);
    else
      out.push_back(std::move(r));
  }
  return out;
}

int cmd_train_mlc(const Options& o, CLI::App* sub) {
  auto c = effective_config(o, sub);
  if (o.out.empty()) throw config_error("--out is required");
  auto records = with_gloss(load_corpus(corpus_file(o.corpus)));
  const auto vocab = training_vocabulary(records, c.mlc.w_base);
  auto clf = train_mlc(records, vocab, c.mlc,
                       [](const MlcEpochStats& s) { log::info("mlc epoch {:3d}  loss {:.6f}", s.epoch, s.mean_loss); });
  save_classifier(o.out, clf);
  save_vocabulary(o.out + ".vocab.json", vocab);
  return 0;
}

int cmd_align(const Options& o, CLI::App* sub) {
  effective_config(o, sub);
  if (o.clf.empty()) throw config_error("--clf is required");
  const fs::path in = corpus_file(o.corpus);
  const auto clf = load_classifier(o.clf);
  const auto vocab = load_vocabulary(o.clf + ".vocab.json");
  auto result = align_corpus(load_corpus(in), clf, vocab);
  for (const auto& w : result.warnings) log::warn("align: {}", w);
  save_corpus(o.out.empty() ? in : out_corpus_file(o.out), result.records);
  if (!o.audit.empty()) {
    std::string text;
    for (const auto& a : result.alignments) {
      json row;
      row["id"] = a.id;
      row["frame_labels"] = vocab.decode(a.frame_labels);
      row["ref_gloss"] = a.ref_gloss;
      row["llm_gloss"] = a.llm_gloss;
      row["reordered_gloss"] = a.reordered;
      text += row.dump() + "\n";
    }
    write_text(o.audit, text);
  }
  log::info("align: {} records reordered, {} passed through", result.alignments.size(), result.warnings.size());
  return 0;
}

int cmd_train_ctc(const Options& o, CLI::App* sub) {
  auto c = effective_config(o, sub);
  if (!o.targets.empty()) c.ctc.targets = parse_target_source(o.targets);
  if (o.out.empty()) throw config_error("--out is required");
  auto train = load_corpus(corpus_file(o.corpus));
  std::vector<SampleRecord> dev;
  if (auto d = dev_file(o.corpus)) dev = load_corpus(*d);
  const auto vocab = training_vocabulary(train, c.mlc.w_base);
  auto result = train_sign2gloss(train, dev, vocab, c.ctc, [](const CtcEpochStats& s) {
    log::info("ctc epoch {:3d}  loss {:.6f}  dev wer {:.4f}", s.epoch, s.mean_loss, s.dev_wer);
  });
  for (const auto& w : result.warnings) log::warn("train-ctc: {}", w);
  save_recognizer(o.out, result.recognizer);
  return 0;
}

int cmd_evaluate(const Options& o, CLI::App* sub) {
  auto c = effective_config(o, sub);
  if (o.out.empty()) throw config_error("--out is required");
  auto train = load_corpus(corpus_file(o.corpus));
  std::vector<SampleRecord> dev;
  if (auto d = dev_file(o.corpus)) dev = load_corpus(*d);
  const auto& split = c.eval.split == "dev" && !dev.empty() ? dev : train;

  json m;
  m["run"] = {{"label", c.eval.label},
              {"targets", to_string(c.ctc.targets)},
              {"smooth", c.mlc.smooth_weight > 0},
              {"weights", c.mlc.use_frequency_weights},
              {"split", c.eval.split},
              {"seed", c.sim.seed}};
  if (!o.rec.empty()) {
    const auto s = recognition_scores(load_recognizer(o.rec), split);
    m["wer"] = s.wer;
    for (int n = 1; n <= 4; ++n) m["bleu" + std::to_string(n)] = s.bleu[n - 1];
    m["rouge_l"] = s.rouge_l;
  }
  if (!o.clf.empty()) {
    const auto clf = load_classifier(o.clf);
    const auto vocab = load_vocabulary(o.clf + ".vocab.json");
    const auto pr = mlc_set_scores(clf, vocab, split, c.mlc.threshold);
    m["precision"] = pr.precision;
    m["recall"] = pr.recall;
    m["precision_undefined"] = pr.precision_undefined;
    m["frame_wer"] = frame_label_wer(clf, vocab, split);
  }
  m["kendall_llm"] = mean_kendall(train, GlossField::kLlm);
  m["kendall_reordered"] = mean_kendall(train, GlossField::kReordered);
  write_text(o.out, m.dump(2) + "\n");

  if (o.quiet) return 0;
  std::printf("%-20s %10s\n", "metric", "value");
  for (const char* key : {"wer", "bleu1", "bleu2", "bleu3", "bleu4", "rouge_l", "precision", "recall", "frame_wer",
                          "kendall_llm", "kendall_reordered"}) {
    if (m.contains(key)) std::printf("%-20s %10.4f\n", key, m[key].get<double>());
  }
  return 0;
}

std::string column_name(bool smooth, bool weights) {
  if (smooth && weights) return "+smooth+weights";
  if (smooth) return "+smooth";
  if (weights) return "+weights";
  return "plain-BCE";
}

int cmd_report(const Options& o) {
  if (o.inputs.empty()) throw config_error("--inputs requires at least one metrics.json");
  struct Cell {
    std::map<std::string, double> sums;
    int n = 0;
  };
  std::map<std::string, std::map<std::string, Cell>> grid;
  for (const auto& path : o.inputs) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error("cannot open " + path);
    json m;
    try {
      m = json::parse(in);
    } catch (const json::exception& e) {
      throw parse_error(path + ": " + e.what());
    }
    if (!m.contains("run")) throw parse_error(path + ": missing 'run' block");
    const auto& run = m["run"];
    const std::string row = run.value("targets", "") == "reordered" ? "reorder" : "no-reorder";
    auto& cell = grid[row][column_name(run.value("smooth", false), run.value("weights", false))];
    for (const char* key : {"wer", "bleu4", "precision", "recall", "frame_wer"})
      if (m.contains(key) && m[key].is_number()) cell.sums[key] += m[key].get<double>();
    ++cell.n;
  }
  const std::vector<std::string> rows = {"no-reorder", "reorder"};
  const std::vector<std::string> cols = {"plain-BCE", "+smooth", "+weights", "+smooth+weights"};
  json out;
  for (const char* metric : {"wer", "bleu4", "frame_wer", "precision", "recall"}) {
    std::printf("\n%s (mean over runs)\n%-12s", metric, "");
    for (const auto& c : cols) std::printf(" %16s", c.c_str());
    std::printf("\n");
    for (const auto& r : rows) {
      std::printf("%-12s", r.c_str());
      for (const auto& c : cols) {
        auto rit = grid.find(r);
        const Cell* cell = nullptr;
        if (rit != grid.end()) {
          auto cit = rit->second.find(c);
          if (cit != rit->second.end()) cell = &cit->second;
        }
        if (cell && cell->sums.count(metric)) {
          const double v = cell->sums.at(metric) / cell->n;
          out[metric][r][c] = v;
          std::printf(" %16.4f", v);
        } else {
          std::printf(" %16s", "-");
        }
      }
      std::printf("\n");
    }
  }
  if (!o.out.empty()) write_text(o.out, out.dump(2) + "\n");
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args) {
  CLI::App app{"glossweave: pseudo-gloss alignment toolkit"};
  app.name("glossweave");
  app.require_subcommand(1);
  app.footer("Config defaults (JSON, sections sim/llm/mlc/ctc/eval):\n" + config_to_json_text(ToolkitConfig{}) +
             "\n\nGLOSSWEAVE_LOG sets log verbosity (trace|debug|info|warn|error|off).");
  Options o;
  auto common = [&](CLI::App* s) {
    s->add_option("--config", o.config, "JSON config file");
    s->add_option("--seed", o.seed, "override every seed in the config (default 42)");
    s->add_option("--epochs", o.epochs, "override training epochs")->check(CLI::PositiveNumber);
    s->add_flag("--quiet", o.quiet, "only warnings and errors");
  };

  auto* simulate = app.add_subcommand("simulate", "generate a synthetic corpus");
  common(simulate);
  simulate->add_option("--out", o.out, "output directory");

  auto* gengloss = app.add_subcommand("gengloss", "fill llm_gloss by prompting an LLM (or a canned mock)");
  common(gengloss);
  gengloss->add_option("--corpus", o.corpus, "input corpus directory or .jsonl");
  gengloss->add_option("--out", o.out, "output corpus directory or .jsonl");
  gengloss->add_option("--mock", o.mock, "canned responses (JSON Lines {id, gloss})");
  gengloss->add_option("--endpoint", o.endpoint, "chat-completions URL");
  gengloss->add_option("--model", o.model, "model name");
  gengloss->add_option("--examples", o.examples, "example pairs file (text<TAB>gloss or JSON Lines)");
  gengloss->add_option("--num-examples", o.num_examples, "use the first N example pairs");
  gengloss->add_option("--convention", o.convention, "dgs|asl");

  auto* baseline = app.add_subcommand("baseline-gloss", "stop-word filtered text as pseudo gloss");
  common(baseline);
  baseline->add_option("--corpus", o.corpus, "input corpus directory or .jsonl");
  baseline->add_option("--out", o.out, "output corpus directory or .jsonl");
  baseline->add_option("--convention", o.convention, "dgs|asl");

  auto* train_mlc_cmd = app.add_subcommand("train-mlc", "train the weakly supervised frame classifier");
  common(train_mlc_cmd);
  train_mlc_cmd->add_option("--corpus", o.corpus, "corpus directory or .jsonl");
  train_mlc_cmd->add_option("--out", o.out, "classifier checkpoint (GLCF)");

  auto* align = app.add_subcommand("align", "reorder llm glosses with a trained classifier");
  common(align);
  align->add_option("--corpus", o.corpus, "corpus directory or .jsonl");
  align->add_option("--clf", o.clf, "classifier checkpoint");
  align->add_option("--audit", o.audit, "audit JSON Lines output");
  align->add_option("--out", o.out, "output corpus (default: update in place)");

  auto* train_ctc = app.add_subcommand("train-ctc", "train the toy CTC recognizer");
  common(train_ctc);
  train_ctc->add_option("--corpus", o.corpus, "corpus directory or .jsonl");
  train_ctc->add_option("--out", o.out, "recognizer checkpoint (GLCF, blank flag)");
  train_ctc->add_option("--targets", o.targets, "reordered|llm|true");

  auto* evaluate = app.add_subcommand("evaluate", "score a run and write metrics.json");
  common(evaluate);
  evaluate->add_option("--corpus", o.corpus, "corpus directory or .jsonl");
  evaluate->add_option("--clf", o.clf, "classifier checkpoint");
  evaluate->add_option("--rec", o.rec, "recognizer checkpoint");
  evaluate->add_option("--out", o.out, "metrics.json path");

  auto* report = app.add_subcommand("report", "ablation grids from several metrics.json files");
  report->add_option("--inputs", o.inputs, "metrics.json files")->expected(1, -1);
  report->add_option("--out", o.out, "optional JSON copy of the grids");
  report->add_flag("--quiet", o.quiet, "only warnings and errors");

  auto* show = app.add_subcommand("show-config", "print the effective configuration");
  common(show);

  std::vector<std::string> rev(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }
  log::init(o.quiet);

  try {
    if (*simulate) return cmd_simulate(o, simulate);
    if (*gengloss) return cmd_gengloss(o, gengloss);
    if (*baseline) return cmd_baseline(o, baseline);
    if (*train_mlc_cmd) return cmd_train_mlc(o, train_mlc_cmd);
    if (*align) return cmd_align(o, align);
    if (*train_ctc) return cmd_train_ctc(o, train_ctc);
    if (*evaluate) return cmd_evaluate(o, evaluate);
    if (*report) return cmd_report(o);
    if (*show) {
      std::cout << config_to_json_text(effective_config(o, show)) << "\n";
      return 0;
    }
  } catch (const Error& e) {
    log::error("{}", e.what());
    return e.kind() == ErrorKind::kConfig ? 1 : 2;
  } catch (const std::exception& e) {
    log::error("{}", e.what());
    return 2;
  }
  return 1;
}

}  // namespace glossweave
