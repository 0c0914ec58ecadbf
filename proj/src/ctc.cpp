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

#include "glossweave/ctc.hpp"

#include <cmath>

#include "glossweave/llm_gloss.hpp"
#include "glossweave/metrics.hpp"
#include "glossweave/rng.hpp"

namespace glossweave {

bool ctc_feasible(const IdSeq& target, Eigen::Index frames) {
  std::size_t repeats = 0;
  for (std::size_t m = 1; m < target.size(); ++m) repeats += target[m] == target[m - 1];
  return frames >= static_cast<Eigen::Index>(target.size() + repeats);
}

IdSeq CtcRecognizer::encode_target(const TokenSeq& tokens) const {
  IdSeq ids = vocab.encode(tokens);
  for (int& id : ids) ++id;
  return ids;
}

TokenSeq CtcRecognizer::decode(const FeatureMatrix& features) const {
  IdSeq ids = ctc_greedy_decode(softmax_rows(model.logits(features)));
  for (int& id : ids) --id;
  return vocab.decode(ids);
}

TargetSource parse_target_source(const std::string& name) {
  if (name == "reordered") return TargetSource::kReordered;
  if (name == "llm") return TargetSource::kLlm;
  if (name == "true") return TargetSource::kTrue;
  throw config_error("ctc.targets: expected one of reordered|llm|true, got '" + name + "'");
}

std::string to_string(TargetSource source) {
  switch (source) {
    case TargetSource::kReordered: return "reordered";
    case TargetSource::kLlm: return "llm";
    case TargetSource::kTrue: return "true";
  }
  return "unknown";
}

const TokenSeq* select_target(const SampleRecord& r, TargetSource source) {
  switch (source) {
    case TargetSource::kReordered: return r.reordered_gloss ? &*r.reordered_gloss : nullptr;
    case TargetSource::kLlm: return &r.llm_gloss;
    case TargetSource::kTrue: return r.true_gloss ? &*r.true_gloss : nullptr;
  }
  return nullptr;
}

void CtcTrainConfig::validate() const {
  if (!(learning_rate > 0.0)) throw config_error("ctc.learning_rate: must be positive");
  if (!(momentum >= 0.0 && momentum < 1.0)) throw config_error("ctc.momentum: must be in [0,1)");
  if (epochs < 1) throw config_error("ctc.epochs: must be >= 1");
}

namespace {

double dev_wer(const CtcRecognizer& rec, std::span<const SampleRecord> dev) {
  std::vector<TokenSeq> hyps, refs;
  for (const auto& r : dev) {
    if (!r.features || !r.true_gloss || r.true_gloss->empty()) continue;
    hyps.push_back(rec.decode(*r.features));
    refs.push_back(*r.true_gloss);
  }
  if (refs.empty()) return std::nan("");
  return corpus_wer(hyps, refs);
}

}  // namespace

CtcTrainResult train_sign2gloss(std::span<const SampleRecord> train, std::span<const SampleRecord> dev,
                                const GlossVocabulary& vocab, const CtcTrainConfig& config,
                                const std::function<void(const CtcEpochStats&)>& on_epoch) {
  config.validate();
  CtcTrainResult out;
  out.recognizer.vocab = vocab;

  struct Example {
    const SampleRecord* record;
    IdSeq target;
  };
  std::vector<Example> examples;
  for (const auto& r : train) {
    const TokenSeq* tokens = select_target(r, config.targets);
    if (!r.features) {
      out.warnings.push_back("record '" + r.id + "': no features");
      continue;
    }
    if (!tokens || tokens->empty()) {
      out.warnings.push_back("record '" + r.id + "': no " + to_string(config.targets) + " target");
      continue;
    }
    bool known = true;
    for (const auto& t : *tokens) known = known && vocab.contains(t);
    if (!known) {
      out.warnings.push_back("record '" + r.id + "': target token outside vocabulary");
      continue;
    }
    IdSeq target = out.recognizer.encode_target(*tokens);
    if (!ctc_feasible(target, r.features->rows()) && config.cap_infeasible) {
      TokenSeq capped = *tokens;
      while (!capped.empty() && !ctc_feasible(out.recognizer.encode_target(capped), r.features->rows()))
        capped = cap_length(capped, capped.size() - 1, remove_words());
      if (!capped.empty()) target = out.recognizer.encode_target(capped);
    }
    if (target.empty() || !ctc_feasible(target, r.features->rows())) {
      out.warnings.push_back("record '" + r.id + "': target infeasible for " + std::to_string(r.features->rows()) +
                             " frames");
      continue;
    }
    examples.push_back({&r, std::move(target)});
  }
  const int skipped = static_cast<int>(out.warnings.size());
  if (examples.empty()) throw config_error("train_sign2gloss: no usable training records");

  const int dim = static_cast<int>(examples.front().record->features->cols());
  auto& model = out.recognizer.model;
  model = init_classifier(dim, vocab.size() + 1, config.init_scale, derive_seed(config.seed, 11));
  RowMatrix<double> vel_w = RowMatrix<double>::Zero(model.weights.rows(), model.weights.cols());
  Vector<double> vel_b = Vector<double>::Zero(model.bias.size());

  Rng order_rng(derive_seed(config.seed, 12));
  std::vector<std::size_t> order(examples.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    const double scale = config.loss_schedule ? config.loss_schedule(epoch) : 1.0;
    order_rng.shuffle(order);
    double sum = 0.0;
    for (std::size_t i : order) {
      const auto& ex = examples[i];
      const RowMatrix<double> x = ex.record->features->cast<double>();
      const RowMatrix<double> log_probs = log_softmax_rows(model.logits(x));
      const auto lat = ctc_lattice(log_probs, ex.target);
      const double loss = -lat.log_likelihood;
      if (!std::isfinite(loss))
        throw Error(ErrorKind::kNumeric, "train_sign2gloss: non-finite loss at epoch " + std::to_string(epoch) +
                                             ", record '" + ex.record->id + "'");
      sum += loss;
      if (scale == 0.0) continue;
      const RowMatrix<double> d_logits = scale * ctc_gradients(log_probs, ex.target);
      vel_w = config.momentum * vel_w - config.learning_rate * (x.transpose() * d_logits);
      vel_b = config.momentum * vel_b - config.learning_rate * d_logits.colwise().sum().transpose();
      model.weights += vel_w;
      model.bias += vel_b;
    }
    CtcEpochStats stats{epoch, sum / static_cast<double>(examples.size()), dev_wer(out.recognizer, dev), skipped};
    out.history.push_back(stats);
    if (on_epoch) on_epoch(stats);
  }
  return out;
}

void save_recognizer(const std::filesystem::path& path, const CtcRecognizer& rec) {
  save_classifier(path, rec.model, kCheckpointBlankAtZero);
  save_vocabulary(path.string() + ".vocab.json", rec.vocab);
}

CtcRecognizer load_recognizer(const std::filesystem::path& path) {
  CtcRecognizer rec;
  std::uint32_t flags = 0;
  rec.model = load_classifier(path, &flags);
  if (!(flags & kCheckpointBlankAtZero))
    throw io_error("checkpoint " + path.string() + " is not a recognizer (blank flag missing)");
  rec.vocab = load_vocabulary(path.string() + ".vocab.json");
  if (rec.model.output_dim() != rec.vocab.size() + 1)
    throw io_error("checkpoint " + path.string() + " does not match its vocabulary");
  return rec;
}

}  // namespace glossweave
