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

#include "glossweave/pipeline.hpp"

#include "glossweave/metrics.hpp"
#include "glossweave/reorder.hpp"

namespace glossweave {

double frame_label_wer(const LinearClassifier& clf, const GlossVocabulary& vocab,
                       std::span<const SampleRecord> records) {
  std::vector<TokenSeq> hyps, refs;
  for (const auto& r : records) {
    if (!r.features || !r.true_gloss || r.true_gloss->empty()) continue;
    TokenSeq merged;
    for (const auto& t : vocab.decode(framewise_gloss(forward(clf, *r.features))))
      if (merged.empty() || merged.back() != t) merged.push_back(t);
    hyps.push_back(std::move(merged));
    refs.push_back(*r.true_gloss);
  }
  return corpus_wer(hyps, refs);
}

double mean_kendall(std::span<const SampleRecord> records, GlossField field) {
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& r : records) {
    if (!r.true_gloss) continue;
    const TokenSeq* seq = field == GlossField::kLlm ? &r.llm_gloss : (r.reordered_gloss ? &*r.reordered_gloss : nullptr);
    if (!seq) continue;
    sum += kendall_distance(*seq, *r.true_gloss);
    ++n;
  }
  return n == 0 ? 0.0 : sum / static_cast<double>(n);
}

PrecisionRecall mlc_set_scores(const LinearClassifier& clf, const GlossVocabulary& vocab,
                               std::span<const SampleRecord> records, double threshold) {
  std::vector<std::vector<int>> predicted, truth;
  for (const auto& r : records) {
    if (!r.features || !r.true_gloss) continue;
    predicted.push_back(predict_set(clf, *r.features, threshold));
    std::vector<int> t;
    int unknown = vocab.size();
    for (const auto& tok : *r.true_gloss) {
      auto id = vocab.find(tok);
      t.push_back(id ? *id : unknown++);
    }
    truth.push_back(std::move(t));
  }
  return set_precision_recall(predicted, truth);
}

RecognitionScores recognition_scores(const CtcRecognizer& rec, std::span<const SampleRecord> records) {
  std::vector<TokenSeq> hyps, refs;
  for (const auto& r : records) {
    if (!r.features || !r.true_gloss || r.true_gloss->empty()) continue;
    hyps.push_back(rec.decode(*r.features));
    refs.push_back(*r.true_gloss);
  }
  RecognitionScores s;
  s.wer = corpus_wer(hyps, refs);
  for (int n = 1; n <= 4; ++n) s.bleu[n - 1] = bleu(hyps, refs, n);
  s.rouge_l = corpus_rouge_l(hyps, refs);
  return s;
}

GlossVocabulary training_vocabulary(std::span<const SampleRecord> records, double w_base) {
  std::vector<SampleRecord> usable;
  for (const auto& r : records)
    if (!r.llm_gloss.empty()) usable.push_back(r);
  return compute_weights(build_vocabulary(usable), w_base);
}

}  // namespace glossweave
