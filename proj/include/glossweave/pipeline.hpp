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

#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "glossweave/corpus.hpp"
#include "glossweave/ctc.hpp"
#include "glossweave/metrics.hpp"
#include "glossweave/mlc.hpp"

namespace glossweave {

// Corpus-level WER of the merged frame-wise argmax labels against true glosses.
double frame_label_wer(const LinearClassifier& clf, const GlossVocabulary& vocab,
                       std::span<const SampleRecord> records);

// Mean Kendall distance to the true gloss over records carrying both sequences.
enum class GlossField { kLlm, kReordered };
double mean_kendall(std::span<const SampleRecord> records, GlossField field);

// MLC set predictions against true gloss sets; tokens outside vocab count as misses.
PrecisionRecall mlc_set_scores(const LinearClassifier& clf, const GlossVocabulary& vocab,
                               std::span<const SampleRecord> records, double threshold);

struct RecognitionScores {
  double wer = 0;
  double bleu[4] = {0, 0, 0, 0};
  double rouge_l = 0;
};

// Greedy-decoded hypotheses against true glosses.
RecognitionScores recognition_scores(const CtcRecognizer& rec, std::span<const SampleRecord> records);

// Vocabulary over records with a non-empty llm gloss, weighted with w_base.
GlossVocabulary training_vocabulary(std::span<const SampleRecord> records, double w_base);

}  // namespace glossweave
