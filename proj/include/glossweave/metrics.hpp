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

#include <cstddef>
#include <span>
#include <vector>

#include "glossweave/types.hpp"

namespace glossweave {

// Word-level Levenshtein distance with unit costs.
std::size_t edit_distance(const TokenSeq& hypothesis, const TokenSeq& reference);

// edit_distance / |reference|; may exceed 1. Throws on an empty reference.
double wer(const TokenSeq& hypothesis, const TokenSeq& reference);

// Total edits over total reference length.
double corpus_wer(std::span<const TokenSeq> hypotheses, std::span<const TokenSeq> references);

// Corpus BLEU-n, single reference, uniform weights, no smoothing.
double bleu(std::span<const TokenSeq> hypotheses, std::span<const TokenSeq> references, int max_n);

// LCS-based F-measure.
double rouge_l(const TokenSeq& hypothesis, const TokenSeq& reference);

// Mean sentence ROUGE-L over a corpus.
double corpus_rouge_l(std::span<const TokenSeq> hypotheses, std::span<const TokenSeq> references);

struct PrecisionRecall {
  double precision = 0;
  double recall = 0;
  bool precision_undefined = false;  // no predictions at all
  bool recall_undefined = false;     // no true labels at all
};

// Micro-averaged over records.
PrecisionRecall set_precision_recall(std::span<const std::vector<int>> predicted,
                                     std::span<const std::vector<int>> truth);

// Fraction of discordant pairs among tokens that occur exactly once in both
// sequences; 0 when fewer than two such tokens.
double kendall_distance(const TokenSeq& a, const TokenSeq& b);

}  // namespace glossweave
