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

#include <string>
#include <vector>

#include "glossweave/corpus.hpp"
#include "glossweave/mlc.hpp"
#include "glossweave/types.hpp"

namespace glossweave {

// Per-frame argmax; ties go to the lowest id.
template <typename Derived>
IdSeq framewise_gloss(const Eigen::MatrixBase<Derived>& p) {
  IdSeq labels(static_cast<std::size_t>(p.rows()));
  for (Eigen::Index t = 0; t < p.rows(); ++t) {
    Eigen::Index best = 0;
    for (Eigen::Index k = 1; k < p.cols(); ++k)
      if (p(t, k) > p(t, best)) best = k;
    labels[static_cast<std::size_t>(t)] = static_cast<int>(best);
  }
  return labels;
}

// Drops frames whose token is not in the llm gloss, then collapses runs of
// equal adjacent tokens.
TokenSeq filter_and_merge(const TokenSeq& frame_tokens, const TokenSeq& llm_gloss);

// Greedy two-pointer reordering of the llm gloss L against the reference R.
// When l_i != r_j and l_i occurs in R: pull the first unconsumed later
// occurrence of r_j forward if there is one, otherwise skip r_j. Once R is
// exhausted the rest of L is appended in order. The output is a permutation of L.
TokenSeq greedy_reorder(const TokenSeq& llm_gloss, const TokenSeq& ref_gloss);

struct AlignmentResult {
  std::string id;
  IdSeq frame_labels;
  TokenSeq ref_gloss;
  TokenSeq llm_gloss;
  TokenSeq reordered;
};

AlignmentResult align_record(const SampleRecord& record, const ProbMatrix<double>& probs,
                             const GlossVocabulary& vocab);

struct AlignCorpusResult {
  std::vector<SampleRecord> records;  // reordered_gloss filled where alignment succeeded
  std::vector<AlignmentResult> alignments;
  std::vector<std::string> warnings;  // per-record problems; those records pass through unchanged
};

AlignCorpusResult align_corpus(std::vector<SampleRecord> records, const LinearClassifier& clf,
                               const GlossVocabulary& vocab);

}  // namespace glossweave
