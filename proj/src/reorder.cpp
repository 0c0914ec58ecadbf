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

#include "glossweave/reorder.hpp"

#include <algorithm>
#include <set>

namespace glossweave {

TokenSeq filter_and_merge(const TokenSeq& frame_tokens, const TokenSeq& llm_gloss) {
  const std::set<Token> allowed(llm_gloss.begin(), llm_gloss.end());
  TokenSeq out;
  for (const auto& t : frame_tokens) {
    if (!allowed.count(t)) continue;
    if (out.empty() || out.back() != t) out.push_back(t);
  }
  return out;
}

TokenSeq greedy_reorder(const TokenSeq& llm_gloss, const TokenSeq& ref_gloss) {
  TokenSeq pending = llm_gloss;  // positions < i are consumed
  const std::set<Token> in_ref(ref_gloss.begin(), ref_gloss.end());
  TokenSeq target;
  target.reserve(llm_gloss.size());
  std::size_t i = 0, j = 0;
  while (i < pending.size()) {
    if (j >= ref_gloss.size()) {
      target.insert(target.end(), pending.begin() + static_cast<std::ptrdiff_t>(i), pending.end());
      break;
    }
    const Token& l = pending[i];
    const Token& r = ref_gloss[j];
    if (l == r) {
      target.push_back(l);
      ++i;
      ++j;
    } else if (!in_ref.count(l)) {
      target.push_back(l);
      ++i;
    } else {
      auto later = std::find(pending.begin() + static_cast<std::ptrdiff_t>(i) + 1, pending.end(), r);
      if (later != pending.end()) {
        target.push_back(r);
        pending.erase(later);
      }
      ++j;
    }
  }
  return target;
}

AlignmentResult align_record(const SampleRecord& record, const ProbMatrix<double>& probs,
                             const GlossVocabulary& vocab) {
  AlignmentResult a;
  a.id = record.id;
  a.llm_gloss = record.llm_gloss;
  a.frame_labels = framewise_gloss(probs);
  a.ref_gloss = filter_and_merge(vocab.decode(a.frame_labels), record.llm_gloss);
  a.reordered = greedy_reorder(record.llm_gloss, a.ref_gloss);
  return a;
}

AlignCorpusResult align_corpus(std::vector<SampleRecord> records, const LinearClassifier& clf,
                               const GlossVocabulary& vocab) {
  AlignCorpusResult out;
  for (auto& r : records) {
    if (r.llm_gloss.empty()) {
      out.warnings.push_back("record '" + r.id + "': empty llm_gloss, passed through");
      continue;
    }
    if (!r.features) {
      out.warnings.push_back("record '" + r.id + "': features not loaded, passed through");
      continue;
    }
    try {
      auto a = align_record(r, forward(clf, *r.features), vocab);
      r.reordered_gloss = a.reordered;
      out.alignments.push_back(std::move(a));
    } catch (const Error& e) {
      out.warnings.push_back("record '" + r.id + "': " + e.what());
    }
  }
  out.records = std::move(records);
  return out;
}

}  // namespace glossweave
