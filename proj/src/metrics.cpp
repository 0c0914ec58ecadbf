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

#include "glossweave/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "glossweave/error.hpp"

namespace glossweave {

std::size_t edit_distance(const TokenSeq& hyp, const TokenSeq& ref) {
  std::vector<std::size_t> prev(ref.size() + 1), cur(ref.size() + 1);
  for (std::size_t j = 0; j <= ref.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= hyp.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= ref.size(); ++j) {
      const std::size_t sub = prev[j - 1] + (hyp[i - 1] == ref[j - 1] ? 0 : 1);
      cur[j] = std::min({sub, prev[j] + 1, cur[j - 1] + 1});
    }
    std::swap(prev, cur);
  }
  return prev[ref.size()];
}

double wer(const TokenSeq& hyp, const TokenSeq& ref) {
  if (ref.empty()) throw config_error("wer: empty reference");
  return static_cast<double>(edit_distance(hyp, ref)) / static_cast<double>(ref.size());
}

double corpus_wer(std::span<const TokenSeq> hyps, std::span<const TokenSeq> refs) {
  if (hyps.size() != refs.size()) throw config_error("corpus_wer: hypothesis/reference count mismatch");
  std::size_t edits = 0, words = 0;
  for (std::size_t i = 0; i < hyps.size(); ++i) {
    edits += edit_distance(hyps[i], refs[i]);
    words += refs[i].size();
  }
  if (words == 0) throw config_error("corpus_wer: empty references");
  return static_cast<double>(edits) / static_cast<double>(words);
}

namespace {

std::map<TokenSeq, std::size_t> ngram_counts(const TokenSeq& seq, std::size_t n) {
  std::map<TokenSeq, std::size_t> counts;
  for (std::size_t i = 0; i + n <= seq.size(); ++i)
    ++counts[TokenSeq(seq.begin() + static_cast<std::ptrdiff_t>(i), seq.begin() + static_cast<std::ptrdiff_t>(i + n))];
  return counts;
}

std::size_t lcs_length(const TokenSeq& a, const TokenSeq& b) {
  std::vector<std::size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j)
      cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

}  // namespace

double bleu(std::span<const TokenSeq> hyps, std::span<const TokenSeq> refs, int max_n) {
  if (hyps.empty()) throw config_error("bleu: empty corpus");
  if (hyps.size() != refs.size()) throw config_error("bleu: hypothesis/reference count mismatch");
  if (max_n < 1 || max_n > 4) throw config_error("bleu: max_n must be in 1..4");
  std::vector<std::size_t> matched(static_cast<std::size_t>(max_n), 0), total(static_cast<std::size_t>(max_n), 0);
  std::size_t hyp_len = 0, ref_len = 0;
  for (std::size_t i = 0; i < hyps.size(); ++i) {
    hyp_len += hyps[i].size();
    ref_len += refs[i].size();
    for (int n = 1; n <= max_n; ++n) {
      const auto h = ngram_counts(hyps[i], static_cast<std::size_t>(n));
      const auto r = ngram_counts(refs[i], static_cast<std::size_t>(n));
      for (const auto& [gram, count] : h) {
        auto it = r.find(gram);
        matched[static_cast<std::size_t>(n - 1)] += it == r.end() ? 0 : std::min(count, it->second);
        total[static_cast<std::size_t>(n - 1)] += count;
      }
    }
  }
  double log_sum = 0.0;
  for (int n = 0; n < max_n; ++n) {
    if (matched[static_cast<std::size_t>(n)] == 0) return 0.0;
    log_sum += std::log(static_cast<double>(matched[static_cast<std::size_t>(n)]) /
                        static_cast<double>(total[static_cast<std::size_t>(n)]));
  }
  const double bp = std::exp(std::min(0.0, 1.0 - static_cast<double>(ref_len) / static_cast<double>(hyp_len)));
  return bp * std::exp(log_sum / max_n);
}

double rouge_l(const TokenSeq& hyp, const TokenSeq& ref) {
  if (ref.empty()) throw config_error("rouge_l: empty reference");
  const std::size_t lcs = lcs_length(hyp, ref);
  if (lcs == 0) return 0.0;
  const double p = static_cast<double>(lcs) / static_cast<double>(hyp.size());
  const double r = static_cast<double>(lcs) / static_cast<double>(ref.size());
  return 2.0 * p * r / (p + r);
}

double corpus_rouge_l(std::span<const TokenSeq> hyps, std::span<const TokenSeq> refs) {
  if (hyps.empty()) throw config_error("rouge_l: empty corpus");
  if (hyps.size() != refs.size()) throw config_error("rouge_l: hypothesis/reference count mismatch");
  double sum = 0.0;
  for (std::size_t i = 0; i < hyps.size(); ++i) sum += rouge_l(hyps[i], refs[i]);
  return sum / static_cast<double>(hyps.size());
}

PrecisionRecall set_precision_recall(std::span<const std::vector<int>> predicted,
                                     std::span<const std::vector<int>> truth) {
  if (predicted.size() != truth.size()) throw config_error("set_precision_recall: record count mismatch");
  std::size_t hit = 0, npred = 0, ntrue = 0;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    const std::set<int> p(predicted[i].begin(), predicted[i].end());
    const std::set<int> t(truth[i].begin(), truth[i].end());
    for (int k : p) hit += t.count(k);
    npred += p.size();
    ntrue += t.size();
  }
  PrecisionRecall pr;
  pr.precision_undefined = npred == 0;
  pr.recall_undefined = ntrue == 0;
  pr.precision = npred == 0 ? 0.0 : static_cast<double>(hit) / static_cast<double>(npred);
  pr.recall = ntrue == 0 ? 0.0 : static_cast<double>(hit) / static_cast<double>(ntrue);
  return pr;
}

double kendall_distance(const TokenSeq& a, const TokenSeq& b) {
  std::map<Token, int> count_a, count_b;
  for (const auto& t : a) ++count_a[t];
  for (const auto& t : b) ++count_b[t];
  std::map<Token, std::size_t> pos_b;
  for (std::size_t i = 0; i < b.size(); ++i) pos_b[b[i]] = i;

  // Positions in b of the shared, unique tokens, listed in a's order.
  std::vector<std::size_t> order;
  for (const auto& t : a) {
    auto it = count_b.find(t);
    if (count_a[t] == 1 && it != count_b.end() && it->second == 1) order.push_back(pos_b[t]);
  }
  if (order.size() < 2) return 0.0;
  std::size_t discordant = 0;
  for (std::size_t i = 0; i < order.size(); ++i)
    for (std::size_t j = i + 1; j < order.size(); ++j) discordant += order[i] > order[j];
  const std::size_t pairs = order.size() * (order.size() - 1) / 2;
  return static_cast<double>(discordant) / static_cast<double>(pairs);
}

}  // namespace glossweave
