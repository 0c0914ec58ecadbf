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

#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "glossweave/error.hpp"
#include "glossweave/metrics.hpp"
#include "glossweave/rng.hpp"

using namespace glossweave;
using doctest::Approx;

namespace {

std::vector<TokenSeq> one(TokenSeq s) { return {std::move(s)}; }

TokenSeq random_seq(Rng& rng, std::size_t max_len) {
  static const std::vector<Token> pool = {"a", "b", "c", "d", "e"};
  TokenSeq s;
  const auto n = rng.index(max_len + 1);
  for (std::size_t i = 0; i < n; ++i) s.push_back(pool[rng.index(pool.size())]);
  return s;
}

}  // namespace

TEST_SUITE("metrics") {
  TEST_CASE("word error rate") {
    CHECK(wer({"A", "B"}, {"A", "B"}) == 0.0);
    CHECK(wer({"A", "B", "C"}, {"A", "X", "C"}) == Approx(1.0 / 3).epsilon(1e-15));
    CHECK(wer({}, {"A", "B", "C", "D"}) == 1.0);
    CHECK(wer({"A", "B", "C"}, {"A"}) == 2.0);
    CHECK_THROWS_AS(wer({"A"}, {}), Error);
    const std::vector<TokenSeq> hyps = {{"A"}, {"B", "C"}};
    const std::vector<TokenSeq> refs = {{"A", "B"}, {"B", "C"}};
    CHECK(corpus_wer(hyps, refs) == Approx(0.25));
  }

  TEST_CASE("BLEU") {
    const std::vector<TokenSeq> refs = {{"the", "cat", "sat", "down"}, {"a", "b"}};
    CHECK(bleu(refs, refs, 4) == Approx(1.0).epsilon(1e-12));
    const double b2 = bleu(one({"the", "cat", "sat"}), one({"the", "cat", "sat", "down"}), 2);
    CHECK(std::abs(b2 - std::exp(-1.0 / 3)) < 1e-12);
    CHECK(std::abs(b2 - 0.71653) < 1e-5);
    CHECK(bleu(one({"x", "y"}), one({"a", "b"}), 4) == 0.0);
    CHECK_THROWS_AS(bleu(one({"a"}), refs, 4), Error);
  }

  TEST_CASE("ROUGE-L") {
    CHECK(rouge_l({"A", "B"}, {"A", "B"}) == 1.0);
    CHECK(std::abs(rouge_l({"A", "C"}, {"A", "B", "C"}) - 0.8) < 1e-12);
    CHECK(rouge_l({"X"}, {"A", "B"}) == 0.0);
  }

  TEST_CASE("set precision and recall") {
    const std::vector<std::vector<int>> same = {{0, 1}, {2}};
    auto pr = set_precision_recall(same, same);
    CHECK(pr.precision == 1.0);
    CHECK(pr.recall == 1.0);
    const std::vector<std::vector<int>> pred = {{0, 1}}, truth = {{1, 2}};
    pr = set_precision_recall(pred, truth);
    CHECK(pr.precision == 0.5);
    CHECK(pr.recall == 0.5);
    const std::vector<std::vector<int>> empty = {{}, {}};
    pr = set_precision_recall(empty, same);
    CHECK(pr.precision_undefined);
    CHECK(pr.precision == 0.0);
    CHECK(pr.recall == 0.0);
  }

  TEST_CASE("Kendall distance") {
    CHECK(kendall_distance({"A", "B", "C"}, {"A", "B", "C"}) == 0.0);
    CHECK(kendall_distance({"A", "B", "C"}, {"C", "B", "A"}) == 1.0);
    CHECK(kendall_distance({"A", "B", "C"}, {"A", "C", "B"}) == Approx(1.0 / 3));
    CHECK(kendall_distance({"A", "X", "B"}, {"B", "Y", "A"}) == 1.0);
    CHECK(kendall_distance({"A"}, {"A"}) == 0.0);
  }

  TEST_CASE("metric properties") {
    Rng rng(123);
    for (int n = 0; n < 300; ++n) {
      auto h = random_seq(rng, 6);
      auto r = random_seq(rng, 6);
      if (r.empty()) r.push_back("a");
      const double w = wer(h, r);
      CHECK(w >= 0.0);
      CHECK(wer(r, r) == 0.0);
      CHECK(edit_distance(h, r) == edit_distance(r, h));
      CHECK(edit_distance(h, r) <= std::max(h.size(), r.size()));
      const double rl = rouge_l(h, r);
      CHECK(rl >= 0.0);
      CHECK(rl <= 1.0);
      if (!h.empty()) CHECK(rl == Approx(rouge_l(r, h)));
      const double b = bleu(one(h), one(r), 2);
      CHECK(b >= 0.0);
      CHECK(b <= 1.0 + 1e-12);
      const double k = kendall_distance(h, r);
      CHECK(k >= 0.0);
      CHECK(k <= 1.0);
      CHECK(k == Approx(kendall_distance(r, h)));
      // Corpus scores do not depend on sentence order.
      auto h2 = random_seq(rng, 5), r2 = random_seq(rng, 5);
      if (r2.empty()) r2.push_back("b");
      const std::vector<TokenSeq> hs = {h, h2}, rs = {r, r2}, hs_rev = {h2, h}, rs_rev = {r2, r};
      CHECK(corpus_wer(hs, rs) == corpus_wer(hs_rev, rs_rev));
      CHECK(bleu(hs, rs, 4) == Approx(bleu(hs_rev, rs_rev, 4)).epsilon(1e-14));
      // One more edit moves the distance by at most one.
      auto edited = h;
      edited.insert(edited.begin() + static_cast<std::ptrdiff_t>(rng.index(h.size() + 1)), "e");
      const auto d0 = static_cast<long>(edit_distance(h, r)), d1 = static_cast<long>(edit_distance(edited, r));
      CHECK(std::abs(d1 - d0) <= 1);
      // Pure functions: same inputs, same outputs.
      CHECK(wer(h, r) == w);
    }
  }
}
