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

#include <cmath>
#include <numeric>

#include "glossweave/ctc.hpp"
#include "glossweave/error.hpp"
#include "glossweave/pipeline.hpp"
#include "glossweave/simulator.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace glossweave;
using doctest::Approx;
namespace gt = glossweave::testing;

namespace {

RowMatrix<double> log_of(const RowMatrix<double>& p) { return p.array().log().matrix(); }

ProbMatrix<double> argmax_rows(const IdSeq& labels, int classes) {
  ProbMatrix<double> p = ProbMatrix<double>::Constant(static_cast<Eigen::Index>(labels.size()), classes, 0.1);
  for (std::size_t t = 0; t < labels.size(); ++t) p(static_cast<Eigen::Index>(t), labels[t]) = 0.7;
  return p;
}

}  // namespace

TEST_SUITE("ctc") {
  TEST_CASE("feasibility") {
    CHECK_FALSE(ctc_feasible({1, 1}, 2));
    CHECK(ctc_feasible({1, 1}, 3));
    CHECK(ctc_feasible({1, 2, 3}, 3));
    CHECK_FALSE(ctc_feasible({1, 2, 3}, 2));
  }

  TEST_CASE("single frame") {
    RowMatrix<double> p(1, 2);
    p << 0.2, 0.8;
    CHECK(ctc_loss(log_of(p), {1}) == Approx(-std::log(0.8)).epsilon(1e-12));
    CHECK(std::abs(ctc_loss(log_of(p), {1}) - 0.22314) < 1e-5);
  }

  TEST_CASE("uniform two frames sums three paths") {
    const RowMatrix<double> p = RowMatrix<double>::Constant(2, 3, 1.0 / 3);
    CHECK(ctc_loss(log_of(p), {1}) == Approx(std::log(3.0)).epsilon(1e-12));
    CHECK(gt::enumerate_ctc_probability(p, {1}) == Approx(3.0 / 9).epsilon(1e-12));
  }

  TEST_CASE("matches brute-force enumeration") {
    Rng rng(99);
    RowMatrix<double> p = gt::random_stochastic(3, 3, rng);
    CHECK(std::abs(-ctc_loss(log_of(p), {1, 2}) - std::log(gt::enumerate_ctc_probability(p, {1, 2}))) < 1e-9);
    for (int n = 0; n < 200; ++n) {
      const int frames = 1 + static_cast<int>(rng.uniform_int(0, 5));
      const int classes = 2 + static_cast<int>(rng.uniform_int(0, 2));
      p = gt::random_stochastic(frames, classes, rng);
      const auto target = gt::random_feasible_target(frames, classes, rng);
      const double brute = std::log(gt::enumerate_ctc_probability(p, target));
      CHECK(std::abs(-ctc_loss(log_of(p), target) - brute) < 1e-9);
    }
  }

  TEST_CASE("likelihood is a probability") {
    Rng rng(4);
    for (int n = 0; n < 50; ++n) {
      const auto lp = log_softmax_rows(gt::random_normal(8, 5, rng, 2.0));
      const auto target = gt::random_feasible_target(8, 5, rng);
      const double l = ctc_loss(lp, target);
      CHECK(l >= 0.0);
      CHECK(std::isfinite(l));
    }
  }

  TEST_CASE("relabelling vocabulary ids leaves the loss unchanged") {
    Rng rng(8);
    const RowMatrix<double> lp = log_softmax_rows(gt::random_normal(6, 4, rng));
    const IdSeq target = {1, 3, 3, 2};
    const std::vector<int> perm = {0, 3, 1, 2};
    RowMatrix<double> permuted(lp.rows(), lp.cols());
    for (int k = 0; k < 4; ++k) permuted.col(perm[static_cast<std::size_t>(k)]) = lp.col(k);
    IdSeq mapped;
    for (int id : target) mapped.push_back(perm[static_cast<std::size_t>(id)]);
    CHECK(ctc_loss(permuted, mapped) == Approx(ctc_loss(lp, target)).epsilon(1e-13));
  }

  TEST_CASE("long sequences stay finite in log space") {
    Rng rng(12);
    const auto lp = log_softmax_rows(gt::random_normal(400, 6, rng, 4.0));
    IdSeq target;
    for (int m = 0; m < 60; ++m) target.push_back(1 + m % 5);
    CHECK(std::isfinite(ctc_loss(lp, target)));
  }

  TEST_CASE("gradient with respect to logits") {
    Rng rng(31);
    for (int n = 0; n < 20; ++n) {
      const auto logits = gt::random_normal(5, 4, rng);
      const auto target = gt::random_feasible_target(5, 4, rng);
      CHECK(gt::ctc_gradient_error(logits, target) < 1e-4);
      const auto g = ctc_gradients(log_softmax_rows(logits), target);
      for (Eigen::Index t = 0; t < g.rows(); ++t) CHECK(std::abs(g.row(t).sum()) < 1e-12);
    }
    RowMatrix<double> z(1, 3);
    z << 0.3, -0.2, 1.1;
    const auto lp = log_softmax_rows(z);
    const auto g = ctc_gradients(lp, {2});
    RowMatrix<double> expected = lp.array().exp().matrix();
    expected(0, 2) -= 1.0;
    CHECK((g - expected).cwiseAbs().maxCoeff() < 1e-12);
  }

  TEST_CASE("infeasible or invalid targets are rejected") {
    const RowMatrix<double> lp = RowMatrix<double>::Constant(2, 3, std::log(1.0 / 3));
    CHECK_THROWS_AS(ctc_loss(lp, {1, 1}), Error);
    CHECK_THROWS_AS(ctc_loss(lp, {0}), Error);
    CHECK_THROWS_AS(ctc_loss(lp, {5}), Error);
    CHECK_THROWS_AS(ctc_loss(lp, {}), Error);
  }

  TEST_CASE("greedy decoding") {
    CHECK(ctc_greedy_decode(argmax_rows({1, 1, 0, 2}, 3)) == IdSeq{1, 2});
    CHECK(ctc_greedy_decode(argmax_rows({0, 0, 0}, 3)).empty());
    CHECK(ctc_greedy_decode(argmax_rows({1, 0, 1}, 3)) == IdSeq{1, 1});
    Rng rng(6);
    for (int n = 0; n < 100; ++n) {
      const auto out = ctc_greedy_decode(gt::random_stochastic(10, 4, rng));
      for (int id : out) CHECK(id != kBlank);
    }
  }

  TEST_CASE("target source names") {
    CHECK(parse_target_source("reordered") == TargetSource::kReordered);
    CHECK(parse_target_source("llm") == TargetSource::kLlm);
    CHECK(to_string(TargetSource::kTrue) == "true");
    try {
      parse_target_source("sideways");
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(std::string(e.what()).find("ctc.targets") != std::string::npos);
    }
  }

  TEST_CASE("training on true glosses learns the simulator") {
    const auto corpus = generate_corpus(SimConfig{});
    const auto vocab = training_vocabulary(corpus.train, 1.0);
    CtcTrainConfig cfg;
    cfg.targets = TargetSource::kTrue;
    const auto result = train_sign2gloss(corpus.train, corpus.dev, vocab, cfg);
    REQUIRE(result.history.size() == 40);
    CHECK(result.history.back().dev_wer < 0.10);
    CHECK(result.history.back().mean_loss < result.history.front().mean_loss);
    const auto again = train_sign2gloss(corpus.train, corpus.dev, vocab, cfg);
    CHECK(again.recognizer.model == result.recognizer.model);

    gt::TempDir dir("ctc-ckpt");
    save_recognizer(dir / "rec.glcf", result.recognizer);
    const auto back = load_recognizer(dir / "rec.glcf");
    CHECK(back.model == result.recognizer.model);
    CHECK(back.vocab == result.recognizer.vocab);
    save_classifier(dir / "plain.glcf", result.recognizer.model);
    glossweave::save_vocabulary(dir / "plain.glcf.vocab.json", vocab);
    CHECK_THROWS_AS(load_recognizer(dir / "plain.glcf"), Error);
  }

  TEST_CASE("loss schedule zero freezes the parameters") {
    SimConfig sim;
    sim.num_samples = 10;
    sim.num_dev = 0;
    sim.feature_dim = 8;
    const auto corpus = generate_corpus(sim);
    CtcTrainConfig cfg;
    cfg.targets = TargetSource::kTrue;
    cfg.epochs = 2;
    cfg.loss_schedule = [](int) { return 0.0; };
    const auto frozen = train_sign2gloss(corpus.train, {}, corpus.vocab, cfg);
    const auto init = init_classifier(8, corpus.vocab.size() + 1, 0.0, derive_seed(cfg.seed, 11));
    CHECK(frozen.recognizer.model == init);
    CHECK(std::isnan(frozen.history.back().dev_wer));
  }

  TEST_CASE("infeasible targets are capped or skipped") {
    SimConfig sim;
    sim.num_samples = 4;
    sim.num_dev = 0;
    sim.feature_dim = 8;
    auto corpus = generate_corpus(sim);
    auto& r = corpus.train[0];
    r.features = FeatureMatrix(r.features->topRows(2));
    r.true_gloss = TokenSeq{r.llm_gloss[0], r.llm_gloss[0], r.llm_gloss[0]};
    CtcTrainConfig cfg;
    cfg.targets = TargetSource::kTrue;
    cfg.epochs = 1;
    auto capped = train_sign2gloss(corpus.train, {}, corpus.vocab, cfg);
    CHECK(capped.history[0].skipped == 0);
    cfg.cap_infeasible = false;
    auto skipped = train_sign2gloss(corpus.train, {}, corpus.vocab, cfg);
    CHECK(skipped.history[0].skipped == 1);
    REQUIRE(skipped.warnings.size() == 1);
    CHECK(skipped.warnings[0].find(r.id) != std::string::npos);
  }
}
