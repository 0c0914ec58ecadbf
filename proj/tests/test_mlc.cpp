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

#include "glossweave/corpus.hpp"
#include "glossweave/error.hpp"
#include "glossweave/metrics.hpp"
#include "glossweave/mlc.hpp"
#include "glossweave/pipeline.hpp"
#include "glossweave/simulator.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace glossweave;
using doctest::Approx;

namespace {

LinearClassifier identity_classifier(int k) {
  LinearClassifier clf;
  clf.weights = RowMatrix<double>::Identity(k, k);
  clf.bias = Vector<double>::Zero(k);
  return clf;
}

FeatureMatrix log_rows(const RowMatrix<double>& p) { return p.array().log().matrix().cast<float>(); }

}  // namespace

TEST_SUITE("mlc") {
  TEST_CASE("softmax hand values") {
    RowMatrix<double> z = RowMatrix<double>::Zero(2, 4);
    const auto p = softmax_rows(z);
    CHECK((p.array() == 0.25).all());
    RowMatrix<double> z2(1, 2);
    z2 << std::log(3.0), 0.0;
    const auto q = softmax_rows(z2);
    CHECK(q(0, 0) == Approx(0.75).epsilon(1e-15));
    CHECK(q(0, 1) == Approx(0.25).epsilon(1e-15));
    RowMatrix<double> big(1, 3);
    big << 1000.0, 999.0, -1000.0;
    CHECK(rows_on_simplex(softmax_rows(big)));
  }

  TEST_CASE("forward rows lie on the simplex") {
    Rng rng(5);
    LinearClassifier clf = init_classifier(8, 5, 0.0, 9);
    const FeatureMatrix f = glossweave::testing::random_normal(7, 8, rng, 3.0).cast<float>();
    const auto p = forward(clf, f);
    for (Eigen::Index t = 0; t < p.rows(); ++t) CHECK(std::abs(p.row(t).sum() - 1.0) < 1e-6);
    LinearClassifier zero = clf;
    zero.weights.setZero();
    zero.bias.setZero();
    CHECK((forward(zero, f).array() - 0.2).abs().maxCoeff() < 1e-15);
  }

  TEST_CASE("temporal max pooling") {
    RowMatrix<double> p(2, 2);
    p << 0.9, 0.1, 0.2, 0.8;
    const auto y = pool_presence(p);
    CHECK(y(0) == 0.9);
    CHECK(y(1) == 0.8);
    CHECK(pool_presence(p.topRows(1)) == p.row(0).transpose());
    const RowMatrix<double> u = RowMatrix<double>::Constant(4, 3, 1.0 / 3);
    CHECK((pool_presence(u).array() == 1.0 / 3).all());
  }

  TEST_CASE("weighted BCE") {
    Vector<double> y(1), yhat(1), w(1);
    y << 1;
    yhat << 0.5;
    w << 1;
    CHECK(bce_loss(yhat, y, w) == Approx(std::log(2.0)).epsilon(1e-12));
    Vector<double> y3(3), p3(3), w3(3);
    y3 << 1, 0, 1;
    p3 << 0.7, 0.2, 0.4;
    w3 << 1, 2, 0.5;
    CHECK(bce_loss<double>(p3, y3, Vector<double>(2 * w3)) == Approx(2 * bce_loss(p3, y3, w3)).epsilon(1e-12));
    Vector<double> exact(2), truth(2), w2(2);
    exact << 1, 0;
    truth << 1, 0;
    w2 << 3, 3;
    CHECK(bce_loss(exact, truth, w2) <= 2 * 3 * -std::log(1 - 1e-12) + 1e-15);
  }

  TEST_CASE("smoothness penalty") {
    RowMatrix<double> same = RowMatrix<double>::Constant(5, 3, 0.2);
    CHECK(smooth_loss(same) == 0.0);
    RowMatrix<double> flip(2, 2);
    flip << 1, 0, 0, 1;
    CHECK(smooth_loss(flip) == 2.0);
    CHECK(smooth_loss(flip.topRows(1)) == 0.0);
  }

  TEST_CASE("combined loss") {
    Rng rng(17);
    auto in = glossweave::testing::random_mlc_instance(rng);
    const double bce = bce_loss<double>(pool_presence(forward(in.clf, in.features)), in.target, in.weights);
    CHECK(total_loss(in.clf, in.features, in.target, in.weights, 0.0) == bce);
    const double smooth = smooth_loss(forward(in.clf, in.features));
    CHECK(total_loss(in.clf, in.features, in.target, in.weights, 1.0) == Approx(bce + smooth).epsilon(1e-14));
    const auto g = loss_and_gradients(in.clf, in.features, in.target, in.weights, 1.0);
    CHECK(g.loss.total == Approx(bce + smooth).epsilon(1e-14));

    FeatureMatrix constant(4, in.features.cols());
    for (Eigen::Index t = 0; t < 4; ++t) constant.row(t) = in.features.row(0);
    const double only_bce = bce_loss<double>(pool_presence(forward(in.clf, constant)), in.target, in.weights);
    CHECK(total_loss(in.clf, constant, in.target, in.weights, 5.0) == Approx(only_bce).epsilon(1e-14));
  }

  TEST_CASE("gradients match central differences") {
    Rng rng(2024);
    int checked = 0;
    while (checked < 40) {
      auto in = glossweave::testing::random_mlc_instance(rng);
      if (glossweave::testing::mlc_tie_margin(in) < 1e-3) continue;
      CHECK(glossweave::testing::mlc_gradient_error(in) < 1e-4);
      ++checked;
    }
  }

  TEST_CASE("single frame reduces to logistic regression") {
    LinearClassifier clf;
    clf.weights.resize(2, 2);
    clf.weights << 0.3, -0.4, 0.1, 0.6;
    clf.bias.resize(2);
    clf.bias << 0.05, -0.2;
    FeatureMatrix x(1, 2);
    x << 0.7f, -1.3f;
    Vector<double> y(2), w(2);
    y << 0, 1;
    w << 1, 1;
    const auto g = loss_and_gradients(clf, x, y, w, 0.0);
    // Two classes on one frame: p1 = sigmoid(z1 - z0) and loss = -2 ln p1.
    const RowMatrix<double> z = clf.logits(x);
    const double p1 = 1.0 / (1.0 + std::exp(-(z(0, 1) - z(0, 0))));
    CHECK(g.loss.total == Approx(-2 * std::log(p1)).epsilon(1e-12));
    const double dz1 = -2 * (1 - p1);
    for (int d = 0; d < 2; ++d) {
      CHECK(g.d_weights(d, 1) == Approx(x(0, d) * dz1).epsilon(1e-12));
      CHECK(g.d_weights(d, 0) == Approx(-x(0, d) * dz1).epsilon(1e-12));
    }
    CHECK(g.d_bias(1) == Approx(dz1).epsilon(1e-12));
  }

  TEST_CASE("saturated correct prediction is stationary") {
    LinearClassifier clf = identity_classifier(3);
    FeatureMatrix x = FeatureMatrix::Zero(4, 3);
    x.col(1).setConstant(80.0f);
    Vector<double> y(3), w(3);
    y << 0, 1, 0;
    w << 1, 2, 3;
    for (auto on : {SmoothTarget::kProbabilities, SmoothTarget::kLogits}) {
      const auto g = loss_and_gradients(clf, x, y, w, 1.0, on);
      CHECK(g.d_weights.norm() < 1e-6);
      CHECK(g.d_bias.norm() < 1e-6);
    }
  }

  TEST_CASE("predict_set thresholds pooled presence") {
    RowMatrix<double> p(2, 2);
    p << 0.9, 0.1, 0.7, 0.3;
    const auto clf = identity_classifier(2);
    CHECK(predict_set(clf, log_rows(p), 0.5) == std::vector<int>{0});
    CHECK(predict_set(clf, log_rows(p), 0.29) == std::vector<int>{0, 1});
  }

  TEST_CASE("config validation") {
    MlcTrainConfig c;
    c.epochs = 0;
    CHECK_THROWS_AS(c.validate(), Error);
    c = {};
    c.learning_rate = -1;
    try {
      c.validate();
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(std::string(e.what()).find("mlc.learning_rate") != std::string::npos);
    }
    c = {};
    c.threshold = 1.0;
    CHECK_THROWS_AS(c.validate(), Error);
    c.threshold = 0.0;
    CHECK_THROWS_AS(c.validate(), Error);
  }

  TEST_CASE("training on the simulator recovers video-level sets") {
    SimConfig sim;
    const auto corpus = generate_corpus(sim);
    const auto vocab = training_vocabulary(corpus.train, 1.0);
    MlcTrainConfig cfg;
    const auto clf = train_mlc(corpus.train, vocab, cfg);
    const auto pr = mlc_set_scores(clf, vocab, corpus.dev, cfg.threshold);
    CHECK(pr.precision >= 0.95);
    CHECK(pr.recall >= 0.95);
    const auto again = train_mlc(corpus.train, vocab, cfg);
    CHECK(again == clf);
  }

  TEST_CASE("non-finite loss aborts with the record id") {
    SimConfig sim;
    sim.num_samples = 5;
    sim.num_dev = 0;
    sim.feature_dim = 8;
    auto corpus = generate_corpus(sim);
    (*corpus.train[3].features)(0, 0) = std::numeric_limits<float>::quiet_NaN();
    const auto vocab = training_vocabulary(corpus.train, 1.0);
    MlcTrainConfig cfg;
    cfg.epochs = 1;
    try {
      train_mlc(corpus.train, vocab, cfg);
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::kNumeric);
      CHECK(std::string(e.what()).find(corpus.train[3].id) != std::string::npos);
    }
  }

  TEST_CASE("checkpoint round trip") {
    glossweave::testing::TempDir dir("mlc-ckpt");
    const auto clf = init_classifier(6, 4, 0.0, 3);
    save_classifier(dir / "a.glcf", clf);
    std::uint32_t flags = 99;
    CHECK(load_classifier(dir / "a.glcf", &flags) == clf);
    CHECK(flags == 0);
    save_classifier(dir / "b.glcf", clf, kCheckpointBlankAtZero);
    CHECK(load_classifier(dir / "b.glcf", &flags) == clf);
    CHECK(flags == kCheckpointBlankAtZero);
    glossweave::testing::spit(dir / "bad.glcf", "NOPE");
    CHECK_THROWS_AS(load_classifier(dir / "bad.glcf"), Error);
  }
}
