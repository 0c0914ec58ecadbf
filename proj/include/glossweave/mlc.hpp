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

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <vector>

#include "glossweave/corpus.hpp"
#include "glossweave/error.hpp"
#include "glossweave/types.hpp"

namespace glossweave {

// Linear frame classifier: logits = features * weights + bias (broadcast per row).
template <typename Scalar>
struct LinearModel {
  RowMatrix<Scalar> weights;  // D x K
  Vector<Scalar> bias;        // K

  Eigen::Index input_dim() const { return weights.rows(); }
  Eigen::Index output_dim() const { return weights.cols(); }

  template <typename Derived>
  RowMatrix<Scalar> logits(const Eigen::MatrixBase<Derived>& features) const {
    if (features.cols() != weights.rows())
      throw config_error("feature dimension " + std::to_string(features.cols()) + " does not match classifier input " +
                         std::to_string(weights.rows()));
    RowMatrix<Scalar> z = features.template cast<Scalar>() * weights;
    z.rowwise() += bias.transpose();
    return z;
  }

  bool operator==(const LinearModel& o) const {
    return weights.rows() == o.weights.rows() && weights.cols() == o.weights.cols() && weights == o.weights &&
           bias == o.bias;
  }
};

using LinearClassifier = LinearModel<double>;

LinearClassifier init_classifier(int input_dim, int output_dim, double scale, std::uint64_t seed);

template <typename Derived>
RowMatrix<typename Derived::Scalar> softmax_rows(const Eigen::MatrixBase<Derived>& z) {
  using Scalar = typename Derived::Scalar;
  RowMatrix<Scalar> p(z.rows(), z.cols());
  for (Eigen::Index t = 0; t < z.rows(); ++t) {
    const Scalar m = z.row(t).maxCoeff();
    p.row(t) = (z.row(t).array() - m).exp();
    p.row(t) /= p.row(t).sum();
  }
  return p;
}

template <typename Derived>
RowMatrix<typename Derived::Scalar> log_softmax_rows(const Eigen::MatrixBase<Derived>& z) {
  using Scalar = typename Derived::Scalar;
  RowMatrix<Scalar> out(z.rows(), z.cols());
  for (Eigen::Index t = 0; t < z.rows(); ++t) {
    const Scalar m = z.row(t).maxCoeff();
    const Scalar lse = m + std::log((z.row(t).array() - m).exp().sum());
    out.row(t) = z.row(t).array() - lse;
  }
  return out;
}

template <typename Scalar>
ProbMatrix<Scalar> forward(const LinearModel<Scalar>& clf, const FeatureMatrix& features) {
  return softmax_rows(clf.logits(features));
}

// Index of the first maximal frame per class.
template <typename Derived>
std::vector<Eigen::Index> presence_argmax(const Eigen::MatrixBase<Derived>& p) {
  std::vector<Eigen::Index> arg(static_cast<std::size_t>(p.cols()), 0);
  for (Eigen::Index k = 0; k < p.cols(); ++k) {
    for (Eigen::Index t = 1; t < p.rows(); ++t) {
      if (p(t, k) > p(arg[k], k)) arg[k] = t;
    }
  }
  return arg;
}

// Temporal max-pool: y_k = max_t P(t, k).
template <typename Derived>
Vector<typename Derived::Scalar> pool_presence(const Eigen::MatrixBase<Derived>& p) {
  if (p.rows() < 1) throw config_error("pool_presence: empty frame sequence");
  return p.colwise().maxCoeff().transpose();
}

inline constexpr double kProbEpsilon = 1e-12;

template <typename Scalar>
Scalar bce_loss(const Vector<Scalar>& predicted, const Vector<Scalar>& target, const Vector<Scalar>& weights) {
  const Scalar eps = static_cast<Scalar>(kProbEpsilon);
  Scalar loss = 0;
  for (Eigen::Index k = 0; k < predicted.size(); ++k) {
    const Scalar p = std::clamp(predicted(k), eps, Scalar(1) - eps);
    loss -= weights(k) * (target(k) * std::log(p) + (Scalar(1) - target(k)) * std::log(Scalar(1) - p));
  }
  return loss;
}

// Mean L1 distance between consecutive rows; 0 for a single row.
template <typename Derived>
typename Derived::Scalar smooth_loss(const Eigen::MatrixBase<Derived>& m) {
  using Scalar = typename Derived::Scalar;
  if (m.rows() < 2) return Scalar(0);
  Scalar sum = 0;
  for (Eigen::Index t = 0; t + 1 < m.rows(); ++t) sum += (m.row(t) - m.row(t + 1)).cwiseAbs().sum();
  return sum / static_cast<Scalar>(m.rows() - 1);
}

// Which matrix the temporal smoothing term acts on. Probabilities is the
// default; logits is offered as a variant.
enum class SmoothTarget { kProbabilities, kLogits };

struct LossTerms {
  double bce = 0;
  double smooth = 0;
  double total = 0;
};

template <typename Scalar>
struct LossGradient {
  LossTerms loss;
  RowMatrix<Scalar> d_weights;
  Vector<Scalar> d_bias;
};

namespace detail {
template <typename Scalar>
Scalar sign(Scalar x) {
  return static_cast<Scalar>((x > 0) - (x < 0));
}
}  // namespace detail

// total = bce(maxpool(softmax(Z)), y, w) + lambda * smooth. The gradient sends
// the pooled term to the earliest argmax frame and uses sign(0) = 0.
template <typename Scalar>
LossGradient<Scalar> loss_and_gradients(const LinearModel<Scalar>& clf, const FeatureMatrix& features,
                                        const Vector<Scalar>& target, const Vector<Scalar>& weights, Scalar lambda,
                                        SmoothTarget smooth_on = SmoothTarget::kProbabilities) {
  const RowMatrix<Scalar> x = features.template cast<Scalar>();
  const RowMatrix<Scalar> z = clf.logits(x);
  const RowMatrix<Scalar> p = softmax_rows(z);
  const Eigen::Index frames = p.rows();
  const Eigen::Index classes = p.cols();
  if (target.size() != classes || weights.size() != classes)
    throw config_error("loss: target/weight length does not match classifier output");

  const Vector<Scalar> pooled = pool_presence(p);
  const auto arg = presence_argmax(p);
  const Scalar eps = static_cast<Scalar>(kProbEpsilon);

  LossGradient<Scalar> out;
  out.loss.bce = static_cast<double>(bce_loss(pooled, target, weights));

  RowMatrix<Scalar> d_prob = RowMatrix<Scalar>::Zero(frames, classes);
  for (Eigen::Index k = 0; k < classes; ++k) {
    const Scalar yk = pooled(k);
    if (yk <= eps || yk >= Scalar(1) - eps) continue;  // clamp is flat here
    d_prob(arg[k], k) += -weights(k) * (target(k) / yk - (Scalar(1) - target(k)) / (Scalar(1) - yk));
  }

  RowMatrix<Scalar> d_logit_direct = RowMatrix<Scalar>::Zero(frames, classes);
  const RowMatrix<Scalar>& smoothed = smooth_on == SmoothTarget::kProbabilities ? p : z;
  out.loss.smooth = static_cast<double>(smooth_loss(smoothed));
  if (frames > 1 && lambda != Scalar(0)) {
    RowMatrix<Scalar>& sink = smooth_on == SmoothTarget::kProbabilities ? d_prob : d_logit_direct;
    const Scalar scale = lambda / static_cast<Scalar>(frames - 1);
    for (Eigen::Index t = 0; t + 1 < frames; ++t) {
      for (Eigen::Index k = 0; k < classes; ++k) {
        const Scalar s = scale * detail::sign(smoothed(t, k) - smoothed(t + 1, k));
        sink(t, k) += s;
        sink(t + 1, k) -= s;
      }
    }
  }
  out.loss.total = out.loss.bce + static_cast<double>(lambda) * out.loss.smooth;

  // Softmax backward, row by row: dz = p * (g - <g, p>).
  RowMatrix<Scalar> d_logits(frames, classes);
  for (Eigen::Index t = 0; t < frames; ++t) {
    const Scalar dot = d_prob.row(t).dot(p.row(t));
    d_logits.row(t) = p.row(t).array() * (d_prob.row(t).array() - dot);
  }
  d_logits += d_logit_direct;

  out.d_weights = x.transpose() * d_logits;
  out.d_bias = d_logits.colwise().sum().transpose();
  return out;
}

template <typename Scalar>
Scalar total_loss(const LinearModel<Scalar>& clf, const FeatureMatrix& features, const Vector<Scalar>& target,
                  const Vector<Scalar>& weights, Scalar lambda, SmoothTarget smooth_on = SmoothTarget::kProbabilities) {
  const RowMatrix<Scalar> z = clf.logits(features);
  const RowMatrix<Scalar> p = softmax_rows(z);
  const Scalar bce = bce_loss<Scalar>(pool_presence(p), target, weights);
  if (lambda == Scalar(0)) return bce;
  return bce + lambda * (smooth_on == SmoothTarget::kProbabilities ? smooth_loss(p) : smooth_loss(z));
}

struct MlcTrainConfig {
  double w_base = 1.0;
  bool use_frequency_weights = true;
  double smooth_weight = 1.0;
  SmoothTarget smooth_on = SmoothTarget::kProbabilities;
  double learning_rate = 0.1;
  double momentum = 0.0;
  int epochs = 30;
  double init_scale = 0.0;  // <= 0 selects 1/sqrt(D)
  std::uint64_t seed = 42;
  double threshold = 0.5;

  void validate() const;
};

struct MlcEpochStats {
  int epoch = 0;
  double mean_loss = 0;
};

// Per-sample SGD over a seeded shuffle. Records must carry features, and every
// llm_gloss token must be in vocab. Weights come from vocab (or 1 when
// frequency weighting is off).
LinearClassifier train_mlc(std::span<const SampleRecord> records, const GlossVocabulary& vocab,
                           const MlcTrainConfig& config,
                           const std::function<void(const MlcEpochStats&)>& on_epoch = {});

// {k : pooled presence >= threshold}, ascending.
std::vector<int> predict_set(const LinearClassifier& clf, const FeatureMatrix& features, double threshold);

// "GLCF", u32 version, u32 D, u32 K, [u32 flags when version 2], W row-major f64, b f64.
inline constexpr std::uint32_t kCheckpointBlankAtZero = 1u;
void save_classifier(const std::filesystem::path& path, const LinearClassifier& clf, std::uint32_t flags = 0);
LinearClassifier load_classifier(const std::filesystem::path& path, std::uint32_t* flags = nullptr);

}  // namespace glossweave
