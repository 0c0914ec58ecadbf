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

#include <cstdint>
#include <filesystem>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "glossweave/corpus.hpp"
#include "glossweave/error.hpp"
#include "glossweave/mlc.hpp"
#include "glossweave/types.hpp"

namespace glossweave {

inline constexpr int kBlank = 0;

// A target fits in T frames when T >= M + (number of adjacent repeats).
bool ctc_feasible(const IdSeq& target, Eigen::Index frames);

namespace detail {

template <typename Scalar>
Scalar log_add(Scalar a, Scalar b) {
  constexpr Scalar kNegInf = -std::numeric_limits<Scalar>::infinity();
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  return a > b ? a + std::log1p(std::exp(b - a)) : b + std::log1p(std::exp(a - b));
}

inline void check_target(const IdSeq& target, Eigen::Index frames, Eigen::Index classes) {
  if (target.empty()) throw Error(ErrorKind::kInfeasible, "ctc: empty target");
  for (int id : target) {
    if (id == kBlank) throw Error(ErrorKind::kInfeasible, "ctc: target contains the blank id");
    if (id < 0 || id >= classes) throw Error(ErrorKind::kInfeasible, "ctc: target id out of range");
  }
  if (!ctc_feasible(target, frames))
    throw Error(ErrorKind::kInfeasible, "ctc: target of length " + std::to_string(target.size()) +
                                            " is infeasible for " + std::to_string(frames) + " frames");
}

// Blank-augmented label sequence: blank, l1, blank, l2, ..., lM, blank.
inline IdSeq augment(const IdSeq& target) {
  IdSeq ext(2 * target.size() + 1, kBlank);
  for (std::size_t m = 0; m < target.size(); ++m) ext[2 * m + 1] = target[m];
  return ext;
}

inline bool can_skip(const IdSeq& ext, std::size_t s) {
  return s >= 2 && ext[s] != kBlank && ext[s] != ext[s - 2];
}

}  // namespace detail

template <typename Scalar>
struct CtcLattice {
  RowMatrix<Scalar> log_alpha;  // T x (2M+1)
  RowMatrix<Scalar> log_beta;   // T x (2M+1); includes the emission at t
  Scalar log_likelihood;
};

// Forward-backward over log-softmax rows (T x (K+1), column 0 is blank).
template <typename Derived>
CtcLattice<typename Derived::Scalar> ctc_lattice(const Eigen::MatrixBase<Derived>& log_probs, const IdSeq& target) {
  using Scalar = typename Derived::Scalar;
  constexpr Scalar kNegInf = -std::numeric_limits<Scalar>::infinity();
  const Eigen::Index frames = log_probs.rows();
  detail::check_target(target, frames, log_probs.cols());
  const IdSeq ext = detail::augment(target);
  const auto states = static_cast<Eigen::Index>(ext.size());

  CtcLattice<Scalar> lat;
  lat.log_alpha = RowMatrix<Scalar>::Constant(frames, states, kNegInf);
  lat.log_beta = RowMatrix<Scalar>::Constant(frames, states, kNegInf);
  auto& alpha = lat.log_alpha;
  auto& beta = lat.log_beta;

  alpha(0, 0) = log_probs(0, ext[0]);
  alpha(0, 1) = log_probs(0, ext[1]);
  for (Eigen::Index t = 1; t < frames; ++t) {
    for (Eigen::Index s = 0; s < states; ++s) {
      Scalar a = alpha(t - 1, s);
      if (s >= 1) a = detail::log_add(a, alpha(t - 1, s - 1));
      if (detail::can_skip(ext, static_cast<std::size_t>(s))) a = detail::log_add(a, alpha(t - 1, s - 2));
      if (a != kNegInf) alpha(t, s) = a + log_probs(t, ext[static_cast<std::size_t>(s)]);
    }
  }

  const Eigen::Index last = frames - 1;
  beta(last, states - 1) = log_probs(last, ext[static_cast<std::size_t>(states - 1)]);
  beta(last, states - 2) = log_probs(last, ext[static_cast<std::size_t>(states - 2)]);
  for (Eigen::Index t = last - 1; t >= 0; --t) {
    for (Eigen::Index s = 0; s < states; ++s) {
      Scalar b = beta(t + 1, s);
      if (s + 1 < states) b = detail::log_add(b, beta(t + 1, s + 1));
      if (s + 2 < states && detail::can_skip(ext, static_cast<std::size_t>(s + 2)))
        b = detail::log_add(b, beta(t + 1, s + 2));
      if (b != kNegInf) beta(t, s) = b + log_probs(t, ext[static_cast<std::size_t>(s)]);
    }
  }

  lat.log_likelihood = detail::log_add(alpha(last, states - 1), alpha(last, states - 2));
  return lat;
}

// -log p(target | frames).
template <typename Derived>
typename Derived::Scalar ctc_loss(const Eigen::MatrixBase<Derived>& log_probs, const IdSeq& target) {
  return -ctc_lattice(log_probs, target).log_likelihood;
}

// Gradient of ctc_loss(log_softmax(Z)) with respect to Z: P - gamma, where
// gamma is the per-frame label posterior over the augmented states.
template <typename Derived>
RowMatrix<typename Derived::Scalar> ctc_gradients(const Eigen::MatrixBase<Derived>& log_probs, const IdSeq& target) {
  using Scalar = typename Derived::Scalar;
  constexpr Scalar kNegInf = -std::numeric_limits<Scalar>::infinity();
  const auto lat = ctc_lattice(log_probs, target);
  const IdSeq ext = detail::augment(target);
  const Eigen::Index frames = log_probs.rows();
  const Eigen::Index classes = log_probs.cols();

  RowMatrix<Scalar> log_gamma = RowMatrix<Scalar>::Constant(frames, classes, kNegInf);
  for (Eigen::Index t = 0; t < frames; ++t) {
    for (std::size_t s = 0; s < ext.size(); ++s) {
      const auto si = static_cast<Eigen::Index>(s);
      const Scalar v = lat.log_alpha(t, si) + lat.log_beta(t, si);
      if (v == kNegInf) continue;
      log_gamma(t, ext[s]) = detail::log_add(log_gamma(t, ext[s]), v - log_probs(t, ext[s]));
    }
  }
  RowMatrix<Scalar> grad(frames, classes);
  for (Eigen::Index t = 0; t < frames; ++t)
    for (Eigen::Index k = 0; k < classes; ++k)
      grad(t, k) = std::exp(log_probs(t, k)) - std::exp(log_gamma(t, k) - lat.log_likelihood);
  return grad;
}

// Best path: per-frame argmax, collapse repeats, drop blanks.
template <typename Derived>
IdSeq ctc_greedy_decode(const Eigen::MatrixBase<Derived>& probs) {
  IdSeq out;
  int prev = -1;
  for (Eigen::Index t = 0; t < probs.rows(); ++t) {
    Eigen::Index best = 0;
    for (Eigen::Index k = 1; k < probs.cols(); ++k)
      if (probs(t, k) > probs(t, best)) best = k;
    const int id = static_cast<int>(best);
    if (id != prev && id != kBlank) out.push_back(id);
    prev = id;
  }
  return out;
}

// Linear recognizer with K+1 outputs; output 0 is blank and output k+1 is
// vocabulary id k.
struct CtcRecognizer {
  LinearClassifier model;
  GlossVocabulary vocab;

  IdSeq encode_target(const TokenSeq& tokens) const;
  TokenSeq decode(const FeatureMatrix& features) const;
};

enum class TargetSource { kReordered, kLlm, kTrue };
TargetSource parse_target_source(const std::string& name);
std::string to_string(TargetSource source);
const TokenSeq* select_target(const SampleRecord& record, TargetSource source);

struct CtcTrainConfig {
  double learning_rate = 0.5;
  double momentum = 0.0;
  int epochs = 40;
  double init_scale = 0.0;  // <= 0 selects 1/sqrt(D)
  std::uint64_t seed = 42;
  TargetSource targets = TargetSource::kReordered;
  // Shorten infeasible targets with cap_length instead of skipping them.
  bool cap_infeasible = true;
  // Multiplies the CTC gradient in a given (1-based) epoch. Unset means 1.
  std::function<double(int)> loss_schedule;

  void validate() const;
};

struct CtcEpochStats {
  int epoch = 0;
  double mean_loss = 0;
  double dev_wer = 0;  // NaN without dev records
  int skipped = 0;
};

struct CtcTrainResult {
  CtcRecognizer recognizer;
  std::vector<CtcEpochStats> history;
  std::vector<std::string> warnings;  // skipped records
};

// Per-sample SGD on the CTC loss. Records whose target is missing or contains
// out-of-vocabulary tokens are skipped with a warning, as are infeasible
// targets unless cap_infeasible shortens them.
// Dev WER is measured against dev true glosses after every epoch.
CtcTrainResult train_sign2gloss(std::span<const SampleRecord> train, std::span<const SampleRecord> dev,
                                const GlossVocabulary& vocab, const CtcTrainConfig& config,
                                const std::function<void(const CtcEpochStats&)>& on_epoch = {});

void save_recognizer(const std::filesystem::path& path, const CtcRecognizer& rec);
CtcRecognizer load_recognizer(const std::filesystem::path& path);

}  // namespace glossweave
