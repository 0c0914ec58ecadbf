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

#include "glossweave/mlc.hpp"

#include <fstream>

#include "binary_io.hpp"
#include "glossweave/rng.hpp"

namespace glossweave {

void MlcTrainConfig::validate() const {
  if (!(w_base > 0.0)) throw config_error("mlc.w_base: must be positive");
  if (!(smooth_weight >= 0.0)) throw config_error("mlc.smooth_weight: must be >= 0");
  if (!(learning_rate > 0.0)) throw config_error("mlc.learning_rate: must be positive");
  if (!(momentum >= 0.0 && momentum < 1.0)) throw config_error("mlc.momentum: must be in [0,1)");
  if (epochs < 1) throw config_error("mlc.epochs: must be >= 1");
  if (!(threshold > 0.0 && threshold < 1.0)) throw config_error("mlc.threshold: must be in (0,1)");
}

LinearClassifier init_classifier(int input_dim, int output_dim, double scale, std::uint64_t seed) {
  if (input_dim < 1 || output_dim < 1) throw config_error("classifier dimensions must be >= 1");
  if (scale <= 0.0) scale = 1.0 / std::sqrt(static_cast<double>(input_dim));
  Rng rng(seed);
  LinearClassifier clf;
  clf.weights.resize(input_dim, output_dim);
  clf.bias.resize(output_dim);
  for (int d = 0; d < input_dim; ++d)
    for (int k = 0; k < output_dim; ++k) clf.weights(d, k) = rng.uniform(-scale, scale);
  for (int k = 0; k < output_dim; ++k) clf.bias(k) = rng.uniform(-scale, scale);
  return clf;
}

LinearClassifier train_mlc(std::span<const SampleRecord> records, const GlossVocabulary& vocab,
                           const MlcTrainConfig& config, const std::function<void(const MlcEpochStats&)>& on_epoch) {
  config.validate();
  if (records.empty()) throw config_error("train_mlc: empty corpus");

  std::vector<Vector<double>> targets;
  for (const auto& r : records) {
    if (!r.features) throw io_error("record '" + r.id + "' has no features loaded");
    targets.push_back(vocab.presence(r.llm_gloss));
  }
  const Vector<double> weights =
      config.use_frequency_weights ? vocab.weight_vector() : Vector<double>::Ones(vocab.size());

  const int dim = static_cast<int>(records.front().features->cols());
  LinearClassifier clf = init_classifier(dim, vocab.size(), config.init_scale, derive_seed(config.seed, 1));
  RowMatrix<double> vel_w = RowMatrix<double>::Zero(clf.weights.rows(), clf.weights.cols());
  Vector<double> vel_b = Vector<double>::Zero(clf.bias.size());

  Rng order_rng(derive_seed(config.seed, 2));
  std::vector<std::size_t> order(records.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    order_rng.shuffle(order);
    double sum = 0.0;
    for (std::size_t i : order) {
      const auto& r = records[i];
      auto lg = loss_and_gradients<double>(clf, *r.features, targets[i], weights, config.smooth_weight,
                                           config.smooth_on);
      if (!std::isfinite(lg.loss.total))
        throw Error(ErrorKind::kNumeric, "train_mlc: non-finite loss at epoch " + std::to_string(epoch + 1) +
                                             ", record '" + r.id + "'");
      sum += lg.loss.total;
      vel_w = config.momentum * vel_w - config.learning_rate * lg.d_weights;
      vel_b = config.momentum * vel_b - config.learning_rate * lg.d_bias;
      clf.weights += vel_w;
      clf.bias += vel_b;
    }
    if (on_epoch) on_epoch({epoch + 1, sum / static_cast<double>(records.size())});
  }
  return clf;
}

std::vector<int> predict_set(const LinearClassifier& clf, const FeatureMatrix& features, double threshold) {
  const Vector<double> pooled = pool_presence(forward(clf, features));
  std::vector<int> out;
  for (Eigen::Index k = 0; k < pooled.size(); ++k)
    if (pooled(k) >= threshold) out.push_back(static_cast<int>(k));
  return out;
}

void save_classifier(const std::filesystem::path& path, const LinearClassifier& clf, std::uint32_t flags) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw io_error("cannot open for writing: " + path.string());
  out.write("GLCF", 4);
  detail::put_le<std::uint32_t>(out, flags == 0 ? 1u : 2u);
  detail::put_le<std::uint32_t>(out, static_cast<std::uint32_t>(clf.weights.rows()));
  detail::put_le<std::uint32_t>(out, static_cast<std::uint32_t>(clf.weights.cols()));
  if (flags != 0) detail::put_le<std::uint32_t>(out, flags);
  for (Eigen::Index d = 0; d < clf.weights.rows(); ++d)
    for (Eigen::Index k = 0; k < clf.weights.cols(); ++k) detail::put_le<double>(out, clf.weights(d, k));
  for (Eigen::Index k = 0; k < clf.bias.size(); ++k) detail::put_le<double>(out, clf.bias(k));
  if (!out) throw io_error("write failed: " + path.string());
}

LinearClassifier load_classifier(const std::filesystem::path& path, std::uint32_t* flags) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open checkpoint " + path.string());
  if (!detail::read_magic(in, "GLCF")) throw io_error("bad magic in checkpoint " + path.string());
  std::uint32_t version = 0, dim = 0, classes = 0, header_flags = 0;
  if (!detail::get_le(in, version) || !detail::get_le(in, dim) || !detail::get_le(in, classes))
    throw io_error("truncated checkpoint header in " + path.string());
  if (version == 2) {
    if (!detail::get_le(in, header_flags)) throw io_error("truncated checkpoint header in " + path.string());
  } else if (version != 1) {
    throw io_error("unsupported checkpoint version " + std::to_string(version) + " in " + path.string());
  }
  LinearClassifier clf;
  clf.weights.resize(dim, classes);
  clf.bias.resize(classes);
  for (std::uint32_t d = 0; d < dim; ++d)
    for (std::uint32_t k = 0; k < classes; ++k)
      if (!detail::get_le(in, clf.weights(d, k))) throw io_error("truncated checkpoint data in " + path.string());
  for (std::uint32_t k = 0; k < classes; ++k)
    if (!detail::get_le(in, clf.bias(k))) throw io_error("truncated checkpoint data in " + path.string());
  if (flags) *flags = header_flags;
  return clf;
}

}  // namespace glossweave
