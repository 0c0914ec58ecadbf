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

#include "glossweave/simulator.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>

#include <json.hpp>

#include "glossweave/error.hpp"

namespace glossweave {

namespace {

void require(bool ok, const std::string& field, const std::string& msg) {
  if (!ok) throw config_error("sim." + field + ": " + msg);
}

std::string record_id(int index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "sim-%05d", index);
  return buf;
}

}  // namespace

void SimConfig::validate() const {
  require(vocab_size >= 1, "vocab_size", "must be >= 1");
  require(feature_dim >= 1, "feature_dim", "must be >= 1");
  require(num_samples >= 1, "num_samples", "must be >= 1");
  require(num_dev >= 0, "num_dev", "must be >= 0");
  require(glosses_per_video.lo >= 1 && glosses_per_video.lo <= glosses_per_video.hi, "glosses_per_video",
          "range must be nonempty with lo >= 1");
  require(frames_per_gloss.lo >= 1 && frames_per_gloss.lo <= frames_per_gloss.hi, "frames_per_gloss",
          "range must be nonempty with lo >= 1");
  require(vocab_size >= glosses_per_video.hi, "vocab_size", "must be >= glosses_per_video.hi");
  require(noise_sigma >= 0.0, "noise_sigma", "must be >= 0");
  require(disorder >= 0.0 && disorder <= 1.0, "disorder", "must be in [0,1]");
  require(p_insert >= 0.0 && p_insert <= 1.0, "p_insert", "must be in [0,1]");
  require(p_delete >= 0.0 && p_delete <= 1.0, "p_delete", "must be in [0,1]");
  require(rng == Rng::kAlgorithm, "rng", "unsupported generator '" + rng + "' (expected mt19937_64)");
}

std::vector<Token> synthetic_symbols(int count) {
  int width = 2;
  for (int n = count - 1; n >= 100; n /= 10) ++width;
  std::vector<Token> out;
  for (int k = 0; k < count; ++k) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "G%0*d", width, k);
    out.emplace_back(buf);
  }
  return out;
}

RowMatrix<double> sample_embeddings(int count, int dim, Rng& rng) {
  RowMatrix<double> e(count, dim);
  for (int k = 0; k < count; ++k) {
    double norm = 0.0;
    do {
      for (int d = 0; d < dim; ++d) e(k, d) = rng.normal();
      norm = e.row(k).norm();
    } while (norm < 1e-12);
    e.row(k) /= norm;
  }
  return e;
}

TokenSeq scramble(const TokenSeq& gloss, const std::vector<Token>& vocabulary, double disorder, double p_insert,
                  double p_delete, Rng& rng) {
  TokenSeq kept;
  for (const auto& t : gloss) {
    if (!rng.bernoulli(p_delete)) kept.push_back(t);
  }
  if (kept.empty() && !gloss.empty()) kept.push_back(gloss[rng.index(gloss.size())]);

  TokenSeq out;
  for (const auto& t : kept) {
    out.push_back(t);
    if (!vocabulary.empty() && rng.bernoulli(p_insert)) out.push_back(vocabulary[rng.index(vocabulary.size())]);
  }

  for (std::size_t i = 0; i + 1 < out.size(); ++i) {
    if (rng.bernoulli(disorder)) std::swap(out[i], out[i + 1]);
  }
  return out;
}

FeatureMatrix emit_features(const IdSeq& gloss, const std::vector<int>& durations, const RowMatrix<double>& embeddings,
                            double noise_sigma, Rng& rng) {
  if (gloss.size() != durations.size()) throw config_error("emit_features: one duration per gloss required");
  int total = 0;
  for (int d : durations) total += d;
  FeatureMatrix f(total, embeddings.cols());
  int t = 0;
  for (std::size_t g = 0; g < gloss.size(); ++g) {
    for (int n = 0; n < durations[g]; ++n, ++t) {
      for (Eigen::Index d = 0; d < embeddings.cols(); ++d) {
        const double noise = noise_sigma > 0.0 ? noise_sigma * rng.normal() : 0.0;
        f(t, d) = static_cast<float>(embeddings(gloss[g], d) + noise);
      }
    }
  }
  return f;
}

GeneratedSample generate_sample(const SimConfig& config, const std::vector<Token>& symbols,
                                const RowMatrix<double>& embeddings, int index) {
  Rng rng(derive_seed(config.seed, static_cast<std::uint64_t>(index) + 1));
  const int m = static_cast<int>(rng.uniform_int(config.glosses_per_video.lo, config.glosses_per_video.hi));

  // Partial Fisher-Yates: m distinct gloss ids.
  std::vector<int> pool(symbols.size());
  for (std::size_t k = 0; k < pool.size(); ++k) pool[k] = static_cast<int>(k);
  IdSeq ids;
  for (int i = 0; i < m; ++i) {
    const std::size_t j = static_cast<std::size_t>(i) + rng.index(pool.size() - static_cast<std::size_t>(i));
    std::swap(pool[static_cast<std::size_t>(i)], pool[j]);
    ids.push_back(pool[static_cast<std::size_t>(i)]);
  }
  std::vector<int> durations;
  for (int i = 0; i < m; ++i)
    durations.push_back(static_cast<int>(rng.uniform_int(config.frames_per_gloss.lo, config.frames_per_gloss.hi)));

  GeneratedSample out;
  auto& r = out.record;
  r.id = record_id(index);
  TokenSeq truth;
  for (int id : ids) truth.push_back(symbols[static_cast<std::size_t>(id)]);
  r.true_gloss = truth;
  r.llm_gloss = scramble(truth, symbols, config.disorder, config.p_insert, config.p_delete, rng);
  for (const auto& t : r.llm_gloss) {
    std::string w = t;
    std::transform(w.begin(), w.end(), w.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    r.text.push_back(w);
  }
  r.features = emit_features(ids, durations, embeddings, config.noise_sigma, rng);
  r.features_path = "features/" + r.id + ".glft";

  out.oracle.id = r.id;
  for (std::size_t g = 0; g < ids.size(); ++g)
    for (int n = 0; n < durations[g]; ++n) out.oracle.frame_labels.push_back(ids[g]);
  return out;
}

SimCorpus generate_corpus(const SimConfig& config) {
  config.validate();
  SimCorpus c;
  c.symbols = synthetic_symbols(config.vocab_size);
  Rng embed_rng(derive_seed(config.seed, 0));
  c.embeddings = sample_embeddings(config.vocab_size, config.feature_dim, embed_rng);
  const int total = config.num_samples + config.num_dev;
  for (int i = 0; i < total; ++i) {
    auto s = generate_sample(config, c.symbols, c.embeddings, i);
    if (i < config.num_samples) {
      c.train.push_back(std::move(s.record));
      c.train_oracle.push_back(std::move(s.oracle));
    } else {
      c.dev.push_back(std::move(s.record));
      c.dev_oracle.push_back(std::move(s.oracle));
    }
  }
  c.vocab = build_vocabulary(c.train);
  return c;
}

namespace {

void write_oracle(const std::filesystem::path& path, const std::vector<FrameOracle>& oracle) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw io_error("cannot open for writing: " + path.string());
  for (const auto& o : oracle) {
    nlohmann::json j;
    j["id"] = o.id;
    j["frame_labels"] = o.frame_labels;
    out << j.dump() << '\n';
  }
}

}  // namespace

void write_sim_corpus(const std::filesystem::path& dir, const SimCorpus& corpus) {
  std::filesystem::create_directories(dir);
  save_corpus(dir / "corpus.jsonl", corpus.train);
  save_corpus(dir / "dev.jsonl", corpus.dev);
  write_oracle(dir / "oracle.jsonl", corpus.train_oracle);
  write_oracle(dir / "dev_oracle.jsonl", corpus.dev_oracle);
  std::ofstream sym(dir / "symbols.json", std::ios::binary);
  sym << nlohmann::json(corpus.symbols).dump() << '\n';
}

std::vector<FrameOracle> load_oracle(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open oracle file " + path.string());
  std::vector<FrameOracle> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      auto j = nlohmann::json::parse(line);
      out.push_back({j.at("id").get<std::string>(), j.at("frame_labels").get<IdSeq>()});
    } catch (const nlohmann::json::exception& e) {
      throw parse_error(path.string() + ": line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace glossweave
