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
#include <string>
#include <vector>

#include "glossweave/corpus.hpp"
#include "glossweave/rng.hpp"

namespace glossweave {

struct IntRange {
  int lo = 1;
  int hi = 1;
};

struct SimConfig {
  int vocab_size = 20;
  int feature_dim = 64;
  int num_samples = 200;
  int num_dev = 50;
  IntRange glosses_per_video{3, 6};
  IntRange frames_per_gloss{3, 6};
  double noise_sigma = 0.1;
  double disorder = 0.5;
  double p_insert = 0.05;
  double p_delete = 0.05;
  std::uint64_t seed = 42;
  std::string rng = std::string(Rng::kAlgorithm);

  void validate() const;  // throws config errors naming the offending field
};

// Per-record ground truth: the gloss id (into SimCorpus::symbols) of every frame.
struct FrameOracle {
  std::string id;
  IdSeq frame_labels;
};

struct SimCorpus {
  std::vector<SampleRecord> train;
  std::vector<SampleRecord> dev;
  // Vocabulary of the training llm glosses, weights at w_base = 1.
  GlossVocabulary vocab;
  // Every synthetic gloss token; ids of FrameOracle index into this.
  std::vector<Token> symbols;
  RowMatrix<double> embeddings;  // vocab_size x feature_dim, unit rows
  std::vector<FrameOracle> train_oracle;
  std::vector<FrameOracle> dev_oracle;
};

// Random unit vectors, one row per synthetic gloss.
RowMatrix<double> sample_embeddings(int count, int dim, Rng& rng);

// Deletions, then insertions of uniformly drawn vocabulary tokens, then one
// left-to-right pass of adjacent swaps. Never returns an empty sequence.
TokenSeq scramble(const TokenSeq& gloss, const std::vector<Token>& vocabulary, double disorder, double p_insert,
                  double p_delete, Rng& rng);

// Frames for gloss g are embedding(g) plus iid N(0, sigma^2) noise.
FeatureMatrix emit_features(const IdSeq& gloss, const std::vector<int>& durations, const RowMatrix<double>& embeddings,
                            double noise_sigma, Rng& rng);

std::vector<Token> synthetic_symbols(int count);

// One record is a pure function of (config, index): its stream seed is derived
// from config.seed and the index.
struct GeneratedSample {
  SampleRecord record;
  FrameOracle oracle;
};
GeneratedSample generate_sample(const SimConfig& config, const std::vector<Token>& symbols,
                                const RowMatrix<double>& embeddings, int index);

SimCorpus generate_corpus(const SimConfig& config);

// Writes corpus.jsonl, dev.jsonl, features/, oracle.jsonl, dev_oracle.jsonl and symbols.json.
void write_sim_corpus(const std::filesystem::path& dir, const SimCorpus& corpus);
std::vector<FrameOracle> load_oracle(const std::filesystem::path& path);

}  // namespace glossweave
