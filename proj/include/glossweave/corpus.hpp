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
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "glossweave/types.hpp"

namespace glossweave {

// Pseudo-gloss vocabulary with occurrence counts and BCE reweighting factors.
// Ids are dense and follow lexicographic token order.
class GlossVocabulary {
 public:
  GlossVocabulary() = default;
  // Symbols must be unique; counts must be >= 1. Weights start at 1.
  GlossVocabulary(std::vector<Token> symbols, std::vector<std::int64_t> freq);

  int size() const { return static_cast<int>(symbols_.size()); }
  const std::vector<Token>& symbols() const { return symbols_; }
  const std::vector<std::int64_t>& freq() const { return freq_; }
  const std::vector<double>& weights() const { return weights_; }
  Vector<double> weight_vector() const;

  const Token& symbol(int id) const { return symbols_.at(static_cast<std::size_t>(id)); }
  std::optional<int> find(const Token& token) const;
  int id(const Token& token) const;  // throws on unknown token
  bool contains(const Token& token) const { return index_.count(token) != 0; }

  IdSeq encode(const TokenSeq& tokens) const;
  TokenSeq decode(const IdSeq& ids) const;

  // Binary presence vector of the token set (duplicates collapse).
  Vector<double> presence(const TokenSeq& tokens) const;

  void set_weights(std::vector<double> weights);

  bool operator==(const GlossVocabulary& other) const {
    return symbols_ == other.symbols_ && freq_ == other.freq_ && weights_ == other.weights_;
  }

 private:
  std::vector<Token> symbols_;
  std::map<Token, int> index_;
  std::vector<std::int64_t> freq_;
  std::vector<double> weights_;
};

struct SampleRecord {
  std::string id;
  TokenSeq text;
  TokenSeq llm_gloss;
  std::optional<TokenSeq> true_gloss;
  std::optional<TokenSeq> reordered_gloss;
  // Path of the feature file, relative to the corpus file's directory.
  std::string features_path;  // relative to the corpus file; empty when the record has no video
  // Loaded features; absent until read from disk or set by the producer.
  std::optional<FeatureMatrix> features;

  bool operator==(const SampleRecord&) const = default;
};

// Counts every occurrence of every token across the records' llm_gloss.
GlossVocabulary build_vocabulary(std::span<const SampleRecord> records);

// w_k = w_base + ln(f_max / f_k).
GlossVocabulary compute_weights(GlossVocabulary vocab, double w_base);

// Feature file: "GLFT", u32 version (1), u32 T, u32 D, T*D float32, little endian.
void write_features(const std::filesystem::path& path, const FeatureMatrix& features);
FeatureMatrix read_features(const std::filesystem::path& path);

// JSON Lines corpus. Feature files are written next to the corpus file at each
// record's features_path when the record carries inline features.
void save_corpus(const std::filesystem::path& path, std::span<const SampleRecord> records);
std::vector<SampleRecord> load_corpus(const std::filesystem::path& path, bool load_features = true);

// Vocabulary sidecar (symbols, freq, weights) as JSON.
void save_vocabulary(const std::filesystem::path& path, const GlossVocabulary& vocab);
GlossVocabulary load_vocabulary(const std::filesystem::path& path);

}  // namespace glossweave
