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

#include "glossweave/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "binary_io.hpp"
#include "glossweave/error.hpp"

namespace glossweave {

using nlohmann::json;

GlossVocabulary::GlossVocabulary(std::vector<Token> symbols, std::vector<std::int64_t> freq)
    : symbols_(std::move(symbols)), freq_(std::move(freq)), weights_(symbols_.size(), 1.0) {
  if (symbols_.empty()) throw Error(ErrorKind::kConfig, "empty vocabulary");
  if (freq_.size() != symbols_.size()) throw Error(ErrorKind::kConfig, "vocabulary: freq size mismatch");
  for (std::size_t k = 0; k < symbols_.size(); ++k) {
    if (freq_[k] < 1) throw Error(ErrorKind::kConfig, "vocabulary: frequency of '" + symbols_[k] + "' below 1");
    if (!index_.emplace(symbols_[k], static_cast<int>(k)).second)
      throw Error(ErrorKind::kConfig, "vocabulary: duplicate symbol '" + symbols_[k] + "'");
  }
}

Vector<double> GlossVocabulary::weight_vector() const {
  return Eigen::Map<const Vector<double>>(weights_.data(), static_cast<Eigen::Index>(weights_.size()));
}

std::optional<int> GlossVocabulary::find(const Token& token) const {
  auto it = index_.find(token);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

int GlossVocabulary::id(const Token& token) const {
  auto it = index_.find(token);
  if (it == index_.end()) throw Error(ErrorKind::kParse, "token '" + token + "' not in vocabulary");
  return it->second;
}

IdSeq GlossVocabulary::encode(const TokenSeq& tokens) const {
  IdSeq ids;
  ids.reserve(tokens.size());
  for (const auto& t : tokens) ids.push_back(id(t));
  return ids;
}

TokenSeq GlossVocabulary::decode(const IdSeq& ids) const {
  TokenSeq out;
  out.reserve(ids.size());
  for (int i : ids) out.push_back(symbol(i));
  return out;
}

Vector<double> GlossVocabulary::presence(const TokenSeq& tokens) const {
  Vector<double> y = Vector<double>::Zero(size());
  for (const auto& t : tokens) y(id(t)) = 1.0;
  return y;
}

void GlossVocabulary::set_weights(std::vector<double> weights) {
  if (weights.size() != symbols_.size()) throw Error(ErrorKind::kConfig, "vocabulary: weight size mismatch");
  weights_ = std::move(weights);
}

GlossVocabulary build_vocabulary(std::span<const SampleRecord> records) {
  if (records.empty()) throw Error(ErrorKind::kConfig, "empty corpus");
  std::map<Token, std::int64_t> counts;
  for (const auto& r : records) {
    if (r.llm_gloss.empty()) throw Error(ErrorKind::kConfig, "record '" + r.id + "' has an empty llm_gloss");
    for (const auto& t : r.llm_gloss) ++counts[t];
  }
  std::vector<Token> symbols;
  std::vector<std::int64_t> freq;
  for (const auto& [token, n] : counts) {
    symbols.push_back(token);
    freq.push_back(n);
  }
  return GlossVocabulary(std::move(symbols), std::move(freq));
}

GlossVocabulary compute_weights(GlossVocabulary vocab, double w_base) {
  if (!(w_base > 0.0)) throw config_error("w_base must be positive");
  const auto& f = vocab.freq();
  const double f_max = static_cast<double>(*std::max_element(f.begin(), f.end()));
  std::vector<double> w(f.size());
  for (std::size_t k = 0; k < f.size(); ++k) {
    // ln(1) is exactly 0, so maximal-frequency glosses get w_base exactly.
    w[k] = w_base + std::log(f_max / static_cast<double>(f[k]));
  }
  vocab.set_weights(std::move(w));
  return vocab;
}

void write_features(const std::filesystem::path& path, const FeatureMatrix& features) {
  if (features.rows() < 1 || features.cols() < 1) throw io_error("feature matrix must be non-empty: " + path.string());
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw io_error("cannot open for writing: " + path.string());
  out.write("GLFT", 4);
  detail::put_le<std::uint32_t>(out, 1);
  detail::put_le<std::uint32_t>(out, static_cast<std::uint32_t>(features.rows()));
  detail::put_le<std::uint32_t>(out, static_cast<std::uint32_t>(features.cols()));
  for (Eigen::Index t = 0; t < features.rows(); ++t)
    for (Eigen::Index d = 0; d < features.cols(); ++d) detail::put_le<float>(out, features(t, d));
  if (!out) throw io_error("write failed: " + path.string());
}

FeatureMatrix read_features(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open feature file " + path.string());
  if (!detail::read_magic(in, "GLFT")) throw io_error("bad magic in feature file " + path.string());
  std::uint32_t version = 0, rows = 0, cols = 0;
  if (!detail::get_le(in, version) || !detail::get_le(in, rows) || !detail::get_le(in, cols))
    throw io_error("truncated header in feature file " + path.string());
  if (version != 1) throw io_error("unsupported feature file version " + std::to_string(version));
  if (rows < 1 || cols < 1) throw io_error("empty feature matrix in " + path.string());
  FeatureMatrix f(rows, cols);
  for (std::uint32_t t = 0; t < rows; ++t) {
    for (std::uint32_t d = 0; d < cols; ++d) {
      float v;
      if (!detail::get_le(in, v)) throw io_error("truncated feature data in " + path.string());
      if (!std::isfinite(v)) throw io_error("non-finite feature value in " + path.string());
      f(t, d) = v;
    }
  }
  return f;
}

namespace {

json optional_tokens(const std::optional<TokenSeq>& seq) {
  if (!seq) return nullptr;
  return *seq;
}

TokenSeq token_array(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key) || !j.at(key).is_array())
    throw parse_error(where + ": '" + key + "' must be an array of strings");
  TokenSeq out;
  for (const auto& v : j.at(key)) {
    if (!v.is_string()) throw parse_error(where + ": '" + key + "' must hold strings");
    out.push_back(v.get<std::string>());
  }
  return out;
}

std::optional<TokenSeq> optional_token_array(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return token_array(j, key, where);
}

}  // namespace

void save_corpus(const std::filesystem::path& path, std::span<const SampleRecord> records) {
  const auto dir = path.parent_path();
  if (!dir.empty()) std::filesystem::create_directories(dir);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw io_error("cannot open for writing: " + path.string());
  for (const auto& r : records) {
    json j;
    j["id"] = r.id;
    j["text"] = r.text;
    j["llm_gloss"] = r.llm_gloss;
    j["true_gloss"] = optional_tokens(r.true_gloss);
    j["reordered_gloss"] = optional_tokens(r.reordered_gloss);
    j["features"] = r.features_path.empty() ? json(nullptr) : json(r.features_path);
    if (r.features && r.features_path.empty()) throw io_error("record '" + r.id + "': features without a path");
    out << j.dump() << '\n';
    if (r.features) write_features(dir / r.features_path, *r.features);
  }
  if (!out) throw io_error("write failed: " + path.string());
}

std::vector<SampleRecord> load_corpus(const std::filesystem::path& path, bool load_features) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open corpus file " + path.string());
  const auto dir = path.parent_path();
  std::vector<SampleRecord> records;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw parse_error(path.string() + ": line " + std::to_string(lineno) + ": malformed JSON: " + e.what());
    }
    if (!j.is_object() || !j.contains("id") || !j.at("id").is_string())
      throw parse_error(path.string() + ": line " + std::to_string(lineno) + ": missing string 'id'");
    SampleRecord r;
    r.id = j.at("id").get<std::string>();
    const std::string where = path.string() + ": line " + std::to_string(lineno);
    r.text = token_array(j, "text", where);
    r.llm_gloss = optional_token_array(j, "llm_gloss", where).value_or(TokenSeq{});
    r.true_gloss = optional_token_array(j, "true_gloss", where);
    r.reordered_gloss = optional_token_array(j, "reordered_gloss", where);
    if (j.contains("features") && !j.at("features").is_null()) {
      if (!j.at("features").is_string())
        throw parse_error(path.string() + ": line " + std::to_string(lineno) + ": 'features' must be a path string");
      r.features_path = j.at("features").get<std::string>();
    }
    if (load_features && !r.features_path.empty()) {
      try {
        r.features = read_features(dir / r.features_path);
      } catch (const Error& e) {
        throw io_error("record '" + r.id + "': " + e.what());
      }
    }
    records.push_back(std::move(r));
  }
  return records;
}

void save_vocabulary(const std::filesystem::path& path, const GlossVocabulary& vocab) {
  json j;
  j["symbols"] = vocab.symbols();
  j["freq"] = vocab.freq();
  j["weights"] = vocab.weights();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw io_error("cannot open for writing: " + path.string());
  out << j.dump(2) << '\n';
}

GlossVocabulary load_vocabulary(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open vocabulary file " + path.string());
  try {
    json j = json::parse(in);
    GlossVocabulary v(j.at("symbols").get<std::vector<Token>>(), j.at("freq").get<std::vector<std::int64_t>>());
    v.set_weights(j.at("weights").get<std::vector<double>>());
    return v;
  } catch (const json::exception& e) {
    throw parse_error(path.string() + ": " + e.what());
  }
}

}  // namespace glossweave
