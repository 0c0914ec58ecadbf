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

#include <atomic>
#include <cstddef>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "glossweave/corpus.hpp"
#include "glossweave/types.hpp"

namespace glossweave {

// Gloss writing convention. DGS weather glosses are upper case, ASL pseudo
// glosses lower case.
enum class Convention { kDgsWeather, kAsl };
Convention parse_convention(const std::string& name);
std::string to_string(Convention convention);

struct ExamplePair {
  std::string text;
  std::string gloss;
};

struct PromptSpec {
  std::vector<ExamplePair> example_pairs;  // empty selects zero-shot
  std::string instruction;                 // glossing rules block
  int queries_per_call = 1;
  Convention convention = Convention::kDgsWeather;
  std::string language_tag = "DGS-weather";

  // Defaults: one query per call for DGS, three for ASL.
  static PromptSpec dgs_weather(std::vector<ExamplePair> pairs);
  static PromptSpec asl(std::vector<ExamplePair> pairs);
  static PromptSpec for_convention(Convention convention, std::vector<ExamplePair> pairs);
};

// Examples, rule block, numbered query slots, output-format directive.
// Requires queries.size() == spec.queries_per_call.
std::string build_prompt(const PromptSpec& spec, std::span<const std::string> queries);

// Extracts exactly `expected` bracketed groups, in order, split on whitespace.
// Throws a parse error carrying the raw text otherwise.
std::vector<TokenSeq> parse_response(const std::string& raw, std::size_t expected);

// Trim, strip punctuation at token ends, case-fold per convention, drop empties.
// Throws "empty gloss" if nothing survives.
TokenSeq normalize_gloss(const TokenSeq& tokens, Convention convention);

// Word list used to shorten glosses that cannot fit the frame budget.
const std::vector<std::string>& remove_words();

// While too long, drop stop-listed tokens (case-insensitively, left to right);
// then truncate from the tail. Result length <= max_len.
TokenSeq cap_length(const TokenSeq& gloss, std::size_t max_len, const std::vector<std::string>& stop_list);

// Text tokens minus stop-list words, in order, case-folded per convention.
// May be empty.
TokenSeq stopword_baseline(const std::string& text, const std::vector<std::string>& stop_list,
                           Convention convention = Convention::kAsl);

// Reads "text<TAB>gloss" lines or JSON Lines {"text": ..., "gloss": ...}.
std::vector<ExamplePair> load_example_pairs(const std::filesystem::path& path);

// --- transport -----------------------------------------------------------

struct LlmRequest {
  std::string prompt;
  std::vector<std::string> record_ids;  // batch members, in corpus order
};

class Transport {
 public:
  virtual ~Transport() = default;
  virtual std::string send(const LlmRequest& request) = 0;
  std::size_t calls() const { return calls_.load(); }

 protected:
  std::atomic<std::size_t> calls_{0};
};

// Number of requests that went out over the network, process-wide.
std::size_t network_call_count();

struct LlmClientConfig {
  std::string endpoint = "http://localhost:8000/v1/chat/completions";
  std::string model = "gpt-4o";
  std::string response_path = "/choices/0/message/content";  // JSON pointer
  double timeout_seconds = 60.0;
  int max_retries = 3;
  int backoff_ms = 500;  // doubled after each failed attempt
  std::string mock_path;  // non-empty selects the file-backed mock

  void validate() const;
};

// POSTs {model, messages:[{role:"user", content}]} and returns the text found
// at response_path.
class HttpTransport : public Transport {
 public:
  explicit HttpTransport(LlmClientConfig config);
  std::string send(const LlmRequest& request) override;

  static std::string request_body(const std::string& model, const std::string& prompt);
  static std::string extract_text(const std::string& response_body, const std::string& pointer);

 private:
  LlmClientConfig config_;
};

// Answers from a JSON Lines file of {id, gloss:[...]}; never touches the network.
class MockTransport : public Transport {
 public:
  explicit MockTransport(const std::filesystem::path& canned);
  explicit MockTransport(std::map<std::string, TokenSeq> canned) : canned_(std::move(canned)) {}
  std::string send(const LlmRequest& request) override;

 private:
  std::map<std::string, TokenSeq> canned_;
};

struct GenerationFailure {
  std::string id;
  std::string message;
};

struct GenerateResult {
  std::vector<SampleRecord> records;  // successes carry a fresh llm_gloss
  std::vector<GenerationFailure> errors;
};

struct RetryPolicy {
  int max_retries = 3;
  int backoff_ms = 500;
};

// Issues batches of queries_per_call in corpus order. A batch that still fails
// after retries is re-issued one record at a time so one bad record does not
// sink its neighbours.
GenerateResult generate(std::vector<SampleRecord> records, const PromptSpec& spec, Transport& transport,
                        const RetryPolicy& retry);

}  // namespace glossweave
