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

#include "glossweave/llm_gloss.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "glossweave/error.hpp"
#include "log.hpp"
#include "prompt_templates.hpp"

namespace glossweave {

using nlohmann::json;

namespace {

std::atomic<std::size_t> g_network_calls{0};

std::string join(const TokenSeq& tokens, const char* sep = " ") {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) out += sep;
    out += tokens[i];
  }
  return out;
}

const char* number_word(std::size_t n) {
  static const char* words[] = {"zero", "one", "two", "three", "four", "five",
                                "six",  "seven", "eight", "nine", "ten"};
  return n < std::size(words) ? words[n] : nullptr;
}

// Case mapping over ASCII and the Latin-1 letters encoded as C3 xx in UTF-8.
std::string fold_case(const std::string& s, bool upper) {
  std::string out = s;
  for (std::size_t i = 0; i < out.size(); ++i) {
    auto c = static_cast<unsigned char>(out[i]);
    if (c < 0x80) {
      out[i] = static_cast<char>(upper ? std::toupper(c) : std::tolower(c));
    } else if (c == 0xC3 && i + 1 < out.size()) {
      auto& next = reinterpret_cast<unsigned char&>(out[i + 1]);
      if (upper && next >= 0xA0 && next <= 0xBE && next != 0xB7) next = static_cast<unsigned char>(next - 0x20);
      if (!upper && next >= 0x80 && next <= 0x9E && next != 0x97) next = static_cast<unsigned char>(next + 0x20);
      ++i;
    }
  }
  return out;
}

bool is_edge_punct(char c) {
  static const std::string_view chars = ".,;:!?\"'()";
  return chars.find(c) != std::string_view::npos;
}

std::string trim_token(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && (std::isspace(static_cast<unsigned char>(s[b])) || is_edge_punct(s[b]))) ++b;
  while (e > b && (std::isspace(static_cast<unsigned char>(s[e - 1])) || is_edge_punct(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

TokenSeq split_ws(const std::string& s) {
  TokenSeq out;
  std::istringstream in(s);
  std::string w;
  while (in >> w) out.push_back(w);
  return out;
}

std::string lower(const std::string& s) { return fold_case(s, false); }

}  // namespace

Convention parse_convention(const std::string& name) {
  if (name == "dgs" || name == "DGS-weather" || name == "dgs-weather") return Convention::kDgsWeather;
  if (name == "asl" || name == "ASL" || name == "how2sign") return Convention::kAsl;
  throw config_error("llm.convention: expected dgs|asl, got '" + name + "'");
}

std::string to_string(Convention convention) { return convention == Convention::kDgsWeather ? "dgs" : "asl"; }

PromptSpec PromptSpec::dgs_weather(std::vector<ExamplePair> pairs) {
  PromptSpec s;
  s.instruction = std::string(pairs.empty() ? templates::kDgsRulesZeroShot : templates::kDgsRulesWithExamples);
  s.example_pairs = std::move(pairs);
  s.queries_per_call = 1;
  s.convention = Convention::kDgsWeather;
  s.language_tag = "DGS-weather";
  return s;
}

PromptSpec PromptSpec::asl(std::vector<ExamplePair> pairs) {
  PromptSpec s;
  s.instruction = std::string(templates::kAslRules);
  s.example_pairs = std::move(pairs);
  s.queries_per_call = 3;
  s.convention = Convention::kAsl;
  s.language_tag = "ASL";
  return s;
}

PromptSpec PromptSpec::for_convention(Convention convention, std::vector<ExamplePair> pairs) {
  return convention == Convention::kDgsWeather ? dgs_weather(std::move(pairs)) : asl(std::move(pairs));
}

namespace {

std::string build_dgs_prompt(const PromptSpec& spec, std::span<const std::string> queries) {
  std::string p;
  if (!spec.example_pairs.empty()) {
    p += templates::kDgsExamplesHeader;
    p += "\n\n";
    for (std::size_t i = 0; i < spec.example_pairs.size(); ++i) {
      const auto& ex = spec.example_pairs[i];
      p += "Example " + std::to_string(i + 1) + ": text: [" + ex.text + "] gloss: [" + ex.gloss + "]\n";
    }
    p += "\n";
    p += spec.instruction;
    p += "\n\n";
    p += templates::kDgsInferWithExamples;
    p += "\n\n";
  } else {
    p += spec.instruction;
    p += "\n\n";
  }
  if (queries.size() == 1) {
    p += "text: [" + queries[0] + "]\n\n";
    p += templates::kDgsOutputSingle;
    return p;
  }
  for (std::size_t i = 0; i < queries.size(); ++i) p += "text" + std::to_string(i + 1) + ": [" + queries[i] + "]\n\n";
  p += "The output should follow the following format without any text formatting:\n";
  for (std::size_t i = 0; i < queries.size(); ++i) p += "[generated gloss" + std::to_string(i + 1) + "]\n";
  p.pop_back();
  return p;
}

std::string build_asl_prompt(const PromptSpec& spec, std::span<const std::string> queries) {
  std::string p;
  p += templates::kAslHeader;
  p += "\n\n";
  p += spec.instruction;
  p += "\n\n";
  if (!spec.example_pairs.empty()) {
    p += "Examples:\n\n";
    for (const auto& ex : spec.example_pairs) p += "sentence: [" + ex.text + "] gloss: [" + ex.gloss + "]\n\n";
  }
  const char* word = number_word(queries.size());
  const std::string count = word ? word : std::to_string(queries.size());
  p += queries.size() == 1 ? "Now, infer the most suitable ASL gloss sequence for the following English sentence:\n\n"
                           : "Now, infer the most suitable ASL gloss sequence for the following " + count +
                                 " English sentences:\n\n";
  for (std::size_t i = 0; i < queries.size(); ++i)
    p += "sentence" + std::to_string(i + 1) + ": [" + queries[i] + "]\n\n";
  p += templates::kAslOutputHeader;
  p += "\n\n";
  for (std::size_t i = 0; i < queries.size(); ++i) {
    p += "[generated gloss" + std::to_string(i + 1) + "]";
    if (i + 1 < queries.size()) p += "\n\n";
  }
  return p;
}

}  // namespace

std::string build_prompt(const PromptSpec& spec, std::span<const std::string> queries) {
  if (spec.queries_per_call < 1) throw config_error("llm.queries_per_call: must be >= 1");
  if (queries.size() != static_cast<std::size_t>(spec.queries_per_call))
    throw config_error("build_prompt: expected " + std::to_string(spec.queries_per_call) + " queries, got " +
                       std::to_string(queries.size()));
  return spec.convention == Convention::kDgsWeather ? build_dgs_prompt(spec, queries)
                                                    : build_asl_prompt(spec, queries);
}

std::vector<TokenSeq> parse_response(const std::string& raw, std::size_t expected) {
  std::vector<TokenSeq> groups;
  std::size_t pos = 0;
  while (true) {
    const std::size_t open = raw.find('[', pos);
    if (open == std::string::npos) break;
    const std::size_t close = raw.find(']', open + 1);
    if (close == std::string::npos) break;
    groups.push_back(split_ws(raw.substr(open + 1, close - open - 1)));
    pos = close + 1;
  }
  if (groups.size() != expected)
    throw parse_error("expected " + std::to_string(expected) + " bracketed gloss groups, found " +
                      std::to_string(groups.size()) + " in response: " + raw);
  return groups;
}

TokenSeq normalize_gloss(const TokenSeq& tokens, Convention convention) {
  TokenSeq out;
  for (const auto& t : tokens) {
    std::string w = trim_token(t);
    if (w.empty()) continue;
    out.push_back(fold_case(w, convention == Convention::kDgsWeather));
  }
  if (out.empty()) throw parse_error("empty gloss");
  return out;
}

TokenSeq cap_length(const TokenSeq& gloss, std::size_t max_len, const std::vector<std::string>& stop_list) {
  if (max_len < 1) throw config_error("cap_length: max_len must be >= 1");
  const std::set<std::string> stop(stop_list.begin(), stop_list.end());
  TokenSeq out = gloss;
  for (std::size_t i = 0; out.size() > max_len && i < out.size();) {
    if (stop.count(lower(out[i])))
      out.erase(out.begin() + static_cast<std::ptrdiff_t>(i));
    else
      ++i;
  }
  if (out.size() > max_len) out.resize(max_len);
  return out;
}

TokenSeq stopword_baseline(const std::string& text, const std::vector<std::string>& stop_list,
                           Convention convention) {
  static const char* clitics[] = {"'s", "'re", "'ll", "'ve", "'d", "'m"};
  const std::set<std::string> stop(stop_list.begin(), stop_list.end());
  TokenSeq out;
  for (const auto& raw : split_ws(text)) {
    std::string w = lower(trim_token(raw));
    for (const char* c : clitics) {
      const std::string_view suffix(c);
      if (w.size() > suffix.size() && w.ends_with(suffix)) {
        w.resize(w.size() - suffix.size());
        break;
      }
    }
    w = trim_token(w);
    if (w.empty() || stop.count(w)) continue;
    out.push_back(fold_case(w, convention == Convention::kDgsWeather));
  }
  return out;
}

std::vector<ExamplePair> load_example_pairs(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open example pairs file " + path.string());
  std::vector<ExamplePair> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    if (line.front() == '{') {
      try {
        auto j = json::parse(line);
        out.push_back({j.at("text").get<std::string>(), j.at("gloss").get<std::string>()});
      } catch (const json::exception& e) {
        throw parse_error(path.string() + ": line " + std::to_string(lineno) + ": " + e.what());
      }
      continue;
    }
    const auto tab = line.find('\t');
    if (tab == std::string::npos)
      throw parse_error(path.string() + ": line " + std::to_string(lineno) + ": expected text<TAB>gloss");
    out.push_back({line.substr(0, tab), line.substr(tab + 1)});
  }
  return out;
}

std::size_t network_call_count() { return g_network_calls.load(); }

void LlmClientConfig::validate() const {
  if (max_retries < 0) throw config_error("llm.max_retries: must be >= 0");
  if (backoff_ms < 0) throw config_error("llm.backoff_ms: must be >= 0");
  if (!(timeout_seconds > 0)) throw config_error("llm.timeout_seconds: must be positive");
  if (mock_path.empty() && endpoint.empty()) throw config_error("llm.endpoint: required without a mock file");
}

HttpTransport::HttpTransport(LlmClientConfig config) : config_(std::move(config)) { config_.validate(); }

std::string HttpTransport::request_body(const std::string& model, const std::string& prompt) {
  json body;
  body["model"] = model;
  body["messages"] = json::array({{{"role", "user"}, {"content", prompt}}});
  return body.dump();
}

std::string HttpTransport::extract_text(const std::string& response_body, const std::string& pointer) {
  json j;
  try {
    j = json::parse(response_body);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::kTransport, std::string("response is not JSON: ") + e.what());
  }
  try {
    const auto& v = j.at(json::json_pointer(pointer));
    if (!v.is_string()) throw Error(ErrorKind::kTransport, "response field " + pointer + " is not a string");
    return v.get<std::string>();
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kTransport, "response has no text at " + pointer + ": " + e.what());
  }
}

std::string HttpTransport::send(const LlmRequest& request) {
  ++calls_;
  ++g_network_calls;
  const std::string& url = config_.endpoint;
  const auto scheme_end = url.find("://");
  const auto path_start = url.find('/', scheme_end == std::string::npos ? 0 : scheme_end + 3);
  const std::string host = path_start == std::string::npos ? url : url.substr(0, path_start);
  const std::string path = path_start == std::string::npos ? "/" : url.substr(path_start);

  httplib::Client client(host);
  const auto timeout = std::chrono::duration<double>(config_.timeout_seconds);
  client.set_connection_timeout(std::chrono::duration_cast<std::chrono::microseconds>(timeout));
  client.set_read_timeout(std::chrono::duration_cast<std::chrono::microseconds>(timeout));
  httplib::Headers headers;
  if (const char* key = std::getenv("GLOSSWEAVE_API_KEY")) headers.emplace("Authorization", std::string("Bearer ") + key);

  auto res = client.Post(path, headers, request_body(config_.model, request.prompt), "application/json");
  if (!res) throw Error(ErrorKind::kTransport, "request to " + url + " failed: " + httplib::to_string(res.error()));
  if (res->status < 200 || res->status >= 300)
    throw Error(ErrorKind::kTransport, "request to " + url + " returned HTTP " + std::to_string(res->status));
  return extract_text(res->body, config_.response_path);
}

MockTransport::MockTransport(const std::filesystem::path& canned) {
  std::ifstream in(canned, std::ios::binary);
  if (!in) throw io_error("cannot open canned response file " + canned.string());
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      auto j = json::parse(line);
      canned_[j.at("id").get<std::string>()] = j.at("gloss").get<TokenSeq>();
    } catch (const json::exception& e) {
      throw parse_error(canned.string() + ": line " + std::to_string(lineno) + ": " + e.what());
    }
  }
}

std::string MockTransport::send(const LlmRequest& request) {
  ++calls_;
  std::string out = "Output: ";
  for (std::size_t i = 0; i < request.record_ids.size(); ++i) {
    auto it = canned_.find(request.record_ids[i]);
    if (it == canned_.end()) return "no canned response for '" + request.record_ids[i] + "'";
    if (i) out += "\n";
    out += "[" + join(it->second) + "]";
  }
  return out;
}

namespace {

std::vector<TokenSeq> request_with_retries(const PromptSpec& spec, std::span<const SampleRecord> batch,
                                           Transport& transport, const RetryPolicy& retry, std::string& last_error) {
  PromptSpec local = spec;
  local.queries_per_call = static_cast<int>(batch.size());
  LlmRequest req;
  std::vector<std::string> queries;
  for (const auto& r : batch) {
    queries.push_back(join(r.text));
    req.record_ids.push_back(r.id);
  }
  req.prompt = build_prompt(local, queries);
  int delay = retry.backoff_ms;
  for (int attempt = 0; attempt <= retry.max_retries; ++attempt) {
    if (attempt > 0 && delay > 0) {
      std::this_thread::sleep_for(std::chrono::milliseconds(delay));
      delay *= 2;
    }
    try {
      return parse_response(transport.send(req), batch.size());
    } catch (const Error& e) {
      last_error = e.what();
      log::debug("llm request for '{}' failed (attempt {}): {}", batch.front().id, attempt + 1, e.what());
    }
  }
  return {};
}

}  // namespace

GenerateResult generate(std::vector<SampleRecord> records, const PromptSpec& spec, Transport& transport,
                        const RetryPolicy& retry) {
  if (spec.queries_per_call < 1) throw config_error("llm.queries_per_call: must be >= 1");
  if (retry.max_retries < 0) throw config_error("llm.max_retries: must be >= 0");
  GenerateResult out;
  const std::span<SampleRecord> all(records);
  const std::size_t step = static_cast<std::size_t>(spec.queries_per_call);

  auto accept = [&](SampleRecord& r, const TokenSeq& raw) {
    try {
      r.llm_gloss = normalize_gloss(raw, spec.convention);
      out.records.push_back(r);
    } catch (const Error& e) {
      out.errors.push_back({r.id, e.what()});
    }
  };

  for (std::size_t start = 0; start < all.size(); start += step) {
    auto batch = all.subspan(start, std::min(step, all.size() - start));
    std::string err;
    auto glosses = request_with_retries(spec, batch, transport, retry, err);
    if (!glosses.empty()) {
      for (std::size_t i = 0; i < batch.size(); ++i) accept(batch[i], glosses[i]);
      continue;
    }
    if (batch.size() == 1) {
      out.errors.push_back({batch[0].id, err});
      continue;
    }
    for (std::size_t i = 0; i < batch.size(); ++i) {
      auto single = batch.subspan(i, 1);
      auto g = request_with_retries(spec, single, transport, retry, err);
      if (g.empty())
        out.errors.push_back({single[0].id, err});
      else
        accept(single[0], g[0]);
    }
  }
  return out;
}

}  // namespace glossweave
