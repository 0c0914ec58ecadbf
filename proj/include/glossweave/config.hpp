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

#include "glossweave/ctc.hpp"
#include "glossweave/llm_gloss.hpp"
#include "glossweave/mlc.hpp"
#include "glossweave/simulator.hpp"

namespace glossweave {

inline constexpr std::uint64_t kDefaultSeed = 42;

struct LlmSection {
  LlmClientConfig client;
  Convention convention = Convention::kDgsWeather;
  int queries_per_call = 0;  // 0 selects the convention default
  int num_examples = -1;     // -1 uses every loaded pair
  std::string examples_path;
  int max_gloss_len = 0;  // 0 disables capping
};

struct EvalConfig {
  std::string split = "dev";  // dev | train
  std::string label;          // free-form run name for reports
};

struct ToolkitConfig {
  SimConfig sim;
  LlmSection llm;
  MlcTrainConfig mlc;
  CtcTrainConfig ctc;
  EvalConfig eval;

  void validate() const;
  void set_seed(std::uint64_t seed);
};

// Parses the sections sim, llm, mlc, ctc, eval. Unknown keys and type
// mismatches are rejected with the offending path (e.g. /mlc/learning_rate).
ToolkitConfig config_from_json_text(const std::string& text);
ToolkitConfig load_config(const std::filesystem::path& path);
std::string config_to_json_text(const ToolkitConfig& config);

}  // namespace glossweave
