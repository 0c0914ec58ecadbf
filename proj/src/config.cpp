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

#include "glossweave/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "glossweave/error.hpp"

namespace glossweave {

using nlohmann::json;

namespace {

std::string dotted(const std::string& pointer) {
  std::string out = pointer.substr(1);
  std::replace(out.begin(), out.end(), '/', '.');
  return out;
}

[[noreturn]] void schema_error(const std::string& pointer, const std::string& msg) {
  throw config_error("config " + pointer + " (" + dotted(pointer) + "): " + msg);
}

// Reads keys out of one JSON object and remembers which were consumed.
class Section {
 public:
  Section(const json& root, const std::string& name) : pointer_("/" + name) {
    if (!root.contains(name)) return;
    const json& v = root.at(name);
    if (!v.is_object()) schema_error(pointer_, "must be an object");
    obj_ = &v;
  }

  template <typename T>
  void get(const std::string& key, T& out) {
    if (!obj_ || !obj_->contains(key)) return;
    seen_.insert(key);
    const json& v = obj_->at(key);
    try {
      if constexpr (std::is_same_v<T, bool>) {
        if (!v.is_boolean()) throw std::invalid_argument("expected a boolean");
      } else if constexpr (std::is_integral_v<T>) {
        if (!v.is_number_integer()) throw std::invalid_argument("expected an integer");
        if constexpr (std::is_unsigned_v<T>) {
          if (v.is_number_integer() && !v.is_number_unsigned()) throw std::invalid_argument("expected a non-negative integer");
        }
      } else if constexpr (std::is_floating_point_v<T>) {
        if (!v.is_number()) throw std::invalid_argument("expected a number");
      } else if constexpr (std::is_same_v<T, std::string>) {
        if (!v.is_string()) throw std::invalid_argument("expected a string");
      }
      out = v.get<T>();
    } catch (const std::exception& e) {
      schema_error(pointer_ + "/" + key, e.what());
    }
  }

  void range(const std::string& key, IntRange& out) {
    if (!obj_ || !obj_->contains(key)) return;
    seen_.insert(key);
    const json& v = obj_->at(key);
    if (!v.is_array() || v.size() != 2 || !v[0].is_number_integer() || !v[1].is_number_integer())
      schema_error(pointer_ + "/" + key, "expected [lo, hi] integers");
    out = {v[0].get<int>(), v[1].get<int>()};
  }

  // Enum-like string fields go through a converter that throws config errors.
  template <typename T, typename Fn>
  void get_enum(const std::string& key, T& out, Fn convert) {
    std::string s;
    if (!obj_ || !obj_->contains(key)) return;
    get(key, s);
    try {
      out = convert(s);
    } catch (const Error& e) {
      schema_error(pointer_ + "/" + key, e.what());
    }
  }

  void finish() const {
    if (!obj_) return;
    for (const auto& [key, _] : obj_->items())
      if (!seen_.count(key)) schema_error(pointer_ + "/" + key, "unknown key");
  }

 private:
  std::string pointer_;
  const json* obj_ = nullptr;
  std::set<std::string> seen_;
};

SmoothTarget parse_smooth_target(const std::string& s) {
  if (s == "probabilities") return SmoothTarget::kProbabilities;
  if (s == "logits") return SmoothTarget::kLogits;
  throw config_error("expected probabilities|logits, got '" + s + "'");
}

}  // namespace

void ToolkitConfig::validate() const {
  sim.validate();
  mlc.validate();
  ctc.validate();
  llm.client.validate();
  if (llm.queries_per_call < 0) throw config_error("llm.queries_per_call: must be >= 0");
  if (llm.max_gloss_len < 0) throw config_error("llm.max_gloss_len: must be >= 0");
  if (eval.split != "dev" && eval.split != "train") throw config_error("eval.split: expected dev|train");
}

void ToolkitConfig::set_seed(std::uint64_t seed) {
  sim.seed = seed;
  mlc.seed = seed;
  ctc.seed = seed;
}

ToolkitConfig config_from_json_text(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw config_error(std::string("config is not valid JSON: ") + e.what());
  }
  if (!root.is_object()) throw config_error("config must be a JSON object");
  static const std::set<std::string> kSections = {"sim", "llm", "mlc", "ctc", "eval"};
  for (const auto& [key, _] : root.items())
    if (!kSections.count(key)) schema_error("/" + key, "unknown section");

  ToolkitConfig c;
  Section sim(root, "sim");
  sim.get("vocab_size", c.sim.vocab_size);
  sim.get("feature_dim", c.sim.feature_dim);
  sim.get("num_samples", c.sim.num_samples);
  sim.get("num_dev", c.sim.num_dev);
  sim.range("glosses_per_video", c.sim.glosses_per_video);
  sim.range("frames_per_gloss", c.sim.frames_per_gloss);
  sim.get("noise_sigma", c.sim.noise_sigma);
  sim.get("disorder", c.sim.disorder);
  sim.get("p_insert", c.sim.p_insert);
  sim.get("p_delete", c.sim.p_delete);
  sim.get("seed", c.sim.seed);
  sim.get("rng", c.sim.rng);
  sim.finish();

  Section llm(root, "llm");
  llm.get("endpoint", c.llm.client.endpoint);
  llm.get("model", c.llm.client.model);
  llm.get("response_path", c.llm.client.response_path);
  llm.get("timeout_seconds", c.llm.client.timeout_seconds);
  llm.get("max_retries", c.llm.client.max_retries);
  llm.get("backoff_ms", c.llm.client.backoff_ms);
  llm.get("mock", c.llm.client.mock_path);
  llm.get_enum("convention", c.llm.convention, parse_convention);
  llm.get("queries_per_call", c.llm.queries_per_call);
  llm.get("num_examples", c.llm.num_examples);
  llm.get("examples", c.llm.examples_path);
  llm.get("max_gloss_len", c.llm.max_gloss_len);
  llm.finish();

  Section mlc(root, "mlc");
  mlc.get("w_base", c.mlc.w_base);
  mlc.get("frequency_weights", c.mlc.use_frequency_weights);
  mlc.get("smooth_weight", c.mlc.smooth_weight);
  mlc.get_enum("smooth_on", c.mlc.smooth_on, parse_smooth_target);
  mlc.get("learning_rate", c.mlc.learning_rate);
  mlc.get("momentum", c.mlc.momentum);
  mlc.get("epochs", c.mlc.epochs);
  mlc.get("init_scale", c.mlc.init_scale);
  mlc.get("seed", c.mlc.seed);
  mlc.get("threshold", c.mlc.threshold);
  mlc.finish();

  Section ctc(root, "ctc");
  ctc.get("learning_rate", c.ctc.learning_rate);
  ctc.get("momentum", c.ctc.momentum);
  ctc.get("epochs", c.ctc.epochs);
  ctc.get("init_scale", c.ctc.init_scale);
  ctc.get("seed", c.ctc.seed);
  ctc.get_enum("targets", c.ctc.targets, parse_target_source);
  ctc.get("cap_infeasible", c.ctc.cap_infeasible);
  ctc.finish();

  Section eval(root, "eval");
  eval.get("split", c.eval.split);
  eval.get("label", c.eval.label);
  eval.finish();

  c.validate();
  return c;
}

ToolkitConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw config_error("cannot open config file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return config_from_json_text(ss.str());
}

std::string config_to_json_text(const ToolkitConfig& c) {
  json j;
  j["sim"] = {{"vocab_size", c.sim.vocab_size},
              {"feature_dim", c.sim.feature_dim},
              {"num_samples", c.sim.num_samples},
              {"num_dev", c.sim.num_dev},
              {"glosses_per_video", {c.sim.glosses_per_video.lo, c.sim.glosses_per_video.hi}},
              {"frames_per_gloss", {c.sim.frames_per_gloss.lo, c.sim.frames_per_gloss.hi}},
              {"noise_sigma", c.sim.noise_sigma},
              {"disorder", c.sim.disorder},
              {"p_insert", c.sim.p_insert},
              {"p_delete", c.sim.p_delete},
              {"seed", c.sim.seed},
              {"rng", c.sim.rng}};
  j["llm"] = {{"endpoint", c.llm.client.endpoint},
              {"model", c.llm.client.model},
              {"response_path", c.llm.client.response_path},
              {"timeout_seconds", c.llm.client.timeout_seconds},
              {"max_retries", c.llm.client.max_retries},
              {"backoff_ms", c.llm.client.backoff_ms},
              {"mock", c.llm.client.mock_path},
              {"convention", to_string(c.llm.convention)},
              {"queries_per_call", c.llm.queries_per_call},
              {"num_examples", c.llm.num_examples},
              {"examples", c.llm.examples_path},
              {"max_gloss_len", c.llm.max_gloss_len}};
  j["mlc"] = {{"w_base", c.mlc.w_base},
              {"frequency_weights", c.mlc.use_frequency_weights},
              {"smooth_weight", c.mlc.smooth_weight},
              {"smooth_on", c.mlc.smooth_on == SmoothTarget::kProbabilities ? "probabilities" : "logits"},
              {"learning_rate", c.mlc.learning_rate},
              {"momentum", c.mlc.momentum},
              {"epochs", c.mlc.epochs},
              {"init_scale", c.mlc.init_scale},
              {"seed", c.mlc.seed},
              {"threshold", c.mlc.threshold}};
  j["ctc"] = {{"learning_rate", c.ctc.learning_rate},
              {"momentum", c.ctc.momentum},
              {"epochs", c.ctc.epochs},
              {"init_scale", c.ctc.init_scale},
              {"seed", c.ctc.seed},
              {"targets", to_string(c.ctc.targets)},
              {"cap_infeasible", c.ctc.cap_infeasible}};
  j["eval"] = {{"split", c.eval.split}, {"label", c.eval.label}};
  return j.dump(2);
}

}  // namespace glossweave
