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

#include "log.hpp"

#include <cstdlib>

#include <spdlog/sinks/stdout_color_sinks.h>

namespace glossweave::log {

void init(bool quiet) {
  static auto logger = [] {
    auto l = spdlog::stderr_color_mt("glossweave");
    l->set_pattern("[%l] %v");
    spdlog::set_default_logger(l);
    return l;
  }();
  auto level = spdlog::level::info;
  if (const char* env = std::getenv("GLOSSWEAVE_LOG")) level = spdlog::level::from_str(env);
  if (quiet && level < spdlog::level::warn) level = spdlog::level::warn;
  logger->set_level(level);
}

}  // namespace glossweave::log
