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

#include <string_view>

namespace glossweave::templates {

extern const std::string_view kDgsExamplesHeader;
extern const std::string_view kDgsRulesWithExamples;
extern const std::string_view kDgsInferWithExamples;
extern const std::string_view kDgsRulesZeroShot;
extern const std::string_view kDgsOutputSingle;
extern const std::string_view kAslHeader;
extern const std::string_view kAslRules;
extern const std::string_view kAslOutputHeader;

}  // namespace glossweave::templates
