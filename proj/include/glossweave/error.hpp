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

#include <stdexcept>
#include <string>

namespace glossweave {

// Errors are reported by exception. The kind decides the CLI exit code:
// configuration/validation problems exit 1, everything else exits 2.
enum class ErrorKind { kConfig, kParse, kIo, kNumeric, kInfeasible, kTransport };

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

inline Error config_error(const std::string& what) { return {ErrorKind::kConfig, what}; }
inline Error parse_error(const std::string& what) { return {ErrorKind::kParse, what}; }
inline Error io_error(const std::string& what) { return {ErrorKind::kIo, what}; }

}  // namespace glossweave
