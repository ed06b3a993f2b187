// Copyright 2026 The qmt Authors
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

// Command-line front end. Subcommands: classify, report, qq, simulate,
// search, validate. Reports are JSON documents with a fixed key order.
//
// Exit status: 0 success, 1 usage, 2 parse or validation failure,
// 3 numerical failure. Errors are printed as `module.Code: message`.

#include <iosfwd>
#include <string>
#include <vector>

#include "qmt/error.hpp"

namespace qmt::cli {

inline constexpr const char* kToolName = "qmt";
inline constexpr const char* kToolVersion = "0.1.0";

enum ExitCode : int {
  kSuccess = 0,
  kUsage = 1,
  kParseOrValidation = 2,
  kNumerical = 3,
};

ExitCode exit_code_for(ErrorCode code);

/// args[0] is the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qmt::cli
