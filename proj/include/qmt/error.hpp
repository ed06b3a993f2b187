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

#include <stdexcept>
#include <string>
#include <string_view>

namespace qmt {

enum class ErrorCode {
  DimensionMismatch,
  NotSelfAdjoint,
  InvalidValue,
  NumericalFailure,
  InvalidInstrument,
  UnknownOutcome,
  ZeroProbabilityConditioning,
  NotBinaryOutcomes,
  IncompatibleUnitaries,
  BadWeights,
  BadParameters,
  BadParameterLength,
  UnknownFamily,
  EmptyTable,
  DegenerateVariance,
  ParseError,
  ValidationError,
  NegativeCount,
};

std::string_view to_string(ErrorCode code);

/// Error raised by every module. `module()` names the raising module so the
/// command line can print qualified codes such as `instrument.UnknownOutcome`.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string module, const std::string& message)
      : std::runtime_error(message), code_(code), module_(std::move(module)) {}

  ErrorCode code() const noexcept { return code_; }
  const std::string& module() const noexcept { return module_; }
  std::string qualified_code() const {
    return module_ + "." + std::string(to_string(code_));
  }

 private:
  ErrorCode code_;
  std::string module_;
};

}  // namespace qmt
