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

#include "qmt/error.hpp"

namespace qmt {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NotSelfAdjoint: return "NotSelfAdjoint";
    case ErrorCode::InvalidValue: return "InvalidValue";
    case ErrorCode::NumericalFailure: return "NumericalFailure";
    case ErrorCode::InvalidInstrument: return "InvalidInstrument";
    case ErrorCode::UnknownOutcome: return "UnknownOutcome";
    case ErrorCode::ZeroProbabilityConditioning:
      return "ZeroProbabilityConditioning";
    case ErrorCode::NotBinaryOutcomes: return "NotBinaryOutcomes";
    case ErrorCode::IncompatibleUnitaries: return "IncompatibleUnitaries";
    case ErrorCode::BadWeights: return "BadWeights";
    case ErrorCode::BadParameters: return "BadParameters";
    case ErrorCode::BadParameterLength: return "BadParameterLength";
    case ErrorCode::UnknownFamily: return "UnknownFamily";
    case ErrorCode::EmptyTable: return "EmptyTable";
    case ErrorCode::DegenerateVariance: return "DegenerateVariance";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ValidationError: return "ValidationError";
    case ErrorCode::NegativeCount: return "NegativeCount";
  }
  return "Unknown";
}

}  // namespace qmt
