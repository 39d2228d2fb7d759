// Copyright 2026 The atrisk Authors. All Rights Reserved.
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

#include "error.hpp"

#include <utility>

namespace atrisk {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kIo: return "IoError";
    case ErrorCode::kParse: return "ParseError";
    case ErrorCode::kValidation: return "ValidationError";
    case ErrorCode::kUnknownKey: return "UnknownKey";
    case ErrorCode::kUnboundParameter: return "UnboundParameter";
    case ErrorCode::kInvalidMultiplicity: return "InvalidMultiplicity";
    case ErrorCode::kZeroMultiplicityUnderConjunction:
      return "ZeroMultiplicityUnderConjunction";
    case ErrorCode::kMissingEstimate: return "MissingEstimate";
    case ErrorCode::kScenarioExplosion: return "ScenarioExplosion";
    case ErrorCode::kTooLarge: return "TooLarge";
    case ErrorCode::kInvalidDistribution: return "InvalidDistribution";
  }
  return "Unknown";
}

namespace {

std::string missing_message(const std::string& attribute,
                            const std::vector<std::string>& leaves) {
  std::string msg = "no '" + attribute + "' estimate for " +
                    std::to_string(leaves.size()) + " leaf(s)";
  for (std::size_t i = 0; i < leaves.size() && i < 5; ++i)
    msg += (i == 0 ? ": " : ", ") + leaves[i];
  if (leaves.size() > 5) msg += ", ...";
  return msg;
}

}  // namespace

MissingEstimateError::MissingEstimateError(std::string attribute,
                                           std::vector<std::string> leaves)
    : Error(ErrorCode::kMissingEstimate, missing_message(attribute, leaves)),
      attribute_(std::move(attribute)),
      leaves_(std::move(leaves)) {}

ScenarioExplosionError::ScenarioExplosionError(std::string count,
                                               std::size_t cap)
    : Error(ErrorCode::kScenarioExplosion,
            "scenario count " + count + " exceeds cap " + std::to_string(cap)),
      count_(std::move(count)),
      cap_(cap) {}

}  // namespace atrisk
