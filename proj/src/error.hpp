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

#ifndef ATRISK_ERROR_HPP_
#define ATRISK_ERROR_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace atrisk {

enum class ErrorCode {
  kInvalidArgument,
  kIo,
  kParse,
  kValidation,
  kUnknownKey,
  kUnboundParameter,
  kInvalidMultiplicity,
  kZeroMultiplicityUnderConjunction,
  kMissingEstimate,
  kScenarioExplosion,
  kTooLarge,
  kInvalidDistribution,
};

const char* error_code_name(ErrorCode code);

/// Base of every error raised by the engine. The code survives the C API
/// boundary; the message is for humans.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& msg)
      : std::runtime_error(msg), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

class MissingEstimateError : public Error {
 public:
  MissingEstimateError(std::string attribute, std::vector<std::string> leaves);
  const std::string& attribute() const { return attribute_; }
  const std::vector<std::string>& leaves() const { return leaves_; }

 private:
  std::string attribute_;
  std::vector<std::string> leaves_;
};

/// Raised instead of returning a truncated scenario list. `count` is the
/// exact number of scenarios (decimal) when the product formula applies.
class ScenarioExplosionError : public Error {
 public:
  ScenarioExplosionError(std::string count, std::size_t cap);
  const std::string& count() const { return count_; }
  std::size_t cap() const { return cap_; }

 private:
  std::string count_;
  std::size_t cap_;
};

}  // namespace atrisk

#endif  // ATRISK_ERROR_HPP_
