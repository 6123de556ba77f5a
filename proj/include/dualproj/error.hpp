// Copyright 2026 dualproj contributors
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

#ifndef DUALPROJ_ERROR_HPP
#define DUALPROJ_ERROR_HPP

#include <stdexcept>
#include <string>

namespace dualproj {

enum class ErrorCode {
  kDimensionMismatch,
  kInvalidGamma,
  kInvalidDelta,
  kEmptyInput,
  kDegenerateCorral,
  kMaxIterationsExceeded,
  kInsufficientHistory,
  kNoImprovement,
  kDegenerateAnchor,
  kStageStall,
  kRepairUnavailable,
  kInfeasibleCandidate,
  kBaselineInfeasible,
  kScaleExceeded,
  kParseError,
  kValidationError,
  kInvalidSpec,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace dualproj

#endif  // DUALPROJ_ERROR_HPP
