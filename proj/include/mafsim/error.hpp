// Copyright 2026 The mafsim Authors
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

namespace mafsim {

enum class ErrorCode {
  NotSymmetric,
  NonBinaryEntry,
  SelfLoop,
  Disconnected,
  IndexOutOfRange,
  NonPositiveRadius,
  CoincidentWithObstacle,
  LeaderPassedToFollowerLaw,
  DegenerateEdge,
  NonFiniteState,
  WrongControlMode,
  UnknownScenario,
  ParseError,
  ValidationError,
  IoError,
};

inline const char* error_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::NotSymmetric: return "NotSymmetric";
    case ErrorCode::NonBinaryEntry: return "NonBinaryEntry";
    case ErrorCode::SelfLoop: return "SelfLoop";
    case ErrorCode::Disconnected: return "Disconnected";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::NonPositiveRadius: return "NonPositiveRadius";
    case ErrorCode::CoincidentWithObstacle: return "CoincidentWithObstacle";
    case ErrorCode::LeaderPassedToFollowerLaw: return "LeaderPassedToFollowerLaw";
    case ErrorCode::DegenerateEdge: return "DegenerateEdge";
    case ErrorCode::NonFiniteState: return "NonFiniteState";
    case ErrorCode::WrongControlMode: return "WrongControlMode";
    case ErrorCode::UnknownScenario: return "UnknownScenario";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ValidationError: return "ValidationError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

// All library errors carry a code so callers (and the CLI exit-code mapping)
// never have to match on message text.
class SimError : public std::runtime_error {
 public:
  SimError(ErrorCode code, const std::string& msg)
      : std::runtime_error(std::string(error_name(code)) + ": " + msg), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace mafsim
