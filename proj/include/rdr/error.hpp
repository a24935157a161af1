// Copyright 2026 The rdr-sim Authors
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

#include <optional>
#include <stdexcept>
#include <string>

namespace rdr {

enum class ErrorCode {
    kOk = 0,
    kInvalidDimension,
    kTruncationError,
    kSpaceMismatch,
    kInvalidArgument,
    kInvalidParameters,
    kIntegrationUnstable,
    kDegenerateSteadyState,
    kTooFewSamples,
    kUnknownScenario,
    kConfigError,
    kIoError,
};

const char *error_code_name(ErrorCode code);

/// Exception type thrown by every module. `time_us` is set when a numerical
/// failure can be located on the integration time axis.
class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, const std::string &message, std::optional<double> time_us = std::nullopt)
        : std::runtime_error(message), code_(code), time_us_(time_us) {}

    ErrorCode code() const noexcept { return code_; }
    std::optional<double> time_us() const noexcept { return time_us_; }

  private:
    ErrorCode code_;
    std::optional<double> time_us_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string &message) {
    throw Error(code, message);
}

}  // namespace rdr
