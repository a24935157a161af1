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

#include "rdr/error.hpp"

namespace rdr {

const char *error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::kOk: return "ok";
        case ErrorCode::kInvalidDimension: return "invalid-dimension";
        case ErrorCode::kTruncationError: return "truncation-error";
        case ErrorCode::kSpaceMismatch: return "space-mismatch";
        case ErrorCode::kInvalidArgument: return "invalid-argument";
        case ErrorCode::kInvalidParameters: return "invalid-parameters";
        case ErrorCode::kIntegrationUnstable: return "integration-unstable";
        case ErrorCode::kDegenerateSteadyState: return "degenerate-steady-state";
        case ErrorCode::kTooFewSamples: return "too-few-samples";
        case ErrorCode::kUnknownScenario: return "unknown-scenario";
        case ErrorCode::kConfigError: return "config-error";
        case ErrorCode::kIoError: return "io-error";
    }
    return "unknown";
}

}  // namespace rdr
