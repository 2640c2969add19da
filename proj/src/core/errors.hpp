// SPDX-License-Identifier: Apache-2.0
//
// subthz-stats: channel statistics and spatially consistent simulation for sub-THz routes
// Copyright (C) 2026 subthz-stats contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SUBTHZ_CORE_ERRORS_HPP
#define SUBTHZ_CORE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace subthz {

// Numeric values match the public C API status codes (subthz.h) and are
// grouped by failure class:
//   1       invalid use of an API entry point
//   20..39  input parsing / data validation
//   40..59  statistical precondition not met by otherwise valid data
//   60..79  iterative routine failed to converge / locate its target
//   80..99  environment (file system) problems
enum class ErrorCode : int {
    InvalidArgument = 1,

    ParseError = 20,
    DuplicateLocationId = 21,
    UnknownRxId = 22,
    NonMonotoneDelays = 23,
    NonPositivePower = 24,
    PowerBelowThreshold = 25,
    EmptyInput = 26,
    MixedRxIds = 27,
    DistanceBelowReference = 28,
    ValidationError = 29,

    ZeroPower = 40,
    ResultantZero = 41,
    InsufficientSamples = 42,
    DegenerateDistances = 43,
    TooFewEntries = 44,
    InsufficientBins = 45,

    NonConvergence = 60,
    NeverCrosses = 61,

    IoError = 80,
    InternalError = 81,
};

const char *error_code_name(ErrorCode code);

// All failures cross module boundaries as this exception. The message is
// always prefixed with the code name so callers (and shell users) can match
// on it without parsing free text.
class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, const std::string &message)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + message), ec(code) {}

    ErrorCode code() const noexcept { return ec; }

  private:
    ErrorCode ec;
};

inline const char *error_code_name(ErrorCode code)
{
    switch (code)
    {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::DuplicateLocationId: return "DuplicateLocationId";
    case ErrorCode::UnknownRxId: return "UnknownRxId";
    case ErrorCode::NonMonotoneDelays: return "NonMonotoneDelays";
    case ErrorCode::NonPositivePower: return "NonPositivePower";
    case ErrorCode::PowerBelowThreshold: return "PowerBelowThreshold";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::MixedRxIds: return "MixedRxIds";
    case ErrorCode::DistanceBelowReference: return "DistanceBelowReference";
    case ErrorCode::ValidationError: return "ValidationError";
    case ErrorCode::ZeroPower: return "ZeroPower";
    case ErrorCode::ResultantZero: return "ResultantZero";
    case ErrorCode::InsufficientSamples: return "InsufficientSamples";
    case ErrorCode::DegenerateDistances: return "DegenerateDistances";
    case ErrorCode::TooFewEntries: return "TooFewEntries";
    case ErrorCode::InsufficientBins: return "InsufficientBins";
    case ErrorCode::NonConvergence: return "NonConvergence";
    case ErrorCode::NeverCrosses: return "NeverCrosses";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::InternalError: return "InternalError";
    }
    return "UnknownError";
}

} // namespace subthz

#endif
