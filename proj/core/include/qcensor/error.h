// Copyright 2026 The qcensor Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QCENSOR_ERROR_H
#define QCENSOR_ERROR_H

#include <stdexcept>
#include <string>
#include <string_view>

namespace qcensor {

enum class ErrorCode {
    NotSquare,
    NotHermitian,
    NotPositive,
    TraceNotOne,
    NonFinite,
    DimensionMismatch,
    IndexOutOfRange,
    EmptyKeepSet,
    RankTooLarge,
    InvalidArgument,
    NotAPermutation,
    NotTracePreserving,
    NotIncoherentFactor,
    NotTracePreservingSum,
    EpsilonOutOfRange,
    TargetIsFree,
    UnknownFamily,
    InstrumentNotTP,
    PostStateNotReachable,
    UnknownStrategy,
    SyntaxError,
    UnknownKey,
    ConstraintViolation,
    Io,
};

std::string_view error_code_name(ErrorCode code);

/// Every failure raised by the library. `code()` identifies the violated
/// contract; `what()` carries a human-readable diagnostic.
class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, const std::string &message)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + message), code_(code) {
    }

    ErrorCode code() const noexcept {
        return code_;
    }

  private:
    ErrorCode code_;
};

}  // namespace qcensor

#endif
