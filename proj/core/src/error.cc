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

#include "qcensor/error.h"

namespace qcensor {

std::string_view error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::NotSquare: return "NotSquare";
        case ErrorCode::NotHermitian: return "NotHermitian";
        case ErrorCode::NotPositive: return "NotPositive";
        case ErrorCode::TraceNotOne: return "TraceNotOne";
        case ErrorCode::NonFinite: return "NonFinite";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
        case ErrorCode::EmptyKeepSet: return "EmptyKeepSet";
        case ErrorCode::RankTooLarge: return "RankTooLarge";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::NotAPermutation: return "NotAPermutation";
        case ErrorCode::NotTracePreserving: return "NotTracePreserving";
        case ErrorCode::NotIncoherentFactor: return "NotIncoherentFactor";
        case ErrorCode::NotTracePreservingSum: return "NotTracePreservingSum";
        case ErrorCode::EpsilonOutOfRange: return "EpsilonOutOfRange";
        case ErrorCode::TargetIsFree: return "TargetIsFree";
        case ErrorCode::UnknownFamily: return "UnknownFamily";
        case ErrorCode::InstrumentNotTP: return "InstrumentNotTP";
        case ErrorCode::PostStateNotReachable: return "PostStateNotReachable";
        case ErrorCode::UnknownStrategy: return "UnknownStrategy";
        case ErrorCode::SyntaxError: return "SyntaxError";
        case ErrorCode::UnknownKey: return "UnknownKey";
        case ErrorCode::ConstraintViolation: return "ConstraintViolation";
        case ErrorCode::Io: return "Io";
    }
    return "Unknown";
}

}  // namespace qcensor
