// Copyright 2026 The pnqc Authors
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

#include "pnqc/error.h"

namespace pnqc {

std::string_view error_kind_name(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::Io:
            return "IoError";
        case ErrorKind::Parse:
            return "ParseError";
        case ErrorKind::EmptyData:
            return "EmptyData";
        case ErrorKind::InvalidArgument:
            return "InvalidArgument";
        case ErrorKind::InvalidN:
            return "InvalidN";
        case ErrorKind::BadEfficiency:
            return "BadEfficiency";
        case ErrorKind::BadModeCount:
            return "BadModeCount";
        case ErrorKind::NoConvergence:
            return "NoConvergence";
        case ErrorKind::DegenerateVariance:
            return "DegenerateVariance";
        case ErrorKind::NonPhysicalMoments:
            return "NonPhysicalMoments";
        case ErrorKind::NegativeDiscriminant:
            return "NegativeDiscriminant";
        case ErrorKind::Unphysical:
            return "Unphysical";
        case ErrorKind::SamplingExhausted:
            return "SamplingExhausted";
        case ErrorKind::NonPositiveDeterminant:
            return "NonPositiveDeterminant";
        case ErrorKind::DomainError:
            return "DomainError";
        case ErrorKind::NegativeCSquared:
            return "NegativeCSquared";
        case ErrorKind::ZeroMean:
            return "ZeroMean";
        case ErrorKind::InvertedBracket:
            return "InvertedBracket";
        case ErrorKind::InsufficientGrid:
            return "InsufficientGrid";
    }
    return "Unknown";
}

Error::Error(ErrorKind kind, const std::string &message, std::optional<double> value)
    : std::runtime_error(std::string(error_kind_name(kind)) + ": " + message), kind_(kind), value_(value) {
}

}  // namespace pnqc
