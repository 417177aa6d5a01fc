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

#ifndef PNQC_ERROR_H
#define PNQC_ERROR_H

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace pnqc {

/// Failure classes raised by the library. The CLI maps these onto exit codes.
enum class ErrorKind {
    Io,
    Parse,
    EmptyData,
    InvalidArgument,
    InvalidN,
    BadEfficiency,
    BadModeCount,
    NoConvergence,
    DegenerateVariance,
    NonPhysicalMoments,
    NegativeDiscriminant,
    Unphysical,
    SamplingExhausted,
    NonPositiveDeterminant,
    DomainError,
    NegativeCSquared,
    ZeroMean,
    InvertedBracket,
    InsufficientGrid,
};

std::string_view error_kind_name(ErrorKind kind);

/// Exception carrying a typed kind and, where meaningful, the raw offending value.
class Error : public std::runtime_error {
   public:
    Error(ErrorKind kind, const std::string &message, std::optional<double> value = std::nullopt);

    ErrorKind kind() const noexcept {
        return kind_;
    }
    const std::optional<double> &value() const noexcept {
        return value_;
    }

   private:
    ErrorKind kind_;
    std::optional<double> value_;
};

}  // namespace pnqc

#endif
