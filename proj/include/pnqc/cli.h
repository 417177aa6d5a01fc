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

#ifndef PNQC_CLI_H
#define PNQC_CLI_H

#include <array>
#include <iosfwd>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "pnqc/em.h"
#include "pnqc/error.h"
#include "pnqc/moments.h"
#include "pnqc/quantifiers.h"

namespace pnqc {

/// 2 I/O, 3 parse or validation, 4 model, 5 convergence.
int exit_code(ErrorKind kind);

enum class MomentMethod { Auto, Direct, Em };

struct AnalyzeOptions {
    std::array<double, 2> efficiency{1.0, 1.0};
    std::array<double, 2> dark{0.0, 0.0};
    /// Mode count for per-mode reduction; nullopt estimates it from the moments.
    std::optional<double> modes = 1.0;
    /// Direct: falling-factorial averages of the counts with loss and dark
    /// counts removed algebraically. Em: moments of the reconstructed
    /// photon-number distribution. Auto picks Direct for ideal detection.
    MomentMethod method = MomentMethod::Auto;
    /// Photon-number cutoff per beam for EM; 0 chooses ceil((c_max + 1) / eta) + 2.
    std::array<uint64_t, 2> cutoff{0, 0};
    int max_iter = 20000;
    double tol = 1e-10;
    BootstrapOptions bootstrap;
};

struct AnalyzeResult {
    QCReport report;
    /// Photon-level moments before per-mode reduction, with bootstrap errors.
    IntensityMoments w;
    MomentErrors se;
    bool used_em = false;
    int em_iterations = 0;
    bool em_converged = true;
    std::array<uint64_t, 2> cutoff{0, 0};
    /// Single-mode noisy twin beam matching the per-mode moments.
    std::optional<QCReport> reference;
};

/// Histogram -> moments -> optional mode reduction -> quantifiers, with
/// bootstrap standard errors of every report field.
AnalyzeResult analyze(const JointHistogram &hist, const AnalyzeOptions &options);

/// Mean of the single-beam multithermal estimates that exist. Throws
/// DegenerateVariance when neither beam has excess variance.
double auto_modes(const IntensityMoments &w);

/// Lowercase hex SHA-256.
std::string sha256_hex(const std::string &bytes);

/// Writes via a sibling temporary file and rename. Throws Io.
void write_file_atomic(const std::string &path, const std::string &content);

/// Entry point of the `pnqc` executable. Returns the process exit code.
int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

}  // namespace pnqc

#endif
