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

#ifndef PNQC_EM_H
#define PNQC_EM_H

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <vector>

#include "pnqc/moments.h"

namespace pnqc {

struct EmOptions {
    std::array<double, 2> efficiency{1.0, 1.0};
    std::array<double, 2> dark{0.0, 0.0};
    /// Photon-number cutoffs (N1, N2). Each is raised to the largest observed count.
    std::array<uint64_t, 2> cutoff{0, 0};
    int max_iter = 20000;
    double tol = 1e-10;
    /// Starting distribution; uniform when empty. Must match the effective cutoff.
    std::vector<double> initial;
};

struct EmResult {
    JointDistribution distribution;
    int iterations = 0;
    bool converged = false;
    /// Mean log-likelihood sum_c f(c) ln q(c) before each update and after the last.
    std::vector<double> log_likelihood;
};

/// Single-beam response P(c | n): binomial loss with efficiency eta followed
/// by Poissonian dark counts of mean dark. Rows are counts 0..c_max, columns
/// photon numbers 0..n_max. Each column is renormalized over the row range.
Eigen::MatrixXd detector_response(uint64_t n_max, uint64_t c_max, double efficiency, double dark);

/// Maximum-likelihood photon-number distribution by expectation-maximization.
///
/// The update p(n) <- p(n) sum_c f(c) R(c|n) / q(c) with q = R p is the EM
/// step for mixture weights, so the log-likelihood never decreases.
/// Iteration stops once the L1 change of p drops below tol. Hitting max_iter
/// returns the current estimate with converged = false. Throws BadEfficiency
/// for efficiencies outside (0, 1] and InvalidArgument for negative dark means.
EmResult em_deconvolve(const JointHistogram &hist, const EmOptions &options);

}  // namespace pnqc

#endif
