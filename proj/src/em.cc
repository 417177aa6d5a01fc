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

#include "pnqc/em.h"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

#include "pnqc/error.h"

namespace pnqc {

namespace {

std::vector<double> binomial_pmf(uint64_t n, double p) {
    std::vector<double> pmf(n + 1, 0.0);
    if (p >= 1.0) {
        pmf[n] = 1.0;
        return pmf;
    }
    // Log space keeps large n from underflowing.
    const double lp = std::log(p), lq = std::log1p(-p);
    for (uint64_t k = 0; k <= n; ++k) {
        double log_c = std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
        pmf[k] = std::exp(log_c + k * lp + (n - k) * lq);
    }
    return pmf;
}

}  // namespace

Eigen::MatrixXd detector_response(uint64_t n_max, uint64_t c_max, double efficiency, double dark) {
    Eigen::MatrixXd r = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(c_max + 1), static_cast<Eigen::Index>(n_max + 1));
    std::vector<double> dark_pmf(c_max + 1, 0.0);
    if (dark > 0) {
        for (uint64_t c = 0; c <= c_max; ++c) {
            dark_pmf[c] = std::exp(c * std::log(dark) - dark - std::lgamma(c + 1.0));
        }
    } else {
        dark_pmf[0] = 1.0;
    }
    for (uint64_t n = 0; n <= n_max; ++n) {
        auto loss = binomial_pmf(n, efficiency);
        for (uint64_t k = 0; k <= std::min(n, c_max); ++k) {
            for (uint64_t c = k; c <= c_max; ++c) {
                r(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(n)) += loss[k] * dark_pmf[c - k];
            }
        }
        double column = r.col(static_cast<Eigen::Index>(n)).sum();
        if (column > 0) {
            r.col(static_cast<Eigen::Index>(n)) /= column;
        }
    }
    return r;
}

EmResult em_deconvolve(const JointHistogram &hist, const EmOptions &options) {
    for (double eta : options.efficiency) {
        if (!(eta > 0.0 && eta <= 1.0)) {
            throw Error(ErrorKind::BadEfficiency, "efficiency must lie in (0, 1]", eta);
        }
    }
    for (double d : options.dark) {
        if (!(d >= 0.0)) {
            throw Error(ErrorKind::InvalidArgument, "dark-count mean must be nonnegative", d);
        }
    }
    const uint64_t n1 = std::max(options.cutoff[0], hist.max_c1());
    const uint64_t n2 = std::max(options.cutoff[1], hist.max_c2());
    const uint64_t c1 = std::max(n1, hist.max_c1());
    const uint64_t c2 = std::max(n2, hist.max_c2());

    const Eigen::MatrixXd r1 = detector_response(n1, c1, options.efficiency[0], options.dark[0]);
    const Eigen::MatrixXd r2 = detector_response(n2, c2, options.efficiency[1], options.dark[1]);

    Eigen::MatrixXd f = Eigen::MatrixXd::Zero(r1.rows(), r2.rows());
    const double total = static_cast<double>(hist.total_shots());
    for (const auto &cell : hist.cells()) {
        f(static_cast<Eigen::Index>(cell.c1), static_cast<Eigen::Index>(cell.c2)) = static_cast<double>(cell.count) / total;
    }

    Eigen::MatrixXd p(r1.cols(), r2.cols());
    if (options.initial.empty()) {
        p.setConstant(1.0 / static_cast<double>(p.size()));
    } else {
        if (options.initial.size() != static_cast<size_t>(p.size())) {
            throw Error(ErrorKind::InvalidArgument,
                        fmt::format("initial distribution has {} entries, expected {}", options.initial.size(), p.size()));
        }
        for (Eigen::Index i = 0; i < p.rows(); ++i) {
            for (Eigen::Index j = 0; j < p.cols(); ++j) {
                p(i, j) = options.initial[static_cast<size_t>(i * p.cols() + j)];
            }
        }
    }

    auto log_likelihood = [&](const Eigen::MatrixXd &q) {
        double ll = 0;
        for (Eigen::Index i = 0; i < f.rows(); ++i) {
            for (Eigen::Index j = 0; j < f.cols(); ++j) {
                if (f(i, j) > 0) {
                    ll += f(i, j) * std::log(q(i, j));
                }
            }
        }
        return ll;
    };

    EmResult result{JointDistribution(0, 0, {1.0}), 0, false, {}};
    Eigen::MatrixXd q = r1 * p * r2.transpose();
    Eigen::MatrixXd ratio(f.rows(), f.cols());
    for (int iter = 0; iter < options.max_iter; ++iter) {
        result.log_likelihood.push_back(log_likelihood(q));
        for (Eigen::Index i = 0; i < f.rows(); ++i) {
            for (Eigen::Index j = 0; j < f.cols(); ++j) {
                ratio(i, j) = f(i, j) > 0 ? f(i, j) / q(i, j) : 0.0;
            }
        }
        Eigen::MatrixXd next = p.cwiseProduct(r1.transpose() * ratio * r2);
        next /= next.sum();
        double change = (next - p).cwiseAbs().sum();
        p = std::move(next);
        q = r1 * p * r2.transpose();
        result.iterations = iter + 1;
        if (change < options.tol) {
            result.converged = true;
            break;
        }
    }
    result.log_likelihood.push_back(log_likelihood(q));

    std::vector<double> values(static_cast<size_t>(p.size()));
    for (Eigen::Index i = 0; i < p.rows(); ++i) {
        for (Eigen::Index j = 0; j < p.cols(); ++j) {
            values[static_cast<size_t>(i * p.cols() + j)] = std::clamp(p(i, j), 0.0, 1.0);
        }
    }
    result.distribution = JointDistribution(n1, n2, std::move(values));
    return result;
}

}  // namespace pnqc
