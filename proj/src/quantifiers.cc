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

#include "pnqc/quantifiers.h"

#include <fmt/format.h>

#include <cmath>
#include <limits>

#include "pnqc/error.h"
#include "pnqc/moments.h"

namespace pnqc {

double det_global_from_moments(const IntensityMoments &w) {
    const double w1 = w(1, 0), w2 = w(0, 1);
    const double s = w1 + w2;
    return 1 + 4 * s + 12 * s * s                              //
           - 4 * w(2, 0) * (1 + 6 * w2 + 24 * w2 * w2)         //
           - 4 * w(0, 2) * (1 + 6 * w1 + 24 * w1 * w1)         //
           + 8 * w(2, 1) * (1 + 6 * w2)                        //
           + 8 * w(1, 2) * (1 + 6 * w1)                        //
           - 8 * w(1, 1) * (1 + 6 * w1 + 6 * w2 + 48 * w1 * w2)  //
           + 96 * w1 * w2 * (w1 + w2 + 5 * w1 * w2)            //
           + 24 * w(2, 0) * w(0, 2)                            //
           - 8 * w(2, 2)                                       //
           + 48 * w(1, 1) * w(1, 1);
}

double det_marginal_from_moments(const IntensityMoments &w, int j) {
    if (j != 1 && j != 2) {
        throw Error(ErrorKind::InvalidArgument, fmt::format("beam index must be 1 or 2, got {}", j));
    }
    const double m1 = j == 1 ? w(1, 0) : w(0, 1);
    const double m2 = j == 1 ? w(2, 0) : w(0, 2);
    return 1 + 4 * m1 + 12 * m1 * m1 - 4 * m2;
}

Purities purities(const IntensityMoments &w) {
    constexpr double kClamp = 1e-9;
    const double dets[3] = {det_global_from_moments(w), det_marginal_from_moments(w, 1), det_marginal_from_moments(w, 2)};
    const char *names[3] = {"global", "beam 1", "beam 2"};
    double mu[3];
    Purities p;
    for (int i = 0; i < 3; ++i) {
        if (!(dets[i] > 0)) {
            throw Error(ErrorKind::NonPositiveDeterminant, fmt::format("{} determinant {} <= 0", names[i], dets[i]),
                        dets[i]);
        }
        mu[i] = 1 / std::sqrt(dets[i]);
        if (mu[i] > 1 && mu[i] <= 1 + kClamp) {
            mu[i] = 1;
            p.clamped = true;
        }
    }
    p.mu = mu[0];
    p.mu1 = mu[1];
    p.mu2 = mu[2];
    return p;
}

double renyi2(double mu) {
    return -std::log(mu);
}

double kl_divergence(double mu, double mu1, double mu2) {
    return std::log(mu / (mu1 * mu2));
}

double steering(double mu, double mu_j) {
    return std::max(0.0, std::log(mu / mu_j));
}

NegativityBounds negativity_bounds(double mu, double mu1, double mu2) {
    constexpr double kTol = 1e-12;
    NegativityBounds b;

    const double sum = mu1 + mu2, prod_sq = mu1 * mu1 * mu2 * mu2;
    double root_arg = sum * sum - 4 * prod_sq / mu;
    if (root_arg < -kTol) {
        throw Error(ErrorKind::DomainError, "upper-bound square root of a negative number", root_arg);
    }
    root_arg = std::max(0.0, root_arg);
    // -1/mu + sum (sum - sqrt) / (2 prod_sq), rearranged without cancellation.
    const double denom = mu * (sum + std::sqrt(root_arg));
    const double upper_arg = 4 * prod_sq / (denom * denom);
    if (!(upper_arg > 0)) {
        throw Error(ErrorKind::DomainError, "upper-bound logarithm of a non-positive number", upper_arg);
    }
    b.E_max = std::max(0.0, -0.5 * std::log(upper_arg));

    const double x = 1 / (mu1 * mu1) + 1 / (mu2 * mu2) - 1 / (2 * mu * mu) - 0.5;
    const double inv_mu_sq = 1 / (mu * mu);
    double disc = x * x - inv_mu_sq;
    if (x >= 1 / mu - kTol) {
        disc = std::max(0.0, disc);
        // x - sqrt(x^2 - 1/mu^2) without cancellation
        const double lower_arg = inv_mu_sq / (x + std::sqrt(disc));
        b.E_min = std::max(0.0, -0.5 * std::log(lower_arg));
    }
    return b;
}

double negativity_exact(const CovMatrix &c) {
    return std::max(0.0, -std::log(check_physical(c).nu_tilde_minus));
}

std::optional<double> relative_error(double e_min, double e_max) {
    if (e_max + e_min == 0) {
        return std::nullopt;
    }
    return (e_max - e_min) / (e_max + e_min);
}

Squeezing squeezing_variance(const SingleBeamMoments &b, double tolerance) {
    const double c_sq = b[2] - 2 * b[1] * b[1];
    if (c_sq < -tolerance) {
        throw Error(ErrorKind::NegativeCSquared, "moments give |C|^2 < 0", c_sq);
    }
    Squeezing s;
    s.B = b[1];
    s.abs_C = std::sqrt(std::max(0.0, c_sq));
    s.lambda = 1 + 2 * (s.B - s.abs_C);
    return s;
}

double g2(const SingleBeamMoments &b) {
    if (!(b[1] > 0)) {
        throw Error(ErrorKind::ZeroMean, "g2 needs a positive mean intensity", b[1]);
    }
    return b[2] / (b[1] * b[1]);
}

std::pair<double, double> renyi2_entanglement_bracket(double H, double G_1to2) {
    const double upper = H / 2;
    if (G_1to2 > upper + 1e-12) {
        throw Error(ErrorKind::InvertedBracket, "steering exceeds half the divergence", G_1to2 - upper);
    }
    return {G_1to2, upper};
}

std::string verdict_name(Verdict v) {
    switch (v) {
        case Verdict::Entangled:
            return "entangled";
        case Verdict::Separable:
            return "separable";
        case Verdict::Indeterminate:
            return "indeterminate";
    }
    return "indeterminate";
}

Verdict classify(double e_min, double e_max) {
    if (e_min > 0) {
        return Verdict::Entangled;
    }
    if (e_max == 0) {
        return Verdict::Separable;
    }
    return Verdict::Indeterminate;
}

const std::vector<std::string> &report_field_names() {
    static const std::vector<std::string> names = {
        "mu",       "mu1",      "mu2",           "S_R",       "S_R1", "S_R2", "H", "G_1to2", "G_2to1", "E_min",
        "E_max",    "delta_EN", "E2_lower",      "E2_upper",  "lambda_merged", "g2_merged", "S", "M"};
    return names;
}

double report_field(const QCReport &r, const std::string &name) {
    constexpr double nan = std::numeric_limits<double>::quiet_NaN();
    if (name == "mu") return r.mu;
    if (name == "mu1") return r.mu1;
    if (name == "mu2") return r.mu2;
    if (name == "S_R") return r.S_R;
    if (name == "S_R1") return r.S_R1;
    if (name == "S_R2") return r.S_R2;
    if (name == "H") return r.H;
    if (name == "G_1to2") return r.G_1to2;
    if (name == "G_2to1") return r.G_2to1;
    if (name == "E_min") return r.E_min;
    if (name == "E_max") return r.E_max;
    if (name == "delta_EN") return r.delta_EN.value_or(nan);
    if (name == "E2_lower") return r.E2_lower;
    if (name == "E2_upper") return r.E2_upper;
    if (name == "lambda_merged") return r.lambda_merged.value_or(nan);
    if (name == "g2_merged") return r.g2_merged.value_or(nan);
    if (name == "S") return r.S.value_or(nan);
    if (name == "M") return r.M;
    throw Error(ErrorKind::InvalidArgument, "unknown report field " + name);
}

namespace {

void fill_from_purities(QCReport &r) {
    r.S_R = renyi2(r.mu);
    r.S_R1 = renyi2(r.mu1);
    r.S_R2 = renyi2(r.mu2);
    r.H = kl_divergence(r.mu, r.mu1, r.mu2);
    r.G_1to2 = steering(r.mu, r.mu1);
    r.G_2to1 = steering(r.mu, r.mu2);
    r.E2_lower = r.G_1to2;
    r.E2_upper = r.H / 2;
    try {
        renyi2_entanglement_bracket(r.H, r.G_1to2);
    } catch (const Error &e) {
        r.warnings.emplace_back(e.what());
    }
}

}  // namespace

QCReport full_report(const IntensityMoments &w, double M, const ReportOptions &options) {
    QCReport r;
    r.M = M;
    const bool reduce = options.reduce && M > 1;
    r.per_mode = reduce;
    const IntensityMoments per_mode = reduce ? reduce_per_mode(w, M) : w;

    const Purities p = purities(per_mode);
    r.mu = p.mu;
    r.mu1 = p.mu1;
    r.mu2 = p.mu2;
    r.purity_clamped = p.clamped;
    fill_from_purities(r);

    const NegativityBounds bounds = negativity_bounds(p.mu, p.mu1, p.mu2);
    r.E_min = bounds.E_min;
    r.E_max = bounds.E_max;
    r.delta_EN = relative_error(bounds.E_min, bounds.E_max);
    r.verdict = classify(bounds.E_min, bounds.E_max);

    const SingleBeamMoments merged = merge_beams(per_mode);
    try {
        r.g2_merged = g2(merged);
    } catch (const Error &e) {
        r.warnings.emplace_back(e.what());
    }
    try {
        r.lambda_merged = squeezing_variance(merged).lambda;
    } catch (const Error &e) {
        r.warnings.emplace_back(e.what());
    }
    return r;
}

QCReport oracle_report(const CovMatrix &c) {
    QCReport r;
    const PurityInvariants inv = purity_invariants(c);
    r.mu = inv.mu;
    r.mu1 = inv.mu1;
    r.mu2 = inv.mu2;
    fill_from_purities(r);
    r.E_min = r.E_max = negativity_exact(c);
    r.delta_EN = relative_error(r.E_min, r.E_max);
    r.verdict = classify(r.E_min, r.E_max);
    return r;
}

QCReport twin_beam_reference(const IntensityMoments &w) {
    const double cov = w(1, 1) - w(1, 0) * w(0, 1);
    if (cov < 0) {
        throw Error(ErrorKind::NonPhysicalMoments, "negative intensity covariance", cov);
    }
    GaussianParams g;
    g.B1 = w(1, 0);
    g.B2 = w(0, 1);
    g.D12 = std::sqrt(cov);
    require_physical(g);
    QCReport r = oracle_report(covariance_of(g));
    const SingleBeamMoments merged = merge_beams(forward_moments(g));
    try {
        r.g2_merged = g2(merged);
        r.lambda_merged = squeezing_variance(merged).lambda;
    } catch (const Error &e) {
        r.warnings.emplace_back(e.what());
    }
    return r;
}

}  // namespace pnqc
