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

#ifndef PNQC_QUANTIFIERS_H
#define PNQC_QUANTIFIERS_H

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pnqc/gaussian.h"
#include "pnqc/moment_table.h"

namespace pnqc {

/// det sigma as a polynomial in intensity moments up to <W1^2 W2^2>.
double det_global_from_moments(const IntensityMoments &w);

/// det sigma_j = 1 + 4<W_j> + 12<W_j>^2 - 4<W_j^2>, j in {1, 2}.
double det_marginal_from_moments(const IntensityMoments &w, int j);

struct Purities {
    double mu = 1.0;
    double mu1 = 1.0;
    double mu2 = 1.0;
    /// True when a value in (1, 1 + 1e-9] was clamped to 1.
    bool clamped = false;
};

/// Purities 1/sqrt(det) from the moment determinants. Throws
/// NonPositiveDeterminant (with the offending value) when a determinant is <= 0.
Purities purities(const IntensityMoments &w);

double renyi2(double mu);
/// ln(mu / (mu1 mu2)).
double kl_divergence(double mu, double mu1, double mu2);
/// max{0, ln(mu / mu_j)}.
double steering(double mu, double mu_j);

struct NegativityBounds {
    double E_min = 0.0;
    double E_max = 0.0;
};

/// Tight purity-only bounds on the logarithmic negativity, clamped at 0.
///
/// The lower bound is the negativity at the largest admissible seralian,
/// 1 + 1/mu^2. When that seralian is out of reach (square-root argument
/// negative, or X < 1/mu), the family contains a separable state and the
/// lower bound is 0. Throws DomainError when the upper-bound root is
/// negative beyond 1e-12, which no physical triple produces.
NegativityBounds negativity_bounds(double mu, double mu1, double mu2);

/// max{0, -ln nu_tilde_minus} from the symplectic spectrum.
double negativity_exact(const CovMatrix &c);

/// (E_max - E_min) / (E_max + E_min); nullopt when both vanish.
std::optional<double> relative_error(double e_min, double e_max);

struct Squeezing {
    double lambda = 1.0;
    double B = 0.0;
    double abs_C = 0.0;
    bool squeezed() const {
        return lambda < 1.0;
    }
};

/// lambda = 1 + 2(B - |C|) with |C|^2 = <W^2> - 2<W>^2. Throws
/// NegativeCSquared (value attached) when |C|^2 < -tolerance.
Squeezing squeezing_variance(const SingleBeamMoments &b, double tolerance = 1e-12);

/// <W^2> / <W>^2. Throws ZeroMean.
double g2(const SingleBeamMoments &b);

/// Bracket (G_1to2, H/2) on the Gaussian Renyi-2 entanglement. Throws
/// InvertedBracket when lower exceeds upper by more than 1e-12.
std::pair<double, double> renyi2_entanglement_bracket(double H, double G_1to2);

enum class Verdict { Entangled, Separable, Indeterminate };
std::string verdict_name(Verdict v);
Verdict classify(double e_min, double e_max);

/// Every quantifier for one moment table.
struct QCReport {
    double mu = 1.0, mu1 = 1.0, mu2 = 1.0;
    double S_R = 0.0, S_R1 = 0.0, S_R2 = 0.0;
    double H = 0.0;
    double G_1to2 = 0.0, G_2to1 = 0.0;
    double E_min = 0.0, E_max = 0.0;
    std::optional<double> delta_EN;
    double E2_lower = 0.0, E2_upper = 0.0;
    std::optional<double> lambda_merged;
    std::optional<double> g2_merged;
    Verdict verdict = Verdict::Separable;
    bool per_mode = false;
    double M = 1.0;
    bool purity_clamped = false;
    /// Shannon entropy of the photon-number distribution, when one exists.
    std::optional<double> S;
    /// Non-fatal problems, e.g. merged-beam quantities that could not be formed.
    std::vector<std::string> warnings;
    /// Bootstrap standard errors keyed by field name.
    std::map<std::string, double> errors;
};

/// Names of the numeric report fields, in export order.
const std::vector<std::string> &report_field_names();

/// Numeric field by name; NaN for an absent optional.
double report_field(const QCReport &r, const std::string &name);

struct ReportOptions {
    /// Reduce to one mode before evaluating when M > 1.
    bool reduce = true;
};

/// Composes every quantifier, optionally after per-mode reduction with M.
/// Core failures (non-positive determinants, negativity domain errors)
/// propagate. Merged-beam failures are recorded in `warnings`.
QCReport full_report(const IntensityMoments &w, double M = 1.0, const ReportOptions &options = {});

/// Same quantifiers for the single-mode noisy twin beam that matches the
/// first- and second-order moments (B_j = <W_j>, |D12|^2 = covariance).
/// The negativity is exact from the covariance matrix (E_min = E_max).
QCReport twin_beam_reference(const IntensityMoments &w);

/// All quantifiers computed directly from a covariance matrix; the
/// independent route used to validate the moment formulas.
QCReport oracle_report(const CovMatrix &c);

}  // namespace pnqc

#endif
