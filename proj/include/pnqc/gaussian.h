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

#ifndef PNQC_GAUSSIAN_H
#define PNQC_GAUSSIAN_H

#include <Eigen/Dense>
#include <complex>
#include <cstdint>

#include "pnqc/moment_table.h"

namespace pnqc {

using Complex = std::complex<double>;

/// Coefficients of the normal characteristic function of a zero-mean
/// two-beam Gaussian field.
///
/// In operator form: <a_j^dag a_j> = B_j, <a_j^2> = C_j, <a_1 a_2> = D12 and
/// <a_1^dag a_2> = -Dbar12. These are the contractions that reproduce the
/// covariance matrix below, whose vacuum value is the identity.
struct GaussianParams {
    double B1 = 0.0;
    double B2 = 0.0;
    Complex C1{};
    Complex C2{};
    Complex D12{};
    Complex Dbar12{};

    bool operator==(const GaussianParams &) const = default;
};

/// 4x4 covariance matrix over (x1, p1, x2, p2) with blocks sigma1, sigma2, gamma.
class CovMatrix {
   public:
    /// Throws InvalidArgument when the matrix is not symmetric within 1e-12.
    explicit CovMatrix(const Eigen::Matrix4d &sigma);

    const Eigen::Matrix4d &matrix() const {
        return sigma_;
    }
    Eigen::Matrix2d sigma1() const {
        return sigma_.block<2, 2>(0, 0);
    }
    Eigen::Matrix2d sigma2() const {
        return sigma_.block<2, 2>(2, 2);
    }
    Eigen::Matrix2d gamma() const {
        return sigma_.block<2, 2>(0, 2);
    }
    double det() const {
        return sigma_.determinant();
    }
    /// det sigma1 + det sigma2 + 2 det gamma.
    double seralian() const;

   private:
    Eigen::Matrix4d sigma_;
};

struct SymplecticData {
    double nu_minus = 0.0;
    double nu_plus = 0.0;
    /// Smaller symplectic eigenvalue of the partially transposed matrix.
    double nu_tilde_minus = 0.0;
    double seralian = 0.0;
    double det = 0.0;
    bool physical = false;
};

/// Mean pair number per mode plus independent thermal noise in each beam.
struct TwinBeamSpec {
    double pair_mean = 0.0;
    double noise1 = 0.0;
    double noise2 = 0.0;
    int modes = 1;
};

/// Moment-derived combinations of the parameters, from first- to
/// fourth-order intensity moments.
struct InvariantSet {
    double B1 = 0.0;
    double B2 = 0.0;
    double C1_sq = 0.0;  // |C1|^2
    double C2_sq = 0.0;  // |C2|^2
    double D_sq = 0.0;   // |D12|^2 + |Dbar12|^2
    double t1 = 0.0;     // Re{C1 Dbar12 D12*}
    double t2 = 0.0;     // Re{C2* Dbar12 D12}
    double q = 0.0;      // 2|D12|^2|Dbar12|^2 + Re{C1 C2* Dbar12^2} + Re{C1 C2 (D12*)^2}
    /// Set when |C_j|^2 came out below -tolerance (e.g. coherent light).
    bool nonphysical = false;
};

CovMatrix covariance_of(const GaussianParams &g);

/// Normally-ordered moments <W1^k W2^l> by Isserlis pairing enumeration over
/// the creation and annihilation operators. The sum is real for any
/// parameters; an imaginary residue above 1e-12 (relative) throws.
IntensityMoments forward_moments(const GaussianParams &g, int max_order = kMaxMomentOrder);

/// Reads the parameter combinations back from the moments. A negative
/// |C_j|^2 estimate sets `nonphysical` but keeps the raw value.
InvariantSet extract_invariants(const IntensityMoments &w, double tolerance = 1e-12);

/// Throws NonPhysicalMoments when the set is flagged.
void require_physical(const InvariantSet &inv);

/// Symplectic spectrum and uncertainty-principle test. Physical means
/// positive definite with nu_minus >= 1 - 1e-9. Throws NegativeDiscriminant
/// when the spectrum is complex or det sigma <= 0.
SymplecticData check_physical(const CovMatrix &c);

/// Throws Unphysical when covariance_of(g) fails check_physical.
void require_physical(const GaussianParams &g);

/// Standard-form matrix with sigma1 = a I, sigma2 = b I, gamma = diag(c_plus, c_minus).
CovMatrix standard_form(double a, double b, double c_plus, double c_minus);

/// Standard-form state with the given purities and seralian (c_plus >= c_minus).
/// Throws Unphysical when no physical state matches within 1e-9.
CovMatrix from_purities(double mu, double mu1, double mu2, double delta);

struct PurityInvariants {
    double mu = 1.0;
    double mu1 = 1.0;
    double mu2 = 1.0;
    double delta = 2.0;
};

/// Purities 1/sqrt(det) and seralian read directly off the matrix.
PurityInvariants purity_invariants(const CovMatrix &c);

/// Single-mode noisy twin beam: B_j = Bp + Bn_j, D12 = sqrt(Bp (Bp + 1)).
GaussianParams params_of_twin_beam(const TwinBeamSpec &t);

/// Rejection-samples a physical state with B_j in [0, scale] and |C_j|,
/// |D12|, |Dbar12| <= scale. Throws SamplingExhausted after max_attempts.
GaussianParams random_physical_state(uint64_t seed, double scale, int max_attempts = 1000000);

}  // namespace pnqc

#endif
