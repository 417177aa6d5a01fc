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

#include "pnqc/gaussian.h"

#include <fmt/format.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "pnqc/error.h"
#include "pnqc/rng.h"

namespace pnqc {

CovMatrix::CovMatrix(const Eigen::Matrix4d &sigma) : sigma_(sigma) {
    double asym = (sigma - sigma.transpose()).cwiseAbs().maxCoeff();
    if (asym > 1e-12 * std::max(1.0, sigma.cwiseAbs().maxCoeff())) {
        throw Error(ErrorKind::InvalidArgument, "covariance matrix must be symmetric", asym);
    }
    sigma_ = 0.5 * (sigma + sigma.transpose());
}

double CovMatrix::seralian() const {
    return sigma1().determinant() + sigma2().determinant() + 2.0 * gamma().determinant();
}

CovMatrix covariance_of(const GaussianParams &g) {
    Eigen::Matrix4d s;
    auto single = [](double b, Complex c) {
        Eigen::Matrix2d m;
        m << 1 + 2 * b + 2 * c.real(), 2 * c.imag(), 2 * c.imag(), 1 + 2 * b - 2 * c.real();
        return m;
    };
    const Complex minus = g.D12 - g.Dbar12, plus = g.D12 + g.Dbar12;
    Eigen::Matrix2d gamma;
    gamma << 2 * minus.real(), 2 * minus.imag(), 2 * plus.imag(), -2 * plus.real();
    s.block<2, 2>(0, 0) = single(g.B1, g.C1);
    s.block<2, 2>(2, 2) = single(g.B2, g.C2);
    s.block<2, 2>(0, 2) = gamma;
    s.block<2, 2>(2, 0) = gamma.transpose();
    return CovMatrix(s);
}

namespace {

struct Op {
    bool dagger;
    int mode;  // 0 or 1
};

// Expectation of the ordered pair (x, y) taken from a normally-ordered
// product, so a creator never stands to the right of an annihilator.
Complex contraction(const GaussianParams &g, const Op &x, const Op &y) {
    const Complex c[2] = {g.C1, g.C2};
    if (x.dagger && !y.dagger) {
        if (x.mode == y.mode) {
            return x.mode == 0 ? g.B1 : g.B2;
        }
        return x.mode == 0 ? -g.Dbar12 : -std::conj(g.Dbar12);
    }
    if (!x.dagger && !y.dagger) {
        return x.mode == y.mode ? c[x.mode] : g.D12;
    }
    // both creators
    return x.mode == y.mode ? std::conj(c[x.mode]) : std::conj(g.D12);
}

struct PairingSum {
    Complex value{};
    double magnitude = 0.0;
};

void sum_pairings(const GaussianParams &g, const std::vector<Op> &ops, std::vector<bool> &used, Complex product,
                  PairingSum &out) {
    size_t first = 0;
    while (first < ops.size() && used[first]) {
        ++first;
    }
    if (first == ops.size()) {
        out.value += product;
        out.magnitude += std::abs(product);
        return;
    }
    used[first] = true;
    for (size_t j = first + 1; j < ops.size(); ++j) {
        if (used[j]) {
            continue;
        }
        used[j] = true;
        sum_pairings(g, ops, used, product * contraction(g, ops[first], ops[j]), out);
        used[j] = false;
    }
    used[first] = false;
}

}  // namespace

IntensityMoments forward_moments(const GaussianParams &g, int max_order) {
    IntensityMoments w(max_order);
    for (int k = 0; k <= max_order; ++k) {
        for (int l = 0; k + l <= max_order; ++l) {
            if (k + l == 0) {
                continue;
            }
            // a1^dag^k a2^dag^l a1^k a2^l
            std::vector<Op> ops;
            ops.insert(ops.end(), static_cast<size_t>(k), Op{true, 0});
            ops.insert(ops.end(), static_cast<size_t>(l), Op{true, 1});
            ops.insert(ops.end(), static_cast<size_t>(k), Op{false, 0});
            ops.insert(ops.end(), static_cast<size_t>(l), Op{false, 1});
            std::vector<bool> used(ops.size(), false);
            PairingSum sum;
            sum_pairings(g, ops, used, Complex(1.0, 0.0), sum);
            if (std::abs(sum.value.imag()) > 1e-12 * std::max(1.0, sum.magnitude)) {
                throw Error(ErrorKind::InvalidArgument,
                            fmt::format("moment ({},{}) has imaginary residue", k, l), sum.value.imag());
            }
            w(k, l) = sum.value.real();
        }
    }
    return w;
}

InvariantSet extract_invariants(const IntensityMoments &w, double tolerance) {
    InvariantSet inv;
    const double w1 = w(1, 0), w2 = w(0, 1), w11 = w(1, 1);
    const double cov = w11 - w1 * w2;
    inv.B1 = w1;
    inv.B2 = w2;
    inv.C1_sq = w(2, 0) - 2 * w1 * w1;
    inv.C2_sq = w(0, 2) - 2 * w2 * w2;
    inv.D_sq = cov;
    inv.nonphysical = inv.C1_sq < -tolerance || inv.C2_sq < -tolerance;
    if (w.max_order() < 3) {
        return inv;
    }
    inv.t1 = (-4 * w1 * cov + w(2, 1) - w(2, 0) * w2) / -4.0;
    inv.t2 = (-4 * w2 * cov + w(1, 2) - w1 * w(0, 2)) / -4.0;
    if (w.max_order() < 4) {
        return inv;
    }
    // Fourth-order relation. The w1 w2 w11 and w1^2 w2^2 coefficients are 8;
    // this is what the Isserlis expansion of <W1^2 W2^2> gives.
    const double rhs = w(2, 2) - 4 * w11 * w11 - 8 * w1 * w2 * w11 + 8 * w1 * w1 * w2 * w2 -
                       2 * (w1 * w1 * inv.C2_sq + w2 * w2 * inv.C1_sq) - inv.C2_sq * inv.C1_sq +
                       16 * w2 * inv.t1 + 16 * w1 * inv.t2;
    inv.q = rhs / 4.0;
    return inv;
}

void require_physical(const InvariantSet &inv) {
    if (inv.nonphysical) {
        throw Error(ErrorKind::NonPhysicalMoments, "negative |C_j|^2 estimate", std::min(inv.C1_sq, inv.C2_sq));
    }
}

SymplecticData check_physical(const CovMatrix &c) {
    SymplecticData out;
    // Extended precision: for strongly mixed states the entries are ~1/mu
    // while det sigma = 1/mu^2, so the determinant loses digits to cancellation.
    using Wide = long double;
    const Eigen::Matrix<Wide, 4, 4> m = c.matrix().cast<Wide>();
    const Wide d1 = m.block<2, 2>(0, 0).determinant(), d2 = m.block<2, 2>(2, 2).determinant();
    const Wide dg = m.block<2, 2>(0, 2).determinant();
    const Wide det = m.determinant();
    out.det = static_cast<double>(det);
    out.seralian = static_cast<double>(d1 + d2 + 2 * dg);
    const Wide seralian = d1 + d2 + 2 * dg, delta_pt = d1 + d2 - 2 * dg;
    if (!(out.det > 0)) {
        throw Error(ErrorKind::NegativeDiscriminant, "covariance determinant is not positive", out.det);
    }
    auto smaller = [&](Wide delta, double &larger) {
        Wide disc = delta * delta - 4 * det;
        if (disc < -1e-9L * std::max<Wide>(1, delta * delta)) {
            throw Error(ErrorKind::NegativeDiscriminant, "symplectic spectrum is complex", static_cast<double>(disc));
        }
        // A discriminant at rounding level means a degenerate spectrum.
        Wide root = disc <= 64 * std::numeric_limits<Wide>::epsilon() * delta * delta ? 0 : std::sqrt(disc);
        larger = static_cast<double>(std::sqrt(std::max<Wide>(0, (delta + root) / 2)));
        // (delta - root) / 2 rewritten as 2 det / (delta + root) to avoid cancellation.
        return delta + root > 0 ? static_cast<double>(std::sqrt(2 * det / (delta + root))) : 0.0;
    };
    out.nu_minus = smaller(seralian, out.nu_plus);
    double unused = 0;
    out.nu_tilde_minus = smaller(delta_pt, unused);
    const bool positive_definite = Eigen::LLT<Eigen::Matrix4d>(c.matrix()).info() == Eigen::Success;
    // nu_minus >= 1 and nu_plus >= 1 iff det - Delta + 1 >= 0 and Delta >= 2; the
    // polynomial form keeps full precision when the spectrum is degenerate.
    const double tol = 1e-9 * std::max(1.0, out.det);
    const bool polynomial = out.det - out.seralian + 1 >= -tol && out.seralian >= 2 - 1e-9;
    out.physical = positive_definite && out.seralian > 0 && (out.nu_minus >= 1 - 1e-9 || polynomial);
    return out;
}

void require_physical(const GaussianParams &g) {
    auto data = check_physical(covariance_of(g));
    if (!data.physical) {
        throw Error(ErrorKind::Unphysical, "parameters violate the uncertainty principle", data.nu_minus);
    }
}

CovMatrix standard_form(double a, double b, double c_plus, double c_minus) {
    Eigen::Matrix4d s = Eigen::Matrix4d::Zero();
    s(0, 0) = s(1, 1) = a;
    s(2, 2) = s(3, 3) = b;
    s(0, 2) = s(2, 0) = c_plus;
    s(1, 3) = s(3, 1) = c_minus;
    return CovMatrix(s);
}

PurityInvariants purity_invariants(const CovMatrix &c) {
    const Eigen::Matrix<long double, 4, 4> m = c.matrix().cast<long double>();
    auto inv_sqrt = [](long double d) { return static_cast<double>(1 / std::sqrt(d)); };
    return {inv_sqrt(m.determinant()), inv_sqrt(m.block<2, 2>(0, 0).determinant()),
            inv_sqrt(m.block<2, 2>(2, 2).determinant()), c.seralian()};
}

CovMatrix from_purities(double mu, double mu1, double mu2, double delta) {
    for (double m : {mu, mu1, mu2}) {
        if (!(m > 0 && m <= 1)) {
            throw Error(ErrorKind::Unphysical, "purities must lie in (0, 1]", m);
        }
    }
    const double a = 1 / mu1, b = 1 / mu2;
    const double u = (delta - a * a - b * b) / 2;
    const double v = (a * a * b * b + u * u - 1 / (mu * mu)) / (a * b);
    const double scale = std::max({1.0, std::abs(v), 2 * std::abs(u)});
    if (v - 2 * std::abs(u) < -1e-12 * scale) {
        throw Error(ErrorKind::Unphysical, "no real standard-form correlations", v - 2 * std::abs(u));
    }
    const double s = std::sqrt(std::max(0.0, v + 2 * u));
    const double d = std::sqrt(std::max(0.0, v - 2 * u));
    CovMatrix c = standard_form(a, b, (s + d) / 2, (s - d) / 2);

    SymplecticData data;
    try {
        data = check_physical(c);
    } catch (const Error &e) {
        throw Error(ErrorKind::Unphysical, e.what());
    }
    if (!data.physical) {
        throw Error(ErrorKind::Unphysical, "state violates the uncertainty principle", data.nu_minus);
    }
    PurityInvariants back = purity_invariants(c);
    if (std::abs(back.mu - mu) > 1e-9 || std::abs(back.mu1 - mu1) > 1e-9 || std::abs(back.mu2 - mu2) > 1e-9 ||
        std::abs(back.delta - delta) > 1e-9 * std::max(1.0, std::abs(delta))) {
        throw Error(ErrorKind::Unphysical, "purities and seralian are not reproduced", back.delta - delta);
    }
    return c;
}

GaussianParams params_of_twin_beam(const TwinBeamSpec &t) {
    GaussianParams g;
    g.B1 = t.pair_mean + t.noise1;
    g.B2 = t.pair_mean + t.noise2;
    g.D12 = std::sqrt(t.pair_mean * (t.pair_mean + 1));
    return g;
}

GaussianParams random_physical_state(uint64_t seed, double scale, int max_attempts) {
    if (scale <= 0) {
        return {};
    }
    Rng rng(seed);
    auto disk = [&] {
        double r = scale * std::sqrt(rng.uniform());
        double phi = 2 * std::numbers::pi * rng.uniform();
        return std::polar(r, phi);
    };
    for (int attempt = 0; attempt < max_attempts; ++attempt) {
        GaussianParams g;
        g.B1 = rng.uniform(0, scale);
        g.B2 = rng.uniform(0, scale);
        g.C1 = disk();
        g.C2 = disk();
        g.D12 = disk();
        g.Dbar12 = disk();
        try {
            if (check_physical(covariance_of(g)).physical) {
                return g;
            }
        } catch (const Error &) {
            // complex spectrum or indefinite matrix: reject
        }
    }
    throw Error(ErrorKind::SamplingExhausted, fmt::format("no physical state in {} attempts", max_attempts));
}

}  // namespace pnqc
