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

#include <cmath>
#include <numbers>

#include "gtest/gtest.h"

#include "oracles.h"
#include "pnqc/error.h"
#include "pnqc/report_io.h"
#include "pnqc/rng.h"
#include "pnqc/statespace.h"

using namespace pnqc;

namespace {

GaussianParams tmsv(double Bp) {
    return params_of_twin_beam({Bp, 0, 0, 1});
}

GaussianParams random_params(Rng &rng) {
    auto c = [&] { return Complex(rng.uniform(-1, 1), rng.uniform(-1, 1)); };
    return {rng.uniform(), rng.uniform(), c(), c(), c(), c()};
}

}  // namespace

TEST(CovarianceOf, vacuum_is_identity) {
    EXPECT_EQ(covariance_of({}).matrix(), Eigen::Matrix4d::Identity());
}

TEST(CovarianceOf, thermal_block) {
    GaussianParams g;
    g.B1 = 1;
    Eigen::Matrix4d expected = Eigen::Matrix4d::Identity();
    expected(0, 0) = expected(1, 1) = 3;
    EXPECT_EQ(covariance_of(g).matrix(), expected);
}

TEST(CovarianceOf, two_mode_squeezed_vacuum) {
    auto c = covariance_of(tmsv(1.0));
    Eigen::Matrix2d gamma = c.gamma();
    EXPECT_NEAR(gamma(0, 0), 2 * std::sqrt(2.0), 1e-12);
    EXPECT_NEAR(gamma(1, 1), -2 * std::sqrt(2.0), 1e-12);
    EXPECT_NEAR(gamma(0, 1), 0, 1e-15);
    EXPECT_NEAR(oracle::det4(c.matrix()), 1.0, 1e-12);
}

TEST(CovMatrixTest, rejects_asymmetric) {
    Eigen::Matrix4d m = Eigen::Matrix4d::Identity();
    m(0, 1) = 1e-6;
    EXPECT_THROW(CovMatrix{m}, Error);
}

TEST(ForwardMoments, vacuum) {
    auto w = forward_moments({});
    for (int k = 0; k <= 4; ++k)
        for (int l = 0; k + l <= 4; ++l) EXPECT_EQ(w(k, l), k + l == 0 ? 1.0 : 0.0);
}

TEST(ForwardMoments, thermal_factorials) {
    GaussianParams g;
    g.B1 = 0.7;
    auto w = forward_moments(g);
    for (int k = 1; k <= 4; ++k) EXPECT_NEAR(w(k, 0), std::tgamma(k + 1.0) * std::pow(0.7, k), 1e-12);
}

TEST(ForwardMoments, second_order_identities) {
    Rng rng(1);
    for (int i = 0; i < 1000; ++i) {
        auto g = random_params(rng);
        auto w = forward_moments(g);
        EXPECT_NEAR(w(1, 0), g.B1, 1e-12);
        EXPECT_NEAR(w(2, 0) - 2 * w(1, 0) * w(1, 0), std::norm(g.C1), 1e-12);
        EXPECT_NEAR(w(0, 2) - 2 * w(0, 1) * w(0, 1), std::norm(g.C2), 1e-12);
        EXPECT_NEAR(w(1, 1) - w(1, 0) * w(0, 1), std::norm(g.D12) + std::norm(g.Dbar12), 1e-12);
    }
}

TEST(ForwardMoments, agrees_with_generating_function) {
    for (uint64_t seed = 0; seed < 200; ++seed) {
        auto g = random_physical_state(seed, 1.5);
        auto w = forward_moments(g);
        auto ref = oracle::mgf_moments(covariance_of(g).matrix());
        for (int k = 0; k <= 4; ++k)
            for (int l = 0; k + l <= 4; ++l)
                EXPECT_NEAR(w(k, l), ref(k, l), 1e-10 * std::max(1.0, std::abs(ref(k, l)))) << k << "," << l;
    }
}

TEST(ExtractInvariants, vacuum) {
    auto inv = extract_invariants(forward_moments({}));
    EXPECT_EQ(inv.B1, 0);
    EXPECT_EQ(inv.C1_sq, 0);
    EXPECT_EQ(inv.D_sq, 0);
    EXPECT_EQ(inv.q, 0);
    EXPECT_FALSE(inv.nonphysical);
}

TEST(ExtractInvariants, forward_round_trip) {
    GaussianParams g{0.3, 0.4, {0, 0.2}, {0.1, 0}, {0.25, 0}, {0.1, 0.05}};
    auto inv = extract_invariants(forward_moments(g));
    EXPECT_NEAR(inv.C1_sq, 0.04, 1e-12);
    EXPECT_NEAR(inv.C2_sq, 0.01, 1e-12);
    EXPECT_NEAR(inv.D_sq, 0.075, 1e-12);
    EXPECT_NEAR(inv.t1, std::real(g.C1 * g.Dbar12 * std::conj(g.D12)), 1e-12);
    EXPECT_NEAR(inv.t2, std::real(std::conj(g.C2) * g.Dbar12 * g.D12), 1e-12);
    double q = 2 * std::norm(g.D12) * std::norm(g.Dbar12) +
               std::real(g.C1 * std::conj(g.C2) * g.Dbar12 * g.Dbar12) +
               std::real(g.C1 * g.C2 * std::conj(g.D12) * std::conj(g.D12));
    EXPECT_NEAR(inv.q, q, 1e-12);
}

TEST(ExtractInvariants, random_round_trip) {
    Rng rng(4);
    for (int i = 0; i < 500; ++i) {
        auto g = random_params(rng);
        auto inv = extract_invariants(forward_moments(g));
        double q = 2 * std::norm(g.D12) * std::norm(g.Dbar12) +
                   std::real(g.C1 * std::conj(g.C2) * g.Dbar12 * g.Dbar12) +
                   std::real(g.C1 * g.C2 * std::conj(g.D12) * std::conj(g.D12));
        EXPECT_NEAR(inv.t1, std::real(g.C1 * g.Dbar12 * std::conj(g.D12)), 1e-11);
        EXPECT_NEAR(inv.t2, std::real(std::conj(g.C2) * g.Dbar12 * g.D12), 1e-11);
        EXPECT_NEAR(inv.q, q, 1e-11);
    }
}

TEST(ExtractInvariants, coherent_light_flagged) {
    IntensityMoments w;
    for (int k = 0; k <= 4; ++k)
        for (int l = 0; k + l <= 4; ++l) w(k, l) = std::pow(0.8, k) * std::pow(0.5, l);
    auto inv = extract_invariants(w);
    EXPECT_TRUE(inv.nonphysical);
    EXPECT_NEAR(inv.C1_sq, -0.64, 1e-12);
    EXPECT_THROW(require_physical(inv), Error);
}

TEST(ExtractInvariants, noisy_twin_beam_has_no_phase_terms) {
    auto inv = extract_invariants(forward_moments(params_of_twin_beam({0.5, 0.2, 0.1, 1})));
    EXPECT_NEAR(inv.t1, 0, 1e-12);
    EXPECT_NEAR(inv.t2, 0, 1e-12);
    EXPECT_NEAR(inv.q, 0, 1e-12);
    EXPECT_NEAR(inv.D_sq, 0.75, 1e-12);
}

TEST(CheckPhysical, vacuum) {
    auto s = check_physical(CovMatrix(Eigen::Matrix4d::Identity()));
    EXPECT_NEAR(s.nu_minus, 1, 1e-12);
    EXPECT_NEAR(s.nu_plus, 1, 1e-12);
    EXPECT_TRUE(s.physical);
}

TEST(CheckPhysical, two_mode_squeezed_vacuum) {
    auto s = check_physical(covariance_of(tmsv(1.0)));
    EXPECT_NEAR(s.nu_minus, 1, 1e-9);
    EXPECT_NEAR(s.nu_plus, 1, 1e-9);
    EXPECT_NEAR(s.nu_tilde_minus, 3 - 2 * std::sqrt(2.0), 1e-12);
    EXPECT_TRUE(s.physical);
}

TEST(CheckPhysical, sub_vacuum_noise) {
    auto s = check_physical(CovMatrix(Eigen::Matrix4d::Identity() / 2));
    EXPECT_NEAR(s.nu_minus, 0.5, 1e-12);
    EXPECT_FALSE(s.physical);
}

TEST(CheckPhysical, negative_determinant) {
    Eigen::Matrix4d m = Eigen::Matrix4d::Identity();
    m(0, 0) = -1;
    EXPECT_THROW(check_physical(CovMatrix(m)), Error);
}

TEST(CheckPhysical, matches_symplectic_oracle) {
    for (uint64_t seed = 0; seed < 300; ++seed) {
        auto c = covariance_of(random_physical_state(seed, 1.0));
        auto s = check_physical(c);
        auto nu = oracle::symplectic_eigenvalues(c.matrix());
        auto nt = oracle::symplectic_eigenvalues(oracle::partial_transpose(c.matrix()));
        EXPECT_NEAR(s.nu_minus, nu[0], 1e-8);
        EXPECT_NEAR(s.nu_plus, nu[1], 1e-8);
        EXPECT_NEAR(s.nu_tilde_minus, nt[0], 1e-8);
        EXPECT_NEAR(s.det, oracle::det4(c.matrix()), 1e-9 * s.det);
        EXPECT_GE(nu[0], 1 - 1e-9);
    }
}

TEST(FromPurities, vacuum) {
    auto c = from_purities(1, 1, 1, 2);
    EXPECT_TRUE(c.matrix().isApprox(Eigen::Matrix4d::Identity(), 1e-12));
}

TEST(FromPurities, two_mode_squeezed_vacuum) {
    auto c = from_purities(1, 1.0 / 3, 1.0 / 3, 2);
    EXPECT_NEAR(c.sigma1()(0, 0), 3, 1e-9);
    EXPECT_NEAR(c.sigma2()(1, 1), 3, 1e-9);
    EXPECT_NEAR(c.gamma()(0, 0), 2 * std::sqrt(2.0), 1e-9);
    EXPECT_NEAR(c.gamma()(1, 1), -2 * std::sqrt(2.0), 1e-9);
    EXPECT_TRUE(check_physical(c).physical);
}

TEST(FromPurities, inadmissible_seralian) {
    EXPECT_THROW(from_purities(1, 1.0 / 3, 1.0 / 3, 50), Error);
    // Brute-force scan: the admissible seralians of this pure triple form a single point.
    int accepted = 0;
    for (int i = 0; i <= 4800; ++i) {
        try {
            from_purities(1, 1.0 / 3, 1.0 / 3, 2 + i * 0.01);
            ++accepted;
        } catch (const Error &) {
        }
    }
    EXPECT_EQ(accepted, 1);
}

TEST(FromPurities, round_trip_on_grid) {
    const int n = 20;
    int checked = 0;
    for (int a = 1; a <= n; ++a)
        for (int b = 1; b <= n; ++b)
            for (int c = 1; c <= n; ++c) {
                double mu = static_cast<double>(a) / n, mu1 = static_cast<double>(b) / n, mu2 = static_cast<double>(c) / n;
                auto interval = admissible_seralian(mu, mu1, mu2);
                if (!interval) continue;
                for (int d = 0; d < n; ++d) {
                    double delta = interval->lo + (interval->hi - interval->lo) * d / (n - 1);
                    CovMatrix cm = from_purities(mu, mu1, mu2, delta);
                    auto inv = purity_invariants(cm);
                    EXPECT_NEAR(inv.mu, mu, 1e-9);
                    EXPECT_NEAR(inv.mu1, mu1, 1e-9);
                    EXPECT_NEAR(inv.mu2, mu2, 1e-9);
                    EXPECT_NEAR(inv.delta, delta, 1e-9 * std::max(1.0, delta));
                    ++checked;
                }
            }
    EXPECT_GT(checked, 10000);
}

TEST(TwinBeam, examples) {
    auto g = tmsv(1.0);
    EXPECT_EQ(g.B1, 1);
    EXPECT_EQ(g.B2, 1);
    EXPECT_NEAR(std::norm(g.D12), 2, 1e-12);
    EXPECT_NEAR(oracle::det4(covariance_of(g).matrix()), 1, 1e-12);
    EXPECT_EQ(params_of_twin_beam({0, 0, 0, 1}), GaussianParams{});
    auto n = params_of_twin_beam({0.5, 0.1, 0, 1});
    EXPECT_NEAR(n.B1, 0.6, 1e-15);
    EXPECT_NEAR(n.B2, 0.5, 1e-15);
    EXPECT_NEAR(std::norm(n.D12), 0.75, 1e-12);
    EXPECT_TRUE(check_physical(covariance_of(n)).physical);
}

TEST(TwinBeam, physical_on_grid) {
    for (int i = 0; i < 10; ++i)
        for (int j = 0; j < 10; ++j)
            for (int k = 0; k < 10; ++k) {
                TwinBeamSpec t{0.3 * i, 0.2 * j, 0.25 * k, 1};
                EXPECT_TRUE(check_physical(covariance_of(params_of_twin_beam(t))).physical) << i << j << k;
            }
}

TEST(RandomPhysicalState, contract) {
    EXPECT_EQ(random_physical_state(1, 0.0), GaussianParams{});
    EXPECT_GE(check_physical(covariance_of(random_physical_state(42, 1.0))).nu_minus, 1 - 1e-9);
    EXPECT_EQ(random_physical_state(42, 1.0), random_physical_state(42, 1.0));
    for (uint64_t seed = 0; seed < 1000; ++seed) {
        ASSERT_TRUE(check_physical(covariance_of(random_physical_state(seed, 1.0))).physical);
    }
}

TEST(GaussianJson, round_trips) {
    auto g = random_physical_state(5, 1.0);
    EXPECT_EQ(params_from_json(params_to_json(g)), g);
    auto c = covariance_of(g);
    EXPECT_EQ(cov_from_json(cov_to_json(c)).matrix(), c.matrix());
    EXPECT_THROW(cov_from_json(nlohmann::json::array({1, 2})), Error);
}
