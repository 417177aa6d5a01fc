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

#include "pnqc/synth.h"

#include <Eigen/Dense>
#include <cmath>

#include "gtest/gtest.h"

#include "oracles.h"
#include "pnqc/error.h"

using namespace pnqc;

namespace {

SimRun run_of(TwinBeamSpec spec, double eta, uint64_t shots, uint64_t seed, double dark = 0) {
    SimRun r;
    r.spec = spec;
    r.detectors[0] = {eta, dark, std::nullopt};
    r.detectors[1] = {eta, dark, std::nullopt};
    r.shots = shots;
    r.seed = seed;
    return r;
}

std::vector<double> entries(const IntensityMoments &w) {
    static const int kl[12][2] = {{1, 0}, {0, 1}, {2, 0}, {1, 1}, {0, 2}, {3, 0}, {2, 1}, {1, 2}, {0, 3}, {3, 1}, {2, 2}, {1, 3}};
    std::vector<double> v;
    for (auto &e : kl) v.push_back(w(e[0], e[1]));
    return v;
}

/// Moments of the simulated counts and their bootstrap covariance.
struct Sampled {
    IntensityMoments w;
    Eigen::MatrixXd cov;
};

Sampled sample(const JointHistogram &h, size_t resamples = 200) {
    Sampled s{sample_intensity_moments(h), {}};
    auto boots = bootstrap(h, {.resamples = resamples, .seed = 17}, [](const JointHistogram &x) {
        return entries(sample_intensity_moments(x));
    });
    const size_t n = 12;
    Eigen::MatrixXd data(boots.size(), n);
    for (size_t i = 0; i < boots.size(); ++i)
        for (size_t j = 0; j < n; ++j) data(i, j) = boots[i][j];
    Eigen::MatrixXd centered = data.rowwise() - data.colwise().mean();
    s.cov = centered.transpose() * centered / static_cast<double>(boots.size() - 1);
    return s;
}

}  // namespace

TEST(Simulate, vacuum) {
    auto h = simulate(run_of({0, 0, 0, 3}, 1, 1000, 1));
    ASSERT_EQ(h.cells().size(), 1u);
    EXPECT_EQ(h.count(0, 0), 1000u);
}

TEST(Simulate, validation) {
    EXPECT_THROW(simulate(run_of({0.1, 0, 0, 1}, 1, 0, 1)), Error);
    EXPECT_THROW(simulate(run_of({0.1, 0, 0, 1}, 1.5, 10, 1)), Error);
    EXPECT_THROW(simulate(run_of({-0.1, 0, 0, 1}, 1, 10, 1)), Error);
    EXPECT_THROW(simulate(run_of({0.1, 0, 0, 0}, 1, 10, 1)), Error);
}

TEST(Simulate, deterministic_and_thread_independent) {
    auto r = run_of({0.2, 0.05, 0.1, 4}, 0.7, 200000, 99, 0.01);
    auto a = simulate(r, 1);
    EXPECT_EQ(a, simulate(r, 1));
    EXPECT_EQ(a, simulate(r, 4));
    EXPECT_NE(a, simulate(run_of({0.2, 0.05, 0.1, 4}, 0.7, 200000, 100, 0.01), 1));
    auto shots = simulate_shots(r, 2);
    EXPECT_EQ(histogram_from_shots(shots), a);
}

TEST(Simulate, twin_beam_means_and_covariance) {
    auto h = simulate(run_of({0.1, 0, 0, 10}, 1, 1000000, 2026));
    auto boots = bootstrap(h, {.resamples = 100, .seed = 5}, [](const JointHistogram &x) {
        auto w = sample_intensity_moments(x);
        return std::vector<double>{w(1, 0), w(1, 1) - w(1, 0) * w(0, 1)};
    });
    auto se = bootstrap_standard_errors(boots, 2);
    auto w = sample_intensity_moments(h);
    EXPECT_NEAR(w(1, 0), 1.0, 3 * se[0]);
    EXPECT_NEAR(w(1, 1) - w(1, 0) * w(0, 1), 1.1, 3 * se[1]);
}

TEST(Simulate, loss_scales_normally_ordered_moments) {
    auto r = run_of({0.1, 0, 0, 10}, 0.5, 1000000, 7);
    auto a = analytic_moments(r);
    auto ideal = analytic_moments(run_of({0.1, 0, 0, 10}, 1, 1, 7));
    EXPECT_NEAR(a(1, 0), 0.5 * ideal(1, 0), 1e-12);
    EXPECT_NEAR(a(1, 1) - a(1, 0) * a(0, 1), 0.25 * (ideal(1, 1) - ideal(1, 0) * ideal(0, 1)), 1e-12);
    auto s = sample(simulate(r));
    auto e = entries(a), m = entries(s.w);
    for (int i = 0; i < 5; ++i) EXPECT_NEAR(m[i], e[i], 3 * std::sqrt(s.cov(i, i))) << i;
}

TEST(AnalyticMoments, definitions) {
    EXPECT_EQ(analytic_moments(run_of({0, 0, 0, 5}, 0.5, 1, 1)), IntensityMoments());
    TwinBeamSpec t{0.4, 0.1, 0.2, 1};
    auto a = analytic_moments(run_of(t, 1, 1, 1));
    auto f = forward_moments(params_of_twin_beam(t));
    for (int k = 0; k <= 4; ++k)
        for (int l = 0; k + l <= 4; ++l) EXPECT_NEAR(a(k, l), f(k, l), 1e-12);
    auto ten = analytic_moments(run_of({0.1, 0, 0, 10}, 1, 1, 1));
    auto brute = f = forward_moments(params_of_twin_beam({0.1, 0, 0, 1}));
    for (int i = 1; i < 10; ++i) brute = oracle::convolve(brute, f);
    for (int k = 0; k <= 4; ++k)
        for (int l = 0; k + l <= 4; ++l) EXPECT_NEAR(ten(k, l), brute(k, l), 1e-10 * std::max(1.0, brute(k, l)));
}

TEST(AnalyticMoments, fourth_order_against_monte_carlo) {
    auto r = run_of({0.1, 0, 0, 10}, 1, 1000000, 4242);
    auto s = sample(simulate(r), 100);
    EXPECT_NEAR(s.w(2, 2), analytic_moments(r)(2, 2), 3 * std::sqrt(s.cov(10, 10)));
}

TEST(AnalyticMoments, chi_square_over_twelve_entries) {
    // Noise, loss and dark counts all active; exercises the tabulated noisy mode.
    auto r = run_of({0.15, 0.05, 0.08, 5}, 0.7, 300000, 8080, 0.02);
    auto s = sample(simulate(r), 400);
    Eigen::VectorXd d(12);
    auto e = entries(analytic_moments(r)), m = entries(s.w);
    for (int i = 0; i < 12; ++i) d(i) = m[i] - e[i];
    double chi2 = d.dot(s.cov.ldlt().solve(d));
    EXPECT_LT(chi2, 26.22) << "chi-square with 12 degrees of freedom, 99% quantile";
}

TEST(Simulate, noisy_single_mode_matches_gaussian_moments) {
    auto r = run_of({0.3, 0.2, 0.1, 1}, 1, 400000, 12);
    auto s = sample(simulate(r), 100);
    auto e = entries(analytic_moments(r)), m = entries(s.w);
    for (int i = 0; i < 9; ++i) EXPECT_NEAR(m[i], e[i], 3.5 * std::sqrt(s.cov(i, i))) << i;
}

TEST(Simulate, saturation_clips_counts) {
    auto r = run_of({1.0, 0, 0, 5}, 1, 10000, 3);
    r.detectors[0].saturation = 2;
    auto h = simulate(r);
    EXPECT_EQ(h.max_c1(), 2u);
    EXPECT_GT(h.max_c2(), 2u);
}
