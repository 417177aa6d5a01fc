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

#include "pnqc/moments.h"

#include <cmath>
#include <numeric>
#include <sstream>

#include "gtest/gtest.h"

#include "oracles.h"
#include "pnqc/error.h"
#include "pnqc/gaussian.h"
#include "pnqc/histogram_io.h"
#include "pnqc/rng.h"

using namespace pnqc;

namespace {

JointHistogram csv(const std::string &text) {
    std::istringstream in(text);
    return load_histogram(in, HistogramFormat::Csv);
}

ErrorKind kind_of(const std::function<void()> &fn) {
    try {
        fn();
    } catch (const Error &e) {
        return e.kind();
    }
    ADD_FAILURE() << "no error raised";
    return ErrorKind::Io;
}

JointDistribution random_distribution(Rng &rng, uint64_t n1, uint64_t n2) {
    std::vector<double> p((n1 + 1) * (n2 + 1));
    for (double &v : p) v = rng.uniform();
    double s = std::accumulate(p.begin(), p.end(), 0.0);
    for (double &v : p) v /= s;
    return JointDistribution(n1, n2, p);
}

IntensityMoments thermal_single_mode(double B) {
    IntensityMoments w;
    for (int k = 0; k <= 4; ++k) w(k, 0) = std::tgamma(k + 1.0) * std::pow(B, k);
    return w;
}

void expect_tables_near(const IntensityMoments &a, const IntensityMoments &b, double tol) {
    for (int k = 0; k <= 4; ++k)
        for (int l = 0; k + l <= 4; ++l)
            EXPECT_NEAR(a(k, l), b(k, l), tol * std::max(1.0, std::abs(b(k, l)))) << "k=" << k << " l=" << l;
}

}  // namespace

TEST(MomentTable, rejects_orders_above_four) {
    EXPECT_EQ(kind_of([] { IntensityMoments w(5); }), ErrorKind::InvalidArgument);
    IntensityMoments w;
    EXPECT_EQ(w(0, 0), 1.0);
    EXPECT_EQ(JointCumulants()(0, 0), 0.0);
    EXPECT_EQ(kind_of([&] { (void)w(3, 2); }), ErrorKind::InvalidArgument);
    EXPECT_EQ(moment_key(2, 1), "2,1");
}

TEST(LoadHistogram, single_cell) {
    auto h = csv("c1,c2,count\n0,0,10\n");
    EXPECT_EQ(h.total_shots(), 10u);
    EXPECT_EQ(h.cells().size(), 1u);
}

TEST(LoadHistogram, rows_add) {
    auto h = csv("c1,c2,count\n1,2,5\n2,1,5\n");
    EXPECT_EQ(h.total_shots(), 10u);
    EXPECT_EQ(h.cells().size(), 2u);
    EXPECT_EQ(h.count(2, 1), 5u);
}

TEST(LoadHistogram, negative_count_is_parse_error) {
    EXPECT_EQ(kind_of([] { csv("c1,c2,count\n0,0,-3\n"); }), ErrorKind::Parse);
}

TEST(LoadHistogram, truncated_row_names_the_line) {
    try {
        csv("# comment\nc1,c2,count\n0,0,4\n1,2\n");
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.kind(), ErrorKind::Parse);
        EXPECT_NE(std::string(e.what()).find("line 4"), std::string::npos) << e.what();
    }
}

TEST(LoadHistogram, zero_total_is_empty_data) {
    EXPECT_EQ(kind_of([] { csv("c1,c2,count\n0,0,0\n"); }), ErrorKind::EmptyData);
    EXPECT_EQ(kind_of([] { csv("c1,c2,count\n"); }), ErrorKind::EmptyData);
}

TEST(LoadHistogram, json_round_trip) {
    JointHistogram h({{0, 0, 3}, {2, 1, 4}}, 5);
    std::istringstream in(histogram_to_json(h).dump());
    EXPECT_EQ(load_histogram(in, HistogramFormat::Json), h);
    std::istringstream bad(R"({"counts": [[0, 0, -1]]})");
    EXPECT_EQ(kind_of([&] { load_histogram(bad, HistogramFormat::Json); }), ErrorKind::Parse);
}

TEST(LoadHistogram, csv_round_trip) {
    JointHistogram h({{0, 0, 3}, {2, 1, 4}, {7, 0, 1}});
    std::ostringstream out;
    write_histogram_csv(out, h, {"note"});
    EXPECT_EQ(csv(out.str()), h);
}

TEST(GroupWindows, two_shot_sum) {
    std::vector<Shot> shots{{1, 0}, {0, 1}};
    auto h = group_windows(shots, 2);
    EXPECT_EQ(h.total_shots(), 1u);
    EXPECT_EQ(h.count(1, 1), 1u);
    EXPECT_EQ(h.window_group(), 2u);
}

TEST(GroupWindows, identity_for_n_one) {
    std::vector<Shot> shots{{1, 1}};
    EXPECT_EQ(group_windows(shots, 1), histogram_from_shots(shots));
}

TEST(GroupWindows, zero_n_and_short_stream) {
    std::vector<Shot> shots{{1, 1}};
    EXPECT_EQ(kind_of([&] { group_windows(shots, 0); }), ErrorKind::InvalidN);
    EXPECT_EQ(kind_of([&] { group_windows(shots, 2); }), ErrorKind::EmptyData);
}

TEST(GroupWindows, trailing_block_dropped) {
    std::vector<Shot> shots{{1, 0}, {1, 0}, {1, 0}};
    auto g = group_shots(shots, 2);
    ASSERT_EQ(g.size(), 1u);
    EXPECT_EQ(g[0], (Shot{2, 0}));
}

TEST(GroupWindows, nested_grouping_composes) {
    Rng rng(11);
    std::vector<Shot> shots(6000);
    for (auto &s : shots) s = {rng.poisson(0.3), rng.poisson(0.7)};
    EXPECT_EQ(group_shots(shots, 6), group_shots(group_shots(shots, 2), 3));
    EXPECT_EQ(group_windows(shots, 6).cells(), histogram_from_shots(group_shots(group_shots(shots, 3), 2)).cells());
}

TEST(GroupWindows, compound_means_add) {
    Rng rng(5);
    std::vector<Shot> shots(100000);
    for (auto &s : shots) {
        uint64_t pair = rng.bose_einstein(0.1);
        s = {pair, pair};
    }
    auto h = group_windows(shots, 10);
    auto est = intensity_moments_from_histogram(h, {.resamples = 100, .seed = 3, .threads = 1});
    EXPECT_NEAR(est.w(1, 0), 1.0, 3 * est.se(1, 0));
    EXPECT_NEAR(est.w(0, 1), 1.0, 3 * est.se(0, 1));
}

TEST(RawMoments, vacuum_and_point_mass) {
    auto vac = raw_moments(JointDistribution(0, 0, {1.0}));
    EXPECT_EQ(vac(1, 0), 0.0);
    EXPECT_EQ(vac(2, 2), 0.0);
    std::vector<double> p(2 * 3, 0.0);
    p[1 * 3 + 2] = 1.0;
    auto m = raw_moments(JointDistribution(1, 2, p));
    EXPECT_EQ(m(1, 0), 1);
    EXPECT_EQ(m(0, 1), 2);
    EXPECT_EQ(m(1, 1), 2);
    EXPECT_EQ(m(2, 0), 1);
    EXPECT_EQ(m(0, 2), 4);
}

TEST(RawMoments, poisson_second_moment) {
    auto pmf = oracle::poisson_pmf(1.0, 30);
    double s = std::accumulate(pmf.begin(), pmf.end(), 0.0);
    for (double &v : pmf) v /= s;
    auto m = raw_moments(JointDistribution(30, 0, pmf));
    EXPECT_NEAR(m(2, 0), 2.0, 1e-9);
}

TEST(JointDistributionTest, validates_entries) {
    EXPECT_THROW(JointDistribution(0, 1, {0.7, 0.7}), Error);
    EXPECT_THROW(JointDistribution(0, 1, {-0.1, 1.1}), Error);
}

TEST(IntensityMomentsTest, stirling_numbers) {
    EXPECT_EQ(stirling_first(4, 1), -6);
    EXPECT_EQ(stirling_first(4, 2), 11);
    EXPECT_EQ(stirling_first(4, 3), -6);
    EXPECT_EQ(stirling_first(3, 1), 2);
    EXPECT_EQ(falling_factorial(5, 3), 60);
}

TEST(IntensityMomentsTest, vacuum_and_delta) {
    auto w = to_intensity_moments(raw_moments(JointDistribution(0, 0, {1.0})));
    EXPECT_EQ(w(1, 1), 0.0);
    std::vector<double> p(4, 0.0);
    p[3] = 1.0;
    auto d = to_intensity_moments(raw_moments(JointDistribution(1, 1, p)));
    EXPECT_EQ(d(1, 1), 1.0);
    EXPECT_EQ(d(2, 0), 0.0);
}

TEST(IntensityMomentsTest, poisson_factorial_moments) {
    const double mu = 1.7;
    auto pmf = oracle::poisson_pmf(mu, 60);
    auto w = to_intensity_moments(raw_moments(JointDistribution(60, 0, pmf)));
    for (int k = 1; k <= 4; ++k) EXPECT_NEAR(w(k, 0), std::pow(mu, k), 1e-9);
}

TEST(IntensityMomentsTest, matches_direct_falling_factorials) {
    Rng rng(99);
    for (int trial = 0; trial < 100; ++trial) {
        auto d = random_distribution(rng, 9, 9);
        expect_tables_near(to_intensity_moments(raw_moments(d)), oracle::factorial_moments(d), 1e-10);
    }
}

TEST(SampleMoments, single_shot) {
    JointHistogram h({{2, 0, 1}});
    auto est = intensity_moments_from_histogram(h);
    EXPECT_EQ(est.w(2, 0), 2.0);
    EXPECT_EQ(est.w(1, 0), 2.0);
}

TEST(SampleMoments, vacuum_has_zero_errors) {
    auto est = intensity_moments_from_histogram(JointHistogram({{0, 0, 1000}}), {.resamples = 50});
    for (int k = 0; k <= 4; ++k)
        for (int l = 0; k + l <= 4; ++l) {
            if (k + l == 0) continue;
            EXPECT_EQ(est.w(k, l), 0.0);
            EXPECT_EQ(est.se(k, l), 0.0);
        }
}

TEST(SampleMoments, coherent_light) {
    Rng rng(2024);
    std::vector<Shot> shots(1000000);
    for (auto &s : shots) s = {rng.poisson(1.0), 0};
    auto est = intensity_moments_from_histogram(histogram_from_shots(shots), {.resamples = 200, .seed = 1});
    EXPECT_GT(est.se(2, 0), 0);
    EXPECT_NEAR(est.w(2, 0), 1.0, 3 * est.se(2, 0));
}

TEST(SampleMoments, bootstrap_independent_of_threads) {
    Rng rng(8);
    std::vector<Shot> shots(20000);
    for (auto &s : shots) s = {rng.poisson(0.8), rng.bose_einstein(0.5)};
    auto h = histogram_from_shots(shots);
    auto a = intensity_moments_from_histogram(h, {.resamples = 40, .seed = 9, .threads = 1});
    auto b = intensity_moments_from_histogram(h, {.resamples = 40, .seed = 9, .threads = 4});
    EXPECT_EQ(a.se, b.se);
}

TEST(ReduceModes, identity_for_one_mode) {
    auto w = forward_moments(random_physical_state(3, 1.0));
    EXPECT_EQ(reduce_per_mode(w, 1), w);
    EXPECT_EQ(kind_of([&] { reduce_per_mode(w, 0.5); }), ErrorKind::BadModeCount);
}

TEST(ReduceModes, two_thermal_modes) {
    const double B = 0.4;
    IntensityMoments single = thermal_single_mode(B);
    IntensityMoments two = oracle::convolve(single, single);
    EXPECT_NEAR(two(1, 0), 2 * B, 1e-12);
    EXPECT_NEAR(two(2, 0), 2 * (2 * B * B) + 2 * B * B, 1e-12);
    auto back = reduce_per_mode(two, 2);
    EXPECT_NEAR(back(1, 0), B, 1e-12);
    EXPECT_NEAR(back(2, 0), 2 * B * B, 1e-12);
}

TEST(ReduceModes, vacuum_stays_vacuum) {
    IntensityMoments vac;
    EXPECT_EQ(reduce_per_mode(vac, 7.5), vac);
}

TEST(ReduceModes, inverse_of_composition) {
    for (int trial = 0; trial < 100; ++trial) {
        auto w = forward_moments(random_physical_state(1000 + trial, 1.0));
        for (double M : {1.0, 2.0, 5.0, 10.0}) {
            expect_tables_near(reduce_per_mode(compose_iid(w, M), M), w, 1e-9);
        }
    }
}

TEST(ReduceModes, composition_matches_convolution) {
    auto w = forward_moments(random_physical_state(77, 0.8));
    IntensityMoments sum = w;
    for (int i = 1; i < 3; ++i) sum = oracle::convolve(sum, w);
    expect_tables_near(compose_iid(w, 3), sum, 1e-12);
    expect_tables_near(combine_independent(w, w), oracle::convolve(w, w), 1e-12);
}

TEST(EstimateModes, thermal_and_composed) {
    auto w = thermal_single_mode(0.7);
    EXPECT_NEAR(estimate_modes(w, Beam::One), 1.0, 1e-12);
    EXPECT_NEAR(estimate_modes(compose_iid(w, 6), Beam::One), 6.0, 1e-9);
    auto tb = forward_moments(params_of_twin_beam({0.3, 0, 0, 1}));
    EXPECT_NEAR(estimate_modes(compose_iid(tb, 4), Beam::Two), 4.0, 1e-9);
}

TEST(EstimateModes, poisson_is_degenerate) {
    IntensityMoments w;
    for (int k = 0; k <= 4; ++k) w(k, 0) = std::pow(1.3, k);
    EXPECT_EQ(kind_of([&] { estimate_modes(w, Beam::One); }), ErrorKind::DegenerateVariance);
}

TEST(MergeBeams, vacuum_and_twin_beam) {
    auto vac = merge_beams(IntensityMoments());
    for (int k = 1; k <= 4; ++k) EXPECT_EQ(vac[k], 0.0);
    auto merged = merge_beams(forward_moments(params_of_twin_beam({0.5, 0, 0, 1})));
    EXPECT_NEAR(merged[1], 1.0, 1e-12);
    EXPECT_NEAR(merged[2], 3.0, 1e-12);
}

TEST(MergeBeams, uncorrelated_and_poisson) {
    IntensityMoments w;
    const double a = 0.6, b = 1.1;
    for (int k = 0; k <= 4; ++k)
        for (int l = 0; k + l <= 4; ++l) w(k, l) = std::pow(a, k) * std::pow(b, l);
    auto m = merge_beams(w);
    EXPECT_NEAR(m[2], w(2, 0) + 2 * w(1, 0) * w(0, 1) + w(0, 2), 1e-12);
    for (int k = 1; k <= 4; ++k) EXPECT_NEAR(m[k], std::pow(a + b, k), 1e-12);
}

TEST(ShannonEntropy, examples) {
    EXPECT_EQ(shannon_entropy(JointDistribution(1, 1, {0, 0, 1, 0})), 0.0);
    EXPECT_NEAR(shannon_entropy(JointDistribution(1, 1, {0.25, 0.25, 0.25, 0.25})), std::log(4.0), 1e-15);
    auto pmf = oracle::thermal_pmf(1.0, 200);
    EXPECT_NEAR(shannon_entropy(JointDistribution(200, 0, pmf)), 2 * std::log(2.0), 1e-6);
}

TEST(UndoDetection, inverts_loss_and_dark_counts) {
    auto w = forward_moments(random_physical_state(12, 1.0));
    IntensityMoments detected = w;
    const double e1 = 0.6, e2 = 0.8;
    for (int k = 0; k <= 4; ++k)
        for (int l = 0; k + l <= 4; ++l) detected(k, l) *= std::pow(e1, k) * std::pow(e2, l);
    IntensityMoments dark;
    for (int k = 0; k <= 4; ++k)
        for (int l = 0; k + l <= 4; ++l) dark(k, l) = std::pow(0.05, k) * std::pow(0.02, l);
    detected = oracle::convolve(detected, dark);
    expect_tables_near(undo_detection(detected, {e1, e2}, {0.05, 0.02}), w, 1e-10);
    EXPECT_EQ(kind_of([&] { undo_detection(w, {0.0, 1.0}, {0, 0}); }), ErrorKind::BadEfficiency);
}
