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

#ifndef PNQC_MOMENTS_H
#define PNQC_MOMENTS_H

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "pnqc/moment_table.h"

namespace pnqc {

/// Photocounts (c1, c2) registered in one detection window.
struct Shot {
    uint64_t c1 = 0;
    uint64_t c2 = 0;
    bool operator==(const Shot &) const = default;
};

struct HistogramCell {
    uint64_t c1 = 0;
    uint64_t c2 = 0;
    uint64_t count = 0;
    bool operator==(const HistogramCell &) const = default;
};

/// Empirical joint photocount histogram. Stored sparsely: nonzero cells
/// sorted by (c1, c2), each pair appearing once.
class JointHistogram {
   public:
    /// Merges duplicate cells and drops zero counts. Throws EmptyData when no
    /// shots remain and InvalidN when window_group is 0.
    JointHistogram(std::vector<HistogramCell> cells, uint64_t window_group = 1);

    const std::vector<HistogramCell> &cells() const {
        return cells_;
    }
    uint64_t total_shots() const {
        return total_;
    }
    uint64_t window_group() const {
        return window_group_;
    }
    uint64_t count(uint64_t c1, uint64_t c2) const;
    uint64_t max_c1() const;
    uint64_t max_c2() const;

    bool operator==(const JointHistogram &) const = default;

   private:
    std::vector<HistogramCell> cells_;
    uint64_t total_ = 0;
    uint64_t window_group_ = 1;
};

/// Normalized joint photon-number distribution p(n1, n2) on [0, N1] x [0, N2],
/// row-major in n1.
class JointDistribution {
   public:
    /// Validates entries in [0, 1] and unit sum within 1e-9.
    JointDistribution(uint64_t n1_max, uint64_t n2_max, std::vector<double> p);

    uint64_t n1_max() const {
        return n1_max_;
    }
    uint64_t n2_max() const {
        return n2_max_;
    }
    double operator()(uint64_t n1, uint64_t n2) const {
        return p_[n1 * (n2_max_ + 1) + n2];
    }
    const std::vector<double> &values() const {
        return p_;
    }

   private:
    uint64_t n1_max_;
    uint64_t n2_max_;
    std::vector<double> p_;
};

JointHistogram histogram_from_shots(std::span<const Shot> shots, uint64_t window_group = 1);

/// Sums consecutive non-overlapping blocks of n shots; a trailing partial block is dropped.
std::vector<Shot> group_shots(std::span<const Shot> shots, uint64_t n);

/// Histogram of compound shots built from blocks of n detection windows.
JointHistogram group_windows(std::span<const Shot> shots, uint64_t n);

/// Relative frequencies of the histogram on [0, max c1] x [0, max c2].
JointDistribution normalized(const JointHistogram &hist);

/// n (n - 1) ... (n - k + 1).
double falling_factorial(double n, int k);

/// Signed Stirling number of the first kind s(n, k), n <= kMaxMomentOrder.
int64_t stirling_first(int n, int k);

PhotonNumberMoments raw_moments(const JointDistribution &dist, int max_order = kMaxMomentOrder);

/// Falling-factorial moments via Stirling numbers: w(k,l) = sum s(k,i) s(l,j) m(i,j).
IntensityMoments to_intensity_moments(const PhotonNumberMoments &m);

/// Unbiased per-shot falling-factorial averages over the histogram.
IntensityMoments sample_intensity_moments(const JointHistogram &hist, int max_order = kMaxMomentOrder);

struct BootstrapOptions {
    size_t resamples = 200;
    uint64_t seed = 0x5eed;
    unsigned threads = 0;  // 0: hardware concurrency
};

/// Draws `resamples` multinomial resamples of `hist` (same total) and applies
/// `statistic` to each. Resample i uses its own generator seeded from
/// (seed, i), so results do not depend on the thread count. A statistic that
/// throws yields an empty vector for that resample.
std::vector<std::vector<double>> bootstrap(const JointHistogram &hist, const BootstrapOptions &options,
                                           const std::function<std::vector<double>(const JointHistogram &)> &statistic);

/// Sample standard deviation per component over the non-empty resamples.
/// Components that are NaN in a resample are skipped for that component.
std::vector<double> bootstrap_standard_errors(const std::vector<std::vector<double>> &samples, size_t components);

struct MomentEstimate {
    IntensityMoments w;
    MomentErrors se;
};

/// Sample intensity moments with bootstrap standard errors. Throws EmptyData
/// only through histogram construction (a histogram always holds shots).
MomentEstimate intensity_moments_from_histogram(const JointHistogram &hist, const BootstrapOptions &options = {});

/// Joint cumulants of total order <= 4 from the moments.
JointCumulants to_cumulants(const IntensityMoments &w);
IntensityMoments from_cumulants(const JointCumulants &kappa);

/// Moments of the sum of m iid copies (cumulants scale by m). m is real so
/// that the map is the exact inverse of reduce_per_mode.
IntensityMoments compose_iid(const IntensityMoments &w, double m);

/// Per-mode moments of an m-mode field of identical independent modes.
/// Throws BadModeCount when m < 1.
IntensityMoments reduce_per_mode(const IntensityMoments &w, double m);

/// Moments of independent fields add through their cumulants.
IntensityMoments combine_independent(const IntensityMoments &a, const IntensityMoments &b);

/// Photon intensity moments from detected-count moments under binomial loss
/// and Poissonian dark counts: the dark means leave the first cumulants, then
/// w(k, l) is divided by eta1^k eta2^l. Throws BadEfficiency for eta outside
/// (0, 1] and InvalidArgument for negative dark means.
IntensityMoments undo_detection(const IntensityMoments &counts, std::array<double, 2> efficiency,
                                std::array<double, 2> dark);

enum class Beam { One, Two, Joint };

/// Multithermal mode-number estimate <W>^2 / (<W^2> - <W>^2), or the
/// cross-correlation version for Beam::Joint. Throws DegenerateVariance.
double estimate_modes(const IntensityMoments &w, Beam beam);

/// Moments of one beam alone (beam must be One or Two).
SingleBeamMoments beam_moments(const IntensityMoments &w, Beam beam);

/// Moments of W = W1 + W2 by binomial expansion.
SingleBeamMoments merge_beams(const IntensityMoments &w);

/// -sum p ln p with 0 ln 0 = 0.
double shannon_entropy(const JointDistribution &dist);

}  // namespace pnqc

#endif
