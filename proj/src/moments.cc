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

#include <fmt/format.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <map>

#include "pnqc/error.h"
#include "pnqc/parallel.h"
#include "pnqc/rng.h"

namespace pnqc {

JointHistogram::JointHistogram(std::vector<HistogramCell> cells, uint64_t window_group)
    : window_group_(window_group) {
    if (window_group == 0) {
        throw Error(ErrorKind::InvalidN, "window group must be positive");
    }
    std::sort(cells.begin(), cells.end(), [](const HistogramCell &a, const HistogramCell &b) {
        return std::pair(a.c1, a.c2) < std::pair(b.c1, b.c2);
    });
    for (const auto &cell : cells) {
        if (cell.count == 0) {
            continue;
        }
        if (!cells_.empty() && cells_.back().c1 == cell.c1 && cells_.back().c2 == cell.c2) {
            cells_.back().count += cell.count;
        } else {
            cells_.push_back(cell);
        }
        total_ += cell.count;
    }
    if (total_ == 0) {
        throw Error(ErrorKind::EmptyData, "histogram holds zero shots");
    }
}

uint64_t JointHistogram::count(uint64_t c1, uint64_t c2) const {
    auto it = std::lower_bound(cells_.begin(), cells_.end(), std::pair(c1, c2),
                               [](const HistogramCell &a, const std::pair<uint64_t, uint64_t> &key) {
                                   return std::pair(a.c1, a.c2) < key;
                               });
    if (it != cells_.end() && it->c1 == c1 && it->c2 == c2) {
        return it->count;
    }
    return 0;
}

uint64_t JointHistogram::max_c1() const {
    return cells_.back().c1;
}

uint64_t JointHistogram::max_c2() const {
    uint64_t m = 0;
    for (const auto &cell : cells_) {
        m = std::max(m, cell.c2);
    }
    return m;
}

JointDistribution::JointDistribution(uint64_t n1_max, uint64_t n2_max, std::vector<double> p)
    : n1_max_(n1_max), n2_max_(n2_max), p_(std::move(p)) {
    if (p_.size() != (n1_max + 1) * (n2_max + 1)) {
        throw Error(ErrorKind::InvalidArgument,
                    fmt::format("distribution needs {} entries, got {}", (n1_max + 1) * (n2_max + 1), p_.size()));
    }
    double sum = 0;
    for (double v : p_) {
        if (!(v >= 0.0 && v <= 1.0)) {
            throw Error(ErrorKind::InvalidArgument, "probabilities must lie in [0, 1]", v);
        }
        sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-9) {
        throw Error(ErrorKind::InvalidArgument, "probabilities must sum to 1", sum);
    }
}

JointHistogram histogram_from_shots(std::span<const Shot> shots, uint64_t window_group) {
    std::map<std::pair<uint64_t, uint64_t>, uint64_t> counts;
    for (const auto &s : shots) {
        ++counts[{s.c1, s.c2}];
    }
    std::vector<HistogramCell> cells;
    cells.reserve(counts.size());
    for (const auto &[key, n] : counts) {
        cells.push_back({key.first, key.second, n});
    }
    return JointHistogram(std::move(cells), window_group);
}

std::vector<Shot> group_shots(std::span<const Shot> shots, uint64_t n) {
    if (n == 0) {
        throw Error(ErrorKind::InvalidN, "window group N must be positive");
    }
    std::vector<Shot> grouped;
    grouped.reserve(shots.size() / n);
    for (size_t start = 0; start + n <= shots.size(); start += n) {
        Shot sum;
        for (size_t i = start; i < start + n; ++i) {
            sum.c1 += shots[i].c1;
            sum.c2 += shots[i].c2;
        }
        grouped.push_back(sum);
    }
    return grouped;
}

JointHistogram group_windows(std::span<const Shot> shots, uint64_t n) {
    auto grouped = group_shots(shots, n);
    if (grouped.empty()) {
        throw Error(ErrorKind::EmptyData, fmt::format("fewer than N = {} shots", n));
    }
    return histogram_from_shots(grouped, n);
}

JointDistribution normalized(const JointHistogram &hist) {
    const uint64_t n1 = hist.max_c1(), n2 = hist.max_c2();
    std::vector<double> p((n1 + 1) * (n2 + 1), 0.0);
    const double total = static_cast<double>(hist.total_shots());
    for (const auto &cell : hist.cells()) {
        p[cell.c1 * (n2 + 1) + cell.c2] = static_cast<double>(cell.count) / total;
    }
    return JointDistribution(n1, n2, std::move(p));
}

double falling_factorial(double n, int k) {
    double r = 1.0;
    for (int i = 0; i < k; ++i) {
        r *= n - i;
    }
    return r;
}

int64_t stirling_first(int n, int k) {
    if (n < 0 || k < 0 || n > kMaxMomentOrder) {
        throw Error(ErrorKind::InvalidArgument, fmt::format("s({},{}) outside table", n, k));
    }
    // s(n+1, k) = s(n, k-1) - n s(n, k)
    std::array<std::array<int64_t, kMaxMomentOrder + 1>, kMaxMomentOrder + 1> s{};
    s[0][0] = 1;
    for (int i = 0; i < kMaxMomentOrder; ++i) {
        for (int j = 0; j <= i + 1; ++j) {
            s[i + 1][j] = (j > 0 ? s[i][j - 1] : 0) - i * s[i][j];
        }
    }
    return k > n ? 0 : s[n][k];
}

PhotonNumberMoments raw_moments(const JointDistribution &dist, int max_order) {
    PhotonNumberMoments m(max_order);
    for (int k = 0; k <= max_order; ++k) {
        for (int l = 0; k + l <= max_order; ++l) {
            double sum = 0;
            for (uint64_t n1 = 0; n1 <= dist.n1_max(); ++n1) {
                double a = std::pow(static_cast<double>(n1), k);
                for (uint64_t n2 = 0; n2 <= dist.n2_max(); ++n2) {
                    sum += a * std::pow(static_cast<double>(n2), l) * dist(n1, n2);
                }
            }
            m(k, l) = sum;
        }
    }
    return m;
}

IntensityMoments to_intensity_moments(const PhotonNumberMoments &m) {
    IntensityMoments w(m.max_order());
    for (int k = 0; k <= m.max_order(); ++k) {
        for (int l = 0; k + l <= m.max_order(); ++l) {
            double sum = 0;
            for (int i = 0; i <= k; ++i) {
                for (int j = 0; j <= l; ++j) {
                    sum += static_cast<double>(stirling_first(k, i) * stirling_first(l, j)) * m(i, j);
                }
            }
            w(k, l) = sum;
        }
    }
    return w;
}

IntensityMoments sample_intensity_moments(const JointHistogram &hist, int max_order) {
    IntensityMoments w(max_order);
    const double total = static_cast<double>(hist.total_shots());
    for (int k = 0; k <= max_order; ++k) {
        for (int l = 0; k + l <= max_order; ++l) {
            if (k + l == 0) {
                continue;
            }
            double sum = 0;
            for (const auto &cell : hist.cells()) {
                sum += falling_factorial(static_cast<double>(cell.c1), k) *
                       falling_factorial(static_cast<double>(cell.c2), l) * static_cast<double>(cell.count);
            }
            w(k, l) = sum / total;
        }
    }
    return w;
}

std::vector<std::vector<double>> bootstrap(const JointHistogram &hist, const BootstrapOptions &options,
                                           const std::function<std::vector<double>(const JointHistogram &)> &statistic) {
    const auto &cells = hist.cells();
    std::vector<double> weights;
    weights.reserve(cells.size());
    for (const auto &cell : cells) {
        weights.push_back(static_cast<double>(cell.count));
    }
    const AliasTable table(weights);
    std::vector<std::vector<double>> results(options.resamples);
    unsigned threads = options.threads == 0 ? default_thread_count() : options.threads;
    parallel_for(options.resamples, threads, [&](size_t i) {
        Rng rng(derive_seed(options.seed, i));
        std::vector<uint64_t> counts(cells.size(), 0);
        for (uint64_t s = 0; s < hist.total_shots(); ++s) {
            ++counts[table.sample(rng)];
        }
        std::vector<HistogramCell> resampled;
        resampled.reserve(cells.size());
        for (size_t c = 0; c < cells.size(); ++c) {
            resampled.push_back({cells[c].c1, cells[c].c2, counts[c]});
        }
        try {
            results[i] = statistic(JointHistogram(std::move(resampled), hist.window_group()));
        } catch (const Error &) {
            results[i].clear();
        }
    });
    return results;
}

std::vector<double> bootstrap_standard_errors(const std::vector<std::vector<double>> &samples, size_t components) {
    std::vector<double> se(components, std::nan(""));
    for (size_t c = 0; c < components; ++c) {
        double sum = 0, sum_sq = 0;
        size_t n = 0;
        for (const auto &s : samples) {
            if (s.size() != components || std::isnan(s[c])) {
                continue;
            }
            sum += s[c];
            ++n;
        }
        if (n < 2) {
            continue;
        }
        double mean = sum / static_cast<double>(n);
        for (const auto &s : samples) {
            if (s.size() != components || std::isnan(s[c])) {
                continue;
            }
            sum_sq += (s[c] - mean) * (s[c] - mean);
        }
        se[c] = std::sqrt(sum_sq / static_cast<double>(n - 1));
    }
    return se;
}

namespace {

std::vector<double> flatten(const IntensityMoments &w) {
    std::vector<double> out;
    for (int k = 0; k <= w.max_order(); ++k) {
        for (int l = 0; k + l <= w.max_order(); ++l) {
            out.push_back(w(k, l));
        }
    }
    return out;
}

}  // namespace

MomentEstimate intensity_moments_from_histogram(const JointHistogram &hist, const BootstrapOptions &options) {
    MomentEstimate est{sample_intensity_moments(hist), MomentErrors()};
    if (options.resamples < 2) {
        return est;
    }
    auto samples = bootstrap(hist, options, [](const JointHistogram &h) { return flatten(sample_intensity_moments(h)); });
    auto se = bootstrap_standard_errors(samples, flatten(est.w).size());
    size_t idx = 0;
    for (int k = 0; k <= kMaxMomentOrder; ++k) {
        for (int l = 0; k + l <= kMaxMomentOrder; ++l) {
            est.se(k, l) = (k + l == 0) ? 0.0 : se[idx];
            ++idx;
        }
    }
    return est;
}

namespace {

// Truncated bivariate power series sum c[k][l] s^k t^l, k + l <= 4.
using Series = std::array<std::array<double, kMaxMomentOrder + 1>, kMaxMomentOrder + 1>;

Series multiply(const Series &a, const Series &b) {
    Series r{};
    for (int i = 0; i <= kMaxMomentOrder; ++i) {
        for (int j = 0; i + j <= kMaxMomentOrder; ++j) {
            for (int k = 0; i + j + k <= kMaxMomentOrder; ++k) {
                for (int l = 0; i + j + k + l <= kMaxMomentOrder; ++l) {
                    r[i + k][j + l] += a[i][j] * b[k][l];
                }
            }
        }
    }
    return r;
}

double factorial(int n) {
    double r = 1;
    for (int i = 2; i <= n; ++i) {
        r *= i;
    }
    return r;
}

// Applies sum_{n>=1} coeff[n] g^n to a series g with zero constant term.
Series compose(const Series &g, const std::array<double, kMaxMomentOrder + 1> &coeff) {
    Series result{};
    Series power = g;
    for (int n = 1; n <= kMaxMomentOrder; ++n) {
        for (int i = 0; i <= kMaxMomentOrder; ++i) {
            for (int j = 0; i + j <= kMaxMomentOrder; ++j) {
                result[i][j] += coeff[n] * power[i][j];
            }
        }
        power = multiply(power, g);
    }
    return result;
}

}  // namespace

JointCumulants to_cumulants(const IntensityMoments &w) {
    // The moment generating function is 1 + g; cumulants are the
    // coefficients of log(1 + g) = g - g^2/2 + g^3/3 - g^4/4.
    Series g{};
    for (int k = 0; k <= w.max_order(); ++k) {
        for (int l = 0; k + l <= w.max_order(); ++l) {
            if (k + l > 0) {
                g[k][l] = w(k, l) / (factorial(k) * factorial(l));
            }
        }
    }
    Series log_series = compose(g, {0.0, 1.0, -1.0 / 2, 1.0 / 3, -1.0 / 4});
    JointCumulants kappa(w.max_order());
    for (int k = 0; k <= w.max_order(); ++k) {
        for (int l = 0; k + l <= w.max_order(); ++l) {
            if (k + l > 0) {
                kappa(k, l) = log_series[k][l] * factorial(k) * factorial(l);
            }
        }
    }
    return kappa;
}

IntensityMoments from_cumulants(const JointCumulants &kappa) {
    Series h{};
    for (int k = 0; k <= kappa.max_order(); ++k) {
        for (int l = 0; k + l <= kappa.max_order(); ++l) {
            if (k + l > 0) {
                h[k][l] = kappa(k, l) / (factorial(k) * factorial(l));
            }
        }
    }
    Series exp_series = compose(h, {0.0, 1.0, 1.0 / 2, 1.0 / 6, 1.0 / 24});
    IntensityMoments w(kappa.max_order());
    for (int k = 0; k <= kappa.max_order(); ++k) {
        for (int l = 0; k + l <= kappa.max_order(); ++l) {
            if (k + l > 0) {
                w(k, l) = exp_series[k][l] * factorial(k) * factorial(l);
            }
        }
    }
    return w;
}

namespace {

IntensityMoments scale_cumulants(const IntensityMoments &w, double factor) {
    JointCumulants kappa = to_cumulants(w);
    for (int k = 0; k <= kappa.max_order(); ++k) {
        for (int l = 0; k + l <= kappa.max_order(); ++l) {
            kappa(k, l) *= factor;
        }
    }
    return from_cumulants(kappa);
}

}  // namespace

IntensityMoments compose_iid(const IntensityMoments &w, double m) {
    if (!(m > 0)) {
        throw Error(ErrorKind::BadModeCount, "mode count must be positive", m);
    }
    return scale_cumulants(w, m);
}

IntensityMoments reduce_per_mode(const IntensityMoments &w, double m) {
    if (!(m >= 1.0)) {
        throw Error(ErrorKind::BadModeCount, "mode count must be at least 1", m);
    }
    if (m == 1.0) {
        return w;
    }
    return scale_cumulants(w, 1.0 / m);
}

IntensityMoments combine_independent(const IntensityMoments &a, const IntensityMoments &b) {
    const int order = std::min(a.max_order(), b.max_order());
    JointCumulants ka = to_cumulants(a), kb = to_cumulants(b), sum(order);
    for (int k = 0; k <= order; ++k) {
        for (int l = 0; k + l <= order; ++l) {
            sum(k, l) = ka(k, l) + kb(k, l);
        }
    }
    return from_cumulants(sum);
}

double estimate_modes(const IntensityMoments &w, Beam beam) {
    double numerator = 0, denominator = 0;
    switch (beam) {
        case Beam::One:
            numerator = w(1, 0) * w(1, 0);
            denominator = w(2, 0) - numerator;
            break;
        case Beam::Two:
            numerator = w(0, 1) * w(0, 1);
            denominator = w(0, 2) - numerator;
            break;
        case Beam::Joint:
            numerator = w(1, 0) * w(0, 1);
            denominator = w(1, 1) - numerator;
            break;
    }
    if (!(denominator > 0)) {
        throw Error(ErrorKind::DegenerateVariance, "normally-ordered variance is not positive", denominator);
    }
    return numerator / denominator;
}

SingleBeamMoments beam_moments(const IntensityMoments &w, Beam beam) {
    if (beam == Beam::Joint) {
        throw Error(ErrorKind::InvalidArgument, "beam_moments needs beam 1 or 2");
    }
    SingleBeamMoments b;
    for (int k = 1; k <= w.max_order(); ++k) {
        b.w[k] = beam == Beam::One ? w(k, 0) : w(0, k);
    }
    return b;
}

SingleBeamMoments merge_beams(const IntensityMoments &w) {
    SingleBeamMoments b;
    for (int k = 1; k <= w.max_order(); ++k) {
        double sum = 0, binom = 1;
        for (int i = 0; i <= k; ++i) {
            sum += binom * w(i, k - i);
            binom = binom * (k - i) / (i + 1);
        }
        b.w[k] = sum;
    }
    return b;
}

double shannon_entropy(const JointDistribution &dist) {
    double s = 0;
    for (double p : dist.values()) {
        if (p > 0) {
            s -= p * std::log(p);
        }
    }
    return s;
}

IntensityMoments undo_detection(const IntensityMoments &counts, std::array<double, 2> efficiency,
                                std::array<double, 2> dark) {
    for (double eta : efficiency) {
        if (!(eta > 0.0 && eta <= 1.0)) {
            throw Error(ErrorKind::BadEfficiency, "efficiency must lie in (0, 1]", eta);
        }
    }
    for (double d : dark) {
        if (!(d >= 0.0)) {
            throw Error(ErrorKind::InvalidArgument, "dark-count mean must be nonnegative", d);
        }
    }
    JointCumulants kappa = to_cumulants(counts);
    if (counts.max_order() >= 1) {
        kappa(1, 0) -= dark[0];
        kappa(0, 1) -= dark[1];
    }
    IntensityMoments w = from_cumulants(kappa);
    for (int k = 0; k <= w.max_order(); ++k) {
        for (int l = 0; k + l <= w.max_order(); ++l) {
            w(k, l) /= std::pow(efficiency[0], k) * std::pow(efficiency[1], l);
        }
    }
    return w;
}

}  // namespace pnqc
