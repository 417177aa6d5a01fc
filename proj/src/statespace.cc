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

#include "pnqc/statespace.h"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

#include "pnqc/error.h"
#include "pnqc/gaussian.h"
#include "pnqc/parallel.h"
#include "pnqc/quantifiers.h"
#include "pnqc/rng.h"

namespace pnqc {

std::vector<double> linspace(double lo, double hi, int n) {
    std::vector<double> v;
    if (n == 1) {
        v.push_back(lo);
        return v;
    }
    for (int i = 0; i < n; ++i) {
        v.push_back(i == n - 1 ? hi : lo + (hi - lo) * i / (n - 1));
    }
    return v;
}

void validate(const RatioGrid &grid) {
    for (const auto *axis : {&grid.r1_values, &grid.r2_values}) {
        if (axis->empty()) {
            throw Error(ErrorKind::InvalidArgument, "ratio axis is empty");
        }
        for (size_t i = 0; i < axis->size(); ++i) {
            if (!((*axis)[i] > 0)) {
                throw Error(ErrorKind::InvalidArgument, "ratios must be positive", (*axis)[i]);
            }
            if (i > 0 && !((*axis)[i] > (*axis)[i - 1])) {
                throw Error(ErrorKind::InvalidArgument, "ratio axis must be strictly ascending", (*axis)[i]);
            }
        }
    }
    if (grid.mu_samples < 1 || grid.delta_samples < 1) {
        throw Error(ErrorKind::InvalidArgument, "sample counts must be positive");
    }
}

namespace {

// Stricter than from_purities alone: real correlations without tolerance,
// so bisected endpoints stay inside the admissible set.
bool admissible(double mu, double mu1, double mu2, double delta) {
    const double a = 1 / mu1, b = 1 / mu2;
    const double u = (delta - a * a - b * b) / 2;
    const double v = (a * a * b * b + u * u - 1 / (mu * mu)) / (a * b);
    if (v - 2 * std::abs(u) < 0) {
        return false;
    }
    try {
        from_purities(mu, mu1, mu2, delta);
        return true;
    } catch (const Error &) {
        return false;
    }
}

// Boundary between an admissible and an inadmissible seralian.
double bisect(double mu, double mu1, double mu2, double good, double bad) {
    const double tol = 1e-9 * std::max(1.0, std::abs(good));
    while (std::abs(bad - good) > tol) {
        double mid = 0.5 * (good + bad);
        (admissible(mu, mu1, mu2, mid) ? good : bad) = mid;
    }
    return good;
}

}  // namespace

std::optional<SeralianInterval> admissible_seralian(double mu, double mu1, double mu2) {
    // Physical states have 2 <= Delta = nu-^2 + nu+^2 <= 1 + det sigma.
    const double hi = 1 + 1 / (mu * mu);
    const double lo = 2.0;
    constexpr int kScan = 256;
    std::vector<double> probes = linspace(lo, hi, kScan + 1);
    int first = -1, last = -1;
    for (int i = 0; i <= kScan; ++i) {
        if (admissible(mu, mu1, mu2, probes[i])) {
            if (first < 0) {
                first = i;
            }
            last = i;
        } else if (first >= 0) {
            break;
        }
    }
    if (first < 0) {
        return std::nullopt;
    }
    SeralianInterval out;
    out.lo = first == 0 ? probes[0] : bisect(mu, mu1, mu2, probes[first], probes[first - 1]);
    out.hi = last == kScan ? probes[kScan] : bisect(mu, mu1, mu2, probes[last], probes[last + 1]);
    return out;
}

namespace {

AtlasCell sweep_cell(double r1, double r2, const RatioGrid &grid, const AtlasOptions &options, uint64_t cell_index) {
    AtlasCell cell;
    cell.r1 = r1;
    cell.r2 = r2;
    const double mu_max = std::min({1.0, r1, r2});
    const double mu_min = std::min(options.mu_min, mu_max);
    Rng rng(derive_seed(options.seed, cell_index));

    double e_sum = 0;
    for (int s = 0; s < grid.mu_samples; ++s) {
        const double mu = s == 0 ? mu_max : std::exp(rng.uniform(std::log(mu_min), std::log(mu_max)));
        const double mu1 = mu / r1, mu2 = mu / r2;
        auto interval = admissible_seralian(mu, mu1, mu2);
        if (!interval) {
            ++cell.n_rejected;
            continue;
        }
        ++cell.n_triples;
        const NegativityBounds bounds = negativity_bounds(mu, mu1, mu2);

        std::vector<double> exact;
        for (double delta : linspace(interval->lo, interval->hi, grid.delta_samples)) {
            CovMatrix c = [&] {
                try {
                    return from_purities(mu, mu1, mu2, delta);
                } catch (const Error &) {
                    return CovMatrix(Eigen::Matrix4d::Zero());
                }
            }();
            if (c.det() <= 0) {
                continue;
            }
            const double e = negativity_exact(c);
            exact.push_back(e);
            ++cell.n_physical;
            if (e > 0) {
                ++cell.n_entangled;
                e_sum += e;
            }
            cell.E_peak = std::max(cell.E_peak, e);
            // Against the purities the matrix actually has; rounding of the
            // entries shifts them slightly from the nominal triple.
            const PurityInvariants own = purity_invariants(c);
            const NegativityBounds own_bounds = negativity_bounds(own.mu, own.mu1, own.mu2);
            cell.max_bracket_violation =
                std::max({cell.max_bracket_violation, own_bounds.E_min - e, e - own_bounds.E_max});
        }
        if (exact.empty()) {
            continue;
        }
        if (bounds.E_max > 0) {
            double d = relative_error(bounds.E_min, bounds.E_max).value();
            cell.delta_max = std::max(cell.delta_max.value_or(0.0), d);
        }
        // Negativity is monotone in the seralian, so the endpoint pair spans every interior sample.
        const auto [lo_it, hi_it] = std::minmax_element(exact.begin(), exact.end());
        const double e_lo = std::min(exact.front(), exact.back()), e_hi = std::max(exact.front(), exact.back());
        if (auto d = relative_error(e_lo, e_hi)) {
            cell.delta_max_endpoints = std::max(cell.delta_max_endpoints.value_or(0.0), *d);
        }
        cell.max_interior_delta_excess =
            std::max({cell.max_interior_delta_excess, e_lo - *lo_it, *hi_it - e_hi});
    }
    if (cell.n_entangled > 0) {
        cell.E_av = e_sum / cell.n_entangled;
    } else {
        cell.delta_max.reset();
        cell.delta_max_endpoints.reset();
    }
    return cell;
}

}  // namespace

std::vector<AtlasCell> sweep_atlas(const RatioGrid &grid, const AtlasOptions &options) {
    validate(grid);
    const size_t n2 = grid.r2_values.size();
    std::vector<AtlasCell> cells(grid.r1_values.size() * n2);
    unsigned threads = options.threads == 0 ? default_thread_count() : options.threads;
    std::mutex progress_mutex;
    size_t done = 0;
    parallel_for(cells.size(), threads, [&](size_t idx) {
        cells[idx] = sweep_cell(grid.r1_values[idx / n2], grid.r2_values[idx % n2], grid, options, idx);
        if (options.progress) {
            std::lock_guard<std::mutex> lock(progress_mutex);
            options.progress(++done, cells.size());
        }
    });
    return cells;
}

namespace {

std::optional<double> crossing(double x0, std::optional<double> y0, double x1, std::optional<double> y1, double level) {
    if (!y0 || !y1 || *y0 == *y1) {
        return std::nullopt;
    }
    if ((*y0 - level) * (*y1 - level) > 0) {
        return std::nullopt;
    }
    return x0 + (level - *y0) * (x1 - x0) / (*y1 - *y0);
}

}  // namespace

ContourTable threshold_curves(const std::vector<AtlasCell> &atlas, const std::vector<double> &levels) {
    if (atlas.empty()) {
        throw Error(ErrorKind::InsufficientGrid, "atlas is empty");
    }
    std::vector<double> r1s, r2s;
    std::map<std::pair<double, double>, const AtlasCell *> lookup;
    for (const auto &c : atlas) {
        r1s.push_back(c.r1);
        r2s.push_back(c.r2);
        lookup[{c.r1, c.r2}] = &c;
    }
    for (auto *axis : {&r1s, &r2s}) {
        std::sort(axis->begin(), axis->end());
        axis->erase(std::unique(axis->begin(), axis->end()), axis->end());
    }
    auto delta_at = [&](double r1, double r2) -> std::optional<double> {
        auto it = lookup.find({r1, r2});
        return it == lookup.end() ? std::nullopt : it->second->delta_max;
    };

    ContourTable table;
    table.levels = levels;
    for (double level : levels) {
        size_t found = 0;
        for (double r2 : r2s) {
            for (size_t i = 0; i + 1 < r1s.size(); ++i) {
                if (auto x = crossing(r1s[i], delta_at(r1s[i], r2), r1s[i + 1], delta_at(r1s[i + 1], r2), level)) {
                    table.points.push_back({level, *x, r2});
                    ++found;
                }
            }
        }
        for (double r1 : r1s) {
            for (size_t j = 0; j + 1 < r2s.size(); ++j) {
                if (auto y = crossing(r2s[j], delta_at(r1, r2s[j]), r2s[j + 1], delta_at(r1, r2s[j + 1]), level)) {
                    table.points.push_back({level, r1, *y});
                    ++found;
                }
            }
        }
        std::optional<double> diag;
        if (r1s == r2s) {
            for (size_t i = 0; i + 1 < r1s.size() && !diag; ++i) {
                diag = crossing(r1s[i], delta_at(r1s[i], r1s[i]), r1s[i + 1], delta_at(r1s[i + 1], r1s[i + 1]), level);
            }
        }
        table.diagonal.push_back(diag);
        if (found == 0) {
            throw Error(ErrorKind::InsufficientGrid, fmt::format("no cell pair brackets delta = {}", level), level);
        }
    }
    return table;
}

}  // namespace pnqc
