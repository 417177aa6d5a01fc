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

#include "pnqc/rng.h"

#include <cmath>
#include <numeric>

#include "pnqc/error.h"

namespace pnqc {

uint64_t splitmix64(uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

uint64_t derive_seed(uint64_t seed, uint64_t index) {
    return splitmix64(splitmix64(seed) ^ index);
}

double Rng::uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::uniform_open0() {
    return (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53;
}

uint64_t Rng::below(uint64_t n) {
    // Lemire-style rejection keeps the draw unbiased.
    uint64_t threshold = (0 - n) % n;
    while (true) {
        uint64_t r = engine_();
        if (r >= threshold) {
            return r % n;
        }
    }
}

uint64_t Rng::bose_einstein(double mean) {
    if (mean <= 0) {
        return 0;
    }
    // P(n) = q^n (1 - q), q = mean / (1 + mean).
    double log_q = std::log(mean / (1.0 + mean));
    return static_cast<uint64_t>(std::floor(std::log(uniform_open0()) / log_q));
}

uint64_t Rng::poisson(double mean) {
    if (mean <= 0) {
        return 0;
    }
    double u = uniform();
    double p = std::exp(-mean);
    double cdf = p;
    uint64_t k = 0;
    while (u >= cdf) {
        ++k;
        p *= mean / static_cast<double>(k);
        cdf += p;
        if (p == 0 && cdf < u) {
            // Round-off left the cdf short of u; the tail mass is negligible.
            break;
        }
    }
    return k;
}

uint64_t Rng::binomial(uint64_t n, double p) {
    if (p >= 1) {
        return n;
    }
    uint64_t k = 0;
    for (uint64_t i = 0; i < n; ++i) {
        k += uniform() < p;
    }
    return k;
}

AliasTable::AliasTable(std::span<const double> weights) : prob_(weights.size()), alias_(weights.size()) {
    const size_t n = weights.size();
    double total = std::accumulate(weights.begin(), weights.end(), 0.0);
    if (n == 0 || !(total > 0)) {
        throw Error(ErrorKind::EmptyData, "alias table needs positive total weight");
    }
    std::vector<double> scaled(n);
    std::vector<size_t> small, large;
    for (size_t i = 0; i < n; ++i) {
        scaled[i] = weights[i] * static_cast<double>(n) / total;
        (scaled[i] < 1.0 ? small : large).push_back(i);
    }
    while (!small.empty() && !large.empty()) {
        size_t s = small.back();
        small.pop_back();
        size_t l = large.back();
        prob_[s] = scaled[s];
        alias_[s] = l;
        scaled[l] = (scaled[l] + scaled[s]) - 1.0;
        if (scaled[l] < 1.0) {
            large.pop_back();
            small.push_back(l);
        }
    }
    for (size_t i : large) {
        prob_[i] = 1.0;
        alias_[i] = i;
    }
    for (size_t i : small) {
        prob_[i] = 1.0;
        alias_[i] = i;
    }
}

size_t AliasTable::sample(Rng &rng) const {
    size_t column = static_cast<size_t>(rng.below(prob_.size()));
    return rng.uniform() < prob_[column] ? column : alias_[column];
}

}  // namespace pnqc
