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

#include <algorithm>
#include <cmath>

#include "pnqc/error.h"
#include "pnqc/parallel.h"
#include "pnqc/rng.h"

namespace pnqc {

void validate(const SimRun &run) {
    if (run.shots == 0) {
        throw Error(ErrorKind::InvalidArgument, "shots must be positive");
    }
    if (run.spec.modes < 1) {
        throw Error(ErrorKind::InvalidArgument, "mode count must be at least 1", run.spec.modes);
    }
    for (double m : {run.spec.pair_mean, run.spec.noise1, run.spec.noise2}) {
        if (!(m >= 0)) {
            throw Error(ErrorKind::InvalidArgument, "means must be nonnegative", m);
        }
    }
    for (const auto &d : run.detectors) {
        if (!(d.efficiency > 0 && d.efficiency <= 1)) {
            throw Error(ErrorKind::BadEfficiency, "efficiency must lie in (0, 1]", d.efficiency);
        }
        if (!(d.dark >= 0)) {
            throw Error(ErrorKind::InvalidArgument, "dark-count mean must be nonnegative", d.dark);
        }
    }
}

namespace {

/// Photon-number distribution of one mode of the noisy twin beam, flattened
/// row-major on [0, K) x [0, K). Its generating function sum p z1^n1 z2^n2 is
/// 1 / (a + b z1 + c z2 + e z1 z2), so the coefficients obey a three-term
/// recursion. K puts the thermal marginal tails below 1e-16.
struct ModeTable {
    size_t K = 0;
    std::vector<double> p;
};

ModeTable noisy_twin_beam_table(const TwinBeamSpec &t) {
    const double B1 = t.pair_mean + t.noise1, B2 = t.pair_mean + t.noise2;
    const double D2 = t.pair_mean * (t.pair_mean + 1);
    const double a = (1 + B1) * (1 + B2) - D2, b = D2 - B1 * (1 + B2), c = D2 - B2 * (1 + B1), e = B1 * B2 - D2;
    const double B = std::max(B1, B2);
    const double k = std::ceil(16 * std::log(10.0) / std::log1p(1 / B)) + 1;
    if (k > 4096) {
        throw Error(ErrorKind::InvalidArgument, "per-mode mean too large for the tabulated noisy twin beam", B);
    }
    ModeTable m{static_cast<size_t>(k), {}};
    const size_t K = m.K;
    m.p.assign(K * K, 0.0);
    auto at = [&](size_t i, size_t j) { return m.p[i * K + j]; };
    for (size_t i = 0; i < K; ++i) {
        for (size_t j = 0; j < K; ++j) {
            double v = (i == 0 && j == 0) ? 1.0 : 0.0;
            if (i > 0) v -= b * at(i - 1, j);
            if (j > 0) v -= c * at(i, j - 1);
            if (i > 0 && j > 0) v -= e * at(i - 1, j - 1);
            m.p[i * K + j] = v / a;
        }
    }
    for (double &v : m.p) {
        v = std::max(v, 0.0);
    }
    return m;
}

}  // namespace

std::vector<Shot> simulate_shots(const SimRun &run, unsigned threads) {
    validate(run);
    // Without noise the mode is diagonal: n1 = n2 = Bose-Einstein pair number.
    const bool noisy = run.spec.noise1 > 0 || run.spec.noise2 > 0;
    std::optional<ModeTable> table;
    std::optional<AliasTable> alias;
    if (noisy) {
        table = noisy_twin_beam_table(run.spec);
        alias.emplace(table->p);
    }
    std::vector<Shot> shots(run.shots);
    const uint64_t shards = (run.shots + kShotsPerShard - 1) / kShotsPerShard;
    const auto &[det1, det2] = run.detectors;
    auto detect = [](Rng &rng, uint64_t photons, const DetectorSpec &d) {
        uint64_t c = rng.binomial(photons, d.efficiency) + rng.poisson(d.dark);
        return d.saturation ? std::min(c, *d.saturation) : c;
    };
    parallel_for(shards, threads == 0 ? default_thread_count() : threads, [&](size_t shard) {
        Rng rng(run.seed + shard);
        const uint64_t begin = shard * kShotsPerShard, end = std::min(run.shots, begin + kShotsPerShard);
        for (uint64_t i = begin; i < end; ++i) {
            uint64_t n1 = 0, n2 = 0;
            for (int m = 0; m < run.spec.modes; ++m) {
                if (noisy) {
                    size_t cell = alias->sample(rng);
                    n1 += cell / table->K;
                    n2 += cell % table->K;
                } else {
                    uint64_t pairs = rng.bose_einstein(run.spec.pair_mean);
                    n1 += pairs;
                    n2 += pairs;
                }
            }
            uint64_t c1 = detect(rng, n1, det1);
            uint64_t c2 = detect(rng, n2, det2);
            shots[i] = {c1, c2};
        }
    });
    return shots;
}

JointHistogram simulate(const SimRun &run, unsigned threads) {
    return histogram_from_shots(simulate_shots(run, threads));
}

IntensityMoments analytic_moments(const SimRun &run) {
    validate(run);
    IntensityMoments w = forward_moments(params_of_twin_beam(run.spec));
    const double eta1 = run.detectors[0].efficiency, eta2 = run.detectors[1].efficiency;
    for (int k = 0; k <= w.max_order(); ++k) {
        for (int l = 0; k + l <= w.max_order(); ++l) {
            w(k, l) *= std::pow(eta1, k) * std::pow(eta2, l);
        }
    }
    w = compose_iid(w, run.spec.modes);
    IntensityMoments dark;
    for (int k = 0; k <= dark.max_order(); ++k) {
        for (int l = 0; k + l <= dark.max_order(); ++l) {
            dark(k, l) = std::pow(run.detectors[0].dark, k) * std::pow(run.detectors[1].dark, l);
        }
    }
    return combine_independent(w, dark);
}

}  // namespace pnqc
