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

#ifndef PNQC_RNG_H
#define PNQC_RNG_H

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace pnqc {

/// Name written into output metadata so streams can be reproduced elsewhere.
inline constexpr const char *kGeneratorName = "mt19937_64+inversion";

/// SplitMix64 finalizer (Steele, Lea & Flood constants). Used to derive child seeds.
uint64_t splitmix64(uint64_t x);

/// Child seed for stream `index` under `seed`.
uint64_t derive_seed(uint64_t seed, uint64_t index);

/// Pseudo-random source with platform-independent samplers.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the
/// standard. std:: distributions are implementation-defined, so every sampler
/// here is written out by inversion on the 53-bit uniform below.
class Rng {
   public:
    explicit Rng(uint64_t seed) : engine_(seed) {
    }

    uint64_t next_u64() {
        return engine_();
    }
    /// Uniform in [0, 1).
    double uniform();
    /// Uniform in (0, 1].
    double uniform_open0();
    double uniform(double lo, double hi) {
        return lo + (hi - lo) * uniform();
    }
    /// Uniform integer in [0, n).
    uint64_t below(uint64_t n);

    /// Bose-Einstein (geometric on {0,1,...}) with the given mean.
    uint64_t bose_einstein(double mean);
    /// Poisson by sequential inversion; intended for means up to a few tens.
    uint64_t poisson(double mean);
    /// Binomial(n, p) as n Bernoulli trials; n is a photon count, so small.
    uint64_t binomial(uint64_t n, double p);

   private:
    std::mt19937_64 engine_;
};

/// Walker alias table for repeated draws from a fixed discrete distribution.
class AliasTable {
   public:
    explicit AliasTable(std::span<const double> weights);
    size_t sample(Rng &rng) const;
    size_t size() const {
        return prob_.size();
    }

   private:
    std::vector<double> prob_;
    std::vector<size_t> alias_;
};

}  // namespace pnqc

#endif
