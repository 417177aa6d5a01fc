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

#ifndef PNQC_SYNTH_H
#define PNQC_SYNTH_H

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "pnqc/gaussian.h"
#include "pnqc/moments.h"

namespace pnqc {

struct DetectorSpec {
    double efficiency = 1.0;
    /// Mean dark counts per detection window.
    double dark = 0.0;
    /// Counts above this value are registered as this value.
    std::optional<uint64_t> saturation;
};

struct SimRun {
    TwinBeamSpec spec;
    std::array<DetectorSpec, 2> detectors{};
    uint64_t shots = 1;
    uint64_t seed = 1;
};

/// Shots per shard. Shard s draws from Rng(seed + s), so output does not
/// depend on how many threads process the shards.
inline constexpr uint64_t kShotsPerShard = 1 << 16;

/// Throws InvalidArgument (shots = 0, negative means or modes < 1) or BadEfficiency.
void validate(const SimRun &run);

/// Per window and mode, photon numbers of the single-mode noisy twin beam
/// (the Gaussian state of params_of_twin_beam). Without noise this is one
/// Bose-Einstein pair number shared by both beams; with noise the joint
/// distribution is tabulated exactly and drawn through an alias table. Mode
/// sums are then thinned binomially and Poissonian dark counts are added.
std::vector<Shot> simulate_shots(const SimRun &run, unsigned threads = 0);

JointHistogram simulate(const SimRun &run, unsigned threads = 0);

/// Exact moments of the detected counts (saturation ignored): single-mode
/// forward moments, loss as eta1^k eta2^l, M-fold composition through the
/// cumulants, and dark counts as an independent Poissonian contribution.
IntensityMoments analytic_moments(const SimRun &run);

}  // namespace pnqc

#endif
