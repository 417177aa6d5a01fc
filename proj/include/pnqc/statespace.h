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

#ifndef PNQC_STATESPACE_H
#define PNQC_STATESPACE_H

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

namespace pnqc {

/// Cells of the purity-ratio plane (mu/mu1, mu/mu2) and sampling density.
struct RatioGrid {
    std::vector<double> r1_values;
    std::vector<double> r2_values;
    int mu_samples = 32;
    int delta_samples = 16;
};

/// n evenly spaced values from lo to hi inclusive.
std::vector<double> linspace(double lo, double hi, int n);

/// Throws InvalidArgument unless both axes are nonempty, positive and
/// strictly ascending and the sample counts are positive.
void validate(const RatioGrid &grid);

struct AtlasOptions {
    /// Lower end of the log-uniform global-purity range.
    double mu_min = 1e-3;
    uint64_t seed = 2023;
    unsigned threads = 0;
    /// Called after each finished cell with (cells done, total cells); calls are serialized.
    std::function<void(size_t, size_t)> progress;
};

struct AtlasCell {
    double r1 = 0.0;
    double r2 = 0.0;
    /// Mean exact negativity over entangled samples; empty when none.
    std::optional<double> E_av;
    /// Largest relative error of the purity bounds over the cell's entangled purity triples.
    std::optional<double> delta_max;
    int n_physical = 0;
    int n_entangled = 0;

    // diagnostics
    int n_triples = 0;   // purity triples with an admissible seralian interval
    int n_rejected = 0;  // purity samples with no admissible seralian
    double E_peak = 0.0;  // largest exact negativity seen
    /// Largest amount by which an exact negativity left [E_min, E_max].
    double max_bracket_violation = 0.0;
    /// Relative error formed from the exact negativity at the two seralian endpoints.
    std::optional<double> delta_max_endpoints;
    /// Largest relative error between any interior sample and the endpoint pair.
    double max_interior_delta_excess = 0.0;
};

struct SeralianInterval {
    double lo = 0.0;
    double hi = 0.0;
};

/// Interval of seralian values for which from_purities succeeds, endpoints
/// located by bisection to 1e-9 (relative to max(1, Delta)). Empty when no
/// admissible value is found.
std::optional<SeralianInterval> admissible_seralian(double mu, double mu1, double mu2);

/// Sweeps every cell. Output order is row-major in r1 (r1 outer, r2 inner)
/// and does not depend on the thread count.
std::vector<AtlasCell> sweep_atlas(const RatioGrid &grid, const AtlasOptions &options = {});

struct ContourPoint {
    double level = 0.0;
    double r1 = 0.0;
    double r2 = 0.0;
};

struct ContourTable {
    std::vector<ContourPoint> points;
    /// Per requested level, the crossing along the diagonal r1 = r2 when the
    /// grid is square and the diagonal brackets the level.
    std::vector<std::optional<double>> diagonal;
    std::vector<double> levels;
};

/// Iso-lines of delta_max by linear interpolation between neighbouring
/// nonempty cells, along both axes. Throws InsufficientGrid when a level
/// is bracketed nowhere.
ContourTable threshold_curves(const std::vector<AtlasCell> &atlas, const std::vector<double> &levels = {0.10, 0.01});

}  // namespace pnqc

#endif
