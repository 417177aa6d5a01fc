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

#ifndef PNQC_MOMENT_TABLE_H
#define PNQC_MOMENT_TABLE_H

#include <array>
#include <string>

namespace pnqc {

/// Highest total order k + l stored in any bivariate moment table.
inline constexpr int kMaxMomentOrder = 4;

/// Dense table of bivariate moments v(k, l) for k + l <= max_order.
///
/// The tag distinguishes raw photon-number moments from normally-ordered
/// intensity moments (and cumulants), which obey different algebra and must
/// not be mixed. For moment tags v(0, 0) is 1 on construction; for cumulant
/// and error tables it is 0.
template <typename Tag>
class BivariateTable {
   public:
    explicit BivariateTable(int max_order = kMaxMomentOrder);

    int max_order() const {
        return max_order_;
    }
    bool contains(int k, int l) const {
        return k >= 0 && l >= 0 && k + l <= max_order_;
    }
    /// Throws InvalidArgument outside k + l <= max_order.
    double operator()(int k, int l) const;
    double &operator()(int k, int l);

    bool operator==(const BivariateTable &) const = default;

   private:
    int max_order_;
    std::array<std::array<double, kMaxMomentOrder + 1>, kMaxMomentOrder + 1> v_{};
};

struct PhotonNumberTag {};
struct IntensityTag {};
struct CumulantTag {};
struct StandardErrorTag {};

/// <n1^k n2^l> over a photon-number distribution.
using PhotonNumberMoments = BivariateTable<PhotonNumberTag>;
/// Normally-ordered <W1^k W2^l>, equal to the falling-factorial moments.
using IntensityMoments = BivariateTable<IntensityTag>;
/// Joint cumulants of the intensity moments. Entry (0, 0) is unused (0).
using JointCumulants = BivariateTable<CumulantTag>;
/// Per-entry standard errors of an estimated moment table. Entry (0, 0) is 0.
using MomentErrors = BivariateTable<StandardErrorTag>;

/// Intensity moments of a single beam, <W^k> for k <= 4.
struct SingleBeamMoments {
    std::array<double, kMaxMomentOrder + 1> w{1.0, 0.0, 0.0, 0.0, 0.0};
    double operator[](int k) const {
        return w.at(static_cast<size_t>(k));
    }
};

/// Key "k,l" used by the moment-table JSON format.
std::string moment_key(int k, int l);

extern template class BivariateTable<PhotonNumberTag>;
extern template class BivariateTable<IntensityTag>;
extern template class BivariateTable<CumulantTag>;
extern template class BivariateTable<StandardErrorTag>;

}  // namespace pnqc

#endif
