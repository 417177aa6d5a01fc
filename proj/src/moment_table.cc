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

#include "pnqc/moment_table.h"

#include <fmt/format.h>

#include <type_traits>

#include "pnqc/error.h"

namespace pnqc {

template <typename Tag>
BivariateTable<Tag>::BivariateTable(int max_order) : max_order_(max_order) {
    if (max_order < 0 || max_order > kMaxMomentOrder) {
        throw Error(ErrorKind::InvalidArgument,
                    fmt::format("moment tables hold total order 0..{}, got {}", kMaxMomentOrder, max_order));
    }
    if constexpr (std::is_same_v<Tag, PhotonNumberTag> || std::is_same_v<Tag, IntensityTag>) {
        v_[0][0] = 1.0;
    }
}

template <typename Tag>
double BivariateTable<Tag>::operator()(int k, int l) const {
    if (!contains(k, l)) {
        throw Error(ErrorKind::InvalidArgument, fmt::format("moment ({},{}) outside order {}", k, l, max_order_));
    }
    return v_[k][l];
}

template <typename Tag>
double &BivariateTable<Tag>::operator()(int k, int l) {
    if (!contains(k, l)) {
        throw Error(ErrorKind::InvalidArgument, fmt::format("moment ({},{}) outside order {}", k, l, max_order_));
    }
    return v_[k][l];
}

std::string moment_key(int k, int l) {
    return fmt::format("{},{}", k, l);
}

template class BivariateTable<PhotonNumberTag>;
template class BivariateTable<IntensityTag>;
template class BivariateTable<CumulantTag>;
template class BivariateTable<StandardErrorTag>;

}  // namespace pnqc
