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

#ifndef PNQC_HISTOGRAM_IO_H
#define PNQC_HISTOGRAM_IO_H

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "pnqc/moments.h"

namespace pnqc {

enum class HistogramFormat { Csv, Json };

/// CSV: header `c1,c2,count`, one row per cell, integers only. Blank lines
/// and lines starting with '#' are skipped. Throws Parse (with the line
/// number) on malformed rows or negative values and EmptyData when the
/// total is zero.
/// JSON: {"window_group": N, "counts": [[c1, c2, count], ...]}.
JointHistogram load_histogram(std::istream &in, HistogramFormat format);

/// Shot-stream CSV with header `c1,c2`. Throws Parse or EmptyData.
std::vector<Shot> load_shots(std::istream &in);

/// `comments` are written as leading "# " lines.
void write_histogram_csv(std::ostream &out, const JointHistogram &hist, const std::vector<std::string> &comments = {});
void write_shots_csv(std::ostream &out, const std::vector<Shot> &shots, const std::vector<std::string> &comments = {});

nlohmann::json histogram_to_json(const JointHistogram &hist);
JointHistogram histogram_from_json(const nlohmann::json &j);

/// {"cutoff": [N1, N2], "p": [[...], ...]} with p[n1][n2].
nlohmann::json distribution_to_json(const JointDistribution &dist);
JointDistribution distribution_from_json(const nlohmann::json &j);

/// {"max_order": 4, "w": {"k,l": value}, "se": {"k,l": value}}; "se" is
/// omitted when absent. Entry (0,0) is not stored.
nlohmann::json moment_table_to_json(const IntensityMoments &w, const std::optional<MomentErrors> &se = std::nullopt);
MomentEstimate moment_table_from_json(const nlohmann::json &j);

}  // namespace pnqc

#endif
