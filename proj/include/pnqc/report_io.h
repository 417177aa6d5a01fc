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

#ifndef PNQC_REPORT_IO_H
#define PNQC_REPORT_IO_H

#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "pnqc/gaussian.h"
#include "pnqc/quantifiers.h"
#include "pnqc/statespace.h"

namespace pnqc {

/// {"B1":, "B2":, "C1":[re,im], "C2":[re,im], "D12":[re,im], "Dbar12":[re,im]}
nlohmann::json params_to_json(const GaussianParams &g);
GaussianParams params_from_json(const nlohmann::json &j);

/// Row-major 4x4 array.
nlohmann::json cov_to_json(const CovMatrix &c);
CovMatrix cov_from_json(const nlohmann::json &j);

/// Every report field (absent optionals as null), the verdict, flags,
/// warnings, and "errors" when bootstrap errors exist.
nlohmann::json report_to_json(const QCReport &r);
QCReport report_from_json(const nlohmann::json &j);

/// Flat CSV: the numeric report fields followed by verdict and per_mode.
std::string report_csv_header();
std::string report_csv_row(const QCReport &r);

/// r1,r2,E_av,delta_max,n_physical,n_entangled; empty fields for empty cells.
void write_atlas_csv(std::ostream &out, const std::vector<AtlasCell> &atlas);
/// Per-cell values plus sampling diagnostics.
nlohmann::json atlas_to_json(const std::vector<AtlasCell> &atlas);
nlohmann::json contours_to_json(const ContourTable &table);

}  // namespace pnqc

#endif
