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

#include "pnqc/report_io.h"

#include <cmath>
#include <ostream>

#include <fmt/format.h>

#include "pnqc/error.h"

namespace pnqc {
namespace {

nlohmann::json complex_json(Complex z) {
    return {z.real(), z.imag()};
}

Complex complex_from(const nlohmann::json &j) {
    if (!j.is_array() || j.size() != 2) {
        throw Error(ErrorKind::Parse, "complex values are [re, im]");
    }
    return {j[0].get<double>(), j[1].get<double>()};
}

nlohmann::json number_or_null(double v) {
    return std::isnan(v) ? nlohmann::json(nullptr) : nlohmann::json(v);
}

std::string csv_number(double v) {
    return std::isnan(v) ? std::string() : fmt::format("{:.17g}", v);
}

std::string csv_optional(const std::optional<double> &v) {
    return v ? fmt::format("{:.17g}", *v) : std::string();
}

template <typename Fn>
auto wrap_json(Fn &&fn) {
    try {
        return fn();
    } catch (const nlohmann::json::exception &e) {
        throw Error(ErrorKind::Parse, e.what());
    }
}

}  // namespace

nlohmann::json params_to_json(const GaussianParams &g) {
    return {{"B1", g.B1},
            {"B2", g.B2},
            {"C1", complex_json(g.C1)},
            {"C2", complex_json(g.C2)},
            {"D12", complex_json(g.D12)},
            {"Dbar12", complex_json(g.Dbar12)}};
}

GaussianParams params_from_json(const nlohmann::json &j) {
    return wrap_json([&] {
        GaussianParams g;
        g.B1 = j.at("B1").get<double>();
        g.B2 = j.at("B2").get<double>();
        g.C1 = complex_from(j.at("C1"));
        g.C2 = complex_from(j.at("C2"));
        g.D12 = complex_from(j.at("D12"));
        g.Dbar12 = complex_from(j.at("Dbar12"));
        return g;
    });
}

nlohmann::json cov_to_json(const CovMatrix &c) {
    nlohmann::json rows = nlohmann::json::array();
    for (int i = 0; i < 4; ++i) {
        rows.push_back({c.matrix()(i, 0), c.matrix()(i, 1), c.matrix()(i, 2), c.matrix()(i, 3)});
    }
    return rows;
}

CovMatrix cov_from_json(const nlohmann::json &j) {
    return wrap_json([&] {
        if (!j.is_array() || j.size() != 4) {
            throw Error(ErrorKind::Parse, "covariance matrix must be a 4x4 array");
        }
        Eigen::Matrix4d m;
        for (int i = 0; i < 4; ++i) {
            if (!j[i].is_array() || j[i].size() != 4) {
                throw Error(ErrorKind::Parse, "covariance matrix must be a 4x4 array");
            }
            for (int k = 0; k < 4; ++k) {
                m(i, k) = j[i][k].get<double>();
            }
        }
        return CovMatrix(m);
    });
}

nlohmann::json report_to_json(const QCReport &r) {
    nlohmann::json j = nlohmann::json::object();
    for (const auto &name : report_field_names()) {
        j[name] = number_or_null(report_field(r, name));
    }
    j["verdict"] = verdict_name(r.verdict);
    j["per_mode"] = r.per_mode;
    j["purity_clamped"] = r.purity_clamped;
    j["warnings"] = r.warnings;
    if (!r.errors.empty()) {
        nlohmann::json e = nlohmann::json::object();
        for (const auto &[k, v] : r.errors) {
            e[k] = number_or_null(v);
        }
        j["errors"] = e;
    }
    return j;
}

QCReport report_from_json(const nlohmann::json &j) {
    return wrap_json([&] {
        auto num = [&](const char *key) { return j.at(key).get<double>(); };
        auto opt = [&](const char *key) -> std::optional<double> {
            if (!j.contains(key) || j.at(key).is_null()) {
                return std::nullopt;
            }
            return j.at(key).get<double>();
        };
        QCReport r;
        r.mu = num("mu");
        r.mu1 = num("mu1");
        r.mu2 = num("mu2");
        r.S_R = num("S_R");
        r.S_R1 = num("S_R1");
        r.S_R2 = num("S_R2");
        r.H = num("H");
        r.G_1to2 = num("G_1to2");
        r.G_2to1 = num("G_2to1");
        r.E_min = num("E_min");
        r.E_max = num("E_max");
        r.delta_EN = opt("delta_EN");
        r.E2_lower = num("E2_lower");
        r.E2_upper = num("E2_upper");
        r.lambda_merged = opt("lambda_merged");
        r.g2_merged = opt("g2_merged");
        r.S = opt("S");
        r.M = num("M");
        const std::string verdict = j.at("verdict").get<std::string>();
        bool matched = false;
        for (Verdict v : {Verdict::Entangled, Verdict::Separable, Verdict::Indeterminate}) {
            if (verdict_name(v) == verdict) {
                r.verdict = v;
                matched = true;
            }
        }
        if (!matched) {
            throw Error(ErrorKind::Parse, "unknown verdict " + verdict);
        }
        r.per_mode = j.value("per_mode", false);
        r.purity_clamped = j.value("purity_clamped", false);
        r.warnings = j.value("warnings", std::vector<std::string>{});
        if (j.contains("errors")) {
            for (const auto &[k, v] : j.at("errors").items()) {
                r.errors[k] = v.is_null() ? std::nan("") : v.get<double>();
            }
        }
        return r;
    });
}

std::string report_csv_header() {
    std::string out;
    for (const auto &name : report_field_names()) {
        out += name + ",";
    }
    return out + "verdict,per_mode";
}

std::string report_csv_row(const QCReport &r) {
    std::string out;
    for (const auto &name : report_field_names()) {
        out += csv_number(report_field(r, name)) + ",";
    }
    return out + verdict_name(r.verdict) + "," + (r.per_mode ? "true" : "false");
}

void write_atlas_csv(std::ostream &out, const std::vector<AtlasCell> &atlas) {
    out << "r1,r2,E_av,delta_max,n_physical,n_entangled\n";
    for (const auto &c : atlas) {
        out << fmt::format("{:.17g},{:.17g},{},{},{},{}\n", c.r1, c.r2, csv_optional(c.E_av), csv_optional(c.delta_max),
                           c.n_physical, c.n_entangled);
    }
}

nlohmann::json atlas_to_json(const std::vector<AtlasCell> &atlas) {
    auto opt = [](const std::optional<double> &v) { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); };
    nlohmann::json cells = nlohmann::json::array();
    for (const auto &c : atlas) {
        cells.push_back({{"r1", c.r1},
                         {"r2", c.r2},
                         {"E_av", opt(c.E_av)},
                         {"delta_max", opt(c.delta_max)},
                         {"n_physical", c.n_physical},
                         {"n_entangled", c.n_entangled},
                         {"diagnostics",
                          {{"n_triples", c.n_triples},
                           {"n_rejected", c.n_rejected},
                           {"E_peak", c.E_peak},
                           {"max_bracket_violation", c.max_bracket_violation},
                           {"delta_max_endpoints", opt(c.delta_max_endpoints)},
                           {"max_interior_delta_excess", c.max_interior_delta_excess}}}});
    }
    return {{"cells", cells}};
}

nlohmann::json contours_to_json(const ContourTable &table) {
    nlohmann::json levels = nlohmann::json::array();
    for (size_t i = 0; i < table.levels.size(); ++i) {
        nlohmann::json points = nlohmann::json::array();
        for (const auto &p : table.points) {
            if (p.level == table.levels[i]) {
                points.push_back({p.r1, p.r2});
            }
        }
        const auto &diag = i < table.diagonal.size() ? table.diagonal[i] : std::nullopt;
        levels.push_back({{"level", table.levels[i]},
                          {"diagonal", diag ? nlohmann::json(*diag) : nlohmann::json(nullptr)},
                          {"points", points}});
    }
    return {{"levels", levels}};
}

}  // namespace pnqc
