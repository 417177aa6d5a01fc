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

#include "pnqc/histogram_io.h"

#include <charconv>
#include <istream>
#include <ostream>
#include <string_view>

#include <fmt/format.h>

#include "pnqc/error.h"

namespace pnqc {
namespace {

std::string_view trim(std::string_view s) {
    const char *ws = " \t\r\n";
    size_t b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) {
        return {};
    }
    return s.substr(b, s.find_last_not_of(ws) - b + 1);
}

std::vector<std::string_view> split(std::string_view line) {
    std::vector<std::string_view> out;
    size_t start = 0;
    while (true) {
        size_t comma = line.find(',', start);
        out.push_back(trim(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start)));
        if (comma == std::string_view::npos) {
            return out;
        }
        start = comma + 1;
    }
}

uint64_t parse_count(std::string_view field, size_t line_no) {
    if (!field.empty() && field.front() == '-') {
        throw Error(ErrorKind::Parse, fmt::format("line {}: negative value '{}'", line_no, field));
    }
    uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (field.empty() || ec != std::errc() || ptr != field.data() + field.size()) {
        throw Error(ErrorKind::Parse, fmt::format("line {}: expected a nonnegative integer, got '{}'", line_no, field));
    }
    return v;
}

/// Reads a CSV with the given header and integer columns, calling row(values).
template <typename Fn>
void read_csv(std::istream &in, std::string_view header, size_t columns, Fn &&row) {
    std::string line;
    size_t line_no = 0;
    bool seen_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view s = trim(line);
        if (s.empty() || s.front() == '#') {
            continue;
        }
        if (!seen_header) {
            std::string compact;
            for (char ch : s) {
                if (ch != ' ' && ch != '\t') {
                    compact.push_back(ch);
                }
            }
            if (compact != header) {
                throw Error(ErrorKind::Parse, fmt::format("line {}: expected header '{}', got '{}'", line_no, header, s));
            }
            seen_header = true;
            continue;
        }
        auto fields = split(s);
        if (fields.size() != columns) {
            throw Error(ErrorKind::Parse,
                        fmt::format("line {}: expected {} fields, got {}", line_no, columns, fields.size()));
        }
        std::vector<uint64_t> values;
        values.reserve(columns);
        for (auto f : fields) {
            values.push_back(parse_count(f, line_no));
        }
        row(values);
    }
    if (in.bad()) {
        throw Error(ErrorKind::Io, "read failure");
    }
    if (!seen_header) {
        throw Error(ErrorKind::EmptyData, "no header and no data");
    }
}

uint64_t json_count(const nlohmann::json &v, const char *what) {
    if (v.is_number_integer() && v.get<int64_t>() < 0) {
        throw Error(ErrorKind::Parse, fmt::format("negative {} {}", what, v.get<int64_t>()));
    }
    if (!v.is_number_unsigned() && !v.is_number_integer()) {
        throw Error(ErrorKind::Parse, fmt::format("{} must be a nonnegative integer", what));
    }
    return v.get<uint64_t>();
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

JointHistogram load_histogram(std::istream &in, HistogramFormat format) {
    if (format == HistogramFormat::Json) {
        return wrap_json([&] { return histogram_from_json(nlohmann::json::parse(in)); });
    }
    std::vector<HistogramCell> cells;
    read_csv(in, "c1,c2,count", 3, [&](const std::vector<uint64_t> &v) { cells.push_back({v[0], v[1], v[2]}); });
    return JointHistogram(std::move(cells));
}

std::vector<Shot> load_shots(std::istream &in) {
    std::vector<Shot> shots;
    read_csv(in, "c1,c2", 2, [&](const std::vector<uint64_t> &v) { shots.push_back({v[0], v[1]}); });
    if (shots.empty()) {
        throw Error(ErrorKind::EmptyData, "shot stream has no rows");
    }
    return shots;
}

void write_histogram_csv(std::ostream &out, const JointHistogram &hist, const std::vector<std::string> &comments) {
    for (const auto &c : comments) {
        out << "# " << c << '\n';
    }
    out << "c1,c2,count\n";
    for (const auto &cell : hist.cells()) {
        out << cell.c1 << ',' << cell.c2 << ',' << cell.count << '\n';
    }
}

void write_shots_csv(std::ostream &out, const std::vector<Shot> &shots, const std::vector<std::string> &comments) {
    for (const auto &c : comments) {
        out << "# " << c << '\n';
    }
    out << "c1,c2\n";
    for (const auto &s : shots) {
        out << s.c1 << ',' << s.c2 << '\n';
    }
}

nlohmann::json histogram_to_json(const JointHistogram &hist) {
    nlohmann::json counts = nlohmann::json::array();
    for (const auto &cell : hist.cells()) {
        counts.push_back({cell.c1, cell.c2, cell.count});
    }
    return {{"window_group", hist.window_group()}, {"counts", counts}};
}

JointHistogram histogram_from_json(const nlohmann::json &j) {
    return wrap_json([&] {
        uint64_t group = j.contains("window_group") ? json_count(j.at("window_group"), "window_group") : 1;
        std::vector<HistogramCell> cells;
        for (const auto &row : j.at("counts")) {
            if (!row.is_array() || row.size() != 3) {
                throw Error(ErrorKind::Parse, "each count must be [c1, c2, count]");
            }
            cells.push_back({json_count(row[0], "c1"), json_count(row[1], "c2"), json_count(row[2], "count")});
        }
        return JointHistogram(std::move(cells), group);
    });
}

nlohmann::json distribution_to_json(const JointDistribution &dist) {
    nlohmann::json rows = nlohmann::json::array();
    for (uint64_t n1 = 0; n1 <= dist.n1_max(); ++n1) {
        std::vector<double> row(dist.n2_max() + 1);
        for (uint64_t n2 = 0; n2 <= dist.n2_max(); ++n2) {
            row[n2] = dist(n1, n2);
        }
        rows.push_back(row);
    }
    return {{"cutoff", {dist.n1_max(), dist.n2_max()}}, {"p", rows}};
}

JointDistribution distribution_from_json(const nlohmann::json &j) {
    return wrap_json([&] {
        const auto &cutoff = j.at("cutoff");
        uint64_t n1 = json_count(cutoff.at(0), "cutoff"), n2 = json_count(cutoff.at(1), "cutoff");
        const auto &rows = j.at("p");
        if (rows.size() != n1 + 1) {
            throw Error(ErrorKind::Parse, "p must have N1 + 1 rows");
        }
        std::vector<double> p;
        for (const auto &row : rows) {
            if (row.size() != n2 + 1) {
                throw Error(ErrorKind::Parse, "each row of p must have N2 + 1 entries");
            }
            for (const auto &v : row) {
                p.push_back(v.get<double>());
            }
        }
        return JointDistribution(n1, n2, std::move(p));
    });
}

nlohmann::json moment_table_to_json(const IntensityMoments &w, const std::optional<MomentErrors> &se) {
    nlohmann::json jw = nlohmann::json::object(), jse = nlohmann::json::object();
    for (int k = 0; k <= w.max_order(); ++k) {
        for (int l = 0; k + l <= w.max_order(); ++l) {
            if (k + l == 0) {
                continue;
            }
            jw[moment_key(k, l)] = w(k, l);
            if (se) {
                jse[moment_key(k, l)] = (*se)(k, l);
            }
        }
    }
    nlohmann::json j{{"max_order", w.max_order()}, {"w", jw}};
    if (se) {
        j["se"] = jse;
    }
    return j;
}

MomentEstimate moment_table_from_json(const nlohmann::json &j) {
    return wrap_json([&] {
        int order = j.value("max_order", kMaxMomentOrder);
        MomentEstimate est{IntensityMoments(order), MomentErrors(order)};
        for (int k = 0; k <= order; ++k) {
            for (int l = 0; k + l <= order; ++l) {
                if (k + l == 0) {
                    continue;
                }
                const std::string key = moment_key(k, l);
                if (!j.at("w").contains(key)) {
                    throw Error(ErrorKind::Parse, fmt::format("moment table lacks entry \"{}\"", key));
                }
                est.w(k, l) = j.at("w").at(key).get<double>();
                if (j.contains("se") && j.at("se").contains(key)) {
                    est.se(k, l) = j.at("se").at(key).get<double>();
                }
            }
        }
        return est;
    });
}

}  // namespace pnqc
