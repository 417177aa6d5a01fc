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

#include "pnqc/cli.h"

#include <openssl/evp.h>
#include <unistd.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "pnqc/histogram_io.h"
#include "pnqc/report_io.h"
#include "pnqc/rng.h"
#include "pnqc/statespace.h"
#include "pnqc/synth.h"

#ifndef PNQC_VERSION
#define PNQC_VERSION "unknown"
#endif

namespace pnqc {

int exit_code(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::Io:
            return 2;
        case ErrorKind::Parse:
        case ErrorKind::EmptyData:
        case ErrorKind::InvalidArgument:
        case ErrorKind::InvalidN:
        case ErrorKind::BadEfficiency:
        case ErrorKind::BadModeCount:
        case ErrorKind::InsufficientGrid:
            return 3;
        case ErrorKind::NoConvergence:
            return 5;
        default:
            return 4;
    }
}

std::string sha256_hex(const std::string &bytes) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1) {
        throw Error(ErrorKind::Io, "SHA-256 digest failed");
    }
    std::string hex;
    for (unsigned int i = 0; i < len; ++i) {
        hex += fmt::format("{:02x}", md[i]);
    }
    return hex;
}

void write_file_atomic(const std::string &path, const std::string &content) {
    namespace fs = std::filesystem;
    const std::string tmp = fmt::format("{}.tmp-{}", path, static_cast<long>(::getpid()));
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) {
            throw Error(ErrorKind::Io, "cannot open " + tmp + " for writing");
        }
        f << content;
        f.flush();
        if (!f) {
            throw Error(ErrorKind::Io, "write failed for " + tmp);
        }
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw Error(ErrorKind::Io, "cannot rename output to " + path);
    }
}

double auto_modes(const IntensityMoments &w) {
    double sum = 0;
    int n = 0;
    for (Beam b : {Beam::One, Beam::Two}) {
        try {
            sum += estimate_modes(w, b);
            ++n;
        } catch (const Error &) {
        }
    }
    if (n == 0) {
        throw Error(ErrorKind::DegenerateVariance, "no beam has excess intensity variance; cannot estimate modes");
    }
    return sum / n;
}

namespace {

bool ideal(const AnalyzeOptions &o) {
    return o.efficiency[0] == 1.0 && o.efficiency[1] == 1.0 && o.dark[0] == 0.0 && o.dark[1] == 0.0;
}

struct Estimate {
    IntensityMoments w;
    std::optional<JointDistribution> dist;
    int iterations = 0;
    bool converged = true;
    std::array<uint64_t, 2> cutoff{0, 0};
    std::vector<double> em_p;
};

Estimate estimate_moments(const JointHistogram &hist, const AnalyzeOptions &o, bool use_em,
                          const std::vector<double> *warm_start = nullptr) {
    if (!use_em) {
        Estimate e{sample_intensity_moments(hist), std::nullopt, 0, true, {0, 0}, {}};
        if (ideal(o)) {
            e.dist = normalized(hist);
        } else {
            e.w = undo_detection(e.w, o.efficiency, o.dark);
        }
        return e;
    }
    EmOptions em;
    em.efficiency = o.efficiency;
    em.dark = o.dark;
    em.max_iter = o.max_iter;
    em.tol = o.tol;
    const uint64_t cmax[2] = {hist.max_c1(), hist.max_c2()};
    for (int j = 0; j < 2; ++j) {
        if (!(o.efficiency[j] > 0 && o.efficiency[j] <= 1)) {
            throw Error(ErrorKind::BadEfficiency, "efficiency must lie in (0, 1]", o.efficiency[j]);
        }
        em.cutoff[j] = o.cutoff[j] != 0
                           ? o.cutoff[j]
                           : static_cast<uint64_t>(std::ceil(static_cast<double>(cmax[j] + 1) / o.efficiency[j])) + 2;
    }
    if (warm_start) {
        em.initial = *warm_start;
    }
    EmResult r = em_deconvolve(hist, em);
    Estimate e{to_intensity_moments(raw_moments(r.distribution)), r.distribution, r.iterations, r.converged,
               {r.distribution.n1_max(), r.distribution.n2_max()}, r.distribution.values()};
    return e;
}

std::vector<double> flatten(const IntensityMoments &w) {
    std::vector<double> v;
    for (int k = 0; k <= w.max_order(); ++k) {
        for (int l = 0; k + l <= w.max_order(); ++l) {
            v.push_back(w(k, l));
        }
    }
    return v;
}

QCReport report_for(const Estimate &e, double M) {
    QCReport r = full_report(e.w, M);
    if (e.dist) {
        r.S = shannon_entropy(*e.dist);
    }
    return r;
}

}  // namespace

AnalyzeResult analyze(const JointHistogram &hist, const AnalyzeOptions &options) {
    const bool use_em = options.method == MomentMethod::Em || (options.method == MomentMethod::Auto && !ideal(options));
    const Estimate est = estimate_moments(hist, options, use_em);

    const double M = options.modes ? *options.modes : auto_modes(est.w);
    if (!(M >= 1)) {
        throw Error(ErrorKind::BadModeCount, "mode count must be at least 1", M);
    }
    AnalyzeResult res{report_for(est, M), est.w, MomentErrors(), use_em, est.iterations, est.converged, est.cutoff, {}};
    if (use_em && !est.converged) {
        res.report.warnings.push_back(
            fmt::format("EM did not reach tol {} within {} iterations", options.tol, options.max_iter));
    }
    try {
        res.reference = twin_beam_reference(M > 1 ? reduce_per_mode(est.w, M) : est.w);
    } catch (const Error &e) {
        res.report.warnings.push_back(std::string("twin-beam reference: ") + e.what());
    }

    if (options.bootstrap.resamples >= 2) {
        const auto &names = report_field_names();
        const std::vector<double> *warm = use_em ? &est.em_p : nullptr;
        auto samples = bootstrap(hist, options.bootstrap, [&](const JointHistogram &h) {
            Estimate e = estimate_moments(h, options, use_em, warm);
            const double m = options.modes ? *options.modes : auto_modes(e.w);
            QCReport r = report_for(e, m);
            std::vector<double> v = flatten(e.w);
            for (const auto &name : names) {
                v.push_back(report_field(r, name));
            }
            return v;
        });
        const size_t nw = flatten(est.w).size();
        const auto se = bootstrap_standard_errors(samples, nw + names.size());
        size_t idx = 0;
        for (int k = 0; k <= kMaxMomentOrder; ++k) {
            for (int l = 0; k + l <= kMaxMomentOrder; ++l, ++idx) {
                res.se(k, l) = k + l == 0 || std::isnan(se[idx]) ? 0.0 : se[idx];
            }
        }
        for (size_t i = 0; i < names.size(); ++i) {
            if (!std::isnan(se[nw + i]) && !std::isnan(report_field(res.report, names[i]))) {
                res.report.errors[names[i]] = se[nw + i];
            }
        }
        size_t failed = 0;
        for (const auto &s : samples) {
            failed += s.empty();
        }
        if (failed > 0) {
            res.report.warnings.push_back(
                fmt::format("{} of {} bootstrap resamples failed and were skipped", failed, samples.size()));
        }
    }
    return res;
}

namespace {

std::string read_file(const std::string &path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) {
        throw Error(ErrorKind::Io, "cannot open " + path);
    }
    std::ostringstream ss;
    ss << f.rdbuf();
    if (f.bad()) {
        throw Error(ErrorKind::Io, "read failure on " + path);
    }
    return ss.str();
}

void emit(const std::string &path, const std::string &content, std::ostream &out) {
    if (path.empty() || path == "-") {
        out << content;
    } else {
        write_file_atomic(path, content);
    }
}

std::array<double, 2> parse_pair(const std::string &text, const char *flag) {
    std::array<double, 2> v{};
    std::vector<std::string> parts;
    std::stringstream ss(text);
    for (std::string part; std::getline(ss, part, ',');) {
        parts.push_back(part);
    }
    if (parts.empty() || parts.size() > 2) {
        throw Error(ErrorKind::Parse, fmt::format("{} expects a value or a pair a,b; got '{}'", flag, text));
    }
    for (size_t i = 0; i < parts.size(); ++i) {
        try {
            size_t used = 0;
            v[i] = std::stod(parts[i], &used);
            if (used != parts[i].size()) {
                throw std::invalid_argument(parts[i]);
            }
        } catch (const std::logic_error &) {
            throw Error(ErrorKind::Parse, fmt::format("{}: cannot parse number '{}'", flag, parts[i]));
        }
    }
    if (parts.size() == 1) {
        v[1] = v[0];
    }
    return v;
}

std::vector<double> parse_axis(const std::string &text) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    for (std::string part; std::getline(ss, part, ':');) {
        parts.push_back(part);
    }
    if (parts.size() != 3) {
        throw Error(ErrorKind::Parse, fmt::format("grid axis must be min:max:steps, got '{}'", text));
    }
    try {
        double lo = std::stod(parts[0]), hi = std::stod(parts[1]);
        int steps = std::stoi(parts[2]);
        if (steps < 1) {
            throw Error(ErrorKind::InvalidArgument, "grid steps must be positive", steps);
        }
        if (steps == 1) {
            return {lo};
        }
        return linspace(lo, hi, steps);
    } catch (const std::logic_error &) {
        throw Error(ErrorKind::Parse, fmt::format("cannot parse grid axis '{}'", text));
    }
}

std::optional<double> parse_modes(const std::string &text) {
    if (text == "auto") {
        return std::nullopt;
    }
    try {
        size_t used = 0;
        double m = std::stod(text, &used);
        if (used != text.size()) {
            throw std::invalid_argument(text);
        }
        if (!(m >= 1)) {
            throw Error(ErrorKind::BadModeCount, "mode count must be at least 1", m);
        }
        return m;
    } catch (const std::logic_error &) {
        throw Error(ErrorKind::Parse, fmt::format("--modes expects a number >= 1 or 'auto', got '{}'", text));
    }
}

MomentMethod parse_method(const std::string &text) {
    if (text == "auto") return MomentMethod::Auto;
    if (text == "direct") return MomentMethod::Direct;
    if (text == "em") return MomentMethod::Em;
    throw Error(ErrorKind::Parse, "--method must be auto, direct or em");
}

std::string method_name(MomentMethod m) {
    switch (m) {
        case MomentMethod::Direct:
            return "direct";
        case MomentMethod::Em:
            return "em";
        default:
            return "auto";
    }
}

/// First line that is neither blank nor a comment, whitespace removed.
std::string csv_header(const std::string &content) {
    std::istringstream in(content);
    for (std::string line; std::getline(in, line);) {
        std::string compact;
        for (char ch : line) {
            if (!std::isspace(static_cast<unsigned char>(ch))) {
                compact.push_back(ch);
            }
        }
        if (!compact.empty() && compact.front() != '#') {
            return compact;
        }
    }
    return {};
}

bool looks_like_json(const std::string &content) {
    size_t i = content.find_first_not_of(" \t\r\n");
    return i != std::string::npos && content[i] == '{';
}

struct Input {
    std::string path;
    std::string sha256;
    std::string format;  // histogram-csv, shots-csv, histogram-json, moments-json
    std::optional<JointHistogram> hist;
    std::optional<MomentEstimate> moments;
};

/// Histogram CSV/JSON, shot-stream CSV (grouped by `group`), or, when
/// allowed, a moment-table JSON.
Input load_input(const std::string &path, uint64_t group, bool allow_moments) {
    Input in{path, {}, {}, std::nullopt, std::nullopt};
    const std::string content = read_file(path);
    in.sha256 = sha256_hex(content);
    if (looks_like_json(content)) {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(content);
        } catch (const nlohmann::json::exception &e) {
            throw Error(ErrorKind::Parse, path + ": " + e.what());
        }
        if (j.contains("w")) {
            if (!allow_moments) {
                throw Error(ErrorKind::InvalidArgument, "this command needs photocount data, not a moment table");
            }
            in.format = "moments-json";
            in.moments = moment_table_from_json(j);
            return in;
        }
        if (group != 1) {
            throw Error(ErrorKind::InvalidArgument, "--group applies to shot streams only");
        }
        in.format = "histogram-json";
        in.hist = histogram_from_json(j);
        return in;
    }
    std::istringstream stream(content);
    if (csv_header(content) == "c1,c2") {
        in.format = "shots-csv";
        in.hist = group_windows(load_shots(stream), group);
        return in;
    }
    if (group != 1) {
        throw Error(ErrorKind::InvalidArgument, "--group applies to shot streams only");
    }
    in.format = "histogram-csv";
    in.hist = load_histogram(stream, HistogramFormat::Csv);
    return in;
}

nlohmann::json provenance(const std::string &command, const Input *input, nlohmann::json config) {
    nlohmann::json p{{"tool", "pnqc"}, {"version", PNQC_VERSION}, {"command", command}, {"config", std::move(config)}};
    if (input) {
        p["input"] = {{"path", input->path}, {"sha256", input->sha256}, {"format", input->format}};
    }
    return p;
}

nlohmann::json pair_json(const std::array<double, 2> &v) {
    return {v[0], v[1]};
}

struct CommonFlags {
    std::string input;
    std::string output;
    std::string efficiency = "1";
    std::string dark = "0";
    std::string modes = "1";
    uint64_t group = 1;
    uint64_t seed = 0x5eed;
    size_t resamples = 200;
    unsigned threads = 0;
};

AnalyzeOptions analyze_options(const CommonFlags &f) {
    AnalyzeOptions o;
    o.efficiency = parse_pair(f.efficiency, "--efficiency");
    o.dark = parse_pair(f.dark, "--dark");
    o.modes = parse_modes(f.modes);
    o.bootstrap.resamples = f.resamples;
    o.bootstrap.seed = f.seed;
    o.bootstrap.threads = f.threads;
    return o;
}

nlohmann::json options_json(const CommonFlags &f, const AnalyzeOptions &o) {
    return {{"efficiency", pair_json(o.efficiency)},
            {"dark", pair_json(o.dark)},
            {"modes", f.modes},
            {"group", f.group},
            {"method", method_name(o.method)},
            {"cutoff", {o.cutoff[0], o.cutoff[1]}},
            {"tol", o.tol},
            {"max_iter", o.max_iter},
            {"bootstrap", {{"resamples", o.bootstrap.resamples}, {"seed", o.bootstrap.seed}, {"rng", kGeneratorName}}}};
}

/// Moments of the input at photon level, with bootstrap errors when the
/// input is photocount data.
MomentEstimate input_moments(const Input &in, const AnalyzeOptions &o) {
    if (in.moments) {
        if (!ideal(o)) {
            return {undo_detection(in.moments->w, o.efficiency, o.dark), MomentErrors()};
        }
        return *in.moments;
    }
    AnalyzeOptions direct = o;
    direct.method = MomentMethod::Direct;
    MomentEstimate est{estimate_moments(*in.hist, direct, false).w, MomentErrors()};
    if (o.bootstrap.resamples >= 2) {
        auto samples = bootstrap(*in.hist, o.bootstrap,
                                 [&](const JointHistogram &h) { return flatten(estimate_moments(h, direct, false).w); });
        auto se = bootstrap_standard_errors(samples, flatten(est.w).size());
        size_t idx = 0;
        for (int k = 0; k <= kMaxMomentOrder; ++k) {
            for (int l = 0; k + l <= kMaxMomentOrder; ++l, ++idx) {
                est.se(k, l) = k + l == 0 || std::isnan(se[idx]) ? 0.0 : se[idx];
            }
        }
    }
    return est;
}

int cmd_analyze(const CommonFlags &f, const std::string &csv_path, const std::string &method,
                const std::array<uint64_t, 2> &cutoff, double tol, int max_iter, std::ostream &out, std::ostream &err) {
    AnalyzeOptions o = analyze_options(f);
    o.method = parse_method(method);
    o.cutoff = cutoff;
    o.tol = tol;
    o.max_iter = max_iter;
    const Input in = load_input(f.input, f.group, false);
    const AnalyzeResult res = analyze(*in.hist, o);

    nlohmann::json j{{"provenance", provenance("analyze", &in, options_json(f, o))},
                     {"report", report_to_json(res.report)},
                     {"moments", moment_table_to_json(res.w, res.se)}};
    if (res.report.per_mode) {
        j["per_mode_moments"] = moment_table_to_json(reduce_per_mode(res.w, res.report.M));
    }
    if (res.used_em) {
        j["em"] = {{"iterations", res.em_iterations},
                   {"converged", res.em_converged},
                   {"cutoff", {res.cutoff[0], res.cutoff[1]}}};
    }
    if (res.reference) {
        j["twin_beam_reference"] = report_to_json(*res.reference);
        nlohmann::json excess = nlohmann::json::object();
        for (const auto &name : report_field_names()) {
            double v = report_field(res.report, name), ref = report_field(*res.reference, name);
            if (name != "M" && std::isfinite(v) && std::isfinite(ref) && ref != 0) {
                excess[name] = v / ref - 1;
            }
        }
        j["excess_over_reference"] = excess;
    }
    emit(f.output, j.dump(2) + "\n", out);
    if (!csv_path.empty()) {
        emit(csv_path, report_csv_header() + "\n" + report_csv_row(res.report) + "\n", out);
    }
    for (const auto &w : res.report.warnings) {
        err << "pnqc: warning: " << w << "\n";
    }
    if (res.used_em && !res.em_converged) {
        err << "pnqc: error: EM did not converge; the report is flagged\n";
        return exit_code(ErrorKind::NoConvergence);
    }
    return 0;
}

struct SimulateFlags {
    std::string output;
    double pair_mean = 0.0;
    std::string noise = "0";
    int modes = 1;
    std::string efficiency = "1";
    std::string dark = "0";
    std::string saturation;
    uint64_t shots = 1000000;
    uint64_t seed = 1;
    bool stream = false;
    unsigned threads = 0;
};

int cmd_simulate(const SimulateFlags &f, std::ostream &out) {
    SimRun run;
    run.spec.pair_mean = f.pair_mean;
    auto noise = parse_pair(f.noise, "--noise");
    run.spec.noise1 = noise[0];
    run.spec.noise2 = noise[1];
    run.spec.modes = f.modes;
    auto eta = parse_pair(f.efficiency, "--efficiency");
    auto dark = parse_pair(f.dark, "--dark");
    std::array<std::optional<uint64_t>, 2> sat{};
    if (!f.saturation.empty()) {
        auto s = parse_pair(f.saturation, "--saturation");
        for (int j = 0; j < 2; ++j) {
            if (!(s[j] >= 1) || s[j] != std::floor(s[j])) {
                throw Error(ErrorKind::InvalidArgument, "saturation must be a positive integer", s[j]);
            }
            sat[j] = static_cast<uint64_t>(s[j]);
        }
    }
    for (int j = 0; j < 2; ++j) {
        run.detectors[j] = {eta[j], dark[j], sat[j]};
    }
    run.shots = f.shots;
    run.seed = f.seed;
    validate(run);

    nlohmann::json detectors = nlohmann::json::array();
    for (const auto &d : run.detectors) {
        detectors.push_back({{"efficiency", d.efficiency},
                             {"dark", d.dark},
                             {"saturation", d.saturation ? nlohmann::json(*d.saturation) : nlohmann::json(nullptr)}});
    }
    nlohmann::json meta{
        {"spec", {{"pair_mean", run.spec.pair_mean}, {"noise", {run.spec.noise1, run.spec.noise2}}, {"modes", run.spec.modes}}},
        {"detectors", detectors},
        {"shots", run.shots},
        {"seed", run.seed},
        {"generator", kGeneratorName},
        {"shots_per_shard", kShotsPerShard},
        {"format", f.stream ? "shots-csv" : "histogram"},
        {"tool", "pnqc"},
        {"version", PNQC_VERSION}};
    const std::vector<std::string> comments{
        fmt::format("pnqc {} simulate", PNQC_VERSION),
        fmt::format("generator: {} (shard s seeded with seed + s, {} shots per shard)", kGeneratorName, kShotsPerShard),
        fmt::format("seed: {}", run.seed)};

    std::ostringstream body;
    const bool json_out = std::filesystem::path(f.output).extension() == ".json";
    if (f.stream) {
        write_shots_csv(body, simulate_shots(run, f.threads), comments);
    } else if (json_out) {
        body << histogram_to_json(simulate(run, f.threads)).dump() << "\n";
    } else {
        write_histogram_csv(body, simulate(run, f.threads), comments);
    }
    emit(f.output, body.str(), out);
    if (!f.output.empty() && f.output != "-") {
        write_file_atomic(f.output + ".meta.json", meta.dump(2) + "\n");
    }
    return 0;
}

struct SweepFlags {
    std::string output;
    std::string grid = "1:4:31";
    int mu_samples = 32;
    int delta_samples = 16;
    double mu_min = 1e-3;
    uint64_t seed = 2023;
    unsigned threads = 0;
    std::string json;
    std::string contours;
};

int cmd_sweep(const SweepFlags &f, std::ostream &out, std::ostream &err) {
    RatioGrid grid;
    auto comma = f.grid.find(',');
    grid.r1_values = parse_axis(f.grid.substr(0, comma));
    grid.r2_values = comma == std::string::npos ? grid.r1_values : parse_axis(f.grid.substr(comma + 1));
    grid.mu_samples = f.mu_samples;
    grid.delta_samples = f.delta_samples;
    validate(grid);
    AtlasOptions opts;
    opts.mu_min = f.mu_min;
    opts.seed = f.seed;
    opts.threads = f.threads;
    int last_decile = -1;
    opts.progress = [&](size_t done, size_t total) {
        int decile = static_cast<int>(10 * done / total);
        if (decile != last_decile) {
            last_decile = decile;
            err << fmt::format("sweep: {}/{} cells\n", done, total) << std::flush;
        }
    };
    const auto atlas = sweep_atlas(grid, opts);

    std::ostringstream csv;
    write_atlas_csv(csv, atlas);
    emit(f.output, csv.str(), out);
    nlohmann::json config{{"grid", f.grid},
                          {"mu_samples", f.mu_samples},
                          {"delta_samples", f.delta_samples},
                          {"mu_min", f.mu_min},
                          {"seed", f.seed},
                          {"rng", kGeneratorName}};
    if (!f.json.empty()) {
        nlohmann::json j = atlas_to_json(atlas);
        j["provenance"] = provenance("sweep", nullptr, config);
        write_file_atomic(f.json, j.dump(2) + "\n");
    }
    if (!f.contours.empty()) {
        nlohmann::json j = contours_to_json(threshold_curves(atlas));
        j["provenance"] = provenance("sweep", nullptr, config);
        write_file_atomic(f.contours, j.dump(2) + "\n");
    }
    return 0;
}

int cmd_reduce(const CommonFlags &f, std::ostream &out) {
    AnalyzeOptions o = analyze_options(f);
    const Input in = load_input(f.input, f.group, true);
    const MomentEstimate est = input_moments(in, o);
    const double M = o.modes ? *o.modes : auto_modes(est.w);
    const IntensityMoments reduced = reduce_per_mode(est.w, M);
    std::optional<MomentErrors> se;
    if (in.hist && o.bootstrap.resamples >= 2) {
        AnalyzeOptions direct = o;
        auto samples = bootstrap(*in.hist, o.bootstrap, [&](const JointHistogram &h) {
            IntensityMoments w = estimate_moments(h, direct, false).w;
            return flatten(reduce_per_mode(w, o.modes ? *o.modes : auto_modes(w)));
        });
        auto s = bootstrap_standard_errors(samples, flatten(reduced).size());
        se = MomentErrors();
        size_t idx = 0;
        for (int k = 0; k <= kMaxMomentOrder; ++k) {
            for (int l = 0; k + l <= kMaxMomentOrder; ++l, ++idx) {
                (*se)(k, l) = k + l == 0 || std::isnan(s[idx]) ? 0.0 : s[idx];
            }
        }
    }
    nlohmann::json j = moment_table_to_json(reduced, se);
    j["modes"] = M;
    j["provenance"] = provenance("reduce", &in, options_json(f, o));
    emit(f.output, j.dump(2) + "\n", out);
    return 0;
}

int cmd_report_merge(const CommonFlags &f, std::ostream &out) {
    AnalyzeOptions o = analyze_options(f);
    const Input in = load_input(f.input, f.group, true);
    const MomentEstimate est = input_moments(in, o);
    const double M = o.modes ? *o.modes : auto_modes(est.w);
    auto merged_of = [&](const IntensityMoments &w, double m) { return merge_beams(m > 1 ? reduce_per_mode(w, m) : w); };
    const SingleBeamMoments merged = merged_of(est.w, M);
    const double g = g2(merged);
    const Squeezing sq = squeezing_variance(merged);

    nlohmann::json j{{"provenance", provenance("report-merge", &in, options_json(f, o))},
                     {"modes", M},
                     {"merged_moments", merged.w},
                     {"g2", g},
                     {"lambda", sq.lambda},
                     {"B", sq.B},
                     {"abs_C", sq.abs_C},
                     {"squeezed", sq.squeezed()}};
    if (in.hist && o.bootstrap.resamples >= 2) {
        auto samples = bootstrap(*in.hist, o.bootstrap, [&](const JointHistogram &h) {
            IntensityMoments w = estimate_moments(h, o, false).w;
            SingleBeamMoments b = merged_of(w, o.modes ? *o.modes : auto_modes(w));
            return std::vector<double>{g2(b), squeezing_variance(b).lambda};
        });
        auto se = bootstrap_standard_errors(samples, 2);
        nlohmann::json errors = nlohmann::json::object();
        if (!std::isnan(se[0])) errors["g2"] = se[0];
        if (!std::isnan(se[1])) errors["lambda"] = se[1];
        j["errors"] = errors;
    }
    emit(f.output, j.dump(2) + "\n", out);
    return 0;
}

void add_common(CLI::App *cmd, CommonFlags &f, bool detection) {
    cmd->add_option("--input,-i", f.input, "Photocount histogram (CSV/JSON) or shot-stream CSV")->required();
    cmd->add_option("--output,-o", f.output, "Output path (default: stdout)");
    if (detection) {
        cmd->add_option("--efficiency", f.efficiency, "Detection efficiency eta or eta1,eta2");
        cmd->add_option("--dark", f.dark, "Dark-count mean per window d or d1,d2");
    }
    cmd->add_option("--group", f.group, "Sum blocks of N detection windows (shot streams only)");
    cmd->add_option("--seed", f.seed, "Bootstrap seed");
    cmd->add_option("--bootstrap", f.resamples, "Bootstrap resamples (0 or 1 disables)");
    cmd->add_option("--threads", f.threads, "Worker threads (0: hardware concurrency)");
}

}  // namespace

int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
    CLI::App app{"Quantum-correlation analysis of two-beam Gaussian fields from photocount statistics", "pnqc"};
    app.set_version_flag("--version", PNQC_VERSION);
    app.require_subcommand(1);

    CommonFlags analyze_flags;
    std::string csv_path, method = "auto";
    std::vector<uint64_t> cutoff;
    double tol = 1e-10;
    int max_iter = 20000;
    auto *analyze_cmd = app.add_subcommand("analyze", "Full quantifier report for a photocount histogram");
    add_common(analyze_cmd, analyze_flags, true);
    analyze_cmd->add_option("--modes", analyze_flags.modes, "Mode count M for per-mode reduction, or 'auto'");
    analyze_cmd->add_option("--csv", csv_path, "Also write a flat CSV row");
    analyze_cmd->add_option("--method", method, "Moment estimator: auto, direct or em");
    analyze_cmd->add_option("--cutoff", cutoff, "EM photon-number cutoffs N1 N2")->expected(2);
    analyze_cmd->add_option("--tol", tol, "EM tolerance (L1 change)");
    analyze_cmd->add_option("--max-iter", max_iter, "EM iteration limit");

    SimulateFlags sim;
    auto *simulate_cmd = app.add_subcommand("simulate", "Synthetic multimode noisy twin-beam photocounts");
    simulate_cmd->add_option("--output,-o", sim.output, "Histogram CSV/JSON or shot-stream CSV path (default: stdout)");
    simulate_cmd->add_option("--pair-mean", sim.pair_mean, "Mean pair number per mode");
    simulate_cmd->add_option("--noise", sim.noise, "Thermal noise mean per mode, n or n1,n2");
    simulate_cmd->add_option("--modes", sim.modes, "Number of independent modes");
    simulate_cmd->add_option("--efficiency", sim.efficiency, "Detection efficiency eta or eta1,eta2");
    simulate_cmd->add_option("--dark", sim.dark, "Dark-count mean per window d or d1,d2");
    simulate_cmd->add_option("--saturation", sim.saturation, "Count ceiling s or s1,s2");
    simulate_cmd->add_option("--shots", sim.shots, "Detection windows");
    simulate_cmd->add_option("--seed", sim.seed, "Generator seed");
    simulate_cmd->add_flag("--stream", sim.stream, "Write the shot stream instead of a histogram");
    simulate_cmd->add_option("--threads", sim.threads, "Worker threads (0: hardware concurrency)");

    SweepFlags sweep;
    auto *sweep_cmd = app.add_subcommand("sweep", "Negativity atlas over purity ratios");
    sweep_cmd->add_option("--output,-o", sweep.output, "Atlas CSV path (default: stdout)");
    sweep_cmd->add_option("--grid", sweep.grid, "r1min:r1max:steps[,r2min:r2max:steps]");
    sweep_cmd->add_option("--mu-samples", sweep.mu_samples, "Global purities per cell");
    sweep_cmd->add_option("--delta-samples", sweep.delta_samples, "Seralian values per purity triple");
    sweep_cmd->add_option("--mu-min", sweep.mu_min, "Lower end of the sampled global purity");
    sweep_cmd->add_option("--seed", sweep.seed, "Sampling seed");
    sweep_cmd->add_option("--threads", sweep.threads, "Worker threads (0: hardware concurrency)");
    sweep_cmd->add_option("--json", sweep.json, "Per-cell diagnostics JSON");
    sweep_cmd->add_option("--contours", sweep.contours, "Threshold curves (10% and 1%) JSON");

    CommonFlags reduce_flags;
    reduce_flags.modes = "auto";
    auto *reduce_cmd = app.add_subcommand("reduce", "Per-mode moments of a multimode field");
    add_common(reduce_cmd, reduce_flags, true);
    reduce_cmd->add_option("--modes", reduce_flags.modes, "Mode count M, or 'auto'");

    CommonFlags merge_flags;
    auto *merge_cmd = app.add_subcommand("report-merge", "g2 and principal squeezing of the merged beam");
    add_common(merge_cmd, merge_flags, true);
    merge_cmd->add_option("--modes", merge_flags.modes, "Mode count M for per-mode reduction, or 'auto'");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        int code = app.exit(e, out, err);
        return code == 0 ? 0 : 3;
    }

    try {
        if (*analyze_cmd) {
            std::array<uint64_t, 2> c{0, 0};
            if (cutoff.size() == 2) {
                c = {cutoff[0], cutoff[1]};
            }
            return cmd_analyze(analyze_flags, csv_path, method, c, tol, max_iter, out, err);
        }
        if (*simulate_cmd) {
            return cmd_simulate(sim, out);
        }
        if (*sweep_cmd) {
            return cmd_sweep(sweep, out, err);
        }
        if (*reduce_cmd) {
            return cmd_reduce(reduce_flags, out);
        }
        if (*merge_cmd) {
            return cmd_report_merge(merge_flags, out);
        }
    } catch (const Error &e) {
        err << "pnqc: error: " << e.what() << "\n";
        return exit_code(e.kind());
    } catch (const std::exception &e) {
        err << "pnqc: internal error: " << e.what() << "\n";
        return 1;
    }
    return 3;
}

}  // namespace pnqc
