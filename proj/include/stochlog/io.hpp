// Copyright 2026 The stochlog Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// CSV / JSON / SVG renderings. Every emitter is a pure function of its input:
// no locale, clock or environment is consulted.

#include <charconv>
#include <optional>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

#include "json.hpp"
#include "stochlog/feasibility.hpp"
#include "stochlog/monte_carlo.hpp"
#include "stochlog/root_analysis.hpp"

namespace stochlog::io {

using Json = nlohmann::ordered_json;

/// 17 significant digits, enough to round-trip any double.
inline std::string format_g17(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

inline std::string format_fixed(double x, int digits) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::fixed, digits);
    return std::string(buf, res.ptr);
}

inline Json optional_number(const std::optional<double>& x) { return x ? Json(*x) : Json(nullptr); }

// ---- CSV -------------------------------------------------------------------

inline constexpr const char* kSweepCsvHeader = "mu,status,lower_r,upper_r,lower_sigma2,upper_sigma2";

inline std::string sweep_csv(const BranchCurve& curve) {
    std::string out = kSweepCsvHeader;
    out += '\n';
    auto field = [&out](const std::optional<double>& x) {
        out += ',';
        if (x) out += format_g17(*x);
    };
    for (const BranchRow& row : curve.rows) {
        out += format_g17(row.mu);
        out += ',';
        out += to_string(row.status);
        field(row.lower_r);
        field(row.upper_r);
        field(row.lower_sigma2);
        field(row.upper_sigma2);
        out += '\n';
    }
    return out;
}

namespace detail {

inline std::optional<double> parse_optional(const std::string& s) {
    if (s.empty()) return std::nullopt;
    double x = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), x);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
        throw ValidationError("sweep csv: bad number '" + s + "'");
    return x;
}

inline BranchStatus parse_status(const std::string& s) {
    for (BranchStatus st : {BranchStatus::Feasible, BranchStatus::Infeasible, BranchStatus::Tangent,
                            BranchStatus::Error})
        if (s == to_string(st)) return st;
    throw ValidationError("sweep csv: unknown status '" + s + "'");
}

}  // namespace detail

/// Inverse of sweep_csv (rows only; the base parameters are not in the file).
inline std::vector<BranchRow> parse_sweep_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != kSweepCsvHeader) throw ValidationError("sweep csv: bad header");
    std::vector<BranchRow> rows;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::string cell;
        std::istringstream ls(line);
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        if (!line.empty() && line.back() == ',') cells.emplace_back();
        if (cells.size() != 6) throw ValidationError("sweep csv: expected 6 fields");
        BranchRow row;
        row.mu = *detail::parse_optional(cells[0]);
        row.status = detail::parse_status(cells[1]);
        row.lower_r = detail::parse_optional(cells[2]);
        row.upper_r = detail::parse_optional(cells[3]);
        row.lower_sigma2 = detail::parse_optional(cells[4]);
        row.upper_sigma2 = detail::parse_optional(cells[5]);
        rows.push_back(row);
    }
    return rows;
}

// ---- JSON ------------------------------------------------------------------

inline Json to_json(const ModelParams& p) {
    return Json{{"alpha", p.alpha}, {"beta", p.beta}, {"v", p.v}, {"mu", p.mu}};
}

inline Json to_json(const SweepBase& b) { return Json{{"alpha", b.alpha}, {"beta", b.beta}, {"v", b.v}}; }

inline Json to_json(const RootClassification& rc) {
    Json j;
    j["params"] = to_json(rc.params);
    j["coefficients"] = Json{{"a", rc.coeffs.a}, {"b", rc.coeffs.b}, {"c", rc.coeffs.c}, {"d", rc.coeffs.d}};
    j["negative_root"] = rc.negative_root;
    Json pos = Json::array();
    for (const Root& r : rc.positive_roots) pos.push_back(Json{{"value", r.value}, {"multiplicity", r.multiplicity}});
    j["positive_roots"] = pos;
    j["delta"] = rc.delta;
    j["stationary"] = rc.stationary ? Json{{"r_minus", rc.stationary->lower}, {"r_plus", rc.stationary->upper}}
                                    : Json(nullptr);
    j["inflection"] = rc.inflection;
    j["theorem2_holds"] = rc.theorem2_holds;
    j["p_at_r_plus"] = optional_number(rc.p_at_r_plus);
    Json s2 = Json::array();
    for (const RootSigma2& r : rc.per_root_sigma2)
        s2.push_back(Json{{"root", r.root}, {"sigma2", r.sigma2}, {"model_consistent", r.model_consistent}});
    j["per_root_sigma2"] = s2;
    j["full_ordering_holds"] = rc.full_ordering_holds;
    return j;
}

inline Json to_json(const SimReport& r) {
    return Json{{"n", r.n},
                {"seed", r.seed},
                {"alpha_hat", r.alpha_hat},
                {"beta_hat", r.beta_hat},
                {"se_alpha", r.se_alpha},
                {"se_beta", r.se_beta},
                {"raw",
                 {{"mean_next", r.mean_next},
                  {"var_next", r.var_next},
                  {"mean_prev", r.mean_prev},
                  {"var_prev", r.var_prev}}}};
}

inline Json to_json(const VerifyResult& v) {
    Json j{{"root", v.root}, {"sigma2", v.sigma2}, {"verdict", to_string(v.verdict)}};
    if (v.report) {
        j["z_alpha"] = v.z_alpha;
        j["z_beta"] = v.z_beta;
        j["simulation"] = to_json(*v.report);
    }
    return j;
}

inline Json to_json(const std::vector<Interval>& ivs) {
    Json arr = Json::array();
    for (const Interval& iv : ivs) arr.push_back(Json{{"lo", iv.lo}, {"hi", iv.hi}});
    return arr;
}

inline Json to_json(const ComparisonReport& rep) {
    Json diffs = Json::array();
    for (const BranchDiff& d : rep.diffs)
        diffs.push_back(Json{{"mu", d.mu}, {"lower_diff", d.lower_diff}, {"upper_diff", d.upper_diff}});
    return Json{{"common_feasible", rep.common_feasible},
                {"lower_a_greater", rep.lower_a_greater},
                {"lower_b_greater", rep.lower_b_greater},
                {"upper_a_greater", rep.upper_a_greater},
                {"upper_b_greater", rep.upper_b_greater},
                {"max_abs_diff", rep.max_abs_diff},
                {"infeasible_a", to_json(rep.intervals_a)},
                {"infeasible_b", to_json(rep.intervals_b)},
                {"a_strictly_contains_b", rep.a_strictly_contains_b},
                {"b_strictly_contains_a", rep.b_strictly_contains_a},
                {"diffs", diffs}};
}

/// Compact, key-order-preserving dump plus trailing newline.
inline std::string dump(const Json& j) { return j.dump(2) + "\n"; }

// ---- SVG -------------------------------------------------------------------

struct SvgOptions {
    double r_max = 10.0;  ///< branch values above this are clipped
    int width = 640;
    int height = 400;
};

/// Static plot of both branches over mu in [0, 1] with infeasible bands shaded.
inline std::string sweep_svg(const BranchCurve& curve, const std::vector<Interval>& infeasible,
                             const SvgOptions& opt = {}) {
    const double left = 50, right = 20, top = 30, bottom = 40;
    const double plot_w = opt.width - left - right;
    const double plot_h = opt.height - top - bottom;
    auto px = [&](double mu) { return format_fixed(left + mu * plot_w, 2); };
    auto py = [&](double r) { return format_fixed(top + (1.0 - r / opt.r_max) * plot_h, 2); };

    std::string s;
    s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(opt.width) + "\" height=\"" +
         std::to_string(opt.height) + "\">\n";
    s += "<rect x=\"0\" y=\"0\" width=\"" + std::to_string(opt.width) + "\" height=\"" +
         std::to_string(opt.height) + "\" fill=\"white\"/>\n";
    for (const Interval& iv : infeasible) {
        s += "<rect x=\"" + px(iv.lo) + "\" y=\"" + format_fixed(top, 2) + "\" width=\"" +
             format_fixed((iv.hi - iv.lo) * plot_w, 2) + "\" height=\"" + format_fixed(plot_h, 2) +
             "\" fill=\"#dddddd\"/>\n";
    }
    s += "<rect x=\"" + format_fixed(left, 2) + "\" y=\"" + format_fixed(top, 2) + "\" width=\"" +
         format_fixed(plot_w, 2) + "\" height=\"" + format_fixed(plot_h, 2) +
         "\" fill=\"none\" stroke=\"black\"/>\n";

    auto emit_branch = [&](bool upper, const char* colour) {
        std::string pts;
        auto flush = [&]() {
            if (!pts.empty())
                s += std::string("<polyline fill=\"none\" stroke=\"") + colour + "\" stroke-width=\"1.5\" points=\"" +
                     pts + "\"/>\n";
            pts.clear();
        };
        for (const BranchRow& row : curve.rows) {
            const auto& r = upper ? row.upper_r : row.lower_r;
            if (!r || *r > opt.r_max || *r < 0.0) {
                flush();
                continue;
            }
            if (!pts.empty()) pts += ' ';
            pts += px(row.mu) + "," + py(*r);
        }
        flush();
    };
    emit_branch(false, "#1f77b4");
    emit_branch(true, "#d62728");

    s += "<text x=\"" + format_fixed(left, 2) + "\" y=\"20\" font-family=\"sans-serif\" font-size=\"12\">alpha=" +
         format_g17(curve.base.alpha) + " beta=" + format_g17(curve.base.beta) + " v=" + format_g17(curve.base.v) +
         "</text>\n";
    s += "<text x=\"" + format_fixed(left + plot_w / 2, 2) + "\" y=\"" + std::to_string(opt.height - 10) +
         "\" font-family=\"sans-serif\" font-size=\"12\">mu</text>\n";
    s += "<text x=\"10\" y=\"" + format_fixed(top + plot_h / 2, 2) +
         "\" font-family=\"sans-serif\" font-size=\"12\">r</text>\n";
    s += "<text x=\"" + format_fixed(left - 5, 2) + "\" y=\"" + format_fixed(top + 4, 2) +
         "\" font-family=\"sans-serif\" font-size=\"10\" text-anchor=\"end\">" + format_g17(opt.r_max) + "</text>\n";
    s += "</svg>\n";
    return s;
}

}  // namespace stochlog::io
