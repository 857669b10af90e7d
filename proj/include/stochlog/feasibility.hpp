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

// Sweeps of the positive roots over mu at fixed (alpha, beta, v).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "stochlog/errors.hpp"
#include "stochlog/root_analysis.hpp"

namespace stochlog {

struct GridSpec {
    double mu_min = 0.0005;
    double mu_max = 0.9995;
    int points = 2001;

    void validate() const {
        if (!(std::isfinite(mu_min) && std::isfinite(mu_max) && 0.0 < mu_min && mu_min < mu_max && mu_max < 1.0))
            throw ValidationError("grid must satisfy 0 < mu_min < mu_max < 1");
        if (points < 2) throw ValidationError("grid must have points >= 2");
    }

    /// Uniform grid; the last node is exactly mu_max.
    std::vector<double> nodes() const {
        validate();
        std::vector<double> out(static_cast<std::size_t>(points));
        const double step = (mu_max - mu_min) / static_cast<double>(points - 1);
        for (int i = 0; i < points; ++i) out[static_cast<std::size_t>(i)] = mu_min + step * i;
        out.back() = mu_max;
        return out;
    }
};

/// (alpha, beta, v) held fixed along a sweep.
struct SweepBase {
    double alpha = 0.0;
    double beta = 0.0;
    double v = 0.0;

    ModelParams at(double mu) const { return {alpha, beta, v, mu}; }

    void validate() const { at(0.5).validate(Validity::Algebraic); }

    friend bool operator==(const SweepBase&, const SweepBase&) = default;
};

enum class BranchStatus { Feasible, Infeasible, Tangent, Error };

inline const char* to_string(BranchStatus s) {
    switch (s) {
        case BranchStatus::Feasible: return "feasible";
        case BranchStatus::Infeasible: return "infeasible";
        case BranchStatus::Tangent: return "tangent";
        case BranchStatus::Error: return "error";
    }
    return "error";
}

struct BranchRow {
    double mu = 0.0;
    BranchStatus status = BranchStatus::Error;
    std::optional<double> lower_r;
    std::optional<double> upper_r;
    std::optional<double> lower_sigma2;
    std::optional<double> upper_sigma2;
};

struct BranchCurve {
    SweepBase base;
    std::vector<BranchRow> rows;
};

/// Feasible means two distinct positive roots.
inline bool is_feasible(const SweepBase& base, double mu) {
    try {
        return classify(base.at(mu)).has_two_distinct_positive();
    } catch (const NumericalError&) {
        return false;
    }
}

inline BranchRow evaluate_row(const SweepBase& base, double mu) {
    BranchRow row;
    row.mu = mu;
    try {
        const RootClassification rc = classify(base.at(mu));
        if (rc.has_two_distinct_positive()) {
            row.status = BranchStatus::Feasible;
            row.lower_r = rc.per_root_sigma2[0].root;
            row.upper_r = rc.per_root_sigma2[1].root;
            row.lower_sigma2 = rc.per_root_sigma2[0].sigma2;
            row.upper_sigma2 = rc.per_root_sigma2[1].sigma2;
        } else if (!rc.positive_roots.empty()) {
            // Double root: both branches meet.
            row.status = BranchStatus::Tangent;
            row.lower_r = row.upper_r = rc.per_root_sigma2[0].root;
            row.lower_sigma2 = row.upper_sigma2 = rc.per_root_sigma2[0].sigma2;
        } else {
            row.status = BranchStatus::Infeasible;
        }
    } catch (const NumericalError&) {
        row.status = BranchStatus::Error;
    }
    return row;
}

/// Classify every grid point; rows are independent, so `threads` only changes speed.
inline BranchCurve sweep_mu(const SweepBase& base, const GridSpec& grid = {}, unsigned threads = 1) {
    base.validate();
    const std::vector<double> mus = grid.nodes();
    BranchCurve curve;
    curve.base = base;
    curve.rows.resize(mus.size());

    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = std::min<unsigned>(threads, static_cast<unsigned>(mus.size()));
    auto work = [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) curve.rows[i] = evaluate_row(base, mus[i]);
    };
    if (threads <= 1) {
        work(0, mus.size());
    } else {
        std::vector<std::jthread> pool;
        const std::size_t per = (mus.size() + threads - 1) / threads;
        for (std::size_t begin = 0; begin < mus.size(); begin += per)
            pool.emplace_back(work, begin, std::min(mus.size(), begin + per));
    }
    return curve;
}

struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    friend bool operator==(const Interval&, const Interval&) = default;
};

namespace detail {

// Shrink [feasible_mu, infeasible_mu] (either order) until narrower than tol.
inline double refine_boundary(const std::function<bool(double)>& feasible, double feasible_mu,
                              double infeasible_mu, double tol) {
    double good = feasible_mu;
    double bad = infeasible_mu;
    while (std::abs(bad - good) > tol) {
        const double mid = good + 0.5 * (bad - good);
        if (mid == good || mid == bad) break;
        if (feasible(mid))
            good = mid;
        else
            bad = mid;
    }
    return good + 0.5 * (bad - good);
}

}  // namespace detail

/// Maximal runs of Infeasible rows, each interior boundary refined by bisection on
/// `feasible` to width <= refine_tol. Runs touching the grid ends keep the grid node.
inline std::vector<Interval> infeasible_intervals(const BranchCurve& curve, double refine_tol,
                                                  const std::function<bool(double)>& feasible) {
    std::vector<Interval> out;
    const auto& rows = curve.rows;
    std::size_t i = 0;
    while (i < rows.size()) {
        if (rows[i].status != BranchStatus::Infeasible) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j + 1 < rows.size() && rows[j + 1].status == BranchStatus::Infeasible) ++j;
        Interval iv{rows[i].mu, rows[j].mu};
        const bool refine = refine_tol > 0.0 && feasible;
        if (refine && i > 0) iv.lo = detail::refine_boundary(feasible, rows[i - 1].mu, rows[i].mu, refine_tol);
        if (refine && j + 1 < rows.size())
            iv.hi = detail::refine_boundary(feasible, rows[j + 1].mu, rows[j].mu, refine_tol);
        out.push_back(iv);
        i = j + 1;
    }
    return out;
}

inline std::vector<Interval> infeasible_intervals(const BranchCurve& curve, double refine_tol = 1e-8) {
    const SweepBase base = curve.base;
    return infeasible_intervals(curve, refine_tol, [base](double mu) { return is_feasible(base, mu); });
}

struct BranchDiff {
    double mu = 0.0;
    double lower_diff = 0.0;  ///< A - B
    double upper_diff = 0.0;  ///< A - B
};

struct ComparisonReport {
    std::vector<BranchDiff> diffs;  ///< common feasible grid points only
    std::size_t common_feasible = 0;
    std::size_t lower_a_greater = 0;
    std::size_t lower_b_greater = 0;
    std::size_t upper_a_greater = 0;
    std::size_t upper_b_greater = 0;
    double max_abs_diff = 0.0;
    std::vector<Interval> intervals_a;
    std::vector<Interval> intervals_b;
    bool a_strictly_contains_b = false;
    bool b_strictly_contains_a = false;

    double lower_a_fraction() const { return common_feasible ? double(lower_a_greater) / common_feasible : 0.0; }
    double upper_a_fraction() const { return common_feasible ? double(upper_a_greater) / common_feasible : 0.0; }
};

/// Every inner interval lies strictly inside some outer interval. False when inner is empty.
inline bool strictly_contains(const std::vector<Interval>& outer, const std::vector<Interval>& inner) {
    if (inner.empty()) return false;
    return std::all_of(inner.begin(), inner.end(), [&](const Interval& in) {
        return std::any_of(outer.begin(), outer.end(),
                           [&](const Interval& out) { return out.lo < in.lo && in.hi < out.hi; });
    });
}

inline ComparisonReport compare_sweeps(const BranchCurve& a, const BranchCurve& b, double refine_tol = 1e-8) {
    if (a.rows.size() != b.rows.size()) throw ValidationError("compare_sweeps: grids differ in size");
    for (std::size_t i = 0; i < a.rows.size(); ++i)
        if (a.rows[i].mu != b.rows[i].mu) throw ValidationError("compare_sweeps: grids differ");

    ComparisonReport rep;
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
        const BranchRow& ra = a.rows[i];
        const BranchRow& rb = b.rows[i];
        if (ra.status != BranchStatus::Feasible || rb.status != BranchStatus::Feasible) continue;
        BranchDiff d{ra.mu, *ra.lower_r - *rb.lower_r, *ra.upper_r - *rb.upper_r};
        ++rep.common_feasible;
        rep.lower_a_greater += d.lower_diff > 0.0;
        rep.lower_b_greater += d.lower_diff < 0.0;
        rep.upper_a_greater += d.upper_diff > 0.0;
        rep.upper_b_greater += d.upper_diff < 0.0;
        rep.max_abs_diff = std::max({rep.max_abs_diff, std::abs(d.lower_diff), std::abs(d.upper_diff)});
        rep.diffs.push_back(d);
    }
    rep.intervals_a = infeasible_intervals(a, refine_tol);
    rep.intervals_b = infeasible_intervals(b, refine_tol);
    rep.a_strictly_contains_b = strictly_contains(rep.intervals_a, rep.intervals_b);
    rep.b_strictly_contains_a = strictly_contains(rep.intervals_b, rep.intervals_a);
    return rep;
}

}  // namespace stochlog
