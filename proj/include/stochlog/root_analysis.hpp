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

// Real roots of the growth-rate cubic and the two-positive-root condition.
//
// For model-derived coefficients a > 0, b < 0, d > 0, so p(-inf) = -inf, p(0) = d > 0
// and p(+inf) = +inf: there is always one negative root, and the two positive roots
// exist exactly when the local minimum p(r+) dips below zero.

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "stochlog/cubic_model.hpp"
#include "stochlog/errors.hpp"

namespace stochlog {

struct Root {
    double value = 0.0;
    int multiplicity = 1;  ///< 1, or 2 for a tangent (double) root

    friend bool operator==(const Root&, const Root&) = default;
};

struct StationaryPoints {
    double lower = 0.0;  ///< r-
    double upper = 0.0;  ///< r+
};

struct RootSigma2 {
    double root = 0.0;
    double sigma2 = 0.0;
    bool model_consistent = false;  ///< sigma2 > 0
};

struct Theorem2Result {
    bool holds = false;
    double delta = 0.0;
    std::optional<double> p_at_r_plus;  ///< absent when delta <= 0
};

struct RootClassification {
    ModelParams params;
    CubicCoeffs coeffs;
    double negative_root = 0.0;
    std::vector<Root> positive_roots;
    double delta = 0.0;
    std::optional<StationaryPoints> stationary;
    double inflection = 0.0;
    bool theorem2_holds = false;
    std::optional<double> p_at_r_plus;
    std::vector<RootSigma2> per_root_sigma2;
    /// r1 < r- < ri < r2 < r+ < r3. Only meaningful with two distinct positive roots;
    /// the ri < r2 link does not hold for every parameter set.
    bool full_ordering_holds = false;

    int distinct_positive_count() const { return static_cast<int>(positive_roots.size()); }
    bool has_two_distinct_positive() const {
        return positive_roots.size() == 2 && positive_roots[0].multiplicity == 1;
    }
};

/// Residual and tangency tolerance, relative to the monomial scale at the root.
inline constexpr double kResidualTol = 1e-12;
/// Bisection stops once the bracket is this narrow relative to its magnitude.
inline constexpr double kBisectRelWidth = 1e-14;

/// Discriminant of p'(r) = 3a r^2 + 2b r + c.
inline double discriminant_delta(const CubicCoeffs& k) { return 4.0 * k.b * k.b - 12.0 * k.a * k.c; }

inline std::optional<StationaryPoints> stationary_points(const CubicCoeffs& k) {
    const double delta = discriminant_delta(k);
    if (!(delta > 0.0) || k.a == 0.0) return std::nullopt;
    const double root_delta = std::sqrt(delta);
    double x0 = (-2.0 * k.b - root_delta) / (6.0 * k.a);
    double x1 = (-2.0 * k.b + root_delta) / (6.0 * k.a);
    if (x1 < x0) std::swap(x0, x1);
    return StationaryPoints{x0, x1};
}

inline double inflection_point(const CubicCoeffs& k) {
    if (k.a == 0.0) throw DomainError("inflection_point: degenerate cubic (a == 0)");
    return -k.b / (3.0 * k.a);
}

/// Cauchy bound: every real root lies strictly inside (-R, R).
inline double cauchy_bound(const CubicCoeffs& k) {
    return 1.0 + std::max({std::abs(k.b), std::abs(k.c), std::abs(k.d)}) / std::abs(k.a);
}

namespace detail {

inline int sign_of(double x) { return (x > 0.0) - (x < 0.0); }

// Bisect a sign change on [lo, hi], then take a few bracketed Newton steps.
inline double bracketed_root(const CubicCoeffs& k, double lo, double hi) {
    const int sign_lo = sign_of(eval_poly(k, lo));
    for (;;) {
        const double mid = lo + 0.5 * (hi - lo);
        if (!(mid > lo && mid < hi)) break;
        const double pm = eval_poly(k, mid);
        if (pm == 0.0) return mid;
        if (sign_of(pm) == sign_lo)
            lo = mid;
        else
            hi = mid;
        if (hi - lo <= kBisectRelWidth * std::max(std::abs(lo), std::abs(hi))) break;
    }
    double x = lo + 0.5 * (hi - lo);
    double px = eval_poly(k, x);
    for (int iter = 0; iter < 4 && px != 0.0; ++iter) {
        const double slope = eval_deriv(k, x);
        if (slope == 0.0) break;
        const double next = x - px / slope;
        if (!(next >= lo && next <= hi)) break;
        const double pn = eval_poly(k, next);
        if (!(std::abs(pn) < std::abs(px))) break;
        x = next;
        px = pn;
    }
    return x;
}

}  // namespace detail

/// All real roots in increasing order.
///
/// The line is cut at the stationary points (and at 0 when d == 0), each monotone
/// piece inside the Cauchy bound is checked for a sign change and bisected. A local
/// extremum whose value lies within tolerance on the non-crossing side, or is exactly
/// zero, is reported as a double root.
inline std::vector<Root> real_roots(const CubicCoeffs& k) {
    if (k.a == 0.0) throw DomainError("real_roots: degenerate cubic (a == 0)");
    const double bound = cauchy_bound(k);

    struct Breakpoint {
        double x;
        int sign;
        bool is_root;
        int multiplicity;
    };
    std::vector<Breakpoint> points;
    points.push_back({-bound, detail::sign_of(eval_poly(k, -bound)), false, 0});

    std::vector<double> stationary;
    if (auto sp = stationary_points(k)) stationary = {sp->lower, sp->upper};
    std::vector<double> cuts = stationary;
    if (k.d == 0.0) cuts.push_back(0.0);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    for (double x : cuts) {
        const double px = eval_poly(k, x);
        const bool is_stationary = std::find(stationary.begin(), stationary.end(), x) != stationary.end();
        if (is_stationary) {
            // Local min if p'' > 0: a tiny nonnegative value means the graph only touches zero.
            const double curvature = eval_second(k, x);
            const double tol = kResidualTol * k.scale_at(x);
            const double toward_axis = curvature > 0.0 ? px : -px;
            if (px == 0.0 || (toward_axis >= 0.0 && toward_axis <= tol)) {
                points.push_back({x, 0, true, 2});
                continue;
            }
        } else if (px == 0.0) {
            points.push_back({x, 0, true, 1});
            continue;
        }
        points.push_back({x, detail::sign_of(px), false, 0});
    }
    points.push_back({bound, detail::sign_of(eval_poly(k, bound)), false, 0});

    std::vector<Root> roots;
    for (std::size_t i = 0; i + 1 < points.size(); ++i) {
        const auto& left = points[i];
        const auto& right = points[i + 1];
        if (left.is_root && (roots.empty() || roots.back().value != left.x))
            roots.push_back({left.x, left.multiplicity});
        if (left.sign != 0 && right.sign != 0 && left.sign != right.sign) {
            const double x = detail::bracketed_root(k, left.x, right.x);
            const double residual = std::abs(eval_poly(k, x));
            if (!(residual <= kResidualTol * k.scale_at(x)))
                throw NumericalError("real_roots: residual target unreachable", residual);
            roots.push_back({x, 1});
        }
    }
    return roots;
}

/// Delta > 0 and p(r+) < 0, with r+ = (2 v alpha mu + sqrt(Delta)) / (6a).
inline Theorem2Result theorem2_sufficient(const ModelParams& params) {
    const CubicCoeffs k = build_coefficients(params);
    Theorem2Result out;
    out.delta = discriminant_delta(k);
    if (out.delta > 0.0) {
        const double r_plus = (2.0 * params.v * params.alpha * params.mu + std::sqrt(out.delta)) / (6.0 * k.a);
        out.p_at_r_plus = eval_poly(k, r_plus);
        out.holds = *out.p_at_r_plus < 0.0;
    }
    return out;
}

inline RootClassification classify(const ModelParams& params) {
    RootClassification out;
    out.params = params;
    out.coeffs = build_coefficients(params);
    const auto& k = out.coeffs;

    const std::vector<Root> roots = real_roots(k);
    int negatives = 0;
    for (const Root& root : roots) {
        if (root.value < 0.0) {
            out.negative_root = root.value;
            ++negatives;
        } else if (root.value > 0.0) {
            out.positive_roots.push_back(root);
        }
    }
    if (negatives != 1)
        throw NumericalError("classify: expected exactly one negative root", negatives);

    out.delta = discriminant_delta(k);
    out.stationary = stationary_points(k);
    out.inflection = inflection_point(k);

    const Theorem2Result t2 = theorem2_sufficient(params);
    out.theorem2_holds = t2.holds;
    out.p_at_r_plus = t2.p_at_r_plus;
    if (out.theorem2_holds && !out.has_two_distinct_positive())
        throw NumericalError("classify: Delta > 0 and p(r+) < 0 but two positive roots not resolved",
                             static_cast<double>(out.positive_roots.size()));

    for (const Root& root : out.positive_roots) {
        const double s2 = sigma2_from_root(params, root.value);
        out.per_root_sigma2.push_back({root.value, s2, s2 > 0.0});
    }

    if (out.has_two_distinct_positive() && out.stationary) {
        const double r1 = out.negative_root;
        const double r2 = out.positive_roots[0].value;
        const double r3 = out.positive_roots[1].value;
        const auto& sp = *out.stationary;
        out.full_ordering_holds =
            r1 < sp.lower && sp.lower < out.inflection && out.inflection < r2 && r2 < sp.upper && sp.upper < r3;
    }
    return out;
}

}  // namespace stochlog
