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

// Raw moments of N(mu, sigma^2) and of the logistic transform X(1-X).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "stochlog/errors.hpp"

namespace stochlog {

/// Population state distribution X ~ N(mu, sigma2). sigma2 == 0 is the point mass at mu.
struct NormalParams {
    double mu = 0.0;
    double sigma2 = 0.0;

    void validate() const {
        if (!std::isfinite(mu)) throw ValidationError("mu must be finite");
        if (!std::isfinite(sigma2) || sigma2 < 0.0)
            throw ValidationError("sigma2 must be finite and >= 0");
    }

    double sigma() const { return std::sqrt(sigma2); }
};

/// E[Z^k] for Z ~ N(0, 1), exact for k <= 20.
///
/// Odd moments vanish by symmetry; even moments are (2n)!/(2^n n!), which is the
/// odd double factorial (2n-1)!! and is accumulated in integer arithmetic.
inline double std_normal_moment(int k) {
    if (k < 0 || k > 20)
        throw DomainError("std_normal_moment: k must be in [0, 20], got " + std::to_string(k) +
                          "; use raw_moment_oracle for higher orders");
    if (k % 2 != 0) return 0.0;
    std::uint64_t acc = 1;
    for (std::uint64_t odd = 1; odd < static_cast<std::uint64_t>(k); odd += 2) acc *= odd;
    return static_cast<double>(acc);
}

/// E[X^n] for n in 1..4.
inline double normal_raw_moment(const NormalParams& p, int n) {
    const double m = p.mu;
    const double s2 = p.sigma2;
    switch (n) {
        case 1: return m;
        case 2: return m * m + s2;
        case 3: return m * m * m + 3.0 * m * s2;
        case 4: return m * m * m * m + 6.0 * m * m * s2 + 3.0 * s2 * s2;
        default:
            throw DomainError("normal_raw_moment: n must be in 1..4, got " + std::to_string(n));
    }
}

/// E[X^2 (1-X)^2] = E[X^2] - 2E[X^3] + E[X^4].
inline double structural_second_moment(const NormalParams& p) {
    return normal_raw_moment(p, 2) - 2.0 * normal_raw_moment(p, 3) + normal_raw_moment(p, 4);
}

namespace detail {

inline constexpr double kOracleRelTol = 1e-12;
inline constexpr double kOracleHalfWidth = 12.0;  // in units of sigma
inline constexpr unsigned kOracleMaxDepth = 30;

}  // namespace detail

/// Reference value of E[f(X)] by adaptive Gauss-Kronrod quadrature over mu +- 12 sigma.
///
/// Test oracle only; the analytic path never calls it.
template <class F>
double normal_expectation_oracle(const NormalParams& p, F&& f) {
    if (!(p.sigma2 > 0.0)) throw DomainError("quadrature oracle requires sigma2 > 0");
    const double sigma = p.sigma();
    const double norm = 1.0 / (sigma * std::sqrt(2.0 * 3.14159265358979323846));
    auto integrand = [&](double x) {
        const double z = (x - p.mu) / sigma;
        return f(x) * norm * std::exp(-0.5 * z * z);
    };
    double error = 0.0;
    double l1 = 0.0;
    const double lo = p.mu - detail::kOracleHalfWidth * sigma;
    const double hi = p.mu + detail::kOracleHalfWidth * sigma;
    const double value = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
        integrand, lo, hi, detail::kOracleMaxDepth, detail::kOracleRelTol, &error, &l1);
    // Error is judged against the L1 norm so sign-cancelling integrands (odd moments
    // near mu = 0) are not held to an unreachable relative target.
    if (!(error <= detail::kOracleRelTol * std::max(l1, std::numeric_limits<double>::min())))
        throw NumericalError("quadrature oracle did not converge", error);
    return value;
}

/// E[X^n] by quadrature; n <= 20.
inline double raw_moment_oracle(const NormalParams& p, int n) {
    if (n < 0 || n > 20)
        throw DomainError("raw_moment_oracle: n must be in [0, 20], got " + std::to_string(n));
    return normal_expectation_oracle(p, [n](double x) { return std::pow(x, n); });
}

}  // namespace stochlog
