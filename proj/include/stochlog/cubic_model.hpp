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

// The growth-rate cubic p(r) = a r^3 + b r^2 + c r + d obtained by imposing
// E[X_{t+1}] = alpha E[X_t] and Var[X_{t+1}] = beta Var[X_t] on
// X_{t+1} = r X_t (1 - X_t) eps_t with X_t ~ N(mu, sigma^2), E[eps] = 1, E[eps^2] = v.

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>

#include "stochlog/errors.hpp"
#include "stochlog/moments.hpp"

namespace stochlog {

/// Which bounds to enforce on v.
enum class Validity {
    Algebraic,    ///< v > 0; enough for building and solving the cubic
    Simulatable,  ///< v >= 1; required to sample a nonnegative mean-one eps
};

struct ModelParams {
    double alpha = 0.0;  ///< mean scaling factor
    double beta = 0.0;   ///< variance scaling factor
    double v = 0.0;      ///< E[eps^2]
    double mu = 0.0;     ///< population mean, strictly inside (0, 1)

    void validate(Validity level = Validity::Algebraic) const {
        auto finite = [](double x) { return std::isfinite(x); };
        if (!finite(alpha) || !(alpha > 0.0)) throw ValidationError("alpha must satisfy alpha > 0");
        if (!finite(beta) || !(beta > 0.0)) throw ValidationError("beta must satisfy beta > 0");
        if (!finite(mu) || !(mu > 0.0 && mu < 1.0))
            throw ValidationError("mu must satisfy 0 < mu < 1");
        if (!finite(v) || !(v > 0.0)) throw ValidationError("v must satisfy v > 0");
        if (level == Validity::Simulatable && !(v >= 1.0))
            throw ValidationError(
                "v must satisfy v >= 1 to sample eps (no nonnegative mean-1 distribution has "
                "E[eps^2] < 1)");
    }

    friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

struct CubicCoeffs {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
    double d = 0.0;
    std::optional<ModelParams> source;  ///< empty for synthetic polynomials

    /// Largest monomial magnitude at r; the natural scale for residuals.
    double scale_at(double r) const {
        const double r2 = r * r;
        return std::max({std::abs(a * r2 * r), std::abs(b * r2), std::abs(c * r), std::abs(d)});
    }
};

/// Shape factor g(mu) = -2 mu^3 + 4 mu^2 - 3 mu + 1, so that a = v mu g(mu).
inline double shape_factor(double mu) { return ((-2.0 * mu + 4.0) * mu - 3.0) * mu + 1.0; }

inline CubicCoeffs build_coefficients(const ModelParams& params) {
    params.validate(Validity::Algebraic);
    const double al = params.alpha;
    const double be = params.beta;
    const double v = params.v;
    const double mu = params.mu;
    const double mu2 = mu * mu;
    const double mu3 = mu2 * mu;
    const double mu4 = mu3 * mu;
    CubicCoeffs k;
    k.a = v * (-2.0 * mu4 + 4.0 * mu3 - 3.0 * mu2 + mu);
    k.b = -v * al * mu;
    k.c = v * (3.0 * al * al * mu2) + be * mu * (mu - 1.0) - al * al * mu2;
    k.d = be * al * mu;
    k.source = params;
    return k;
}

inline double eval_poly(const CubicCoeffs& k, double r) { return ((k.a * r + k.b) * r + k.c) * r + k.d; }

inline double eval_deriv(const CubicCoeffs& k, double r) { return (3.0 * k.a * r + 2.0 * k.b) * r + k.c; }

inline double eval_second(const CubicCoeffs& k, double r) { return 6.0 * k.a * r + 2.0 * k.b; }

/// Variance implied by a candidate growth rate through the expectation condition:
/// sigma^2 = mu - mu^2 - alpha mu / r. The sign is not checked here.
inline double sigma2_from_root(const ModelParams& params, double r) {
    if (!(r > 0.0)) throw DomainError("sigma2_from_root requires r > 0");
    return params.mu - params.mu * params.mu - params.alpha * params.mu / r;
}

struct ForwardResult {
    double alpha = 0.0;
    double beta = 0.0;
    bool within_hypotheses = false;  ///< alpha > 0 and beta > 0
};

/// Inverse direction: given the state distribution, v and r, return the (alpha, beta)
/// for which r solves the cubic.
inline ForwardResult forward_alpha_beta(const NormalParams& p, double v, double r) {
    if (!(p.sigma2 > 0.0)) throw ValidationError("forward_alpha_beta requires sigma2 > 0");
    if (!(p.mu > 0.0 && p.mu < 1.0)) throw ValidationError("forward_alpha_beta requires 0 < mu < 1");
    if (!(r > 0.0)) throw ValidationError("forward_alpha_beta requires r > 0");
    if (!(v > 0.0)) throw ValidationError("forward_alpha_beta requires v > 0");
    ForwardResult out;
    out.alpha = r * (p.mu - p.mu * p.mu - p.sigma2) / p.mu;
    const double mean_next = out.alpha * p.mu;
    out.beta = (r * r * v * structural_second_moment(p) - mean_next * mean_next) / p.sigma2;
    out.within_hypotheses = out.alpha > 0.0 && out.beta > 0.0;
    return out;
}

}  // namespace stochlog
