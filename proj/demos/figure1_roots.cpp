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

// Roots of the growth-rate cubic at alpha=2, beta=1.2, v=1.5, mu=0.05.

#include <cstdio>

#include "stochlog/stochlog.hpp"

int main() {
    const stochlog::ModelParams params{2.0, 1.2, 1.5, 0.05};
    const auto rc = stochlog::classify(params);
    std::printf("a=%.8g b=%.8g c=%.8g d=%.8g\n", rc.coeffs.a, rc.coeffs.b, rc.coeffs.c, rc.coeffs.d);
    std::printf("negative root r1 = %.12g\n", rc.negative_root);
    for (const auto& r : rc.per_root_sigma2)
        std::printf("positive root %.12g  sigma2 = %.6g%s\n", r.root, r.sigma2,
                    r.model_consistent ? "" : "  (not a valid variance)");
    std::printf("Delta = %.8g, p(r+) = %.8g, two positive roots guaranteed: %s\n", rc.delta,
                rc.p_at_r_plus.value_or(0.0), rc.theorem2_holds ? "yes" : "no");
}
