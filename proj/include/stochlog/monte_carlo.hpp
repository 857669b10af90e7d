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

// One-step ensemble simulation of X_{t+1} = r X_t (1 - X_t) eps_t.
//
// Reproducibility contract: the sample index space is cut into chunks of
// kChunkSize indices. Chunk c draws X from a std::mt19937_64 seeded with
// stream_seed(seed, c, 0) and eps from one seeded with stream_seed(seed, c, 1).
// Statistics are accumulated serially in index order, so results are bitwise
// identical for any thread count.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <thread>
#include <vector>

#include "stochlog/cubic_model.hpp"
#include "stochlog/errors.hpp"
#include "stochlog/moments.hpp"

namespace stochlog {

inline constexpr std::size_t kChunkSize = 65536;
inline constexpr std::size_t kMinSimulationSize = 1000;
inline constexpr std::size_t kBatchCount = 100;

/// splitmix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Seed of the generator for (chunk, stream).
constexpr std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t chunk, std::uint64_t stream) {
    constexpr std::uint64_t golden = 0x9E3779B97F4A7C15ULL;
    return mix64(mix64(seed + golden) + golden * (2 * chunk + stream + 1));
}

enum class EpsilonFamily { Degenerate, GammaMeanOne };

/// Nonnegative eps with E[eps] = 1 and E[eps^2] = v: the constant 1 when v == 1,
/// otherwise Gamma(shape = 1/(v-1), scale = v-1).
struct EpsilonSpec {
    double v = 1.0;

    void validate() const {
        if (!std::isfinite(v) || !(v >= 1.0))
            throw ValidationError("eps requires v >= 1: no nonnegative mean-1 distribution has E[eps^2] < 1");
    }
    EpsilonFamily family() const { return v == 1.0 ? EpsilonFamily::Degenerate : EpsilonFamily::GammaMeanOne; }
    double shape() const { return 1.0 / (v - 1.0); }
    double scale() const { return v - 1.0; }
};

namespace detail {

inline unsigned resolve_threads(unsigned threads, std::size_t chunks) {
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    return static_cast<unsigned>(std::max<std::size_t>(1, std::min<std::size_t>(threads, chunks)));
}

// Run fn(chunk, begin, end) over all chunks of [0, n).
template <class Fn>
void for_each_chunk(std::size_t n, unsigned threads, Fn&& fn) {
    const std::size_t chunks = (n + kChunkSize - 1) / kChunkSize;
    threads = resolve_threads(threads, chunks);
    auto run = [&](std::size_t first_chunk, std::size_t stride) {
        for (std::size_t c = first_chunk; c < chunks; c += stride)
            fn(c, c * kChunkSize, std::min(n, (c + 1) * kChunkSize));
    };
    if (threads <= 1) {
        run(0, 1);
        return;
    }
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(run, t, threads);
}

inline void fill_epsilon(const EpsilonSpec& spec, std::uint64_t seed, std::size_t chunk, double* out,
                         std::size_t count) {
    if (spec.family() == EpsilonFamily::Degenerate) {
        std::fill(out, out + count, 1.0);
        return;
    }
    std::mt19937_64 engine(stream_seed(seed, chunk, 1));
    std::gamma_distribution<double> gamma(spec.shape(), spec.scale());
    for (std::size_t i = 0; i < count; ++i) out[i] = gamma(engine);
}

}  // namespace detail

/// n draws of eps, reproducible from seed.
inline std::vector<double> sample_epsilon(const EpsilonSpec& spec, std::size_t n, std::uint64_t seed,
                                          unsigned threads = 1) {
    spec.validate();
    std::vector<double> out(n);
    detail::for_each_chunk(n, threads, [&](std::size_t c, std::size_t begin, std::size_t end) {
        detail::fill_epsilon(spec, seed, c, out.data() + begin, end - begin);
    });
    return out;
}

/// n draws of X_{t+1} = r X (1 - X) eps with X ~ N(mu, sigma2) untruncated.
inline std::vector<double> sample_next_states(const NormalParams& p, double r, const EpsilonSpec& spec,
                                              std::size_t n, std::uint64_t seed, unsigned threads = 1) {
    p.validate();
    if (!(p.sigma2 > 0.0)) throw ValidationError("simulation requires sigma2 > 0");
    if (!std::isfinite(r)) throw ValidationError("r must be finite");
    spec.validate();
    std::vector<double> out(n);
    const double sigma = p.sigma();
    detail::for_each_chunk(n, threads, [&](std::size_t c, std::size_t begin, std::size_t end) {
        double* y = out.data() + begin;
        const std::size_t count = end - begin;
        detail::fill_epsilon(spec, seed, c, y, count);
        std::mt19937_64 engine(stream_seed(seed, c, 0));
        std::normal_distribution<double> normal(p.mu, sigma);
        for (std::size_t i = 0; i < count; ++i) {
            const double x = normal(engine);
            y[i] = r * x * (1.0 - x) * y[i];
        }
    });
    return out;
}

struct SimReport {
    std::size_t n = 0;
    std::uint64_t seed = 0;
    double alpha_hat = 0.0;  ///< mean(X_{t+1}) / mu
    double beta_hat = 0.0;   ///< var(X_{t+1}) / sigma2
    double se_alpha = 0.0;   ///< sd(X_{t+1}) / (mu sqrt(n))
    double se_beta = 0.0;    ///< batch means over kBatchCount batches
    double mean_next = 0.0;
    double var_next = 0.0;
    double mean_prev = 0.0;  ///< mu
    double var_prev = 0.0;   ///< sigma2
};

namespace detail {

struct MeanVar {
    double mean = 0.0;
    double var = 0.0;  ///< n - 1 denominator
};

inline MeanVar mean_var(const double* x, std::size_t n) {
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) sum += x[i];
    const double mean = sum / static_cast<double>(n);
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) ss += (x[i] - mean) * (x[i] - mean);
    return {mean, n > 1 ? ss / static_cast<double>(n - 1) : 0.0};
}

}  // namespace detail

inline SimReport simulate_step(const NormalParams& p, double r, const EpsilonSpec& spec, std::size_t n,
                               std::uint64_t seed, unsigned threads = 1) {
    if (n < kMinSimulationSize) throw ValidationError("simulation requires n >= 1000");
    if (p.mu == 0.0) throw ValidationError("simulation requires mu != 0 (alpha_hat divides by mu)");
    const std::vector<double> next = sample_next_states(p, r, spec, n, seed, threads);

    SimReport rep;
    rep.n = n;
    rep.seed = seed;
    rep.mean_prev = p.mu;
    rep.var_prev = p.sigma2;
    const detail::MeanVar all = detail::mean_var(next.data(), n);
    rep.mean_next = all.mean;
    rep.var_next = all.var;
    rep.alpha_hat = all.mean / p.mu;
    rep.beta_hat = all.var / p.sigma2;
    rep.se_alpha = std::sqrt(all.var / static_cast<double>(n)) / std::abs(p.mu);

    std::vector<double> batch_beta(kBatchCount);
    for (std::size_t b = 0; b < kBatchCount; ++b) {
        const std::size_t begin = b * n / kBatchCount;
        const std::size_t end = (b + 1) * n / kBatchCount;
        batch_beta[b] = detail::mean_var(next.data() + begin, end - begin).var / p.sigma2;
    }
    const detail::MeanVar spread = detail::mean_var(batch_beta.data(), kBatchCount);
    rep.se_beta = std::sqrt(spread.var / static_cast<double>(kBatchCount));
    return rep;
}

enum class Verdict { Pass, Fail, Inapplicable };

inline const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::Pass: return "pass";
        case Verdict::Fail: return "fail";
        case Verdict::Inapplicable: return "inapplicable";
    }
    return "fail";
}

struct VerifyResult {
    Verdict verdict = Verdict::Inapplicable;
    double root = 0.0;
    double sigma2 = 0.0;
    std::optional<SimReport> report;
    double z_alpha = 0.0;  ///< (alpha_hat - alpha) / se_alpha
    double z_beta = 0.0;
};

/// Instantiate N(mu, sigma2(root)) and check that simulated alpha and beta match params.
inline VerifyResult verify_root(const ModelParams& params, double root, std::size_t n, std::uint64_t seed,
                                double z_threshold, unsigned threads = 1) {
    params.validate(Validity::Simulatable);
    if (!(root > 0.0)) throw DomainError("verify_root requires root > 0");
    if (!(z_threshold > 0.0)) throw ValidationError("z threshold must be > 0");
    VerifyResult out;
    out.root = root;
    out.sigma2 = sigma2_from_root(params, root);
    if (!(out.sigma2 > 0.0)) return out;

    const SimReport rep = simulate_step({params.mu, out.sigma2}, root, {params.v}, n, seed, threads);
    const double dev_alpha = std::abs(rep.alpha_hat - params.alpha);
    const double dev_beta = std::abs(rep.beta_hat - params.beta);
    out.z_alpha = (rep.alpha_hat - params.alpha) / rep.se_alpha;
    out.z_beta = (rep.beta_hat - params.beta) / rep.se_beta;
    out.verdict = dev_alpha <= z_threshold * rep.se_alpha && dev_beta <= z_threshold * rep.se_beta ? Verdict::Pass
                                                                                                 : Verdict::Fail;
    out.report = rep;
    return out;
}

}  // namespace stochlog
