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

// Command-line front end. run() is the whole program minus process plumbing,
// so tests drive it in-process.
//
// Exit codes: 0 ok, 2 validation, 3 numerical, 4 I/O.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "stochlog/feasibility.hpp"
#include "stochlog/io.hpp"
#include "stochlog/moments.hpp"
#include "stochlog/monte_carlo.hpp"
#include "stochlog/root_analysis.hpp"

namespace stochlog::cli {

enum ExitCode : int { kOk = 0, kValidation = 2, kNumerical = 3, kIo = 4 };

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct FigurePreset {
    std::string id;
    SweepBase a;
    SweepBase b;
};

/// Parameter pairs of the three r-vs-mu comparison figures.
inline const std::vector<FigurePreset>& figure_presets() {
    static const std::vector<FigurePreset> presets = {
        {"fig3", {1.1, 1.1, 1.2}, {1.4, 1.1, 1.2}},  // alpha
        {"fig4", {0.5, 1.1, 1.2}, {0.5, 1.9, 1.2}},  // beta
        {"fig5", {0.5, 1.0, 1.2}, {0.5, 1.0, 2.2}},  // E[eps^2]
    };
    return presets;
}

inline std::optional<FigurePreset> find_preset(const std::string& id) {
    for (const auto& p : figure_presets())
        if (p.id == id) return p;
    return std::nullopt;
}

namespace detail {

inline void write_file(const std::string& path, const std::string& bytes) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot open '" + path + "' for writing");
    f << bytes;
    f.close();
    if (!f) throw IoError("failed writing '" + path + "'");
}

inline void emit(const std::string& path, const std::string& bytes, std::ostream& out) {
    if (path.empty() || path == "-")
        out << bytes;
    else
        write_file(path, bytes);
}

struct Flags {
    double alpha = 0, beta = 0, v = 0, mu = 0, sigma2 = 0, r = 0;
    GridSpec grid;
    double refine_tol = 1e-8;
    std::size_t n = 1000000;
    std::uint64_t seed = 1;
    double z = 5.0;
    unsigned threads = 0;
    std::string output;
    std::string svg;
    double svg_rmax = 10.0;
    std::string out_dir = ".";
    std::string figure_id;
};

inline void add_model_flags(CLI::App* cmd, Flags& f, bool with_mu) {
    cmd->add_option("--alpha", f.alpha, "mean scaling factor alpha > 0")->required();
    cmd->add_option("--beta", f.beta, "variance scaling factor beta > 0")->required();
    cmd->add_option("--v", f.v, "second moment of eps, E[eps^2]")->required();
    if (with_mu) cmd->add_option("--mu", f.mu, "population mean, 0 < mu < 1")->required();
}

inline void add_grid_flags(CLI::App* cmd, Flags& f) {
    cmd->add_option("--mu-min", f.grid.mu_min, "first grid node");
    cmd->add_option("--mu-max", f.grid.mu_max, "last grid node");
    cmd->add_option("--points", f.grid.points, "number of grid nodes (>= 2)");
    cmd->add_option("--refine-tol", f.refine_tol, "bisection width for infeasible-interval endpoints");
}

inline void add_sim_flags(CLI::App* cmd, Flags& f) {
    cmd->add_option("--n", f.n, "ensemble size (>= 1000)");
    cmd->add_option("--seed", f.seed, "base seed");
}

inline void check_sim_size(const Flags& f) {
    if (f.n < kMinSimulationSize) throw ValidationError("--n must be >= 1000");
}

inline int cmd_roots(const Flags& f, std::ostream& out) {
    const RootClassification rc = classify({f.alpha, f.beta, f.v, f.mu});
    emit(f.output, io::dump(io::to_json(rc)), out);
    return kOk;
}

inline void write_sweep(const BranchCurve& curve, const std::vector<Interval>& bands, const std::string& csv_path,
                        const std::string& svg_path, double r_max, std::ostream& out) {
    emit(csv_path, io::sweep_csv(curve), out);
    if (!svg_path.empty()) write_file(svg_path, io::sweep_svg(curve, bands, {r_max}));
}

inline int cmd_sweep(const Flags& f, std::ostream& out) {
    const SweepBase base{f.alpha, f.beta, f.v};
    const BranchCurve curve = sweep_mu(base, f.grid, f.threads);
    const auto bands = f.svg.empty() ? std::vector<Interval>{} : infeasible_intervals(curve, f.refine_tol);
    write_sweep(curve, bands, f.output, f.svg, f.svg_rmax, out);
    return kOk;
}

inline int cmd_figure(const Flags& f, std::ostream& out) {
    const auto preset = find_preset(f.figure_id);
    if (!preset) throw ValidationError("unknown figure id '" + f.figure_id + "' (expected fig3, fig4 or fig5)");
    f.grid.validate();
    std::error_code ec;
    std::filesystem::create_directories(f.out_dir, ec);
    if (ec) throw IoError("cannot create directory '" + f.out_dir + "'");

    const BranchCurve a = sweep_mu(preset->a, f.grid, f.threads);
    const BranchCurve b = sweep_mu(preset->b, f.grid, f.threads);
    const ComparisonReport rep = compare_sweeps(a, b, f.refine_tol);
    const std::filesystem::path dir(f.out_dir);
    auto path = [&](const std::string& suffix) { return (dir / (preset->id + suffix)).string(); };
    write_sweep(a, rep.intervals_a, path("_a.csv"), path("_a.svg"), f.svg_rmax, out);
    write_sweep(b, rep.intervals_b, path("_b.csv"), path("_b.svg"), f.svg_rmax, out);

    io::Json j;
    j["figure"] = preset->id;
    j["a"] = io::to_json(preset->a);
    j["b"] = io::to_json(preset->b);
    j["grid"] = io::Json{{"mu_min", f.grid.mu_min}, {"mu_max", f.grid.mu_max}, {"points", f.grid.points}};
    j["comparison"] = io::to_json(rep);
    const std::string doc = io::dump(j);
    write_file(path("_comparison.json"), doc);
    return kOk;
}

inline int cmd_simulate(const Flags& f, std::ostream& out) {
    check_sim_size(f);
    const SimReport rep = simulate_step({f.mu, f.sigma2}, f.r, {f.v}, f.n, f.seed, f.threads);
    emit(f.output, io::dump(io::to_json(rep)), out);
    return kOk;
}

inline int cmd_moments(const Flags& f, std::ostream& out) {
    const NormalParams p{f.mu, f.sigma2};
    p.validate();
    io::Json j;
    j["mu"] = p.mu;
    j["sigma2"] = p.sigma2;
    io::Json raw = io::Json::array();
    for (int n = 1; n <= 4; ++n) raw.push_back(normal_raw_moment(p, n));
    j["raw_moments"] = raw;
    j["structural_second_moment"] = structural_second_moment(p);
    if (p.sigma2 > 0.0) {
        io::Json oracle = io::Json::array();
        for (int n = 1; n <= 4; ++n) oracle.push_back(raw_moment_oracle(p, n));
        j["oracle_raw_moments"] = oracle;
        j["oracle_structural_second_moment"] =
            normal_expectation_oracle(p, [](double x) { return x * x * (1.0 - x) * (1.0 - x); });
    }
    emit(f.output, io::dump(j), out);
    return kOk;
}

inline int cmd_verify(const Flags& f, bool forward, std::ostream& out) {
    check_sim_size(f);
    io::Json j;
    io::Json verdicts = io::Json::array();
    if (forward) {
        // Construct (alpha, beta) so that r is a root, then verify that root.
        const ForwardResult fw = forward_alpha_beta({f.mu, f.sigma2}, f.v, f.r);
        if (!fw.within_hypotheses)
            throw ValidationError("forward-constructed alpha/beta fall outside alpha > 0, beta > 0");
        const ModelParams params{fw.alpha, fw.beta, f.v, f.mu};
        j["params"] = io::to_json(params);
        verdicts.push_back(io::to_json(verify_root(params, f.r, f.n, f.seed, f.z, f.threads)));
    } else {
        const ModelParams params{f.alpha, f.beta, f.v, f.mu};
        params.validate(Validity::Simulatable);
        const RootClassification rc = classify(params);
        j["params"] = io::to_json(params);
        for (const Root& root : rc.positive_roots)
            verdicts.push_back(io::to_json(verify_root(params, root.value, f.n, f.seed, f.z, f.threads)));
    }
    j["n"] = f.n;
    j["seed"] = f.seed;
    j["z_threshold"] = f.z;
    j["verdicts"] = verdicts;
    emit(f.output, io::dump(j), out);
    return kOk;
}

}  // namespace detail

/// Run one command. `args` excludes the program name.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Growth-rate roots, sweeps and Monte Carlo checks for the stochastic logistic map"};
    app.require_subcommand(1);
    detail::Flags f;

    auto* roots = app.add_subcommand("roots", "classify the real roots of p(r) at one parameter set");
    detail::add_model_flags(roots, f, true);
    roots->add_option("--output", f.output, "JSON output path (default stdout)");

    auto* sweep = app.add_subcommand("sweep", "sweep mu and emit the two-branch CSV");
    detail::add_model_flags(sweep, f, false);
    detail::add_grid_flags(sweep, f);
    sweep->add_option("--output", f.output, "CSV output path (default stdout)");
    sweep->add_option("--svg", f.svg, "optional SVG plot path");
    sweep->add_option("--svg-rmax", f.svg_rmax, "upper r limit of the SVG plot");
    sweep->add_option("--threads", f.threads, "worker threads (0 = all cores)");

    auto* figure = app.add_subcommand("figure", "reproduce a two-panel r-vs-mu comparison (fig3|fig4|fig5)");
    figure->add_option("id", f.figure_id, "figure id")->required();
    figure->add_option("--out-dir", f.out_dir, "output directory");
    detail::add_grid_flags(figure, f);
    figure->add_option("--svg-rmax", f.svg_rmax, "upper r limit of the SVG plots");
    figure->add_option("--threads", f.threads, "worker threads (0 = all cores)");

    auto* simulate = app.add_subcommand("simulate", "simulate one step of the recurrence");
    simulate->add_option("--mu", f.mu, "mean of X_t")->required();
    simulate->add_option("--sigma2", f.sigma2, "variance of X_t")->required();
    simulate->add_option("--v", f.v, "E[eps^2] (>= 1)")->required();
    simulate->add_option("--r", f.r, "growth rate")->required();
    detail::add_sim_flags(simulate, f);
    simulate->add_option("--threads", f.threads, "worker threads (0 = all cores)");
    simulate->add_option("--output", f.output, "JSON output path (default stdout)");

    auto* verify = app.add_subcommand(
        "verify", "Monte Carlo check of the positive roots (or of a forward-constructed --sigma2/--r tuple)");
    auto* v_alpha = verify->add_option("--alpha", f.alpha, "mean scaling factor");
    auto* v_beta = verify->add_option("--beta", f.beta, "variance scaling factor");
    verify->add_option("--v", f.v, "E[eps^2] (>= 1)")->required();
    verify->add_option("--mu", f.mu, "population mean")->required();
    auto* v_sigma2 = verify->add_option("--sigma2", f.sigma2, "variance for forward construction");
    auto* v_r = verify->add_option("--r", f.r, "growth rate for forward construction");
    v_sigma2->needs(v_r);
    v_r->needs(v_sigma2);
    v_sigma2->excludes(v_alpha)->excludes(v_beta);
    v_r->excludes(v_alpha)->excludes(v_beta);
    detail::add_sim_flags(verify, f);
    verify->add_option("--z", f.z, "pass threshold in standard errors");
    verify->add_option("--threads", f.threads, "worker threads (0 = all cores)");
    verify->add_option("--output", f.output, "JSON output path (default stdout)");

    auto* moments = app.add_subcommand("moments", "closed-form and quadrature moments of N(mu, sigma2)");
    moments->add_option("--mu", f.mu, "mean")->required();
    moments->add_option("--sigma2", f.sigma2, "variance (>= 0)")->required();
    moments->add_option("--output", f.output, "JSON output path (default stdout)");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kValidation;
    }

    try {
        if (roots->parsed()) return detail::cmd_roots(f, out);
        if (sweep->parsed()) return detail::cmd_sweep(f, out);
        if (figure->parsed()) return detail::cmd_figure(f, out);
        if (simulate->parsed()) return detail::cmd_simulate(f, out);
        if (moments->parsed()) return detail::cmd_moments(f, out);
        if (verify->parsed()) {
            const bool forward = v_sigma2->count() > 0;
            if (!forward && (v_alpha->count() == 0 || v_beta->count() == 0))
                throw ValidationError("verify needs --alpha and --beta, or --sigma2 and --r");
            return detail::cmd_verify(f, forward, out);
        }
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << "\n";
        return kValidation;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << "\n";
        return kValidation;
    } catch (const NumericalError& e) {
        err << "numerical error: " << e.what() << "\n";
        return kNumerical;
    } catch (const IoError& e) {
        err << "i/o error: " << e.what() << "\n";
        return kIo;
    }
    err << "error: no command given\n";
    return kValidation;
}

}  // namespace stochlog::cli
