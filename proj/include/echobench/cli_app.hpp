// Copyright 2026 The echobench Authors
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

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "echobench/config_io.hpp"
#include "echobench/fit.hpp"
#include "echobench/run_io.hpp"
#include "echobench/verify.hpp"
#include "echobench/version.hpp"

namespace echobench {

/// Exit codes: 0 success, 1 check failure (failed verification or no measurable decay),
/// 2 configuration/usage error, 3 numeric error (integrator instability, non-finite
/// results).
enum ExitCode : int { kOk = 0, kCheckFailure = 1, kConfigError = 2, kNumericError = 3 };

namespace cli_detail {

struct CommonOptions {
    std::string config_path;
    std::string out_dir = ".";
    std::vector<std::string> overrides;
    std::optional<std::uint64_t> seed;
    std::optional<unsigned> threads;
};

inline void add_common_options(CLI::App* cmd, CommonOptions& opts, bool needs_config = true) {
    if (needs_config)
        cmd->add_option("--config", opts.config_path, "experiment config JSON file")
            ->required();
    cmd->add_option("--out", opts.out_dir, "output directory (created if missing)");
    cmd->add_option("--set", opts.overrides,
                    "config override key.path=value (repeatable)");
    cmd->add_option("--seed", opts.seed, "master seed override");
    cmd->add_option("--threads", opts.threads, "worker thread cap (0 = all cores)");
}

inline json load_config(const CommonOptions& opts, Protocol expected) {
    json doc;
    try {
        doc = json::parse(read_text_file(opts.config_path));
    } catch (const json::parse_error& e) {
        throw ConfigError("config parse error in " + opts.config_path + ": " + e.what());
    }
    for (const auto& spec : opts.overrides) apply_override(doc, spec);
    if (opts.seed) doc["seed"] = *opts.seed;
    if (opts.threads) doc["threads"] = *opts.threads;
    if (!doc.contains("protocol")) doc["protocol"] = protocol_name(expected);
    if (doc["protocol"].get<std::string>() != protocol_name(expected))
        throw ConfigError("config protocol \"" + doc["protocol"].get<std::string>() +
                          "\" does not match this command (expected \"" +
                          protocol_name(expected) + "\")");
    return doc;
}

struct Manifest {
    std::string command;
    std::string config_path;
    json resolved_config;
    std::uint64_t master_seed = 0;
    unsigned threads = 0;
    std::string started_at;
    std::vector<std::string> outputs;

    json to_json() const {
        json j;
        j["tool"] = kToolName;
        j["version"] = kVersion;
        j["command"] = command;
        j["config_path"] = config_path;
        j["config"] = resolved_config;
        j["master_seed"] = master_seed;
        j["threads"] = threads;
        j["started_at"] = started_at;
        j["finished_at"] = iso8601_utc_now();
        j["outputs"] = outputs;
        return j;
    }
};

inline Manifest start_manifest(const std::string& command, const CommonOptions& opts,
                               const json& resolved, const ExperimentConfig& cfg) {
    Manifest m;
    m.command = command;
    m.config_path = opts.config_path;
    m.resolved_config = resolved;
    m.master_seed = cfg.seed.master_seed;
    m.threads = cfg.threads;
    m.started_at = iso8601_utc_now();
    return m;
}

inline std::string out_path(const CommonOptions& opts, const std::string& name) {
    std::filesystem::create_directories(opts.out_dir);
    return (std::filesystem::path(opts.out_dir) / name).string();
}

/// Analytic reference block for a known channel (single-channel runs only).
inline std::optional<json> analytic_block(const ExperimentConfig& cfg) {
    if (cfg.protocol == Protocol::lindblad_echo) {
        const double gamma = lindblad_rate(*cfg.generator);
        json j;
        j["gamma"] = gamma;
        j["p_per_unit_time"] = std::exp(-gamma);
        j["f_infinity"] = 1.0 / cfg.dim;
        return j;
    }
    if (!cfg.channel || cfg.per_step_channels.size() > 1) return std::nullopt;
    const double p = depolarizing_strength(*cfg.channel);
    json j;
    j["p"] = p;
    j["f_bar"] = average_gate_fidelity(*cfg.channel);
    j["f_infinity"] = 1.0 / cfg.dim;
    return j;
}

inline int run_estimate(const CommonOptions& opts) {
    const json doc = load_config(opts, Protocol::motion_reversal);
    const json resolved = normalized_config_json(doc);
    const ExperimentConfig cfg = experiment_config_from_json(doc);
    Manifest manifest = start_manifest("estimate", opts, resolved, cfg);

    const EstimateResult result = run_motion_reversal(cfg);
    json out;
    out["protocol"] = protocol_name(cfg.protocol);
    out["dim"] = cfg.dim;
    out["f_hat"] = result.f_hat;
    out["stderr"] = result.std_error;
    out["p_hat"] = strength_from_fidelity(result.f_hat, cfg.dim);
    out["n_unitaries"] = result.n_unitaries;
    out["shots"] = cfg.analytic_shots ? json("analytic") : json(cfg.shots);
    if (const auto analytic = analytic_block(cfg)) out["analytic"] = *analytic;
    write_json_file(out_path(opts, "estimate.json"), out);
    manifest.outputs = {"estimate.json"};
    write_json_file(out_path(opts, "manifest.json"), manifest.to_json());

    std::cout << "f_hat = " << format_double(result.f_hat) << " +/- "
              << format_double(result.std_error)
              << "  p_hat = " << format_double(out["p_hat"].get<double>());
    if (out.contains("analytic"))
        std::cout << "  (analytic f_bar = "
                  << format_double(out["analytic"]["f_bar"].get<double>()) << ")";
    std::cout << "\n";
    return kOk;
}

inline int run_curve_command(const std::string& command, Protocol protocol,
                             const CommonOptions& opts) {
    const json doc = load_config(opts, protocol);
    const json resolved = normalized_config_json(doc);
    const ExperimentConfig cfg = experiment_config_from_json(doc);
    Manifest manifest = start_manifest(command, opts, resolved, cfg);

    DecayCurve curve;
    switch (protocol) {
        case Protocol::iterated: curve = run_iterated_motion_reversal(cfg); break;
        case Protocol::echo: curve = run_loschmidt_echo(cfg); break;
        case Protocol::generalized_echo: curve = run_generalized_echo(cfg); break;
        case Protocol::lindblad_echo: curve = run_lindblad_echo(cfg); break;
        default: throw ConfigError("run_curve_command: not a curve protocol");
    }
    write_text_file(out_path(opts, "curve.csv"), curve_to_csv(curve));

    json fit_json;
    int exit_code = kOk;
    const double purity = cfg.protocol == Protocol::lindblad_echo ? 1.0 : cfg.initial_purity;
    try {
        const FitResult fit = fit_decay(curve, cfg.dim, purity);
        // A fit indistinguishable from p = 1 means the curve never decayed measurably.
        if (fit.p_hat + 3.0 * fit.std_error >= 1.0 - 1e-12) {
            fit_json["status"] = "insufficient_signal";
            fit_json["reason"] = "no measurable decay (fit consistent with p = 1)";
            exit_code = kCheckFailure;
        } else {
            fit_json["status"] = "ok";
        }
        fit_json["p_hat"] = fit.p_hat;
        fit_json["stderr"] = fit.std_error;
        fit_json["residual_norm"] = fit.residual_norm;
        fit_json["points_used"] = fit.points_used;
        if (protocol == Protocol::lindblad_echo) {
            fit_json["gamma_hat"] = -std::log(std::max(fit.p_hat, 1e-300));
            fit_json["gamma_stderr"] = fit.p_hat > 0.0 ? fit.std_error / fit.p_hat : 0.0;
        }
    } catch (const InsufficientSignalError& e) {
        fit_json["status"] = "insufficient_signal";
        fit_json["reason"] = e.what();
        exit_code = kCheckFailure;
    }
    if (const auto analytic = analytic_block(cfg)) fit_json["analytic"] = *analytic;
    write_json_file(out_path(opts, "fit.json"), fit_json);
    manifest.outputs = {"curve.csv", "fit.json"};
    write_json_file(out_path(opts, "manifest.json"), manifest.to_json());

    if (fit_json["status"] == "ok") {
        std::cout << "p_hat = " << format_double(fit_json["p_hat"].get<double>()) << " +/- "
                  << format_double(fit_json["stderr"].get<double>()) << "  ("
                  << fit_json["points_used"].get<int>() << " points)\n";
    } else {
        std::cout << "fit: " << fit_json["reason"].get<std::string>() << "\n";
    }
    return exit_code;
}

inline int run_verify(const std::string& suite, const CommonOptions& opts) {
    SeedSpec seed{opts.seed.value_or(0), 0};
    const VerifyReport report = verify_suite(suite, seed, opts.threads.value_or(0));
    write_json_file(out_path(opts, "report.json"), report.to_json());
    if (suite == "concentration") {
        // Plot-ready table alongside the JSON report.
        std::string csv = "dim,variance\n";
        for (const auto& row : report.checks.front().values["variances"])
            csv += std::to_string(row["dim"].get<int>()) + "," +
                   format_double(row["variance"].get<double>()) + "\n";
        write_text_file(out_path(opts, "variances.csv"), csv);
    }
    for (const auto& check : report.checks) {
        const char* verdict = check.pass ? "PASS" : (check.soft ? "WARN" : "FAIL");
        std::cout << verdict << "  " << report.suite << "/" << check.name << "\n";
    }
    return report.hard_pass() ? kOk : kCheckFailure;
}

} // namespace cli_detail

/// Entry point used by both the binary and the tests.
inline int run_cli(int argc, const char* const* argv) {
    CLI::App app{"noise-strength estimation via random-unitary motion reversal"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    cli_detail::CommonOptions estimate_opts, decay_opts, echo_opts, gen_opts, lindblad_opts;
    cli_detail::CommonOptions verify_opts;
    std::string verify_suite_name;

    auto* estimate = app.add_subcommand("estimate", "single motion-reversal fidelity estimate");
    cli_detail::add_common_options(estimate, estimate_opts);
    auto* decay = app.add_subcommand("decay", "iterated motion-reversal decay curve");
    cli_detail::add_common_options(decay, decay_opts);
    auto* echo = app.add_subcommand("echo", "imperfect Loschmidt echo decay curve");
    cli_detail::add_common_options(echo, echo_opts);
    auto* gen_echo = app.add_subcommand("gen-echo", "echo with noise in both directions");
    cli_detail::add_common_options(gen_echo, gen_opts);
    auto* lindblad = app.add_subcommand("lindblad", "continuous-time echo under a master equation");
    cli_detail::add_common_options(lindblad, lindblad_opts);
    auto* verify = app.add_subcommand("verify", "run a verification suite");
    verify->add_option("suite", verify_suite_name,
                       "lemma | invariants | concentration | cumulants | equivalence")
        ->required();
    cli_detail::add_common_options(verify, verify_opts, /*needs_config=*/false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kConfigError;
    }

    try {
        if (estimate->parsed()) return cli_detail::run_estimate(estimate_opts);
        if (decay->parsed())
            return cli_detail::run_curve_command("decay", Protocol::iterated, decay_opts);
        if (echo->parsed())
            return cli_detail::run_curve_command("echo", Protocol::echo, echo_opts);
        if (gen_echo->parsed())
            return cli_detail::run_curve_command("gen-echo", Protocol::generalized_echo,
                                                 gen_opts);
        if (lindblad->parsed())
            return cli_detail::run_curve_command("lindblad", Protocol::lindblad_echo,
                                                 lindblad_opts);
        if (verify->parsed()) return cli_detail::run_verify(verify_suite_name, verify_opts);
    } catch (const IntegratorError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kNumericError;
    } catch (const NumericError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kNumericError;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kConfigError;
    } catch (const DimensionError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kConfigError;
    } catch (const SizeLimitError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kConfigError;
    } catch (const DegenerateInputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kConfigError;
    }
    return kConfigError;
}

} // namespace echobench
