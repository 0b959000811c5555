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

#include <string>

#include "echobench/channel_io.hpp"
#include "echobench/protocols.hpp"

namespace echobench {

/// Experiment configuration schema (one experiment per file):
/// {
///   "protocol": "motion_reversal" | "iterated" | "echo" | "generalized_echo"
///             | "lindblad_echo",
///   "dim": 8,
///   "channel": { ...channel schema... },          // or "channels": [ ... ] per step
///   "n_unitaries": 200,
///   "shots": 200 | "analytic",
///   "n_max": 20,                                   // discrete protocols
///   "initial_purity": 1.0,
///   "trajectory_mode": false,
///   "seed": 12345,
///   "threads": 0,
///   "lindblad": {                                  // continuous protocol only
///     "t_max": 3000.0, "n_points": 60,
///     "tau_c": 0.0, "tau_c_factor": 0.1, "control_scale": 1.0, "step_budget": 0.01
///   }
/// }
inline ExperimentConfig experiment_config_from_json(const json& j) {
    using io_detail::require_field;
    using io_detail::require_int;
    if (!j.is_object()) throw ConfigError("config: document must be a JSON object");
    ExperimentConfig cfg;
    cfg.protocol =
        protocol_from_name(require_field(j, "protocol", "config").get<std::string>());
    cfg.dim = require_int(j, "dim", "config");

    if (cfg.protocol == Protocol::lindblad_echo) {
        const json& ch = require_field(j, "channel", "config");
        NoiseModel noise = noise_from_json(ch);
        if (!std::holds_alternative<LindbladGenerator>(noise))
            throw ConfigError("config: lindblad_echo requires a channel of type \"lindblad\"");
        cfg.generator = std::get<LindbladGenerator>(std::move(noise));
    } else if (j.contains("channels")) {
        const json& list = j["channels"];
        if (!list.is_array() || list.empty())
            throw ConfigError("config: \"channels\" must be a non-empty array");
        for (const auto& ch : list) {
            NoiseModel noise = noise_from_json(ch);
            if (!std::holds_alternative<KrausChannel>(noise))
                throw ConfigError("config: per-step channels must be CP channels");
            cfg.per_step_channels.push_back(std::get<KrausChannel>(std::move(noise)));
        }
        cfg.channel = cfg.per_step_channels.front();
    } else {
        NoiseModel noise = noise_from_json(require_field(j, "channel", "config"));
        if (!std::holds_alternative<KrausChannel>(noise))
            throw ConfigError("config: protocol \"" + protocol_name(cfg.protocol) +
                              "\" requires a CP channel, not a lindblad generator");
        cfg.channel = std::get<KrausChannel>(std::move(noise));
    }

    cfg.n_unitaries = j.value("n_unitaries", 1);
    if (j.contains("shots")) {
        const json& shots = j["shots"];
        if (shots.is_string()) {
            if (shots.get<std::string>() != "analytic")
                throw ConfigError("config: \"shots\" must be an integer or \"analytic\"");
            cfg.analytic_shots = true;
        } else if (shots.is_number_integer()) {
            cfg.shots = shots.get<long>();
        } else {
            throw ConfigError("config: \"shots\" must be an integer or \"analytic\"");
        }
    }
    if (j.contains("n_max")) cfg.n_max = require_int(j, "n_max", "config");
    cfg.initial_purity = j.value("initial_purity", 1.0);
    cfg.trajectory_mode = j.value("trajectory_mode", false);
    cfg.seed.master_seed = j.value("seed", std::uint64_t{0});
    cfg.threads = j.value("threads", 0u);

    if (j.contains("lindblad")) {
        const json& lb = j["lindblad"];
        if (!lb.is_object()) throw ConfigError("config: \"lindblad\" must be an object");
        cfg.lindblad.t_max = lb.value("t_max", cfg.lindblad.t_max);
        cfg.lindblad.n_points = lb.value("n_points", cfg.lindblad.n_points);
        cfg.lindblad.control.tau_c = lb.value("tau_c", cfg.lindblad.control.tau_c);
        cfg.lindblad.control.tau_c_factor =
            lb.value("tau_c_factor", cfg.lindblad.control.tau_c_factor);
        cfg.lindblad.control.control_scale =
            lb.value("control_scale", cfg.lindblad.control.control_scale);
        cfg.lindblad.control.step_budget =
            lb.value("step_budget", cfg.lindblad.control.step_budget);
    }

    cfg.validate();
    return cfg;
}

/// The input document with defaults materialized; embedding this in the run manifest
/// makes re-runs reproduce the experiment without consulting the original file.
inline json normalized_config_json(const json& input) {
    const ExperimentConfig cfg = experiment_config_from_json(input); // validates
    json out = input;
    out["protocol"] = protocol_name(cfg.protocol);
    out["n_unitaries"] = cfg.n_unitaries;
    if (cfg.analytic_shots)
        out["shots"] = "analytic";
    else
        out["shots"] = cfg.shots;
    if (cfg.protocol != Protocol::lindblad_echo) {
        out["n_max"] = cfg.n_max;
        out["initial_purity"] = cfg.initial_purity;
        out["trajectory_mode"] = cfg.trajectory_mode;
    } else {
        json lb;
        lb["t_max"] = cfg.lindblad.t_max;
        lb["n_points"] = cfg.lindblad.n_points;
        lb["tau_c"] = cfg.lindblad.control.tau_c;
        lb["tau_c_factor"] = cfg.lindblad.control.tau_c_factor;
        lb["control_scale"] = cfg.lindblad.control.control_scale;
        lb["step_budget"] = cfg.lindblad.control.step_budget;
        out["lindblad"] = std::move(lb);
    }
    out["seed"] = cfg.seed.master_seed;
    out["threads"] = cfg.threads;
    return out;
}

/// Apply one "--set key=value" override: the key is a dotted path into the document,
/// the value is parsed as JSON when possible and as a bare string otherwise.
inline void apply_override(json& j, const std::string& spec) {
    const std::size_t eq = spec.find('=');
    if (eq == std::string::npos || eq == 0)
        throw ConfigError("--set expects key.path=value, got \"" + spec + "\"");
    const std::string path = spec.substr(0, eq);
    const std::string raw = spec.substr(eq + 1);

    json value;
    try {
        value = json::parse(raw);
    } catch (const json::parse_error&) {
        value = raw; // plain string
    }

    json* node = &j;
    std::size_t start = 0;
    for (;;) {
        const std::size_t dot = path.find('.', start);
        const std::string key = path.substr(start, dot - start);
        if (key.empty()) throw ConfigError("--set: empty path segment in \"" + spec + "\"");
        if (dot == std::string::npos) {
            (*node)[key] = std::move(value);
            return;
        }
        node = &(*node)[key];
        start = dot + 1;
    }
}

} // namespace echobench
