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
#include <variant>
#include <vector>

#include <json.hpp>

#include "echobench/channel.hpp"
#include "echobench/lindblad.hpp"
#include "echobench/matrix.hpp"

namespace echobench {

using json = nlohmann::json;

/// Channel description schema (one object per channel):
///   {"type": "kraus",             "dim": D, "kraus_ops": [matrix...],
///                                 "subnormalized": false}
///   {"type": "depolarizing",      "dim": D, "p": 0.9}
///   {"type": "dephasing",         "dim": 2^k, "q": 0.25}          (per qubit)
///   {"type": "amplitude_damping", "dim": 2^k, "gamma": 0.3}       (per qubit)
///   {"type": "unitary",           "dim": D, "matrix": matrix}
///   {"type": "lindblad",          "dim": D, "epsilon": 0.01,
///                                 "hamiltonian": matrix?, "jump_ops": [matrix...]}
/// Matrices are nested arrays of [re, im] pairs, row by row.

namespace io_detail {

inline const json& require_field(const json& j, const char* field, const char* where) {
    const auto it = j.find(field);
    if (it == j.end())
        throw ConfigError(std::string(where) + ": missing required field \"" + field + "\"");
    return *it;
}

inline double require_number(const json& j, const char* field, const char* where) {
    const json& v = require_field(j, field, where);
    if (!v.is_number())
        throw ConfigError(std::string(where) + ": field \"" + field + "\" must be a number");
    return v.get<double>();
}

inline int require_int(const json& j, const char* field, const char* where) {
    const json& v = require_field(j, field, where);
    if (!v.is_number_integer())
        throw ConfigError(std::string(where) + ": field \"" + field + "\" must be an integer");
    return v.get<int>();
}

} // namespace io_detail

inline json matrix_to_json(const ComplexMatrix& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            row.push_back(json::array({m(i, j).real(), m(i, j).imag()}));
        rows.push_back(std::move(row));
    }
    return rows;
}

inline ComplexMatrix matrix_from_json(const json& j, const char* where) {
    if (!j.is_array() || j.empty())
        throw ConfigError(std::string(where) + ": matrix must be a non-empty array of rows");
    const std::size_t rows = j.size();
    const std::size_t cols = j[0].is_array() ? j[0].size() : 0;
    if (cols == 0) throw ConfigError(std::string(where) + ": matrix rows must be arrays");
    ComplexMatrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
        if (!j[i].is_array() || j[i].size() != cols)
            throw ConfigError(std::string(where) + ": ragged matrix rows");
        for (std::size_t c = 0; c < cols; ++c) {
            const json& entry = j[i][c];
            if (!entry.is_array() || entry.size() != 2 || !entry[0].is_number() ||
                !entry[1].is_number())
                throw ConfigError(std::string(where) + ": entries must be [re, im] pairs");
            m(i, c) = Cplx(entry[0].get<double>(), entry[1].get<double>());
        }
    }
    return m;
}

using NoiseModel = std::variant<KrausChannel, LindbladGenerator>;

/// Build a channel or generator from its JSON description.
inline NoiseModel noise_from_json(const json& j) {
    using io_detail::require_field;
    using io_detail::require_int;
    using io_detail::require_number;
    if (!j.is_object()) throw ConfigError("channel: description must be a JSON object");
    const std::string type = require_field(j, "type", "channel").get<std::string>();
    const int dim = require_int(j, "dim", "channel");

    if (type == "kraus") {
        const json& ops_json = require_field(j, "kraus_ops", "channel");
        if (!ops_json.is_array() || ops_json.empty())
            throw ConfigError("channel: kraus_ops must be a non-empty array");
        std::vector<ComplexMatrix> ops;
        ops.reserve(ops_json.size());
        for (const auto& op : ops_json) ops.push_back(matrix_from_json(op, "channel.kraus_ops"));
        for (const auto& op : ops)
            if (op.rows() != dim) throw ConfigError("channel: kraus_ops dim mismatch");
        const bool subnormalized = j.value("subnormalized", false);
        return KrausChannel::from_kraus(std::move(ops), subnormalized);
    }
    if (type == "depolarizing")
        return KrausChannel::depolarizing(dim, require_number(j, "p", "channel"));
    if (type == "dephasing") {
        const int nq = qubit_count_of(dim);
        if (nq < 1) throw ConfigError("channel: dephasing requires dim = 2^k");
        return KrausChannel::dephasing(nq, require_number(j, "q", "channel"));
    }
    if (type == "amplitude_damping") {
        const int nq = qubit_count_of(dim);
        if (nq < 1) throw ConfigError("channel: amplitude_damping requires dim = 2^k");
        return KrausChannel::amplitude_damping(nq, require_number(j, "gamma", "channel"));
    }
    if (type == "unitary")
        return KrausChannel::unitary(matrix_from_json(require_field(j, "matrix", "channel"),
                                                      "channel.matrix"));
    if (type == "lindblad") {
        const double epsilon = require_number(j, "epsilon", "channel");
        ComplexMatrix h;
        if (j.contains("hamiltonian"))
            h = matrix_from_json(j["hamiltonian"], "channel.hamiltonian");
        std::vector<ComplexMatrix> jumps;
        if (j.contains("jump_ops")) {
            if (!j["jump_ops"].is_array())
                throw ConfigError("channel: jump_ops must be an array");
            for (const auto& v : j["jump_ops"])
                jumps.push_back(matrix_from_json(v, "channel.jump_ops"));
        }
        return LindbladGenerator(dim, std::move(h), std::move(jumps), epsilon);
    }
    throw ConfigError("channel: unknown type \"" + type + "\"");
}

/// Serialize a channel back to the schema. Structured channels keep their structured
/// form (so numbers round-trip exactly); kraus and diagonal forms emit explicit
/// operators.
inline json channel_to_json(const KrausChannel& ch) {
    json j;
    j["dim"] = ch.dim();
    switch (ch.form()) {
        case KrausChannel::Form::depolarizing:
            j["type"] = "depolarizing";
            j["p"] = ch.depolarizing_p();
            return j;
        case KrausChannel::Form::superop:
            throw ConfigError("channel_to_json: superoperator-form channels are not portable");
        default: {
            j["type"] = "kraus";
            json ops = json::array();
            for (const auto& op : ch.kraus_ops()) ops.push_back(matrix_to_json(op));
            j["kraus_ops"] = std::move(ops);
            if (ch.subnormalized()) j["subnormalized"] = true;
            return j;
        }
    }
}

inline json generator_to_json(const LindbladGenerator& gen) {
    json j;
    j["type"] = "lindblad";
    j["dim"] = gen.dim();
    j["epsilon"] = gen.epsilon();
    j["hamiltonian"] = matrix_to_json(gen.hamiltonian());
    json jumps = json::array();
    for (const auto& v : gen.jump_ops()) jumps.push_back(matrix_to_json(v));
    j["jump_ops"] = std::move(jumps);
    return j;
}

inline json noise_to_json(const NoiseModel& noise) {
    if (std::holds_alternative<KrausChannel>(noise))
        return channel_to_json(std::get<KrausChannel>(noise));
    return generator_to_json(std::get<LindbladGenerator>(noise));
}

} // namespace echobench
