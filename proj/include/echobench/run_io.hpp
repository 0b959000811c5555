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

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "echobench/curve.hpp"
#include "echobench/errors.hpp"

namespace echobench {

/// Round-trip-exact, locale-independent float formatting for CSV output.
inline std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

/// CSV rendering of a decay curve. Header row is fixed: n_or_t,mean,stderr,trials.
inline std::string curve_to_csv(const DecayCurve& curve) {
    std::ostringstream out;
    out << "n_or_t,mean,stderr,trials\n";
    for (const auto& pt : curve.points)
        out << format_double(pt.x) << ',' << format_double(pt.mean) << ','
            << format_double(pt.std_error) << ',' << pt.trials << '\n';
    return out.str();
}

inline DecayCurve curve_from_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != "n_or_t,mean,stderr,trials")
        throw ConfigError("curve CSV: unexpected header");
    DecayCurve curve;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        CurvePoint pt;
        std::istringstream row(line);
        std::string field;
        std::getline(row, field, ',');
        pt.x = std::stod(field);
        std::getline(row, field, ',');
        pt.mean = std::stod(field);
        std::getline(row, field, ',');
        pt.std_error = std::stod(field);
        std::getline(row, field, ',');
        pt.trials = std::stol(field);
        curve.points.push_back(pt);
    }
    return curve;
}

inline void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot open output file: " + path);
    out << content;
    if (!out) throw ConfigError("failed writing output file: " + path);
}

inline std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

inline void write_json_file(const std::string& path, const nlohmann::json& j) {
    write_text_file(path, j.dump(2) + "\n");
}

inline std::string iso8601_utc_now() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

} // namespace echobench
