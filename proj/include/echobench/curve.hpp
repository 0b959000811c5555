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

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "echobench/errors.hpp"
#include "echobench/numeric_policy.hpp"
#include "echobench/parallel.hpp"

namespace echobench {

/// Survival probabilities must be probabilities before any Bernoulli sampling; anything
/// more than survival_prob_slack outside [0,1] is a bug and raises instead of being
/// clipped silently.
inline double checked_probability(double s) {
    const double slack = numeric_policy().survival_prob_slack;
    if (!std::isfinite(s) || s < -slack || s > 1.0 + slack)
        throw NumericError("survival probability " + std::to_string(s) + " outside [0, 1]");
    return std::clamp(s, 0.0, 1.0);
}

/// One aggregated fidelity estimate at sequence length n or time t.
struct CurvePoint {
    double x = 0.0;        ///< step count n (integral) or time t
    double mean = 0.0;     ///< mean fidelity estimate, in [0, 1]
    double std_error = 0.0;
    long trials = 0;
};

/// Fidelity-versus-step (or versus-time) samples with statistical errors.
struct DecayCurve {
    std::vector<CurvePoint> points;
};

/// Aggregate per-trial estimates into a curve point. The mean uses pairwise summation in
/// trial order; the standard error is the std-dev of per-trial (shot-averaged) estimates
/// over sqrt(trials), which equals pooled-shot std-dev / sqrt(trials * shots) when shot
/// noise dominates and remains valid when across-unitary variance dominates.
inline CurvePoint aggregate_point(double x, std::span<const double> samples) {
    if (samples.empty()) throw ConfigError("aggregate_point: no samples");
    CurvePoint pt;
    pt.x = x;
    pt.trials = static_cast<long>(samples.size());
    pt.mean = pairwise_sum(samples) / static_cast<double>(samples.size());
    if (samples.size() > 1) {
        std::vector<double> sq(samples.size());
        for (std::size_t i = 0; i < samples.size(); ++i) {
            const double d = samples[i] - pt.mean;
            sq[i] = d * d;
        }
        const double var = pairwise_sum(sq) / static_cast<double>(samples.size() - 1);
        pt.std_error = std::sqrt(std::max(0.0, var) / static_cast<double>(samples.size()));
    }
    return pt;
}

} // namespace echobench
