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
#include <vector>

#include "echobench/curve.hpp"
#include "echobench/errors.hpp"

namespace echobench {

/// Extracted decay strength. For step curves p_hat is the per-step factor; for time
/// curves it is the per-unit-time factor exp(-gamma).
struct FitResult {
    double p_hat = 1.0;
    double std_error = 0.0;
    double residual_norm = 0.0; ///< unweighted RMS residual in log space
    int points_used = 0;
};

/// Fit F_x = p^x * (purity - 1/D) + 1/D by weighted linear regression of
/// ln y_x on x, where y_x = (F_x - 1/D) / (purity - 1/D). Points at or below the
/// noise floor (y <= 3 * its propagated standard error, or y <= 0) are excluded.
/// The model is exactly linearizable, so no nonlinear solver is involved and the
/// result is deterministic.
inline FitResult fit_decay(const DecayCurve& curve, int dim, double purity = 1.0) {
    if (dim < 2) throw ConfigError("fit_decay: dim must be >= 2");
    const double offset = 1.0 / dim;
    const double span = purity - offset;
    if (span <= 0.0) throw ConfigError("fit_decay: purity must exceed 1/D");

    struct Sample {
        double x, lny, sigma_lny;
    };
    std::vector<Sample> usable;
    for (const auto& pt : curve.points) {
        const double y = (pt.mean - offset) / span;
        const double sigma_y = pt.std_error / span;
        if (y <= 0.0 || y <= 3.0 * sigma_y) continue; // noise floor
        usable.push_back({pt.x, std::log(y), sigma_y / y});
    }
    if (usable.size() < 2)
        throw InsufficientSignalError("fit_decay: fewer than 2 points above the noise floor");

    const bool exact = std::all_of(usable.begin(), usable.end(),
                                   [](const Sample& s) { return s.sigma_lny <= 1e-14; });

    double sw = 0, swx = 0, swy = 0, swxx = 0, swxy = 0;
    for (const auto& s : usable) {
        const double sigma = exact ? 1.0 : std::max(s.sigma_lny, 1e-14);
        const double w = 1.0 / (sigma * sigma);
        sw += w;
        swx += w * s.x;
        swy += w * s.lny;
        swxx += w * s.x * s.x;
        swxy += w * s.x * s.lny;
    }
    const double denom = sw * swxx - swx * swx;
    if (denom <= 0.0) throw InsufficientSignalError("fit_decay: degenerate abscissa spread");
    const double slope = (sw * swxy - swx * swy) / denom;
    const double intercept = (swy - slope * swx) / sw;

    double rss = 0.0;
    for (const auto& s : usable) {
        const double r = s.lny - (intercept + slope * s.x);
        rss += r * r;
    }

    double slope_var;
    if (exact) {
        // No measurement errors supplied: estimate the slope variance from residuals.
        const double dof = static_cast<double>(usable.size()) - 2.0;
        const double s2 = dof > 0 ? rss / dof : 0.0;
        slope_var = s2 * sw / denom;
    } else {
        slope_var = sw / denom;
    }

    FitResult out;
    out.points_used = static_cast<int>(usable.size());
    out.p_hat = std::clamp(std::exp(slope), 0.0, 1.0);
    out.std_error = out.p_hat * std::sqrt(std::max(0.0, slope_var));
    out.residual_norm = std::sqrt(rss / static_cast<double>(usable.size()));
    return out;
}

} // namespace echobench
