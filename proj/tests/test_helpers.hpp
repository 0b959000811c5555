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

#include "echobench/matrix.hpp"
#include "echobench/rng.hpp"

namespace echobench::test {

/// Kolmogorov-Smirnov statistic against the uniform distribution on [0, 1].
inline double ks_statistic_uniform01(std::vector<double> samples) {
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    double stat = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double cdf = samples[i];
        stat = std::max(stat, std::abs((i + 1) / n - cdf));
        stat = std::max(stat, std::abs(cdf - i / n));
    }
    return stat;
}

/// Critical KS value at the 1% level for large n.
inline double ks_critical_1pct(std::size_t n) { return 1.628 / std::sqrt(static_cast<double>(n)); }

struct MeanStdErr {
    double mean;
    double std_error;
};

inline MeanStdErr mean_stderr(const std::vector<double>& xs) {
    const double n = static_cast<double>(xs.size());
    double mean = 0.0;
    for (double x : xs) mean += x;
    mean /= n;
    double var = 0.0;
    for (double x : xs) var += (x - mean) * (x - mean);
    var /= (n - 1.0);
    return {mean, std::sqrt(var / n)};
}

/// Random Hermitian matrix with entries of order `scale` (test inputs only).
inline ComplexMatrix random_hermitian(int dim, double scale, Prng& rng) {
    ComplexMatrix a(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) a(i, j) = scale * rng.complex_normal();
    return 0.5 * (a + ComplexMatrix(a.adjoint()));
}

} // namespace echobench::test
