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

#include <functional>
#include <utility>
#include <vector>

#include "echobench/analytics.hpp"
#include "echobench/channel.hpp"
#include "echobench/curve.hpp"
#include "echobench/parallel.hpp"
#include "echobench/sampling.hpp"
#include "echobench/superoperator.hpp"

namespace echobench {

/// First linear U(D) invariant: Tr[Lambda(1)] = <vec 1| M |vec 1>.
inline double invariant_one(const Superoperator& map) {
    const ComplexVector vec_id = vec(identity_matrix(map.dim));
    return (vec_id.adjoint() * map.matrix * vec_id)(0, 0).real();
}

/// Second linear U(D) invariant: the literal D^2 x D^2 matrix trace
/// Tr(Lambda-hat) = sum_kl <k| Lambda(E_kl) |l>.
inline double invariant_two(const Superoperator& map) {
    return map.matrix.trace().real();
}

/// Extract the depolarizing strength of a (nearly) U(D)-invariant map by projecting onto
/// span{1_{D^2}, |vec 1><vec 1|/D} through the two invariants: solving the 2x2 system
/// gives p = (Tr M - Tr[M(1)]/D) / (D^2 - 1). For trace-preserving maps this reduces to
/// (Tr M - 1)/(D^2 - 1).
inline double invariant_projection_p(const Superoperator& map) {
    const double d = static_cast<double>(map.dim);
    return (invariant_two(map) - invariant_one(map) / d) / (d * d - 1.0);
}

/// Empirical Haar average of a channel's superoperator.
struct TwirlReport {
    long n_samples = 0;
    double distance_to_depolarizing = 0.0; ///< Frobenius, against the analytic-p target
    double p_empirical = 0.0;              ///< invariant projection of the averaged map
    double p_analytic = 0.0;               ///< (Tr Lambda-hat - 1)/(D^2 - 1)
    double invariant_drift = 0.0;          ///< max per-sample drift of either invariant
    std::vector<std::pair<long, double>> checkpoints; ///< (n, distance) at requested n
};

/// Monte Carlo twirl (1/n) sum_i U_i-hat Lambda-hat U_i-hat†, with the Frobenius distance
/// to the ideal depolarizing superoperator tracked at the requested checkpoint sample
/// counts (rounded up to blocks of 100). Samples run as independent 100-sample blocks in
/// parallel; the prefix reduction over blocks is sequential, so results are schedule
/// independent.
inline TwirlReport empirical_twirl(const KrausChannel& ch, long n_samples, SeedSpec seed,
                                   std::vector<long> checkpoints = {}, unsigned threads = 0) {
    const int dim = ch.dim();
    check_superop_dim(dim, "empirical_twirl", numeric_policy().max_twirl_superop_dim);
    if (n_samples < 1) throw ConfigError("empirical_twirl: need at least one sample");

    const Superoperator lambda = ch.to_superoperator();
    const double inv1_ref = invariant_one(lambda);
    const double inv2_ref = invariant_two(lambda);
    const double p_analytic = depolarizing_strength(ch);
    const ComplexMatrix target = depolarizing_superoperator(dim, p_analytic).matrix;

    constexpr long kBlock = 100;
    const long n_blocks = (n_samples + kBlock - 1) / kBlock;
    std::vector<ComplexMatrix> block_sums(n_blocks);
    std::vector<double> block_drift(n_blocks, 0.0);

    parallel_for(static_cast<std::size_t>(n_blocks), threads, [&](std::size_t b) {
        const long begin = static_cast<long>(b) * kBlock;
        const long end = std::min(n_samples, begin + kBlock);
        ComplexMatrix sum = ComplexMatrix::Zero(lambda.matrix.rows(), lambda.matrix.cols());
        double drift = 0.0;
        for (long i = begin; i < end; ++i) {
            Prng rng(seed.substream(static_cast<std::uint64_t>(i)));
            const ComplexMatrix u = haar_unitary(dim, rng);
            const ComplexMatrix u_hat = kron(u, u.conjugate());
            const ComplexMatrix conj = u_hat * lambda.matrix * u_hat.adjoint();
            const Superoperator sample{dim, conj};
            drift = std::max(drift, std::abs(invariant_one(sample) - inv1_ref));
            drift = std::max(drift, std::abs(invariant_two(sample) - inv2_ref));
            sum += conj;
        }
        block_sums[b] = std::move(sum);
        block_drift[b] = drift;
    });

    std::sort(checkpoints.begin(), checkpoints.end());
    TwirlReport report;
    report.n_samples = n_samples;
    report.p_analytic = p_analytic;

    ComplexMatrix running = ComplexMatrix::Zero(lambda.matrix.rows(), lambda.matrix.cols());
    long seen = 0;
    std::size_t next_checkpoint = 0;
    for (long b = 0; b < n_blocks; ++b) {
        running += block_sums[b];
        seen = std::min(n_samples, (b + 1) * kBlock);
        report.invariant_drift = std::max(report.invariant_drift, block_drift[b]);
        while (next_checkpoint < checkpoints.size() && checkpoints[next_checkpoint] <= seen) {
            const ComplexMatrix avg = running / static_cast<double>(seen);
            report.checkpoints.emplace_back(seen, (avg - target).norm());
            ++next_checkpoint;
        }
    }
    const ComplexMatrix avg = running / static_cast<double>(n_samples);
    report.distance_to_depolarizing = (avg - target).norm();
    report.p_empirical = invariant_projection_p({dim, avg});
    return report;
}

/// Across-unitary fluctuation of the exact motion-reversal fidelity at fixed channel and
/// fixed rho0 = |0...0><0...0|. The fidelity depends on U only through psi = U |0...0>,
/// so sampling draws Fubini-Study states directly.
struct ConcentrationResult {
    std::vector<std::pair<int, double>> variances; ///< (D, Var_U F)
    double loglog_slope = 0.0;
    bool slope_valid = false;
};

inline ConcentrationResult concentration_study(const std::function<KrausChannel(int)>& family,
                                               const std::vector<int>& dims, long n_samples,
                                               SeedSpec seed, unsigned threads = 0) {
    if (n_samples < 2) throw ConfigError("concentration_study: need at least two samples");
    ConcentrationResult out;
    for (std::size_t d_idx = 0; d_idx < dims.size(); ++d_idx) {
        const int dim = dims[d_idx];
        if (dim < 2 || dim > 128)
            throw SizeLimitError("concentration_study: dims must lie in [2, 128]");
        const KrausChannel ch = family(dim);
        if (ch.dim() != dim) throw DimensionError("concentration_study: family dim mismatch");
        std::vector<double> fidelities(n_samples);
        const std::uint64_t base = static_cast<std::uint64_t>(d_idx) *
                                   static_cast<std::uint64_t>(n_samples);
        parallel_for(static_cast<std::size_t>(n_samples), threads, [&](std::size_t i) {
            Prng rng(seed.substream(base + i));
            fidelities[i] =
                checked_probability(ch.pure_survival(random_state_vector(dim, rng)));
        });
        const double mean = pairwise_sum(fidelities) / static_cast<double>(n_samples);
        std::vector<double> sq(n_samples);
        for (long i = 0; i < n_samples; ++i) {
            const double d = fidelities[i] - mean;
            sq[i] = d * d;
        }
        const double var = pairwise_sum(sq) / static_cast<double>(n_samples - 1);
        out.variances.emplace_back(dim, var);
    }

    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (const auto& [dim, var] : out.variances) {
        if (var <= 1e-24) continue; // numerically zero (exact twirl fixed points)
        const double x = std::log(static_cast<double>(dim));
        const double y = std::log(var);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++n;
    }
    if (n >= 2) {
        out.loglog_slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        out.slope_valid = true;
    }
    return out;
}

/// Monte Carlo check of the two equivalent averages of the gate fidelity: over
/// Fubini-Study states at fixed U, and over Haar unitaries at fixed psi.
struct AveragePair {
    double f_states = 0.0;
    double err_states = 0.0;
    double f_unitaries = 0.0;
    double err_unitaries = 0.0;
};

inline AveragePair state_vs_unitary_average(const KrausChannel& ch, long n, SeedSpec seed,
                                            unsigned threads = 0) {
    const int dim = ch.dim();
    if (dim > 64) throw SizeLimitError("state_vs_unitary_average: dim must be <= 64");
    if (n < 2) throw ConfigError("state_vs_unitary_average: need at least two samples");

    // Streams: 0 and 1 hold the fixed unitary and fixed state; samples follow.
    const ComplexMatrix u_fixed = haar_unitary(dim, seed.substream(0));
    Prng psi_rng(seed.substream(1));
    const DensityMatrix psi_fixed = random_pure_state(dim, psi_rng);

    std::vector<double> f_states(n), f_unitaries(n);
    parallel_for(static_cast<std::size_t>(n), threads, [&](std::size_t i) {
        Prng rng(seed.substream(2 + i));
        f_states[i] = exact_gate_fidelity(ch, u_fixed, random_pure_state(dim, rng));
    });
    parallel_for(static_cast<std::size_t>(n), threads, [&](std::size_t i) {
        Prng rng(seed.substream(2 + n + i));
        f_unitaries[i] = exact_gate_fidelity(ch, haar_unitary(dim, rng), psi_fixed);
    });

    const CurvePoint a = aggregate_point(0.0, f_states);
    const CurvePoint b = aggregate_point(0.0, f_unitaries);
    return {a.mean, a.std_error, b.mean, b.std_error};
}

} // namespace echobench
