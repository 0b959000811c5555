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
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "echobench/analytics.hpp"
#include "echobench/channel.hpp"
#include "echobench/curve.hpp"
#include "echobench/lindblad.hpp"
#include "echobench/parallel.hpp"
#include "echobench/sampling.hpp"

namespace echobench {

enum class Protocol { motion_reversal, iterated, echo, generalized_echo, lindblad_echo };

inline std::string protocol_name(Protocol p) {
    switch (p) {
        case Protocol::motion_reversal: return "motion_reversal";
        case Protocol::iterated: return "iterated";
        case Protocol::echo: return "echo";
        case Protocol::generalized_echo: return "generalized_echo";
        case Protocol::lindblad_echo: return "lindblad_echo";
    }
    return "?";
}

inline Protocol protocol_from_name(const std::string& name) {
    if (name == "motion_reversal") return Protocol::motion_reversal;
    if (name == "iterated") return Protocol::iterated;
    if (name == "echo") return Protocol::echo;
    if (name == "generalized_echo") return Protocol::generalized_echo;
    if (name == "lindblad_echo") return Protocol::lindblad_echo;
    throw ConfigError("unknown protocol: " + name);
}

/// Random-control model for continuous-time runs: piecewise-constant GUE Hamiltonians
/// resampled every tau_c (the simplest random walk on U(D) with ergodic averaging).
struct ControlParams {
    double tau_c = 0.0;        ///< correlation time; 0 means auto from tau_c_factor
    double tau_c_factor = 0.1; ///< tau_c = tau_c_factor / E||H_C||_F when tau_c == 0
    double control_scale = 1.0; ///< GUE scale; 0 disables the control drive entirely
    double step_budget = 0.01; ///< (||H_C|| + eps ||L_hat||) * dt <= step_budget

    double resolve_tau_c(int dim) const {
        if (tau_c > 0.0) return tau_c;
        if (control_scale <= 0.0) return 1.0; // interval length is irrelevant without control
        return tau_c_factor / gue_expected_frobenius_norm(dim, control_scale);
    }
};

struct LindbladRunParams {
    double t_max = 10.0;
    int n_points = 50; ///< record grid: t_k = k * t_max / n_points, k = 0..n_points
    ControlParams control;
};

struct ExperimentConfig {
    Protocol protocol = Protocol::motion_reversal;
    int dim = 2;
    std::optional<KrausChannel> channel;          ///< discrete protocols
    std::vector<KrausChannel> per_step_channels;  ///< optional per-step override
    std::optional<LindbladGenerator> generator;   ///< continuous protocol
    int n_unitaries = 1; ///< independent trials N
    long shots = 1;      ///< measurement repetitions per trial (ignored in analytic mode)
    bool analytic_shots = false; ///< record survival probabilities directly
    int n_max = 1;
    double initial_purity = 1.0;
    bool trajectory_mode = false; ///< one propagation records all n; readouts correlated
    SeedSpec seed;
    unsigned threads = 0; ///< 0 = hardware concurrency
    LindbladRunParams lindblad;

    void validate() const {
        if (dim < 2 || dim > numeric_policy().max_state_dim)
            throw ConfigError("config: dim out of range");
        if (n_unitaries < 1) throw ConfigError("config: n_unitaries must be >= 1");
        if (!analytic_shots && shots < 1) throw ConfigError("config: shots must be >= 1");
        if (protocol == Protocol::lindblad_echo) {
            if (!generator) throw ConfigError("config: lindblad_echo needs a lindblad channel");
            if (generator->dim() != dim) throw ConfigError("config: generator dim mismatch");
            if (lindblad.t_max <= 0.0) throw ConfigError("config: t_max must be positive");
            if (lindblad.n_points < 1) throw ConfigError("config: n_points must be >= 1");
            if (lindblad.control.step_budget <= 0.0)
                throw ConfigError("config: step_budget must be positive");
            // The weak-noise analysis holds for moderate eps * t; far beyond that the
            // run is almost certainly a configuration mistake.
            if (generator->epsilon() * lindblad.t_max > 100.0)
                throw ConfigError("config: eps * t_max > 100 is far outside the weak-noise regime");
        } else {
            if (!channel && per_step_channels.empty())
                throw ConfigError("config: missing channel");
            if (channel && channel->dim() != dim)
                throw ConfigError("config: channel dim mismatch");
            for (const auto& ch : per_step_channels)
                if (ch.dim() != dim) throw ConfigError("config: per-step channel dim mismatch");
            if (channel && channel->subnormalized())
                throw ConfigError("config: channel must be trace preserving");
            if (n_max < 1) throw ConfigError("config: n_max must be >= 1");
            if (initial_purity < 1.0 / dim - 1e-12 || initial_purity > 1.0 + 1e-12)
                throw ConfigError("config: initial_purity must lie in [1/D, 1]");
        }
    }
};

struct EstimateResult {
    double f_hat = 0.0;
    double std_error = 0.0;
    int n_unitaries = 0;
    long shots = 0;
};

namespace detail {

inline double estimate_from_probability(double s, const ExperimentConfig& cfg, Prng& rng) {
    const double p = checked_probability(s);
    if (cfg.analytic_shots) return p;
    return static_cast<double>(rng.binomial(cfg.shots, p)) / static_cast<double>(cfg.shots);
}

inline const KrausChannel& step_channel(const ExperimentConfig& cfg, int step_one_based) {
    if (!cfg.per_step_channels.empty())
        return cfg.per_step_channels[static_cast<std::size_t>(step_one_based - 1) %
                                     cfg.per_step_channels.size()];
    return *cfg.channel;
}

/// One motion-reversal step: rho -> U† Lambda(U rho U†) U.
inline ComplexMatrix reversal_step(const KrausChannel& ch, const ComplexMatrix& u,
                                   const ComplexMatrix& rho) {
    return u.adjoint() * ch.apply(u * rho * u.adjoint()) * u;
}

inline DecayCurve aggregate_trials(const std::vector<std::vector<double>>& per_trial,
                                   int n_max, double x_scale = 1.0, int x_offset = 1) {
    DecayCurve curve;
    curve.points.reserve(n_max);
    std::vector<double> column(per_trial.size());
    for (int k = 0; k < n_max; ++k) {
        for (std::size_t t = 0; t < per_trial.size(); ++t) column[t] = per_trial[t][k];
        curve.points.push_back(aggregate_point((k + x_offset) * x_scale, column));
    }
    return curve;
}

} // namespace detail

/// Single motion reversal with projective readout: for each of N Haar unitaries, form
/// U† Lambda(U rho0 U†) U with rho0 = |0...0><0...0|, read the survival probability, and
/// average. The grand mean estimates p + (1-p)/D.
inline EstimateResult run_motion_reversal(const ExperimentConfig& cfg) {
    cfg.validate();
    if (cfg.protocol != Protocol::motion_reversal)
        throw ConfigError("run_motion_reversal: wrong protocol field");
    const DensityMatrix rho0 = DensityMatrix::basis_state(cfg.dim);
    std::vector<double> estimates(cfg.n_unitaries);
    parallel_for(static_cast<std::size_t>(cfg.n_unitaries), cfg.threads, [&](std::size_t i) {
        Prng rng(cfg.seed.substream(i));
        const ComplexMatrix u = haar_unitary(cfg.dim, rng);
        const double s = exact_gate_fidelity(detail::step_channel(cfg, 1), u, rho0);
        estimates[i] = detail::estimate_from_probability(s, cfg, rng);
    });
    const CurvePoint pt = aggregate_point(0.0, estimates);
    return {pt.mean, pt.std_error, cfg.n_unitaries, cfg.analytic_shots ? 0 : cfg.shots};
}

/// Iterated motion reversal (fresh independent unitaries each step):
///   rho(n) = U_n† Lambda(U_n ... U_1† Lambda(U_1 rho U_1†) U_1 ... U_n†) U_n,
/// fidelity recorded against rho(0) at every n <= n_max. Supports mixed rho(0).
/// Destructive readout by default: each n is an independent sub-experiment with its own
/// stream; trajectory mode records all n from one propagation (simulation-only).
inline DecayCurve run_iterated_motion_reversal(const ExperimentConfig& cfg) {
    cfg.validate();
    if (cfg.protocol != Protocol::iterated)
        throw ConfigError("run_iterated_motion_reversal: wrong protocol field");
    const DensityMatrix rho0 = DensityMatrix::mixed_with_identity(cfg.dim, cfg.initial_purity);
    std::vector<std::vector<double>> per_trial(cfg.n_unitaries,
                                               std::vector<double>(cfg.n_max, 0.0));
    const auto stride = static_cast<std::uint64_t>(cfg.n_max);
    parallel_for(static_cast<std::size_t>(cfg.n_unitaries), cfg.threads, [&](std::size_t t) {
        if (cfg.trajectory_mode) {
            Prng rng(cfg.seed.substream(t));
            ComplexMatrix rho = rho0.matrix();
            for (int n = 1; n <= cfg.n_max; ++n) {
                const ComplexMatrix u = haar_unitary(cfg.dim, rng);
                rho = detail::reversal_step(detail::step_channel(cfg, n), u, rho);
                const double f = real_overlap(rho0.matrix(), rho);
                per_trial[t][n - 1] = detail::estimate_from_probability(f, cfg, rng);
            }
        } else {
            for (int n = 1; n <= cfg.n_max; ++n) {
                Prng rng(cfg.seed.substream(t * stride + (n - 1)));
                ComplexMatrix rho = rho0.matrix();
                for (int j = 1; j <= n; ++j) {
                    const ComplexMatrix u = haar_unitary(cfg.dim, rng);
                    rho = detail::reversal_step(detail::step_channel(cfg, j), u, rho);
                }
                const double f = real_overlap(rho0.matrix(), rho);
                per_trial[t][n - 1] = detail::estimate_from_probability(f, cfg, rng);
            }
        }
    });
    return detail::aggregate_trials(per_trial, cfg.n_max);
}

/// Imperfect Loschmidt echo: noisy forward sequence Lambda U_n ... Lambda U_1, then the
/// exact inverse U_1† ... U_n† with no noise. Fidelity against rho(0) at each n.
inline DecayCurve run_loschmidt_echo(const ExperimentConfig& cfg) {
    cfg.validate();
    if (cfg.protocol != Protocol::echo) throw ConfigError("run_loschmidt_echo: wrong protocol");
    const DensityMatrix rho0 = DensityMatrix::mixed_with_identity(cfg.dim, cfg.initial_purity);
    std::vector<std::vector<double>> per_trial(cfg.n_unitaries,
                                               std::vector<double>(cfg.n_max, 0.0));
    const auto stride = static_cast<std::uint64_t>(cfg.n_max);

    auto run_length = [&](int n, Prng& rng) {
        std::vector<ComplexMatrix> us;
        us.reserve(n);
        ComplexMatrix rho = rho0.matrix();
        for (int j = 1; j <= n; ++j) {
            us.push_back(haar_unitary(cfg.dim, rng));
            rho = detail::step_channel(cfg, j).apply(us.back() * rho * us.back().adjoint());
        }
        for (int j = n; j >= 1; --j) rho = us[j - 1].adjoint() * rho * us[j - 1];
        return real_overlap(rho0.matrix(), rho);
    };

    parallel_for(static_cast<std::size_t>(cfg.n_unitaries), cfg.threads, [&](std::size_t t) {
        if (cfg.trajectory_mode) {
            // Shared forward prefix; each n still needs its own exact backward pass.
            Prng rng(cfg.seed.substream(t));
            std::vector<ComplexMatrix> us;
            us.reserve(cfg.n_max);
            ComplexMatrix forward = rho0.matrix();
            for (int n = 1; n <= cfg.n_max; ++n) {
                us.push_back(haar_unitary(cfg.dim, rng));
                forward = detail::step_channel(cfg, n).apply(us.back() * forward *
                                                             us.back().adjoint());
                ComplexMatrix rho = forward;
                for (int j = n; j >= 1; --j) rho = us[j - 1].adjoint() * rho * us[j - 1];
                const double f = real_overlap(rho0.matrix(), rho);
                per_trial[t][n - 1] = detail::estimate_from_probability(f, cfg, rng);
            }
        } else {
            for (int n = 1; n <= cfg.n_max; ++n) {
                Prng rng(cfg.seed.substream(t * stride + (n - 1)));
                const double f = run_length(n, rng);
                per_trial[t][n - 1] = detail::estimate_from_probability(f, cfg, rng);
            }
        }
    });
    return detail::aggregate_trials(per_trial, cfg.n_max);
}

/// Generalized echo with noise in both directions:
///   Lambda U_1† Lambda U_2† ... Lambda U_n† Lambda U_n ... Lambda U_1 applied to rho(0),
/// i.e. every step (forward and backward) is a unitary followed by the noise.
inline DecayCurve run_generalized_echo(const ExperimentConfig& cfg) {
    cfg.validate();
    if (cfg.protocol != Protocol::generalized_echo)
        throw ConfigError("run_generalized_echo: wrong protocol");
    const DensityMatrix rho0 = DensityMatrix::mixed_with_identity(cfg.dim, cfg.initial_purity);
    std::vector<std::vector<double>> per_trial(cfg.n_unitaries,
                                               std::vector<double>(cfg.n_max, 0.0));
    const auto stride = static_cast<std::uint64_t>(cfg.n_max);

    auto run_length = [&](int n, Prng& rng) {
        std::vector<ComplexMatrix> us;
        us.reserve(n);
        ComplexMatrix rho = rho0.matrix();
        for (int j = 1; j <= n; ++j) {
            us.push_back(haar_unitary(cfg.dim, rng));
            rho = detail::step_channel(cfg, j).apply(us.back() * rho * us.back().adjoint());
        }
        for (int j = n; j >= 1; --j)
            rho = detail::step_channel(cfg, j).apply(us[j - 1].adjoint() * rho * us[j - 1]);
        return real_overlap(rho0.matrix(), rho);
    };

    parallel_for(static_cast<std::size_t>(cfg.n_unitaries), cfg.threads, [&](std::size_t t) {
        if (cfg.trajectory_mode) {
            Prng rng(cfg.seed.substream(t));
            std::vector<ComplexMatrix> us;
            us.reserve(cfg.n_max);
            ComplexMatrix forward = rho0.matrix();
            for (int n = 1; n <= cfg.n_max; ++n) {
                us.push_back(haar_unitary(cfg.dim, rng));
                forward = detail::step_channel(cfg, n).apply(us.back() * forward *
                                                             us.back().adjoint());
                ComplexMatrix rho = forward;
                for (int j = n; j >= 1; --j)
                    rho = detail::step_channel(cfg, j).apply(us[j - 1].adjoint() * rho *
                                                             us[j - 1]);
                const double f = real_overlap(rho0.matrix(), rho);
                per_trial[t][n - 1] = detail::estimate_from_probability(f, cfg, rng);
            }
        } else {
            for (int n = 1; n <= cfg.n_max; ++n) {
                Prng rng(cfg.seed.substream(t * stride + (n - 1)));
                const double f = run_length(n, rng);
                per_trial[t][n - 1] = detail::estimate_from_probability(f, cfg, rng);
            }
        }
    });
    return detail::aggregate_trials(per_trial, cfg.n_max);
}

namespace detail {

inline void rk4_joint_step(ComplexMatrix& u, ComplexMatrix& rho, const ComplexMatrix& hc,
                           const LindbladGenerator& gen, double eps, double h) {
    const Cplx mi(0.0, -1.0);
    auto fu = [&](const ComplexMatrix& x) -> ComplexMatrix { return mi * (hc * x); };
    auto fr = [&](const ComplexMatrix& x) -> ComplexMatrix {
        return mi * (hc * x - x * hc) + eps * gen.apply(x);
    };
    const ComplexMatrix ku1 = fu(u), kr1 = fr(rho);
    const ComplexMatrix ku2 = fu(u + 0.5 * h * ku1), kr2 = fr(rho + 0.5 * h * kr1);
    const ComplexMatrix ku3 = fu(u + 0.5 * h * ku2), kr3 = fr(rho + 0.5 * h * kr2);
    const ComplexMatrix ku4 = fu(u + h * ku3), kr4 = fr(rho + h * kr3);
    u += (h / 6.0) * (ku1 + 2.0 * ku2 + 2.0 * ku3 + ku4);
    rho += (h / 6.0) * (kr1 + 2.0 * kr2 + 2.0 * kr3 + kr4);
}

inline double generator_norm_estimate(const LindbladGenerator& gen) {
    const long long d2 = static_cast<long long>(gen.dim()) * gen.dim();
    if (d2 <= numeric_policy().max_twirl_superop_dim)
        return gen.to_superoperator().matrix.norm();
    const double sd = std::sqrt(static_cast<double>(gen.dim()));
    double bound = 2.0 * gen.hamiltonian().norm() * sd;
    for (const auto& v : gen.jump_ops()) bound += v.squaredNorm() + v.squaredNorm() * sd;
    return bound;
}

} // namespace detail

/// Continuous-time echo: co-integrate the control propagator U(t) under piecewise-
/// constant random GUE Hamiltonians (resampled every tau_c) and rho(t) under
/// d rho/dt = -i[H_C, rho] + eps L(rho), both with fixed-step RK4, and record
/// F(t) = <0| U†(t) rho(t) U(t) |0> on the grid. Trace drift beyond the policy limit
/// aborts with a suggested smaller step.
inline DecayCurve run_lindblad_echo(const ExperimentConfig& cfg) {
    cfg.validate();
    if (cfg.protocol != Protocol::lindblad_echo)
        throw ConfigError("run_lindblad_echo: wrong protocol");
    const LindbladGenerator& gen = *cfg.generator;
    const double eps = gen.epsilon();
    const double l_norm = detail::generator_norm_estimate(gen);
    const double tau_c = cfg.lindblad.control.resolve_tau_c(cfg.dim);
    const double grid_dt = cfg.lindblad.t_max / cfg.lindblad.n_points;
    const int n_points = cfg.lindblad.n_points;

    const bool no_control = cfg.lindblad.control.control_scale <= 0.0;
    std::vector<std::vector<double>> per_trial(cfg.n_unitaries,
                                               std::vector<double>(n_points, 0.0));
    parallel_for(static_cast<std::size_t>(cfg.n_unitaries), cfg.threads, [&](std::size_t trial) {
        Prng rng(cfg.seed.substream(trial));
        ComplexMatrix u = identity_matrix(cfg.dim);
        ComplexMatrix rho = ComplexMatrix::Zero(cfg.dim, cfg.dim);
        rho(0, 0) = 1.0;

        double t = 0.0;
        long interval = -1; // index of the control interval currently in force
        ComplexMatrix hc = ComplexMatrix::Zero(cfg.dim, cfg.dim);
        double hc_norm = 0.0;
        double last_h = grid_dt;
        const double t_eps = 1e-9 * std::min(grid_dt, tau_c);

        for (int k = 1; k <= n_points; ++k) {
            const double t_record = k * grid_dt;
            while (t < t_record - t_eps) {
                const long needed = static_cast<long>(std::floor((t + t_eps) / tau_c));
                if (needed != interval) {
                    interval = needed;
                    if (!no_control) {
                        hc = gue_hamiltonian(cfg.dim, cfg.lindblad.control.control_scale, rng);
                        hc_norm = hc.norm();
                    }
                }
                const double t_interval_end = (interval + 1) * tau_c;
                const double t_stop = std::min(t_record, t_interval_end);
                const double span = t_stop - t;
                if (span <= t_eps) {
                    t = t_stop;
                    continue;
                }
                const double dt_target =
                    cfg.lindblad.control.step_budget / std::max(1e-12, hc_norm + eps * l_norm);
                const int m = std::max(1, static_cast<int>(std::ceil(span / dt_target)));
                const double h = span / m;
                last_h = h;
                for (int s = 0; s < m; ++s) detail::rk4_joint_step(u, rho, hc, gen, eps, h);
                t = t_stop;
            }
            const double drift = std::abs(rho.trace().real() - 1.0) + std::abs(rho.trace().imag());
            if (!std::isfinite(drift) || drift > numeric_policy().trace_drift_limit ||
                !rho.allFinite() || rho.norm() > 1e3)
                throw IntegratorError("lindblad integrator unstable at t = " + std::to_string(t) +
                                          " (trace drift " + std::to_string(drift) +
                                          "); retry with dt <= " + std::to_string(last_h / 2),
                                      last_h / 2);
            const ComplexVector w = u.col(0); // U |0>
            const double f = (w.adjoint() * rho * w)(0, 0).real();
            per_trial[trial][k - 1] = detail::estimate_from_probability(f, cfg, rng);
        }
    });
    return detail::aggregate_trials(per_trial, n_points, grid_dt);
}

/// Numerical probe of the cumulant expansion: accumulate K1(t) = int L(s) ds and
/// K2(t) = 1/2 int_0^t ds int_0^s du [L(s), L(u)] on the superoperator representation
/// of L(s) = U†(s) L U(s) via midpoint Riemann sums, and report the growth of
/// ||K1(t) - t L_ave|| and ||K2(t)|| with log-log fitted exponents.
struct CumulantReport {
    std::vector<double> times;
    std::vector<double> k1_deviation; ///< ||K1(t) - t L_ave||_F, averaged over trajectories
    std::vector<double> k2_norm;      ///< ||K2(t)||_F, averaged over trajectories
    double k1_exponent = 0.0;
    double k2_exponent = 0.0;
};

inline CumulantReport cumulant_probe(const LindbladGenerator& gen, const ControlParams& control,
                                     const std::vector<double>& times, SeedSpec seed,
                                     int n_trajectories = 8, unsigned threads = 0,
                                     const ComplexMatrix* fixed_control = nullptr) {
    const int dim = gen.dim();
    check_superop_dim(dim, "cumulant_probe", numeric_policy().max_twirl_superop_dim);
    if (fixed_control && (fixed_control->rows() != dim || fixed_control->cols() != dim))
        throw DimensionError("cumulant_probe: fixed control dim mismatch");
    if (times.size() < 2) throw ConfigError("cumulant_probe: need at least two grid times");
    for (std::size_t i = 0; i + 1 < times.size(); ++i)
        if (!(times[i] > 0.0) || times[i + 1] <= times[i])
            throw ConfigError("cumulant_probe: times must be positive and increasing");

    const ComplexMatrix l_hat = gen.to_superoperator().matrix;
    const ComplexMatrix l_ave = gen.average_superoperator().matrix;
    const double tau_c = control.resolve_tau_c(dim);
    const double t_eps = 1e-9 * tau_c;

    std::vector<std::vector<double>> k1_dev(n_trajectories,
                                            std::vector<double>(times.size(), 0.0));
    std::vector<std::vector<double>> k2_norm(n_trajectories,
                                             std::vector<double>(times.size(), 0.0));

    parallel_for(static_cast<std::size_t>(n_trajectories), threads, [&](std::size_t r) {
        Prng rng(seed.substream(r));
        ComplexMatrix u = identity_matrix(dim);
        ComplexMatrix k1 = ComplexMatrix::Zero(l_hat.rows(), l_hat.cols());
        ComplexMatrix k2 = k1;
        double t = 0.0;
        long interval = -1;
        ComplexMatrix hc, half_step, full_step;
        double hc_norm = 1.0;

        for (std::size_t idx = 0; idx < times.size(); ++idx) {
            const double t_record = times[idx];
            while (t < t_record - t_eps) {
                const long needed = static_cast<long>(std::floor((t + t_eps) / tau_c));
                if (needed != interval) {
                    interval = needed;
                    if (fixed_control)
                        hc = *fixed_control;
                    else if (control.control_scale > 0.0)
                        hc = gue_hamiltonian(dim, control.control_scale, rng);
                    else
                        hc = ComplexMatrix::Zero(dim, dim);
                    hc_norm = std::max(hc.norm(), 1e-12);
                    half_step = ComplexMatrix(); // recomputed when the substep changes
                }
                const double t_stop = std::min(t_record, (interval + 1) * tau_c);
                const double span = t_stop - t;
                if (span <= t_eps) {
                    t = t_stop;
                    continue;
                }
                const double h_target = control.step_budget / std::max(1e-12, hc_norm);
                const int m = std::max(1, static_cast<int>(std::ceil(span / h_target)));
                const double h = span / m;
                half_step = matrix_exp(Cplx(0, -0.5 * h) * hc);
                full_step = half_step * half_step;
                for (int s = 0; s < m; ++s) {
                    const ComplexMatrix u_mid = half_step * u;
                    const ComplexMatrix u_hat = kron(u_mid, u_mid.conjugate());
                    const ComplexMatrix l_mid = u_hat.adjoint() * l_hat * u_hat;
                    k2 += (0.5 * h) * (l_mid * k1 - k1 * l_mid);
                    k1 += h * l_mid;
                    u = full_step * u;
                }
                t = t_stop;
            }
            k1_dev[r][idx] = (k1 - t_record * l_ave).norm();
            k2_norm[r][idx] = k2.norm();
        }
    });

    CumulantReport report;
    report.times = times;
    report.k1_deviation.resize(times.size());
    report.k2_norm.resize(times.size());
    for (std::size_t idx = 0; idx < times.size(); ++idx) {
        std::vector<double> a(n_trajectories), b(n_trajectories);
        for (int r = 0; r < n_trajectories; ++r) {
            a[r] = k1_dev[r][idx];
            b[r] = k2_norm[r][idx];
        }
        report.k1_deviation[idx] = pairwise_sum(a) / n_trajectories;
        report.k2_norm[idx] = pairwise_sum(b) / n_trajectories;
    }

    auto loglog_slope = [&](const std::vector<double>& values) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        int n = 0;
        for (std::size_t i = 0; i < times.size(); ++i) {
            if (values[i] <= 0.0) continue;
            const double x = std::log(times[i]);
            const double y = std::log(values[i]);
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
            ++n;
        }
        if (n < 2) return 0.0;
        return (n * sxy - sx * sy) / (n * sxx - sx * sx);
    };
    report.k1_exponent = loglog_slope(report.k1_deviation);
    report.k2_exponent = loglog_slope(report.k2_norm);
    return report;
}

} // namespace echobench
