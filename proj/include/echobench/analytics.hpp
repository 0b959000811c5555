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

#include <cmath>

#include "echobench/channel.hpp"
#include "echobench/lindblad.hpp"
#include "echobench/state.hpp"

namespace echobench {

/// Average gate fidelity of a trace-preserving channel:
/// (sum_k |Tr A_k|^2 + D) / (D^2 + D).
inline double average_gate_fidelity(const KrausChannel& ch) {
    const double d = static_cast<double>(ch.dim());
    return (ch.superop_trace() + d) / (d * d + d);
}

/// Depolarizing strength p = (Tr Lambda-hat - 1) / (D^2 - 1): the one scalar that
/// survives Haar averaging.
inline double depolarizing_strength(const KrausChannel& ch) {
    const double d = static_cast<double>(ch.dim());
    return (ch.superop_trace() - 1.0) / (d * d - 1.0);
}

/// Deterministic gate fidelity Tr[rho0 U† Lambda(U rho0 U†) U] for one unitary and one
/// state. Imaginary residue below tolerance is clipped; anything larger is an error, so
/// numeric bugs surface instead of hiding.
inline double exact_gate_fidelity(const KrausChannel& ch, const ComplexMatrix& u,
                                  const DensityMatrix& rho0) {
    if (u.rows() != ch.dim() || rho0.dim() != ch.dim())
        throw DimensionError("exact_gate_fidelity: dimension mismatch");
    if (!is_unitary(u)) throw DegenerateInputError("exact_gate_fidelity: u is not unitary");
    if (rho0.pure_vector()) return ch.pure_survival(u * (*rho0.pure_vector()));
    const ComplexMatrix sigma = u * rho0.matrix() * u.adjoint();
    const Cplx f = sigma.cwiseProduct(ch.apply(sigma).conjugate()).sum();
    if (std::abs(f.imag()) > numeric_policy().imag_residue_tol)
        throw NumericError("exact_gate_fidelity: imaginary residue " + std::to_string(f.imag()));
    return f.real();
}

/// Decay-law parameters: strength p for step-counted protocols, rate gamma for
/// continuous time, plus the initial-state purity Tr[rho(0)^2].
struct DecayModel {
    double p_or_gamma = 1.0;
    int dim = 2;
    double purity = 1.0;

    void validate(bool continuous = false) const {
        if (dim < 2) throw ConfigError("DecayModel: dim must be >= 2");
        if (continuous) {
            if (p_or_gamma < 0.0) throw ConfigError("DecayModel: gamma must be >= 0");
        } else if (p_or_gamma < 0.0 || p_or_gamma > 1.0) {
            throw ConfigError("DecayModel: p must lie in [0, 1]");
        }
        if (purity < 1.0 / dim - 1e-12 || purity > 1.0 + 1e-12)
            throw ConfigError("DecayModel: purity must lie in [1/D, 1]");
    }
};

/// F_n = p^n Tr[rho(0)^2] + (1 - p^n)/D.
inline double echo_decay_prediction(const DecayModel& model, long n) {
    model.validate(false);
    if (n < 0) throw ConfigError("echo_decay_prediction: n must be >= 0");
    const double pn = std::pow(model.p_or_gamma, static_cast<double>(n));
    return pn * model.purity + (1.0 - pn) / model.dim;
}

/// F(t) = e^{-gamma t} + (1 - e^{-gamma t})/D (pure initial state).
inline double continuous_decay_prediction(const DecayModel& model, double t) {
    model.validate(true);
    if (t < 0.0) throw ConfigError("continuous_decay_prediction: t must be >= 0");
    const double e = std::exp(-model.p_or_gamma * t);
    return e * model.purity + (1.0 - e) / model.dim;
}

/// gamma = epsilon * D/(D^2-1) * sum_a Tr(V_a†V_a), the decay rate of the averaged
/// fidelity under an ergodic control (see LindbladGenerator::unscaled_rate for the
/// derivation of the coefficient).
/// Note the convention: epsilon is folded in here so that predictions run on physical
/// time; the generator itself stays unscaled.
inline double lindblad_rate(const LindbladGenerator& gen) {
    return gen.epsilon() * gen.unscaled_rate();
}

/// Invert F = p + (1-p)/D for p, the strength read off a motion-reversal estimate.
inline double strength_from_fidelity(double f, int dim) {
    const double d = static_cast<double>(dim);
    return (f * d - 1.0) / (d - 1.0);
}

} // namespace echobench
