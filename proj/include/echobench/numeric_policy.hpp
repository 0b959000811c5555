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

namespace echobench {

/// Central record of every tolerance and size cap used by the library.
/// Tests can tighten or loosen globally through set_numeric_policy().
struct NumericPolicy {
    double unitarity_tol = 1e-10;     ///< ||U†U - 1||_F bound for "unitary" inputs
    double hermiticity_tol = 1e-10;   ///< ||A - A†||_F bound for Hermitian inputs
    double trace_one_tol = 1e-10;     ///< |Tr rho - 1| bound for density matrices
    double psd_floor = -1e-8;         ///< smallest admissible density-matrix eigenvalue
    double trace_preserving_tol = 1e-8; ///< ||sum A_k†A_k - 1||_F bound for channels
    double traceless_tol = 1e-10;     ///< |Tr H| bound after traceless projection
    double qr_pivot_floor = 1e-13;    ///< |R_jj| below this means rank-deficient input
    double matrix_exp_tol = 1e-12;    ///< default truncation target for matrix_exp
    double imag_residue_tol = 1e-10;  ///< largest imaginary part silently clipped from fidelities
    double consistency_tol = 1e-9;    ///< dual-path agreement (Kraus vs superoperator, ...)
    double survival_prob_slack = 1e-9; ///< admissible excursion of probabilities outside [0,1]
    double trace_drift_limit = 1e-6;  ///< integrator abort threshold on |Tr rho - 1|

    int max_state_dim = 256;          ///< largest Hilbert-space dimension D
    int max_superop_dim = 4096;       ///< largest D^2 for dense superoperator arithmetic
    int max_twirl_superop_dim = 1024; ///< largest D^2 for twirl / cumulant studies
    int kraus_compose_cap = 64;       ///< Kraus-count limit before compose() falls back
};

namespace detail {
inline NumericPolicy& policy_instance() {
    static NumericPolicy policy{};
    return policy;
}
} // namespace detail

inline const NumericPolicy& numeric_policy() { return detail::policy_instance(); }

/// Replace the global policy (not thread safe; intended for test setup only).
inline void set_numeric_policy(const NumericPolicy& policy) { detail::policy_instance() = policy; }

} // namespace echobench
