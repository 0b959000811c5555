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

#include "echobench/matrix.hpp"
#include "echobench/rng.hpp"
#include "echobench/state.hpp"

namespace echobench {

namespace detail {
inline void check_sample_dim(int dim, const char* what) {
    if (dim < 2 || dim > numeric_policy().max_state_dim)
        throw SizeLimitError(std::string(what) + ": dim " + std::to_string(dim) +
                             " outside [2, " + std::to_string(numeric_policy().max_state_dim) + "]");
}
} // namespace detail

/// Complex Ginibre matrix: i.i.d. CN(0,1) entries, filled row-major. The fill order is
/// part of the stream contract.
inline ComplexMatrix ginibre(int dim, Prng& rng) {
    detail::check_sample_dim(dim, "ginibre");
    ComplexMatrix g(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) g(i, j) = rng.complex_normal();
    return g;
}

/// Haar-distributed unitary: Ginibre -> QR -> right-multiply Q by diag(R_jj / |R_jj|).
/// The phase correction is mandatory; raw QR output is not Haar-distributed.
inline ComplexMatrix haar_unitary(int dim, Prng& rng) {
    detail::check_sample_dim(dim, "haar_unitary");
    const ComplexMatrix g = ginibre(dim, rng);
    QrFactors qr = qr_unitary(g);
    ComplexVector phases(dim);
    for (int j = 0; j < dim; ++j) phases(j) = qr.r(j, j) / std::abs(qr.r(j, j));
    return qr.q * phases.asDiagonal();
}

inline ComplexMatrix haar_unitary(int dim, const SeedSpec& seed) {
    Prng rng(seed);
    return haar_unitary(dim, rng);
}

/// Normalized complex Gaussian vector: the unitarily invariant (Fubini-Study) measure.
inline ComplexVector random_state_vector(int dim, Prng& rng) {
    detail::check_sample_dim(dim, "random_state_vector");
    ComplexVector psi(dim);
    double norm2 = 0.0;
    do {
        for (int i = 0; i < dim; ++i) psi(i) = rng.complex_normal();
        norm2 = psi.squaredNorm();
    } while (norm2 < 1e-300);
    return psi / std::sqrt(norm2);
}

inline DensityMatrix random_pure_state(int dim, Prng& rng) {
    return DensityMatrix::pure(random_state_vector(dim, rng));
}

inline DensityMatrix random_pure_state(int dim, const SeedSpec& seed) {
    Prng rng(seed);
    return random_pure_state(dim, rng);
}

/// GUE Hamiltonian, traceless. Off-diagonals are complex Gaussian with variance
/// scale^2/D, diagonals real Gaussian with variance 2*scale^2/D, then the trace is
/// projected out. This keeps the spectral width roughly dimension-independent.
inline ComplexMatrix gue_hamiltonian(int dim, double scale, Prng& rng) {
    detail::check_sample_dim(dim, "gue_hamiltonian");
    if (scale <= 0.0) throw ConfigError("gue_hamiltonian: scale must be positive");
    const double sigma_diag = scale * std::sqrt(2.0 / dim);
    const double sigma_off = scale * std::sqrt(1.0 / (2.0 * dim)); // per real component
    ComplexMatrix h(dim, dim);
    for (int i = 0; i < dim; ++i) h(i, i) = sigma_diag * rng.normal();
    for (int i = 0; i < dim; ++i) {
        for (int j = i + 1; j < dim; ++j) {
            const Cplx z(sigma_off * rng.normal(), sigma_off * rng.normal());
            h(i, j) = z;
            h(j, i) = std::conj(z);
        }
    }
    const Cplx mean_diag = h.trace() / static_cast<double>(dim);
    for (int i = 0; i < dim; ++i) h(i, i) -= mean_diag;
    return h;
}

inline ComplexMatrix gue_hamiltonian(int dim, double scale, const SeedSpec& seed) {
    Prng rng(seed);
    return gue_hamiltonian(dim, scale, rng);
}

/// E||H||_F for gue_hamiltonian's normalization, used to set control time scales.
inline double gue_expected_frobenius_norm(int dim, double scale) {
    return scale * std::sqrt(dim + 1.0 - 2.0 / dim);
}

} // namespace echobench
