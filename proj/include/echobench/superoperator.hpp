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

namespace echobench {

/// D^2 x D^2 matrix acting on row-stacked vec(rho). Channels built from Kraus operators
/// take the form sum_k A_k (x) A_k*; unitary conjugation is U (x) U*.
struct Superoperator {
    int dim = 0; ///< Hilbert-space dimension D; matrix is D^2 x D^2
    ComplexMatrix matrix;

    ComplexMatrix apply(const ComplexMatrix& rho) const {
        if (rho.rows() != dim || rho.cols() != dim)
            throw DimensionError("Superoperator::apply: state dim mismatch");
        return unvec(matrix * vec(rho), dim);
    }

    double trace() const { return matrix.trace().real(); }
};

inline void check_superop_dim(int dim, const char* what,
                              int cap = numeric_policy().max_superop_dim) {
    const long long sq = static_cast<long long>(dim) * dim;
    if (dim < 1 || sq > cap)
        throw SizeLimitError(std::string(what) + ": D^2 = " + std::to_string(sq) +
                             " exceeds cap " + std::to_string(cap));
}

inline Superoperator identity_superoperator(int dim) {
    check_superop_dim(dim, "identity_superoperator");
    return {dim, identity_matrix(static_cast<Eigen::Index>(dim) * dim)};
}

inline Superoperator unitary_superoperator(const ComplexMatrix& u) {
    require_square(u, "unitary_superoperator");
    if (!is_unitary(u)) throw DegenerateInputError("unitary_superoperator: input is not unitary");
    check_superop_dim(static_cast<int>(u.rows()), "unitary_superoperator");
    return {static_cast<int>(u.rows()), kron(u, u.conjugate())};
}

/// Superoperator of rho -> p rho + (1-p) Tr(rho) 1/D:
/// p * 1_{D^2} + ((1-p)/D) |vec 1><vec 1|.
inline Superoperator depolarizing_superoperator(int dim, double p) {
    check_superop_dim(dim, "depolarizing_superoperator");
    const ComplexVector vec_id = vec(identity_matrix(dim));
    ComplexMatrix m = p * identity_matrix(static_cast<Eigen::Index>(dim) * dim);
    m += ((1.0 - p) / dim) * (vec_id * vec_id.transpose());
    return {dim, m};
}

/// U (x) U* conjugation sandwich: S -> (U (x) U*) S (U (x) U*)†.
inline Superoperator conjugate_superoperator(const Superoperator& s, const ComplexMatrix& u) {
    const ComplexMatrix u_hat = kron(u, u.conjugate());
    return {s.dim, u_hat * s.matrix * u_hat.adjoint()};
}

} // namespace echobench
