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

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "echobench/errors.hpp"
#include "echobench/numeric_policy.hpp"

namespace echobench {

using Cplx = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

inline bool all_finite(const ComplexMatrix& a) { return a.allFinite(); }

inline void require_finite(const ComplexMatrix& a, const char* what) {
    if (!a.allFinite()) throw NumericError(std::string(what) + ": non-finite entries");
}

inline void require_square(const ComplexMatrix& a, const char* what) {
    if (a.rows() != a.cols())
        throw DimensionError(std::string(what) + ": matrix must be square, got " +
                             std::to_string(a.rows()) + "x" + std::to_string(a.cols()));
}

inline void require_same_shape(const ComplexMatrix& a, const ComplexMatrix& b, const char* what) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw DimensionError(std::string(what) + ": shape mismatch " + std::to_string(a.rows()) +
                             "x" + std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) +
                             "x" + std::to_string(b.cols()));
}

inline ComplexMatrix dagger(const ComplexMatrix& a) { return a.adjoint(); }

inline ComplexMatrix identity_matrix(Eigen::Index dim) {
    return ComplexMatrix::Identity(dim, dim);
}

inline double frobenius_distance(const ComplexMatrix& a, const ComplexMatrix& b) {
    require_same_shape(a, b, "frobenius_distance");
    return (a - b).norm();
}

inline bool is_unitary(const ComplexMatrix& u, double tol = numeric_policy().unitarity_tol) {
    if (u.rows() != u.cols()) return false;
    return (u.adjoint() * u - identity_matrix(u.rows())).norm() <= tol;
}

inline bool is_hermitian(const ComplexMatrix& a, double tol = numeric_policy().hermiticity_tol) {
    if (a.rows() != a.cols()) return false;
    return (a - a.adjoint()).norm() <= tol;
}

/// Kronecker product a (x) b. The result must stay within the dense superoperator cap.
inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    const Eigen::Index rows = a.rows() * b.rows();
    const Eigen::Index cols = a.cols() * b.cols();
    const Eigen::Index cap = numeric_policy().max_superop_dim;
    if (rows > cap || cols > cap)
        throw SizeLimitError("kron: result " + std::to_string(rows) + "x" + std::to_string(cols) +
                             " exceeds the superoperator cap " + std::to_string(cap));
    ComplexMatrix out(rows, cols);
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

/// Row-stacking vectorization: vec(X)[i*D + j] = X(i, j).
/// With this convention vec(A X B†) = (A (x) B*) vec(X), so superoperators
/// built as sums of A_k (x) A_k* act directly on vec(rho).
inline ComplexVector vec(const ComplexMatrix& x) {
    ComplexVector v(x.rows() * x.cols());
    for (Eigen::Index i = 0; i < x.rows(); ++i)
        for (Eigen::Index j = 0; j < x.cols(); ++j) v(i * x.cols() + j) = x(i, j);
    return v;
}

inline ComplexMatrix unvec(const ComplexVector& v, Eigen::Index dim) {
    if (v.size() != dim * dim)
        throw DimensionError("unvec: vector length " + std::to_string(v.size()) +
                             " does not match dim " + std::to_string(dim));
    ComplexMatrix x(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i)
        for (Eigen::Index j = 0; j < dim; ++j) x(i, j) = v(i * dim + j);
    return x;
}

struct QrFactors {
    ComplexMatrix q;
    ComplexMatrix r;
};

/// Householder QR with a rank check on the diagonal of R.
inline QrFactors qr_unitary(const ComplexMatrix& a) {
    require_square(a, "qr_unitary");
    require_finite(a, "qr_unitary");
    Eigen::HouseholderQR<ComplexMatrix> qr(a);
    QrFactors out;
    out.q = qr.householderQ() * identity_matrix(a.rows());
    out.r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Eigen::Index j = 0; j < a.rows(); ++j) {
        if (std::abs(out.r(j, j)) < numeric_policy().qr_pivot_floor)
            throw DegenerateInputError("qr_unitary: rank-deficient input, |R_" +
                                       std::to_string(j) + std::to_string(j) + "| = " +
                                       std::to_string(std::abs(out.r(j, j))));
    }
    return out;
}

/// Matrix exponential by scaling-and-squaring with a truncated Taylor series.
/// `tol` is the Frobenius-norm accuracy target of the final result.
inline ComplexMatrix matrix_exp(const ComplexMatrix& a, double tol = numeric_policy().matrix_exp_tol) {
    require_square(a, "matrix_exp");
    require_finite(a, "matrix_exp");
    const Eigen::Index dim = a.rows();
    const double norm = a.norm();
    int squarings = 0;
    if (norm > 0.25) squarings = static_cast<int>(std::ceil(std::log2(norm / 0.25)));
    const ComplexMatrix b = a * std::ldexp(1.0, -squarings);

    // Each squaring roughly doubles the relative truncation error.
    double term_target = std::min(tol, 1e-13) * std::ldexp(1.0, -squarings);
    term_target = std::max(term_target, 1e-16);

    ComplexMatrix sum = identity_matrix(dim);
    ComplexMatrix term = identity_matrix(dim);
    for (int k = 1; k <= 64; ++k) {
        term = (term * b) / static_cast<double>(k);
        sum += term;
        if (term.norm() <= term_target * sum.norm()) break;
    }
    for (int s = 0; s < squarings; ++s) sum = sum * sum;
    return sum;
}

inline ComplexMatrix pauli_i() { return identity_matrix(2); }

inline ComplexMatrix pauli_x() {
    ComplexMatrix x(2, 2);
    x << 0, 1, 1, 0;
    return x;
}

inline ComplexMatrix pauli_y() {
    ComplexMatrix y(2, 2);
    y << Cplx(0, 0), Cplx(0, -1), Cplx(0, 1), Cplx(0, 0);
    return y;
}

inline ComplexMatrix pauli_z() {
    ComplexMatrix z(2, 2);
    z << 1, 0, 0, -1;
    return z;
}

/// Tensor product of single-qubit Paulis; `which[k]` in {0,1,2,3} = {I,X,Y,Z} on qubit k.
inline ComplexMatrix pauli_string(const std::vector<int>& which) {
    ComplexMatrix out = identity_matrix(1);
    for (int w : which) {
        switch (w) {
            case 0: out = kron(out, pauli_i()); break;
            case 1: out = kron(out, pauli_x()); break;
            case 2: out = kron(out, pauli_y()); break;
            case 3: out = kron(out, pauli_z()); break;
            default: throw ConfigError("pauli_string: label must be in {0,1,2,3}");
        }
    }
    return out;
}

/// Embed a single-qubit operator on qubit `target` (0-based, leftmost factor) of an
/// n_qubits register.
inline ComplexMatrix single_qubit_on(const ComplexMatrix& op, int target, int n_qubits) {
    if (op.rows() != 2 || op.cols() != 2) throw DimensionError("single_qubit_on: op must be 2x2");
    if (target < 0 || target >= n_qubits) throw DimensionError("single_qubit_on: target out of range");
    ComplexMatrix out = identity_matrix(1);
    for (int q = 0; q < n_qubits; ++q) out = kron(out, q == target ? op : pauli_i());
    return out;
}

/// Number of qubits if dim is a power of two, otherwise -1.
inline int qubit_count_of(Eigen::Index dim) {
    if (dim < 2) return -1;
    int n = 0;
    Eigen::Index d = dim;
    while (d % 2 == 0) {
        d /= 2;
        ++n;
    }
    return d == 1 ? n : -1;
}

} // namespace echobench
