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
#include <optional>
#include <utility>

#include "echobench/matrix.hpp"

namespace echobench {

/// Density matrix with validated invariants: Hermitian, unit trace, and (for user input)
/// positive semidefinite. Construction from user data validates; evolution steps use
/// `evolved()` which skips the eigenvalue check, and `is_physical()` rechecks on demand.
class DensityMatrix {
  public:
    static DensityMatrix basis_state(int dim, int index = 0) {
        check_dim(dim);
        if (index < 0 || index >= dim) throw DimensionError("basis_state: index out of range");
        ComplexVector psi = ComplexVector::Zero(dim);
        psi(index) = 1.0;
        return pure(psi);
    }

    /// Rank-1 projector |psi><psi|; psi must be normalized within unitarity_tol and is
    /// renormalized exactly.
    static DensityMatrix pure(ComplexVector psi) {
        check_dim(static_cast<int>(psi.size()));
        const double norm = psi.norm();
        if (std::abs(norm - 1.0) > 1e-6)
            throw DegenerateInputError("pure: state vector norm " + std::to_string(norm) +
                                       " too far from 1");
        psi /= norm;
        DensityMatrix out;
        out.dim_ = static_cast<int>(psi.size());
        out.rho_ = psi * psi.adjoint();
        out.pure_ = std::move(psi);
        return out;
    }

    /// Convex mixture a|0><0| + (1-a) 1/D with `a` chosen so that Tr[rho^2] equals `purity`.
    static DensityMatrix mixed_with_identity(int dim, double purity) {
        check_dim(dim);
        const double floor = 1.0 / dim;
        if (purity < floor - 1e-12 || purity > 1.0 + 1e-12)
            throw ConfigError("mixed_with_identity: purity must lie in [1/D, 1]");
        const double a2 = std::max(0.0, (purity - floor) / (1.0 - floor));
        const double a = std::sqrt(std::min(1.0, a2));
        if (a >= 1.0 - 1e-15) return basis_state(dim);
        DensityMatrix out;
        out.dim_ = dim;
        out.rho_ = ((1.0 - a) / dim) * identity_matrix(dim);
        out.rho_(0, 0) += a;
        return out;
    }

    /// Full validation path for matrices supplied by the user: Hermiticity, unit trace,
    /// and eigenvalues above the PSD floor.
    static DensityMatrix from_matrix(ComplexMatrix rho) {
        require_square(rho, "DensityMatrix");
        require_finite(rho, "DensityMatrix");
        check_dim(static_cast<int>(rho.rows()));
        const auto& pol = numeric_policy();
        if ((rho - rho.adjoint()).norm() > pol.hermiticity_tol)
            throw DegenerateInputError("DensityMatrix: input is not Hermitian within tolerance");
        if (std::abs(rho.trace().real() - 1.0) > pol.trace_one_tol ||
            std::abs(rho.trace().imag()) > pol.trace_one_tol)
            throw DegenerateInputError("DensityMatrix: trace differs from 1 beyond tolerance");
        Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(rho, Eigen::EigenvaluesOnly);
        if (es.eigenvalues().minCoeff() < pol.psd_floor)
            throw DegenerateInputError("DensityMatrix: negative eigenvalue " +
                                       std::to_string(es.eigenvalues().minCoeff()));
        DensityMatrix out;
        out.dim_ = static_cast<int>(rho.rows());
        out.rho_ = std::move(rho);
        return out;
    }

    /// Wrap the output of an evolution step without re-running the eigenvalue check.
    static DensityMatrix evolved(ComplexMatrix rho) {
        require_square(rho, "DensityMatrix");
        DensityMatrix out;
        out.dim_ = static_cast<int>(rho.rows());
        out.rho_ = std::move(rho);
        return out;
    }

    int dim() const { return dim_; }
    const ComplexMatrix& matrix() const { return rho_; }
    const std::optional<ComplexVector>& pure_vector() const { return pure_; }

    double purity() const { return (rho_ * rho_).trace().real(); }

    /// Re-run the full physicality check (Hermitian, unit trace, PSD).
    bool is_physical() const {
        const auto& pol = numeric_policy();
        if (!rho_.allFinite()) return false;
        if ((rho_ - rho_.adjoint()).norm() > pol.hermiticity_tol) return false;
        if (std::abs(rho_.trace().real() - 1.0) > pol.trace_one_tol) return false;
        Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(rho_, Eigen::EigenvaluesOnly);
        return es.eigenvalues().minCoeff() >= pol.psd_floor;
    }

  private:
    static void check_dim(int dim) {
        if (dim < 1 || dim > numeric_policy().max_state_dim)
            throw SizeLimitError("DensityMatrix: dim " + std::to_string(dim) +
                                 " outside [1, " + std::to_string(numeric_policy().max_state_dim) + "]");
    }

    int dim_ = 0;
    ComplexMatrix rho_;
    std::optional<ComplexVector> pure_;
};

/// Re Tr[a b] for Hermitian a, b.
inline double real_overlap(const ComplexMatrix& a, const ComplexMatrix& b) {
    require_same_shape(a, b, "real_overlap");
    return a.cwiseProduct(b.conjugate()).sum().real();
}

inline double real_overlap(const DensityMatrix& a, const DensityMatrix& b) {
    return real_overlap(a.matrix(), b.matrix());
}

} // namespace echobench
