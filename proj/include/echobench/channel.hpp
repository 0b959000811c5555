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
#include "echobench/rng.hpp"
#include "echobench/sampling.hpp"
#include "echobench/state.hpp"
#include "echobench/superoperator.hpp"

namespace echobench {

/// Completely positive map in Kraus form, with structured fast paths.
///
/// Storage forms:
///  - kraus:         explicit list of dense D x D Kraus operators
///  - diagonal:      all Kraus operators diagonal (dephasing-type); applies as a
///                   Hadamard mask in O(D^2) regardless of the Kraus count
///  - depolarizing:  rho -> p rho + (1-p) Tr(rho) 1/D, stored as the scalar p so
///                   large dimensions stay cheap; Pauli-string Kraus operators are
///                   materialized on demand for D = 2^k
///  - superop:       dense D^2 x D^2 matrix, produced when compositions would blow
///                   past the Kraus-count cap
class KrausChannel {
  public:
    enum class Form { kraus, diagonal, depolarizing, superop };

    static KrausChannel identity(int dim) {
        check_state_dim(dim);
        return from_kraus({identity_matrix(dim)});
    }

    static KrausChannel from_kraus(std::vector<ComplexMatrix> ops, bool subnormalized = false) {
        if (ops.empty()) throw ConfigError("KrausChannel: empty Kraus list");
        const int dim = static_cast<int>(ops.front().rows());
        check_state_dim(dim);
        for (const auto& op : ops) {
            require_square(op, "KrausChannel");
            require_finite(op, "KrausChannel");
            if (op.rows() != dim) throw DimensionError("KrausChannel: mixed Kraus dimensions");
        }
        KrausChannel ch;
        ch.dim_ = dim;
        ch.form_ = Form::kraus;
        ch.subnormalized_ = subnormalized;
        ch.ops_ = std::move(ops);
        if (!subnormalized) ch.check_trace_preserving();
        return ch;
    }

    static KrausChannel from_diagonal_kraus(std::vector<ComplexVector> diags,
                                            bool subnormalized = false) {
        if (diags.empty()) throw ConfigError("KrausChannel: empty diagonal Kraus list");
        const int dim = static_cast<int>(diags.front().size());
        check_state_dim(dim);
        KrausChannel ch;
        ch.dim_ = dim;
        ch.form_ = Form::diagonal;
        ch.subnormalized_ = subnormalized;
        ch.diag_ = std::move(diags);
        for (const auto& d : ch.diag_)
            if (d.size() != dim) throw DimensionError("KrausChannel: mixed diagonal dimensions");
        ch.build_mask();
        if (!subnormalized) {
            for (int i = 0; i < dim; ++i)
                if (std::abs(ch.mask_(i, i).real() - 1.0) > numeric_policy().trace_preserving_tol ||
                    std::abs(ch.mask_(i, i).imag()) > numeric_policy().trace_preserving_tol)
                    throw DegenerateInputError(
                        "KrausChannel: diagonal channel is not trace preserving");
        }
        return ch;
    }

    static KrausChannel unitary(const ComplexMatrix& u) {
        if (!is_unitary(u)) throw DegenerateInputError("KrausChannel::unitary: not unitary");
        return from_kraus({u});
    }

    static KrausChannel depolarizing(int dim, double p) {
        check_state_dim(dim);
        if (p < 0.0 || p > 1.0)
            throw ConfigError("depolarizing: p = " + std::to_string(p) + " outside [0, 1]");
        KrausChannel ch;
        ch.dim_ = dim;
        ch.form_ = Form::depolarizing;
        ch.p_ = p;
        return ch;
    }

    /// Independent {sqrt(1-q) 1, sqrt(q) Z} dephasing on each of n_qubits qubits.
    /// All 2^n Kraus operators are diagonal, so the channel stays in diagonal form.
    static KrausChannel dephasing(int n_qubits, double q) {
        if (n_qubits < 1) throw ConfigError("dephasing: need at least one qubit");
        if (q < 0.0 || q > 1.0) throw ConfigError("dephasing: q outside [0, 1]");
        std::vector<ComplexVector> diags;
        ComplexVector seed(1);
        seed(0) = 1.0;
        diags.push_back(seed);
        const double a = std::sqrt(1.0 - q);
        const double b = std::sqrt(q);
        for (int qubit = 0; qubit < n_qubits; ++qubit) {
            std::vector<ComplexVector> next;
            next.reserve(diags.size() * 2);
            for (const auto& d : diags) {
                ComplexVector d0(d.size() * 2), d1(d.size() * 2);
                for (Eigen::Index i = 0; i < d.size(); ++i) {
                    d0(2 * i) = a * d(i);
                    d0(2 * i + 1) = a * d(i);
                    d1(2 * i) = b * d(i);
                    d1(2 * i + 1) = -b * d(i);
                }
                next.push_back(std::move(d0));
                next.push_back(std::move(d1));
            }
            diags = std::move(next);
        }
        return from_diagonal_kraus(std::move(diags));
    }

    /// Dephasing with level-dependent strength: basis state i dephases at rate
    /// q_max * i / (D-1). Unlike uniform per-qubit dephasing (whose trace-carrying
    /// Kraus operator is proportional to the identity and therefore fluctuation-free),
    /// the graded profile keeps a linear response of the fidelity to state
    /// fluctuations, the generic behaviour for structured noise.
    static KrausChannel dephasing_graded(int dim, double q_max) {
        check_state_dim(dim);
        if (dim < 2) throw ConfigError("dephasing_graded: need dim >= 2");
        if (q_max < 0.0 || q_max > 1.0) throw ConfigError("dephasing_graded: q_max outside [0, 1]");
        std::vector<ComplexVector> diags;
        ComplexVector keep(dim);
        for (int i = 0; i < dim; ++i)
            keep(i) = std::sqrt(1.0 - q_max * i / (dim - 1.0));
        diags.push_back(std::move(keep));
        for (int i = 1; i < dim; ++i) {
            const double qi = q_max * i / (dim - 1.0);
            ComplexVector level = ComplexVector::Zero(dim);
            level(i) = std::sqrt(qi);
            diags.push_back(std::move(level));
        }
        return from_diagonal_kraus(std::move(diags));
    }

    /// Independent amplitude damping with rate gamma on each of n_qubits qubits.
    static KrausChannel amplitude_damping(int n_qubits, double gamma) {
        if (n_qubits < 1) throw ConfigError("amplitude_damping: need at least one qubit");
        if (gamma < 0.0 || gamma > 1.0) throw ConfigError("amplitude_damping: gamma outside [0, 1]");
        ComplexMatrix e0(2, 2), e1(2, 2);
        e0 << 1, 0, 0, std::sqrt(1.0 - gamma);
        e1 << 0, std::sqrt(gamma), 0, 0;
        std::vector<ComplexMatrix> ops = {identity_matrix(1)};
        for (int qubit = 0; qubit < n_qubits; ++qubit) {
            std::vector<ComplexMatrix> next;
            next.reserve(ops.size() * 2);
            for (const auto& op : ops) {
                next.push_back(kron(op, e0));
                next.push_back(kron(op, e1));
            }
            ops = std::move(next);
        }
        return from_kraus(std::move(ops));
    }

    /// Generic full-rank CP channel for tests: Ginibre Kraus candidates right-normalized
    /// by (sum A_k†A_k)^{-1/2} to enforce trace preservation.
    static KrausChannel random_cp(int dim, int n_kraus, Prng& rng) {
        if (n_kraus < 1) throw ConfigError("random_cp: need at least one Kraus operator");
        std::vector<ComplexMatrix> ops;
        ops.reserve(n_kraus);
        for (int k = 0; k < n_kraus; ++k) ops.push_back(ginibre(dim, rng));
        ComplexMatrix s = ComplexMatrix::Zero(dim, dim);
        for (const auto& op : ops) s += op.adjoint() * op;
        Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(s);
        if (es.eigenvalues().minCoeff() <= 1e-12)
            throw DegenerateInputError("random_cp: singular normalization matrix");
        const ComplexMatrix inv_sqrt = es.eigenvectors() *
                                       es.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
                                       es.eigenvectors().adjoint();
        for (auto& op : ops) op = op * inv_sqrt;
        return from_kraus(std::move(ops));
    }

    int dim() const { return dim_; }
    Form form() const { return form_; }
    bool subnormalized() const { return subnormalized_; }
    bool is_depolarizing() const { return form_ == Form::depolarizing; }

    double depolarizing_p() const {
        if (form_ != Form::depolarizing)
            throw ConfigError("depolarizing_p: channel is not in depolarizing form");
        return p_;
    }

    /// Lambda(rho) = sum_k A_k rho A_k†.
    ComplexMatrix apply(const ComplexMatrix& rho) const {
        if (rho.rows() != dim_ || rho.cols() != dim_)
            throw DimensionError("KrausChannel::apply: state dim mismatch");
        switch (form_) {
            case Form::depolarizing: {
                ComplexMatrix out = p_ * rho;
                const Cplx fill = (1.0 - p_) * rho.trace() / static_cast<double>(dim_);
                for (int i = 0; i < dim_; ++i) out(i, i) += fill;
                return out;
            }
            case Form::diagonal:
                return mask_.cwiseProduct(rho);
            case Form::superop:
                return superop_.apply(rho);
            case Form::kraus:
            default: {
                ComplexMatrix out = ComplexMatrix::Zero(dim_, dim_);
                for (const auto& op : ops_) out.noalias() += op * rho * op.adjoint();
                return out;
            }
        }
    }

    DensityMatrix apply(const DensityMatrix& rho) const {
        return DensityMatrix::evolved(apply(rho.matrix()));
    }

    /// <psi| Lambda(|psi><psi|) |psi> without forming the density matrix.
    double pure_survival(const ComplexVector& psi) const {
        if (psi.size() != dim_) throw DimensionError("pure_survival: state dim mismatch");
        switch (form_) {
            case Form::depolarizing:
                return p_ + (1.0 - p_) / dim_;
            case Form::diagonal: {
                Eigen::VectorXd w(dim_);
                for (int i = 0; i < dim_; ++i) w(i) = std::norm(psi(i));
                double total = 0.0;
                for (const auto& d : diag_) {
                    Cplx amp = 0.0;
                    for (int i = 0; i < dim_; ++i) amp += d(i) * w(i);
                    total += std::norm(amp);
                }
                return total;
            }
            case Form::superop: {
                const ComplexMatrix rho = psi * psi.adjoint();
                return real_overlap(rho, apply(rho));
            }
            case Form::kraus:
            default: {
                double total = 0.0;
                for (const auto& op : ops_) total += std::norm(psi.dot(op * psi));
                return total;
            }
        }
    }

    /// Tr(Lambda-hat) = sum_k |Tr A_k|^2, computed from the structured form.
    double superop_trace() const {
        switch (form_) {
            case Form::depolarizing:
                return p_ * (static_cast<double>(dim_) * dim_ - 1.0) + 1.0;
            case Form::diagonal: {
                double total = 0.0;
                for (const auto& d : diag_) total += std::norm(d.sum());
                return total;
            }
            case Form::superop:
                return superop_.trace();
            case Form::kraus:
            default: {
                double total = 0.0;
                for (const auto& op : ops_) total += std::norm(op.trace());
                return total;
            }
        }
    }

    /// Dense superoperator sum_k A_k (x) A_k* (structured forms use closed expressions).
    Superoperator to_superoperator() const {
        check_superop_dim(dim_, "to_superoperator");
        switch (form_) {
            case Form::depolarizing:
                return depolarizing_superoperator(dim_, p_);
            case Form::superop:
                return superop_;
            case Form::diagonal: {
                // sum_k diag(d_k) (x) diag(d_k)* is diagonal with entries mask(i, j).
                const Eigen::Index d2 = static_cast<Eigen::Index>(dim_) * dim_;
                ComplexMatrix m = ComplexMatrix::Zero(d2, d2);
                for (int i = 0; i < dim_; ++i)
                    for (int j = 0; j < dim_; ++j) m(i * dim_ + j, i * dim_ + j) = mask_(i, j);
                return {dim_, m};
            }
            case Form::kraus:
            default: {
                const Eigen::Index d2 = static_cast<Eigen::Index>(dim_) * dim_;
                ComplexMatrix m = ComplexMatrix::Zero(d2, d2);
                for (const auto& op : ops_) m += kron(op, op.conjugate());
                return {dim_, m};
            }
        }
    }

    /// Explicit Kraus operators; structured forms are materialized on demand.
    /// Depolarizing channels require D = 2^k (Pauli-string construction).
    std::vector<ComplexMatrix> kraus_ops() const {
        switch (form_) {
            case Form::kraus:
                return ops_;
            case Form::diagonal: {
                std::vector<ComplexMatrix> ops;
                ops.reserve(diag_.size());
                for (const auto& d : diag_) {
                    ComplexMatrix op = ComplexMatrix::Zero(dim_, dim_);
                    for (int i = 0; i < dim_; ++i) op(i, i) = d(i);
                    ops.push_back(std::move(op));
                }
                return ops;
            }
            case Form::depolarizing: {
                const int nq = qubit_count_of(dim_);
                if (nq < 0)
                    throw SizeLimitError(
                        "kraus_ops: depolarizing Kraus decomposition needs D = 2^k");
                // p rho + (1-p)/D^2 sum_P P rho P over all Pauli strings P.
                const double d2 = static_cast<double>(dim_) * dim_;
                const double w_other = (1.0 - p_) / d2;
                const double w_id = p_ + w_other;
                std::vector<ComplexMatrix> ops;
                ops.reserve(static_cast<std::size_t>(d2));
                std::vector<int> labels(nq, 0);
                for (long long code = 0; code < static_cast<long long>(d2); ++code) {
                    long long c = code;
                    for (int q = 0; q < nq; ++q) {
                        labels[q] = static_cast<int>(c % 4);
                        c /= 4;
                    }
                    const double w = (code == 0) ? w_id : w_other;
                    ops.push_back(std::sqrt(w) * pauli_string(labels));
                }
                return ops;
            }
            case Form::superop:
            default:
                throw ConfigError(
                    "kraus_ops: channel held in superoperator form has no stored Kraus list");
        }
    }

    const std::vector<ComplexVector>& diagonal_ops() const {
        if (form_ != Form::diagonal) throw ConfigError("diagonal_ops: channel is not diagonal");
        return diag_;
    }

    /// mask(i, j) = sum_k d_k(i) d_k(j)*; the channel acts as rho -> mask .* rho.
    const ComplexMatrix& diagonal_mask() const {
        if (form_ != Form::diagonal) throw ConfigError("diagonal_mask: channel is not diagonal");
        return mask_;
    }

    static KrausChannel from_superoperator(Superoperator s, bool subnormalized = true) {
        KrausChannel ch;
        ch.dim_ = s.dim;
        ch.form_ = Form::superop;
        ch.subnormalized_ = subnormalized;
        ch.superop_ = std::move(s);
        return ch;
    }

  private:
    static void check_state_dim(int dim) {
        if (dim < 1 || dim > numeric_policy().max_state_dim)
            throw SizeLimitError("KrausChannel: dim " + std::to_string(dim) + " outside [1, " +
                                 std::to_string(numeric_policy().max_state_dim) + "]");
    }

    void check_trace_preserving() const {
        ComplexMatrix s = ComplexMatrix::Zero(dim_, dim_);
        for (const auto& op : ops_) s.noalias() += op.adjoint() * op;
        const double dev = (s - identity_matrix(dim_)).norm();
        if (dev > numeric_policy().trace_preserving_tol)
            throw DegenerateInputError("KrausChannel: not trace preserving, ||sum A†A - 1|| = " +
                                       std::to_string(dev));
    }

    void build_mask() {
        mask_ = ComplexMatrix::Zero(dim_, dim_);
        for (const auto& d : diag_) mask_ += d * d.adjoint();
    }

    int dim_ = 0;
    Form form_ = Form::kraus;
    bool subnormalized_ = false;
    double p_ = 1.0;                   // depolarizing strength
    std::vector<ComplexMatrix> ops_;   // kraus form
    std::vector<ComplexVector> diag_;  // diagonal form
    ComplexMatrix mask_;               // diagonal form: mask(i,j) = sum_k d_k(i) d_k(j)*
    Superoperator superop_;            // superop form
};

/// rho -> U† Lambda(U rho U†) U, i.e. Kraus operators {U† A_k U}. Depolarizing channels
/// are fixed points of this conjugation.
inline KrausChannel motion_reversal_channel(const KrausChannel& ch, const ComplexMatrix& u) {
    if (u.rows() != ch.dim() || u.cols() != ch.dim())
        throw DimensionError("motion_reversal_channel: unitary dim mismatch");
    if (!is_unitary(u)) throw DegenerateInputError("motion_reversal_channel: u is not unitary");
    switch (ch.form()) {
        case KrausChannel::Form::depolarizing:
            return ch;
        case KrausChannel::Form::superop: {
            const ComplexMatrix u_hat = kron(u, u.conjugate());
            Superoperator s = ch.to_superoperator();
            s.matrix = u_hat.adjoint() * s.matrix * u_hat;
            return KrausChannel::from_superoperator(std::move(s), ch.subnormalized());
        }
        default: {
            std::vector<ComplexMatrix> ops = ch.kraus_ops();
            for (auto& op : ops) op = u.adjoint() * op * u;
            return KrausChannel::from_kraus(std::move(ops), ch.subnormalized());
        }
    }
}

/// Composition acting as after(before(rho)). Kraus sets multiply pairwise; if the
/// product count would exceed the cap the result falls back to superoperator form.
inline KrausChannel compose(const KrausChannel& after, const KrausChannel& before) {
    if (after.dim() != before.dim()) throw DimensionError("compose: channel dim mismatch");
    const int dim = after.dim();
    const bool subnorm = after.subnormalized() || before.subnormalized();
    using Form = KrausChannel::Form;

    if (after.form() == Form::depolarizing && before.form() == Form::depolarizing)
        return KrausChannel::depolarizing(dim, after.depolarizing_p() * before.depolarizing_p());

    const auto kraus_count = [](const KrausChannel& ch) -> long long {
        switch (ch.form()) {
            case Form::kraus: return static_cast<long long>(ch.kraus_ops().size());
            case Form::diagonal: return static_cast<long long>(ch.diagonal_ops().size());
            case Form::depolarizing: {
                const int nq = qubit_count_of(ch.dim());
                return nq < 0 ? -1 : static_cast<long long>(ch.dim()) * ch.dim();
            }
            case Form::superop:
            default: return -1; // no Kraus list available
        }
    };

    const long long n_after = kraus_count(after);
    const long long n_before = kraus_count(before);
    const bool have_kraus = n_after > 0 && n_before > 0;
    const long long cap = numeric_policy().kraus_compose_cap;

    if (have_kraus && n_after * n_before <= cap) {
        if (after.form() == Form::diagonal && before.form() == Form::diagonal) {
            std::vector<ComplexVector> diags;
            diags.reserve(static_cast<std::size_t>(n_after * n_before));
            for (const auto& da : after.diagonal_ops())
                for (const auto& db : before.diagonal_ops())
                    diags.push_back(da.cwiseProduct(db));
            return KrausChannel::from_diagonal_kraus(std::move(diags), subnorm);
        }
        std::vector<ComplexMatrix> ops;
        ops.reserve(static_cast<std::size_t>(n_after * n_before));
        for (const auto& a : after.kraus_ops())
            for (const auto& b : before.kraus_ops()) ops.push_back(a * b);
        return KrausChannel::from_kraus(std::move(ops), subnorm);
    }

    // Diagonal channels compose as elementwise mask products; D diagonal Kraus
    // operators always suffice via the eigendecomposition of the composite mask.
    if (after.form() == Form::diagonal && before.form() == Form::diagonal) {
        const ComplexMatrix mask = after.diagonal_mask().cwiseProduct(before.diagonal_mask());
        Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(mask);
        std::vector<ComplexVector> diags;
        for (int k = 0; k < dim; ++k) {
            const double lambda = es.eigenvalues()(k);
            if (lambda > 1e-14)
                diags.push_back(std::sqrt(lambda) * es.eigenvectors().col(k));
        }
        return KrausChannel::from_diagonal_kraus(std::move(diags), subnorm);
    }

    check_superop_dim(dim, "compose fallback");
    Superoperator s{dim, after.to_superoperator().matrix * before.to_superoperator().matrix};
    return KrausChannel::from_superoperator(std::move(s), subnorm);
}

} // namespace echobench
