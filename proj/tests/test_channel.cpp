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

#include <catch2/catch.hpp>

#include "echobench/channel.hpp"
#include "echobench/lindblad.hpp"
#include "echobench/sampling.hpp"
#include "test_helpers.hpp"

using namespace echobench;

namespace {

DensityMatrix plus_state() {
    ComplexVector psi(2);
    psi << M_SQRT1_2, M_SQRT1_2;
    return DensityMatrix::pure(psi);
}

KrausChannel qubit_dephasing(double q) { return KrausChannel::dephasing(1, q); }

} // namespace

TEST_CASE("identity channel leaves states untouched", "[channel]") {
    Prng rng({201, 0});
    const KrausChannel id = KrausChannel::identity(3);
    const DensityMatrix rho = random_pure_state(3, rng);
    CHECK((id.apply(rho.matrix()) - rho.matrix()).norm() == 0.0);
}

TEST_CASE("qubit dephasing scales off-diagonals by 1 - 2q", "[channel]") {
    // Hand oracle: Lambda(rho) = (1-q) rho + q Z rho Z -> off-diagonal factor 1 - 2q.
    const KrausChannel ch = qubit_dephasing(0.25);
    const ComplexMatrix out = ch.apply(plus_state().matrix());
    ComplexMatrix expected(2, 2);
    expected << 0.5, 0.25, 0.25, 0.5;
    CHECK((out - expected).norm() < 1e-14);
}

TEST_CASE("amplitude damping sends |1><1| to diag(gamma, 1-gamma)", "[channel]") {
    const KrausChannel ch = KrausChannel::amplitude_damping(1, 0.3);
    const DensityMatrix one = DensityMatrix::basis_state(2, 1);
    const ComplexMatrix out = ch.apply(one.matrix());
    ComplexMatrix expected(2, 2);
    expected << 0.3, 0, 0, 0.7;
    CHECK((out - expected).norm() < 1e-14);
}

TEST_CASE("trace preservation is enforced unless subnormalized", "[channel]") {
    std::vector<ComplexMatrix> bad = {0.5 * identity_matrix(2)};
    CHECK_THROWS_AS(KrausChannel::from_kraus(bad), DegenerateInputError);
    CHECK_NOTHROW(KrausChannel::from_kraus(bad, /*subnormalized=*/true));
}

TEST_CASE("to_superoperator basic forms", "[channel]") {
    SECTION("identity channel gives the D^2 identity") {
        const Superoperator s = KrausChannel::identity(2).to_superoperator();
        CHECK((s.matrix - identity_matrix(4)).norm() == 0.0);
    }
    SECTION("unitary channel gives U (x) U*") {
        Prng rng({202, 0});
        const ComplexMatrix u = haar_unitary(3, rng);
        const Superoperator s = KrausChannel::unitary(u).to_superoperator();
        CHECK((s.matrix - kron(u, u.conjugate())).norm() < 1e-14);
    }
    SECTION("random 3-Kraus channel at D=3 is consistent with apply()") {
        Prng rng({203, 0});
        const KrausChannel ch = KrausChannel::random_cp(3, 3, rng);
        const Superoperator s = ch.to_superoperator();
        for (int rep = 0; rep < 20; ++rep) {
            const DensityMatrix rho = random_pure_state(3, rng);
            CHECK((s.apply(rho.matrix()) - ch.apply(rho.matrix())).norm() < 1e-10);
        }
    }
}

TEST_CASE("superop_trace closed forms and dual-path agreement", "[channel]") {
    CHECK(KrausChannel::identity(8).superop_trace() == Approx(64.0));
    // Dephasing q = 0.25: Tr = |sqrt(0.75) * 2|^2 + 0 = 3; the Z term has zero trace.
    CHECK(qubit_dephasing(0.25).superop_trace() == Approx(3.0));
    CHECK(KrausChannel::unitary(pauli_z()).superop_trace() == Approx(0.0).margin(1e-14));

    Prng rng({204, 0});
    for (int rep = 0; rep < 10; ++rep) {
        const int dim = 2 + static_cast<int>(rng.next_u64() % 7);
        const KrausChannel ch = KrausChannel::random_cp(dim, 3, rng);
        CHECK(std::abs(ch.superop_trace() - ch.to_superoperator().matrix.trace().real()) < 1e-9);
    }
    // Dephasing structured path agrees with the literal matrix trace too.
    const KrausChannel deph = KrausChannel::dephasing(2, 0.25);
    CHECK(std::abs(deph.superop_trace() - deph.to_superoperator().matrix.trace().real()) < 1e-9);
}

TEST_CASE("depolarizing channel structured action", "[channel]") {
    Prng rng({205, 0});
    SECTION("p = 1 acts as the identity") {
        const KrausChannel ch = KrausChannel::depolarizing(5, 1.0);
        const DensityMatrix rho = random_pure_state(5, rng);
        CHECK((ch.apply(rho.matrix()) - rho.matrix()).norm() < 1e-14);
    }
    SECTION("p = 0 maps everything to 1/D") {
        const KrausChannel ch = KrausChannel::depolarizing(4, 0.0);
        const DensityMatrix rho = random_pure_state(4, rng);
        CHECK((ch.apply(rho.matrix()) - 0.25 * identity_matrix(4)).norm() < 1e-14);
    }
    SECTION("p outside [0,1] is rejected") {
        CHECK_THROWS_AS(KrausChannel::depolarizing(4, -0.05), ConfigError);
        CHECK_THROWS_AS(KrausChannel::depolarizing(4, 1.05), ConfigError);
    }
    SECTION("Pauli-string Kraus materialization matches the structured action") {
        const KrausChannel ch = KrausChannel::depolarizing(4, 0.7);
        const auto ops = ch.kraus_ops();
        REQUIRE(ops.size() == 16);
        ComplexMatrix tp = ComplexMatrix::Zero(4, 4);
        for (const auto& op : ops) tp += op.adjoint() * op;
        CHECK((tp - identity_matrix(4)).norm() < 1e-12);
        const DensityMatrix rho = random_pure_state(4, rng);
        ComplexMatrix out = ComplexMatrix::Zero(4, 4);
        for (const auto& op : ops) out += op * rho.matrix() * op.adjoint();
        CHECK((out - ch.apply(rho.matrix())).norm() < 1e-12);
    }
    SECTION("non-power-of-two dimensions cannot materialize Kraus operators") {
        CHECK_THROWS_AS(KrausChannel::depolarizing(3, 0.5).kraus_ops(), SizeLimitError);
    }
}

TEST_CASE("motion reversal channel", "[channel]") {
    Prng rng({206, 0});
    SECTION("identity noise stays the identity for any U") {
        const ComplexMatrix u = haar_unitary(3, rng);
        const KrausChannel mr = motion_reversal_channel(KrausChannel::identity(3), u);
        const DensityMatrix rho = random_pure_state(3, rng);
        CHECK((mr.apply(rho.matrix()) - rho.matrix()).norm() < 1e-12);
    }
    SECTION("superop_trace is conjugation invariant") {
        for (int rep = 0; rep < 20; ++rep) {
            const int dim = 2 + static_cast<int>(rng.next_u64() % 3);
            const KrausChannel ch = KrausChannel::random_cp(dim, 2, rng);
            const ComplexMatrix u = haar_unitary(dim, rng);
            const KrausChannel mr = motion_reversal_channel(ch, u);
            CHECK(std::abs(mr.superop_trace() - ch.superop_trace()) < 1e-9);
        }
    }
    SECTION("dephasing conjugated by Hadamard becomes a bit-flip type channel") {
        ComplexMatrix h(2, 2);
        h << M_SQRT1_2, M_SQRT1_2, M_SQRT1_2, -M_SQRT1_2;
        const KrausChannel mr = motion_reversal_channel(qubit_dephasing(0.25), h);
        // Hand oracle on |0><0|: H|0> = |+>, dephase, H back -> diag(0.75, 0.25).
        const ComplexMatrix out = mr.apply(DensityMatrix::basis_state(2).matrix());
        ComplexMatrix expected(2, 2);
        expected << 0.75, 0, 0, 0.25;
        CHECK((out - expected).norm() < 1e-14);
    }
    SECTION("non-unitary input raises") {
        ComplexMatrix not_u(2, 2);
        not_u << 1, 0, 0, 2;
        CHECK_THROWS_AS(motion_reversal_channel(qubit_dephasing(0.1), not_u),
                        DegenerateInputError);
    }
}

TEST_CASE("compose", "[channel]") {
    Prng rng({207, 0});
    SECTION("identity is neutral in action") {
        const KrausChannel b = KrausChannel::random_cp(3, 2, rng);
        const KrausChannel c = compose(KrausChannel::identity(3), b);
        const DensityMatrix rho = random_pure_state(3, rng);
        CHECK((c.apply(rho.matrix()) - b.apply(rho.matrix())).norm() < 1e-12);
    }
    SECTION("dephasing strengths multiply on the off-diagonal") {
        const KrausChannel c = compose(qubit_dephasing(0.1), qubit_dephasing(0.3));
        const ComplexMatrix out = c.apply(plus_state().matrix());
        const double factor = (1.0 - 2.0 * 0.1) * (1.0 - 2.0 * 0.3);
        CHECK(out(0, 1).real() == Approx(0.5 * factor).margin(1e-12));
    }
    SECTION("superoperator of the composite equals the product of superoperators") {
        const KrausChannel a = KrausChannel::random_cp(3, 2, rng);
        const KrausChannel b = KrausChannel::random_cp(3, 3, rng);
        const KrausChannel c = compose(a, b);
        const ComplexMatrix prod =
            a.to_superoperator().matrix * b.to_superoperator().matrix;
        CHECK((c.to_superoperator().matrix - prod).norm() < 1e-9);
    }
    SECTION("depolarizing strengths multiply") {
        const KrausChannel c =
            compose(KrausChannel::depolarizing(4, 0.8), KrausChannel::depolarizing(4, 0.5));
        CHECK(c.is_depolarizing());
        CHECK(c.depolarizing_p() == Approx(0.4));
    }
    SECTION("Kraus blowup falls back to superoperator form and stays consistent") {
        const KrausChannel a = KrausChannel::random_cp(3, 9, rng);
        const KrausChannel b = KrausChannel::random_cp(3, 9, rng);
        const KrausChannel c = compose(a, b); // 81 > cap
        CHECK(c.form() == KrausChannel::Form::superop);
        const DensityMatrix rho = random_pure_state(3, rng);
        CHECK((c.apply(rho.matrix()) - a.apply(b.apply(rho.matrix()))).norm() < 1e-9);
    }
    SECTION("dimension mismatch raises") {
        CHECK_THROWS_AS(compose(KrausChannel::identity(2), KrausChannel::identity(3)),
                        DimensionError);
    }
}

TEST_CASE("random channels preserve trace and Hermiticity", "[channel]") {
    Prng rng({208, 0});
    for (int rep = 0; rep < 5; ++rep) {
        const int dim = 2 + static_cast<int>(rng.next_u64() % 5);
        const KrausChannel ch = KrausChannel::random_cp(dim, 3, rng);
        for (int s = 0; s < 10; ++s) {
            const ComplexMatrix out = ch.apply(random_pure_state(dim, rng).matrix());
            CHECK(std::abs(out.trace().real() - 1.0) < 1e-8);
            CHECK((out - out.adjoint()).norm() < 1e-8);
        }
    }
}

TEST_CASE("diagonal dephasing matches its materialized Kraus operators", "[channel]") {
    Prng rng({209, 0});
    const KrausChannel ch = KrausChannel::dephasing(2, 0.2);
    REQUIRE(ch.form() == KrausChannel::Form::diagonal);
    const auto ops = ch.kraus_ops();
    REQUIRE(ops.size() == 4);
    const DensityMatrix rho = random_pure_state(4, rng);
    ComplexMatrix direct = ComplexMatrix::Zero(4, 4);
    for (const auto& op : ops) direct += op * rho.matrix() * op.adjoint();
    CHECK((direct - ch.apply(rho.matrix())).norm() < 1e-13);

    const ComplexVector psi = random_state_vector(4, rng);
    double direct_survival = 0.0;
    for (const auto& op : ops) direct_survival += std::norm(psi.dot(op * psi));
    CHECK(ch.pure_survival(psi) == Approx(direct_survival).margin(1e-13));
}

TEST_CASE("lindblad generator construction and action", "[channel][lindblad]") {
    SECTION("traces are projected out and recorded") {
        ComplexMatrix h = pauli_z() + 0.5 * identity_matrix(2);
        std::vector<ComplexMatrix> jumps = {pauli_x() + identity_matrix(2)};
        const LindbladGenerator gen(2, h, jumps, 0.1);
        CHECK(std::abs(gen.hamiltonian().trace()) < 1e-12);
        CHECK(std::abs(gen.jump_ops()[0].trace()) < 1e-12);
        REQUIRE(gen.trace_corrections().size() == 2);
        CHECK(gen.trace_corrections()[0].real() == Approx(0.5));
        CHECK(gen.trace_corrections()[1].real() == Approx(1.0));
    }
    SECTION("H = 0, no jumps gives the zero map") {
        const LindbladGenerator gen(3, ComplexMatrix(), {}, 1.0);
        Prng rng({210, 0});
        CHECK(gen.apply(random_pure_state(3, rng).matrix()).norm() == 0.0);
    }
    SECTION("states commuting with H are stationary under the Hamiltonian part") {
        const LindbladGenerator gen(2, pauli_z(), {}, 1.0);
        const DensityMatrix rho = DensityMatrix::basis_state(2);
        CHECK(gen.apply(rho.matrix()).norm() < 1e-14);
    }
    SECTION("single decay jump drains the excited population at rate Gamma") {
        // V = sqrt(0.3) sigma-, rho = |1><1|: d rho_11/dt = -0.3.
        ComplexMatrix sigma_minus(2, 2);
        sigma_minus << 0, 1, 0, 0;
        const LindbladGenerator gen(2, ComplexMatrix(), {std::sqrt(0.3) * sigma_minus}, 1.0);
        const ComplexMatrix out = gen.apply(DensityMatrix::basis_state(2, 1).matrix());
        CHECK(out(1, 1).real() == Approx(-0.3).margin(1e-14));
        CHECK(out(0, 0).real() == Approx(0.3).margin(1e-14));
    }
    SECTION("output is traceless and Hermiticity preserving on random Hermitian input") {
        Prng rng({211, 0});
        const LindbladGenerator gen(3, echobench::test::random_hermitian(3, 1.0, rng),
                                    {ginibre(3, rng)}, 1.0);
        for (int rep = 0; rep < 10; ++rep) {
            ComplexMatrix x = echobench::test::random_hermitian(3, 1.0, rng);
            const ComplexMatrix out = gen.apply(x);
            CHECK(std::abs(out.trace()) < 1e-9);
            CHECK((out - out.adjoint()).norm() < 1e-9);
        }
    }
    SECTION("superoperator representation agrees with apply()") {
        Prng rng({212, 0});
        const LindbladGenerator gen(3, echobench::test::random_hermitian(3, 1.0, rng),
                                    {ginibre(3, rng), ginibre(3, rng)}, 1.0);
        const Superoperator s = gen.to_superoperator();
        for (int rep = 0; rep < 10; ++rep) {
            const ComplexMatrix x = echobench::test::random_hermitian(3, 1.0, rng);
            CHECK((s.apply(x) - gen.apply(x)).norm() < 1e-10);
        }
    }
    SECTION("average superoperator acts as -g (rho - Tr rho 1/D)") {
        Prng rng({213, 0});
        const LindbladGenerator gen(3, ComplexMatrix(), {ginibre(3, rng)}, 1.0);
        const double g = gen.unscaled_rate();
        const Superoperator ave = gen.average_superoperator();
        const ComplexMatrix x = echobench::test::random_hermitian(3, 1.0, rng);
        const ComplexMatrix expected =
            -g * (x - x.trace() / 3.0 * identity_matrix(3));
        CHECK((ave.apply(x) - expected).norm() < 1e-12);
    }
}
