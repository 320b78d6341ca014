// Copyright 2026 The qstat Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include "qstat/circuit_json.hpp"
#include "qstat/gates.hpp"
#include "support.hpp"

namespace qstat {
namespace {

constexpr double kS = 0.70710678118654752440;

CMat rot(char axis, double phi) {
    const CMat p = axis == 'x' ? pauli_x() : axis == 'y' ? pauli_y() : pauli_z();
    return std::cos(phi / 2) * CMat::Identity(2, 2) - kI * std::sin(phi / 2) * p;
}

TEST(Gates, TextbookActions) {
    StateVector s(1);
    apply(CircuitOp::h(0), s);
    EXPECT_NEAR(std::abs(s[0] - kS), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(s[1] - kS), 0.0, 1e-15);

    StateVector b(2);
    apply(CircuitOp::h(0), b);
    apply(CircuitOp::cnot(0, 1), b);
    EXPECT_NEAR(std::abs(b[0] - kS), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(b[3] - kS), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(b[1]) + std::abs(b[2]), 0.0, 1e-15);

    StateVector x(1);
    apply(CircuitOp::x(0), x);
    EXPECT_NEAR(std::norm(x[1]), 1.0, 1e-15);
}

TEST(Gates, DenseOracleEquivalence) {
    Rng rng(1);
    const int n = 5;
    std::vector<std::pair<CircuitOp, CMat>> cases;
    for (int t = 0; t < n; ++t) {
        cases.emplace_back(CircuitOp::h(t), test::full_operator(hadamard(), {t}, {}, n));
        cases.emplace_back(CircuitOp::y(t), test::full_operator(pauli_y(), {t}, {}, n));
        cases.emplace_back(CircuitOp::z(t), test::full_operator(pauli_z(), {t}, {}, n));
        for (char axis : {'x', 'y', 'z'}) {
            const double phi = 2 * kPi * rng.uniform();
            const CircuitOp op = axis == 'x' ? CircuitOp::rx(t, phi)
                                 : axis == 'y' ? CircuitOp::ry(t, phi)
                                               : CircuitOp::rz(t, phi);
            cases.emplace_back(op, test::full_operator(rot(axis, phi), {t}, {}, n));
        }
    }
    cases.emplace_back(CircuitOp::cnot(3, 1), test::full_operator(pauli_x(), {1}, {3}, n));
    cases.emplace_back(CircuitOp::toffoli(4, 0, 2), test::full_operator(pauli_x(), {2}, {4, 0}, n));
    CMat sw = CMat::Zero(4, 4);
    sw(0, 0) = sw(3, 3) = sw(1, 2) = sw(2, 1) = 1.0;
    cases.emplace_back(CircuitOp::cswap(2, 0, 4), test::full_operator(sw, {0, 4}, {2}, n));
    const CMat u3 = test::random_unitary(8, rng);
    cases.emplace_back(CircuitOp::dense(u3, {4, 1, 2}), test::full_operator(u3, {4, 1, 2}, {}, n));
    const CMat u2 = test::random_unitary(4, rng);
    cases.emplace_back(CircuitOp::controlled(u2, {0, 3}, {2, 1}), test::full_operator(u2, {2, 1}, {0, 3}, n));

    for (const auto &[op, full] : cases) {
        const StateVector s = test::random_state(n, rng);
        StateVector t = s;
        apply(op, t);
        EXPECT_LE((t.amplitudes() - full * s.amplitudes()).cwiseAbs().maxCoeff(), 1e-12) << to_string(op.kind);
        EXPECT_NEAR(t.norm(), 1.0, 1e-10);
    }
}

TEST(Gates, ApplyMatrixMatchesOracle) {
    Rng rng(2);
    const int n = 6;
    const CMat u = test::random_unitary(4, rng);
    const StateVector s = test::random_state(n, rng);
    StateVector t = s;
    apply_matrix(t, u, {5, 0}, {2});
    EXPECT_LE((t.amplitudes() - test::full_operator(u, {5, 0}, {2}, n) * s.amplitudes()).norm(), 1e-12);
}

TEST(Gates, ControlledUnitaryIdentity) {
    Rng rng(3);
    const CMat u = test::random_unitary(4, rng);
    const StateVector psi = test::random_state(2, rng);
    const CircuitOp cu = CircuitOp::controlled(u, {0}, {1, 2});
    StateVector off = StateVector::basis(1, 0).tensor(psi);
    apply(cu, off);
    EXPECT_LE((off.amplitudes() - StateVector::basis(1, 0).tensor(psi).amplitudes()).norm(), 1e-12);
    StateVector on = StateVector::basis(1, 1).tensor(psi);
    apply(cu, on);
    const StateVector expect = StateVector::basis(1, 1).tensor(StateVector::from_amplitudes(u * psi.amplitudes()));
    EXPECT_LE((on.amplitudes() - expect.amplitudes()).norm(), 1e-12);
}

TEST(Gates, RejectsNonUnitaryAndOverlaps) {
    EXPECT_THROW(CircuitOp::dense(CMat::Ones(2, 2), {0}), Error);
    StateVector s(2);
    EXPECT_THROW(apply(CircuitOp::cnot(1, 1), s), Error);
    EXPECT_THROW(apply(CircuitOp::h(2), s), Error);
}

TEST(Circuit, ReversibilityOnRandomCircuits) {
    Rng rng(4);
    for (int trial = 0; trial < 10; ++trial) {
        const int n = 4;
        Circuit c(n);
        for (int k = 0; k < 30; ++k) {
            const int a = int(rng.below(n));
            const int b = (a + 1 + int(rng.below(n - 1))) % n;
            switch (rng.below(5)) {
            case 0: c.append(CircuitOp::h(a)); break;
            case 1: c.append(CircuitOp::rx(a, rng.uniform() * 6)); break;
            case 2: c.append(CircuitOp::rz(a, rng.uniform() * 6)); break;
            case 3: c.append(CircuitOp::cnot(a, b)); break;
            default: c.append(CircuitOp::controlled(test::random_unitary(2, rng), {a}, {b})); break;
            }
        }
        const StateVector s = test::random_state(n, rng);
        StateVector t = s;
        c.apply(t);
        c.inverse().apply(t);
        EXPECT_LE((t.amplitudes() - s.amplitudes()).norm(), 1e-10);
        EXPECT_LE((c.matrix().adjoint() * c.matrix() - CMat::Identity(16, 16)).norm(), 1e-10);
    }
}

TEST(WalshHadamard, UniformAndInvolution) {
    StateVector s(3);
    walsh_hadamard(s, {0, 1, 2});
    for (std::size_t i = 0; i < 8; ++i) {
        EXPECT_NEAR(std::abs(s[i] - 1.0 / std::sqrt(8.0)), 0.0, 1e-15);
    }
    Rng rng(5);
    const StateVector r = test::random_state(3, rng);
    StateVector t = r;
    walsh_hadamard(t, {0, 2});
    walsh_hadamard(t, {0, 2});
    EXPECT_LE((t.amplitudes() - r.amplitudes()).norm(), 1e-12);
}

TEST(ControlledRotation, Examples) {
    StateVector id = StateVector::uniform(2).tensor(StateVector(1));
    const CVec before = id.amplitudes();
    controlled_rotation_f(id, {0, 1}, 2, [](std::uint64_t) { return 0.0; });
    EXPECT_LE((id.amplitudes() - before).norm(), 1e-15);

    StateVector flip = StateVector::basis(2, 2).tensor(StateVector(1));
    controlled_rotation_f(flip, {0, 1}, 2, [](std::uint64_t) { return kPi / 2; });
    EXPECT_NEAR(std::norm(flip[2 + 4]), 1.0, 1e-15);

    // arcsin(x / 4) puts amplitude x / 4 on the auxiliary |1>.
    for (std::uint64_t x = 0; x < 4; ++x) {
        StateVector s = StateVector::basis(2, x).tensor(StateVector(1));
        controlled_rotation_f(s, {0, 1}, 2, [](std::uint64_t v) { return std::asin(double(v) / 4.0); });
        EXPECT_NEAR(s[x + 4].real(), double(x) / 4.0, 1e-15);
    }
}

TEST(Postselect, Examples) {
    const auto one = postselect(StateVector::basis(1, 1), 0, 1);
    EXPECT_NEAR(one.probability, 1.0, 1e-15);

    Rng rng(6);
    const StateVector a = test::random_state(2, rng);
    const StateVector b = test::random_state(2, rng);
    // Auxiliary is qubit 2 (the high qubit).
    CVec joint(8);
    joint << a.amplitudes() / std::sqrt(2.0), b.amplitudes() / std::sqrt(2.0);
    const auto r = postselect(StateVector::from_amplitudes(joint), 2, 1);
    EXPECT_NEAR(r.probability, 0.5, 1e-12);
    EXPECT_NEAR(test::fidelity(r.state.amplitudes(), b.amplitudes()), 1.0, 1e-12);
    EXPECT_EQ(r.state.n_qubits(), 2);

    const StateVector psi = test::random_state(3, rng);
    StateVector s = psi.tensor(StateVector(1));
    const auto f = [](std::uint64_t x) { return 0.2 + 0.15 * double(x); };
    controlled_rotation_f(s, {0, 1, 2}, 3, f);
    const auto sel = postselect(s, 3, 1);
    CVec expect(8);
    for (Eigen::Index x = 0; x < 8; ++x) {
        expect[x] = psi.amplitudes()[x] * std::sin(f(std::uint64_t(x)));
    }
    EXPECT_NEAR(sel.probability, expect.squaredNorm(), 1e-12);
    EXPECT_NEAR(test::fidelity(sel.state.amplitudes(), expect), 1.0, 1e-12);

    EXPECT_THROW(postselect(StateVector::basis(1, 0), 0, 1), Error);
}

TEST(Postselect, SampledCountsAttempts) {
    const auto r = postselect(StateVector::uniform(2), 0, 1, PostselectMode::Sampled, 17);
    EXPECT_GE(r.attempts, 1u);
    EXPECT_NEAR(r.probability, 0.5, 1e-12);
}

TEST(Project, KeepsQubits) {
    double p = 0.0;
    const StateVector s = project(StateVector::uniform(2), {1}, 1, &p);
    EXPECT_EQ(s.n_qubits(), 2);
    EXPECT_NEAR(p, 0.5, 1e-15);
    EXPECT_NEAR(std::norm(s[2]) + std::norm(s[3]), 1.0, 1e-15);
}

TEST(CircuitJson, RoundTrip) {
    Rng rng(7);
    Circuit c(3);
    c.append(CircuitOp::h(0)).append(CircuitOp::cnot(0, 2)).append(CircuitOp::ry(1, 0.4));
    c.append(CircuitOp::controlled(test::random_unitary(2, rng), {2}, {1}));
    const Circuit d = circuit_from_json(nlohmann::json::parse(circuit_to_json(c).dump()));
    EXPECT_LE((c.matrix() - d.matrix()).norm(), 1e-14);
    EXPECT_THROW(circuit_from_json(nlohmann::json::parse(R"({"n_qubits":1,"ops":[{"kind":"H","t":[0],"zz":1}]})")),
                 Error);
    EXPECT_THROW(circuit_from_json(nlohmann::json::parse(R"({"n_qubits":1,"ops":[{"kind":"Q","t":[0]}]})")),
                 Error);
}

} // namespace
} // namespace qstat
