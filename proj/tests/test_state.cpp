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

#include <cstdlib>
#include <sstream>

#include <gtest/gtest.h>

#include "qstat/gates.hpp"
#include "qstat/state.hpp"
#include "support.hpp"

namespace qstat {
namespace {

StateVector plus() { return StateVector::uniform(1); }

StateVector bell() {
    CVec a = CVec::Zero(4);
    a[0] = a[3] = 1.0 / std::sqrt(2.0);
    return StateVector::from_amplitudes(a);
}

TEST(StateVector, InnerProductBasics) {
    EXPECT_NEAR(std::abs(inner_product(StateVector::basis(1, 0), StateVector::basis(1, 0)) - 1.0), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(inner_product(StateVector::basis(1, 0), StateVector::basis(1, 1))), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(inner_product(plus(), StateVector::basis(1, 0)) - 1.0 / std::sqrt(2.0)), 0.0, 1e-15);
}

TEST(StateVector, RejectsBadInput) {
    CVec a = CVec::Ones(3);
    EXPECT_THROW(StateVector::from_unnormalized(a), Error);
    EXPECT_THROW(StateVector::from_amplitudes(CVec::Ones(4)), Error);
    EXPECT_THROW(StateVector::from_unnormalized(CVec::Zero(4)), Error);
    EXPECT_THROW(StateVector::basis(2, 4), Error);
}

TEST(StateVector, QubitCapFromEnvironment) {
    ::setenv("QSTAT_MAX_QUBITS", "4", 1);
    EXPECT_EQ(max_qubits(), 4);
    EXPECT_THROW(StateVector(5), Error);
    EXPECT_NO_THROW(StateVector(4));
    ::setenv("QSTAT_MAX_QUBITS", "zero", 1);
    EXPECT_THROW(max_qubits(), ConfigError);
    ::unsetenv("QSTAT_MAX_QUBITS");
    EXPECT_EQ(max_qubits(), kHardQubitCap);
}

TEST(Measurement, BasisStateIsCertain) {
    const auto r = measure_computational(StateVector::basis(1, 1), {0}, 3);
    EXPECT_EQ(r.outcome, 1u);
    EXPECT_DOUBLE_EQ(r.probability, 1.0);
}

TEST(Measurement, PlusGivesHalf) {
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
        const auto r = measure_computational(plus(), {0}, seed);
        EXPECT_LE(r.outcome, 1u);
        EXPECT_NEAR(r.probability, 0.5, 1e-15);
    }
}

TEST(Measurement, BellCollapse) {
    for (std::uint64_t seed = 0; seed < 16; ++seed) {
        const auto r = measure_computational(bell(), {0}, seed);
        EXPECT_NEAR(r.probability, 0.5, 1e-15);
        const std::uint64_t both = r.outcome ? 3 : 0;
        EXPECT_NEAR(std::norm(r.post_state[both]), 1.0, 1e-14);
    }
}

TEST(Measurement, BornFrequenciesWithinFourSigma) {
    Rng rng(11);
    const StateVector s = test::random_state(3, rng);
    const std::uint64_t shots = 100000;
    const auto counts = sample_counts(s, {0, 1, 2}, shots, 42);
    const RVec p = s.probabilities();
    for (Eigen::Index i = 0; i < p.size(); ++i) {
        const double freq = double(counts[std::size_t(i)]) / double(shots);
        const double sigma = std::sqrt(p[i] * (1.0 - p[i]) / double(shots));
        EXPECT_LE(std::abs(freq - p[i]), 4.0 * sigma + 1e-12) << "outcome " << i;
    }
}

TEST(Measurement, SamplingIsDeterministicInSeed) {
    Rng rng(5);
    const StateVector s = test::random_state(2, rng);
    EXPECT_EQ(sample_counts(s, {0, 1}, 1000, 9), sample_counts(s, {0, 1}, 1000, 9));
    EXPECT_NE(sample_counts(s, {0, 1}, 1000, 9), sample_counts(s, {0, 1}, 1000, 10));
}

TEST(Measurement, MarginalMatchesEnumeration) {
    Rng rng(8);
    const StateVector s = test::random_state(4, rng);
    const RVec m = s.marginal({3, 1});
    RVec ref = RVec::Zero(4);
    for (std::size_t i = 0; i < s.dim(); ++i) {
        ref[Eigen::Index(((i >> 3) & 1) | (((i >> 1) & 1) << 1))] += std::norm(s[i]);
    }
    EXPECT_LE((m - ref).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Observable, Expectations) {
    EXPECT_NEAR(expectation(StateVector(1), Observable(pauli_z())), 1.0, 1e-15);
    EXPECT_NEAR(expectation(plus(), Observable(pauli_x())), 1.0, 1e-15);
    EXPECT_THROW(Observable(CMat::Identity(2, 2) * kI), Error);
}

TEST(Observable, VarianceIsNonNegative) {
    Rng rng(3);
    for (int trial = 0; trial < 20; ++trial) {
        const StateVector s = test::random_state(3, rng);
        const CMat k = test::random_hermitian(8, rng);
        const double mean = expectation(s, Observable(k));
        const double second = expectation(s, Observable(k * k));
        EXPECT_GE(second - mean * mean, -1e-12);
    }
}

TEST(Observable, MeasurementValueIsEigenvalue) {
    Rng rng(4);
    const CMat k = test::random_hermitian(4, rng);
    const Observable obs(k);
    const StateVector s = test::random_state(2, rng);
    const auto r = measure_observable(s, obs, 1);
    const CVec post = r.post_state.amplitudes();
    EXPECT_LE((k * post - r.value * post).norm(), 1e-10);
}

TEST(Observable, GlobalPhaseInvariance) {
    Rng rng(21);
    const StateVector s = test::random_state(3, rng);
    const StateVector t = StateVector::from_amplitudes(s.amplitudes() * std::polar(1.0, 0.731));
    EXPECT_LE((s.probabilities() - t.probabilities()).cwiseAbs().maxCoeff(), 1e-15);
    const Observable k(test::random_hermitian(8, rng));
    EXPECT_NEAR(expectation(s, k), expectation(t, k), 1e-12);
}

TEST(Density, OuterProducts) {
    EXPECT_LE((to_density(StateVector(1)).matrix() - (CMat(2, 2) << 1, 0, 0, 0).finished()).norm(), 1e-15);
    EXPECT_LE((to_density(plus()).matrix() - CMat::Constant(2, 2, 0.5)).norm(), 1e-15);
    Rng rng(6);
    EXPECT_NEAR(to_density(test::random_state(3, rng)).purity(), 1.0, 1e-12);
}

TEST(Density, TraceRuleMatchesPureExpectation) {
    Rng rng(7);
    for (int trial = 0; trial < 10; ++trial) {
        const StateVector s = test::random_state(3, rng);
        const Observable k(test::random_hermitian(8, rng));
        EXPECT_NEAR(expectation(to_density(s), k), expectation(s, k), 1e-12);
    }
}

TEST(Density, PartialTraces) {
    const DensityMatrix zz = to_density(StateVector(2));
    EXPECT_LE((partial_trace(zz, {0}).matrix() - (CMat(2, 2) << 1, 0, 0, 0).finished()).norm(), 1e-15);
    EXPECT_LE((partial_trace(to_density(bell()), {0}).matrix() - CMat::Identity(2, 2) / 2.0).norm(), 1e-15);

    Rng rng(12);
    const CMat ga = test::random_matrix(2, 2, rng);
    const CMat gb = test::random_matrix(4, 4, rng);
    const CMat ra = ga * ga.adjoint() / (ga * ga.adjoint()).trace();
    const CMat rb = gb * gb.adjoint() / (gb * gb.adjoint()).trace();
    // Qubit 0 carries A, qubits 1-2 carry B; B is the outer Kronecker factor.
    const DensityMatrix joint(test::kron(rb, ra));
    EXPECT_LE((partial_trace(joint, {0}).matrix() - ra).norm(), 1e-12);
    EXPECT_LE((partial_trace(joint, {1, 2}).matrix() - rb).norm(), 1e-12);
}

TEST(Density, RejectsNonDensity) {
    CMat bad = CMat::Identity(2, 2);
    EXPECT_THROW(DensityMatrix{bad}, Error);
}

TEST(Tensor, LowRegisterFirst) {
    const StateVector t = StateVector::basis(1, 1).tensor(StateVector::basis(2, 2));
    EXPECT_NEAR(std::norm(t[1 + 2 * 2]), 1.0, 1e-15);
}

TEST(Layout, RegistersStack) {
    RegisterLayout l;
    l.add("data", 3);
    l.add("aux", 1);
    EXPECT_EQ(l.total_qubits(), 4);
    EXPECT_EQ(l.at("aux").qubits(), Qubits{3});
    EXPECT_THROW(l.at("missing"), Error);
}

TEST(Dump, RoundTrip) {
    Rng rng(13);
    const StateVector s = test::random_state(4, rng);
    std::stringstream ss;
    write_state(ss, s);
    const StateVector t = read_state(ss);
    ASSERT_EQ(t.dim(), s.dim());
    EXPECT_EQ((t.amplitudes() - s.amplitudes()).norm(), 0.0);
    std::stringstream junk("not a dump");
    EXPECT_THROW(read_state(junk), Error);
}

} // namespace
} // namespace qstat
