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

#include <algorithm>
#include <numeric>
#include <set>

#include <gtest/gtest.h>

#include "qstat/amplitude.hpp"
#include "qstat/gates.hpp"
#include "support.hpp"

namespace qstat {
namespace {

FunctionOracle marks(int n, const std::set<std::uint64_t> &m) {
    return FunctionOracle::from_function(n, 1, [m](std::uint64_t x) { return m.count(x) ? 1ULL : 0ULL; });
}

/// Exact QAE outcome law: average of two Fejer kernels at +-theta / pi.
double qae_outcome_law(double a, std::uint64_t y, int m) {
    const double big = std::ldexp(1.0, m);
    const double th = std::asin(std::sqrt(a)) / kPi;
    auto fejer = [big](double d) {
        const double s = std::sin(kPi * d);
        if (std::abs(s) < 1e-15) {
            return 1.0;
        }
        const double num = std::sin(big * kPi * d);
        return num * num / (big * big * s * s);
    };
    return 0.5 * (fejer(double(y) / big - th) + fejer(double(y) / big + th));
}

Circuit one_qubit_prep(double a) {
    Circuit c(1);
    c.append(CircuitOp::ry(0, 2.0 * std::asin(std::sqrt(a))));
    return c;
}

const FunctionOracle kOne = FunctionOracle::from_function(1, 1, [](std::uint64_t x) { return x; });

TEST(Grover, ClosedFormExamples) {
    GroverProblem four(2, marks(2, {3}));
    EXPECT_NEAR(grover_search(four, 1, 0).success_probability, 1.0, 1e-12);

    GroverProblem big(10, marks(10, {777}));
    const auto r = grover_search(big, 25, 0);
    EXPECT_GE(r.success_probability, 0.99);
    const double theta = 2.0 * std::asin(1.0 / 32.0);
    EXPECT_NEAR(r.success_probability, std::pow(std::sin((25 + 0.5) * theta), 2), 1e-10);

    GroverProblem all(1, marks(1, {0, 1}));
    EXPECT_NEAR(grover_search(all, 0, 0).success_probability, 1.0, 1e-12);
    EXPECT_THROW(grover_search(GroverProblem(2, marks(2, {})), 1, 0), Error);
}

TEST(Grover, DefaultIterationsAndCalls) {
    EXPECT_EQ(grover_default_iterations(1024, 1), 25u);
    GroverProblem p(6, marks(6, {5}));
    const auto r = grover_search(p, std::nullopt, 3);
    EXPECT_EQ(r.iterations, 6u);
    EXPECT_EQ(r.oracle_calls, r.iterations);
    EXPECT_GE(r.success_probability, 0.99);
}

TEST(Grover, StaysInTwoDimensionalPlane) {
    const std::set<std::uint64_t> marked = {3, 17, 40};
    GroverProblem p(6, marks(6, marked));
    for (std::uint64_t t = 0; t <= 12; ++t) {
        const StateVector s = grover_search(p, t, 1).state;
        // Span{|good>, |bad>}: all marked amplitudes equal, all unmarked equal.
        const cplx good = s[3];
        const cplx bad = s[0];
        double off = 0.0;
        for (std::uint64_t x = 0; x < 64; ++x) {
            off += std::norm(s[x] - (marked.count(x) ? good : bad));
        }
        EXPECT_LE(std::sqrt(off), 1e-10) << "t = " << t;
    }
}

TEST(Qaa, SuccessLawOnRandomInstances) {
    Rng rng(1);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 2 + int(rng.below(5));
        Circuit a(n);
        for (int layer = 0; layer < 3; ++layer) {
            for (int q = 0; q < n; ++q) {
                a.append(CircuitOp::ry(q, 6.0 * rng.uniform()));
                a.append(CircuitOp::rz(q, 6.0 * rng.uniform()));
            }
            for (int q = 0; q + 1 < n; ++q) {
                a.append(CircuitOp::cnot(q, q + 1));
            }
        }
        std::set<std::uint64_t> marked;
        const std::uint64_t count = 1 + rng.below(3);
        while (marked.size() < count) {
            marked.insert(rng.below(1ULL << n));
        }
        const FunctionOracle chi = marks(n, marked);
        StateVector s(n);
        a.apply(s);
        double p0 = 0.0;
        for (auto x : marked) {
            p0 += std::norm(s[x]);
        }
        const std::uint64_t t = rng.below(6);
        const QaaResult r = qaa(a, chi, t);
        EXPECT_NEAR(r.initial_amplitude, std::sqrt(p0), 1e-12);
        EXPECT_NEAR(r.good_probability, std::pow(std::sin((2.0 * double(t) + 1.0) * std::asin(std::sqrt(p0))), 2), 1e-9);
    }
}

TEST(Qaa, Examples) {
    const Circuit a = one_qubit_prep(0.25);
    EXPECT_NEAR(qaa(a, kOne, 0).good_probability, 0.25, 1e-12);
    EXPECT_NEAR(qaa(a, kOne, 1).good_probability, 1.0, 1e-12);
    EXPECT_THROW(qaa(one_qubit_prep(0.0), kOne, 1), Error);
}

TEST(Qaa, Periodicity) {
    // With arcsin|a1| = pi / 10 the law has period 5 in t.
    const double a1 = std::sin(kPi / 10.0);
    const Circuit a = one_qubit_prep(a1 * a1);
    for (std::uint64_t t = 0; t < 5; ++t) {
        EXPECT_NEAR(qaa(a, kOne, t).good_probability, qaa(a, kOne, t + 5).good_probability, 1e-8);
    }
}

TEST(Qae, Examples) {
    const auto half = qae(one_qubit_prep(0.5), kOne, 2);
    EXPECT_TRUE(half.y_hat == 1 || half.y_hat == 3);
    EXPECT_NEAR(half.a_hat, 0.5, 1e-15);
    const auto zero = qae(one_qubit_prep(0.0), kOne, 4);
    EXPECT_EQ(zero.y_hat, 0u);
    EXPECT_NEAR(zero.a_hat, 0.0, 1e-15);
    EXPECT_EQ(zero.q_applications, 15u);
}

TEST(Qae, EstimateMatchesGridValue) {
    Rng rng(2);
    for (int trial = 0; trial < 20; ++trial) {
        const auto r = qae(one_qubit_prep(rng.uniform()), kOne, 5, ReadoutMode::Sampled, rng());
        EXPECT_NEAR(r.a_hat, std::pow(std::sin(kPi * double(r.y_hat) / 32.0), 2), 1e-15);
    }
}

TEST(Qae, OutcomeProbabilityMatchesFejerLaw) {
    Rng rng(3);
    for (int trial = 0; trial < 20; ++trial) {
        const double a = rng.uniform();
        const int m = 3 + int(rng.below(5));
        const auto r = qae(one_qubit_prep(a), kOne, m);
        EXPECT_NEAR(r.probability, qae_outcome_law(a, r.y_hat, m), 1e-10);
        // Max-probability outcome: no grid value is likelier.
        for (std::uint64_t y = 0; y < (1ULL << m); ++y) {
            EXPECT_LE(qae_outcome_law(a, y, m), r.probability + 1e-10);
        }
    }
}

TEST(Qae, SquareRootBoundHoldsForMaxProbabilityOutcome) {
    Rng rng(4);
    for (int trial = 0; trial < 100; ++trial) {
        const double a = rng.uniform();
        for (int m = 4; m <= 8; ++m) {
            const auto r = qae(one_qubit_prep(a), kOne, m);
            EXPECT_LE(std::abs(r.a_hat - a), qae_error_bound_sqrt(a, m) + 1e-12) << "a=" << a << " m=" << m;
        }
    }
}

TEST(Qae, MostLikelyOutcomeCarriesAtLeastEightOverPiSquaredWithItsMirror) {
    Rng rng(5);
    for (int trial = 0; trial < 50; ++trial) {
        const double a = rng.uniform();
        const int m = 6;
        const auto r = qae(one_qubit_prep(a), kOne, m);
        const double both = r.y_hat == 0 || r.y_hat == 32
                                ? r.probability
                                : r.probability + qae_outcome_law(a, 64 - r.y_hat, m);
        EXPECT_GE(both + 1e-12, 4.0 / (kPi * kPi));
    }
}

TEST(Mean, Examples) {
    const FunctionOracle zero(3, 3, std::vector<std::uint64_t>(8, 0));
    EXPECT_NEAR(estimate_mean_bounded(zero, 6).a_hat, 0.0, 1e-15);
    const FunctionOracle full(3, 3, std::vector<std::uint64_t>(8, 7));
    EXPECT_NEAR(estimate_mean_bounded(full, 6).a_hat, 1.0, 1e-15);
    std::vector<std::uint64_t> ramp(8);
    std::iota(ramp.begin(), ramp.end(), 0);
    const FunctionOracle f(3, 3, ramp);
    const auto r = estimate_mean_bounded(f, 8, 8.0);
    EXPECT_NEAR(r.a_exact, 7.0 / 16.0, 1e-15);
    EXPECT_LE(std::abs(r.a_hat - 7.0 / 16.0), qae_error_bound_sqrt(7.0 / 16.0, 8));
}

TEST(Mean, TwoOracleCallsPerGroverStep) {
    const FunctionOracle f(2, 2, {0, 1, 2, 3});
    const auto r = estimate_mean_bounded(f, 5);
    EXPECT_EQ(r.q_applications, 31u);
    EXPECT_EQ(r.a_calls, 2 * r.q_applications + 1);
}

TEST(Count, Examples) {
    EXPECT_EQ(quantum_count(marks(4, {}), 6).count, 0u);
    std::set<std::uint64_t> all;
    for (std::uint64_t x = 0; x < 16; ++x) {
        all.insert(x);
    }
    EXPECT_EQ(quantum_count(marks(4, all), 6).count, 16u);
    const auto four = quantum_count(marks(6, {1, 9, 33, 60}), 8);
    EXPECT_LE(std::abs(double(four.count) - 4.0), 1.0);
}

TEST(Minimum, Examples) {
    std::vector<double> ident(16);
    std::iota(ident.begin(), ident.end(), 0.0);
    int hits = 0;
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        hits += find_minimum(ident, seed).index == 0;
    }
    EXPECT_GE(hits, 100);

    const auto flat = find_minimum(std::vector<double>(8, 2.0), 1);
    EXPECT_TRUE(flat.degenerate);

    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto two = find_minimum({5.0, -1.0}, seed);
        EXPECT_EQ(two.index, 1u);
        // The round that crosses the budget may overshoot by one Grover run.
        EXPECT_LE(double(two.oracle_calls), minimum_call_budget(2) + std::sqrt(2.0) + 1);
    }
    EXPECT_THROW(find_minimum({1.0}, 0), Error);
}

TEST(Minimum, BudgetFormula) {
    EXPECT_NEAR(minimum_call_budget(16), 22.5 * 4 + 1.4 * 16, 1e-12);
}

TEST(Kth, Examples) {
    Rng rng(6);
    std::vector<double> perm(16);
    std::iota(perm.begin(), perm.end(), 0.0);
    std::shuffle(perm.begin(), perm.end(), rng);
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        EXPECT_EQ(perm[kth_smallest(perm, 8, 0.5, seed).index], 7.0);
        EXPECT_EQ(perm[kth_smallest(perm, 16, 0.5, seed).index], 15.0);
        EXPECT_EQ(perm[kth_smallest(perm, 1, 0.5, seed).index], 0.0);
    }
    EXPECT_THROW(kth_smallest(perm, 0, 0.5, 0), Error);
    EXPECT_THROW(kth_smallest(perm, 3, 0.25, 0), Error);
}

TEST(Kth, WiderWindowAcceptsNeighbours) {
    std::vector<double> v = {4, 2, 9, 1, 7, 3, 8, 6};
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const double x = v[kth_smallest(v, 4, 1.5, seed).index];
        const auto rank = std::count_if(v.begin(), v.end(), [x](double y) { return y < x; }) + 1;
        EXPECT_GT(double(rank), 4 - 1.5);
        EXPECT_LT(double(rank), 4 + 1.5);
    }
}

TEST(Swap, Examples) {
    const StateVector a = amplitude_encode(std::vector<double>{3, 4});
    const auto same = swap_test(a, a);
    EXPECT_NEAR(same.p0, 1.0, 1e-12);
    EXPECT_NEAR(same.overlap, 1.0, 1e-12);
    const auto orth = swap_test(StateVector::basis(1, 0), StateVector::basis(1, 1));
    EXPECT_NEAR(orth.p0, 0.5, 1e-12);
    EXPECT_NEAR(orth.overlap, 0.0, 1e-12);
    EXPECT_NEAR(swap_test(a, StateVector::basis(1, 0)).overlap, 0.6, 1e-12);
}

TEST(Swap, ExactLawAndShotNoise) {
    Rng rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        const StateVector a = test::random_state(2, rng);
        const StateVector b = test::random_state(2, rng);
        const double law = (1.0 + std::norm(inner_product(a, b))) / 2.0;
        EXPECT_NEAR(swap_test(a, b).p0, law, 1e-12);
        const auto shot = swap_test(a, b, 100000, rng());
        EXPECT_LE(std::abs(shot.p0 - law), 4.0 * std::sqrt(law * (1 - law) / 1e5) + 1e-12);
    }
}

TEST(Swap, SignedVariantRecoversCosine) {
    const std::vector<double> a = {1, -2, 0.5};
    const std::vector<double> b = {-3, 1, 2};
    const double dot = -3 - 2 + 1;
    const double cosine = dot / std::sqrt(1 + 4 + 0.25) / std::sqrt(9 + 1 + 4);
    EXPECT_NEAR(swap_test_signed(a, b).overlap, cosine, 1e-12);
}

TEST(SampleMean, Examples) {
    EXPECT_NEAR(sample_mean_via_swap({1, 1, 1, 1}).mean, 1.0, 1e-12);
    EXPECT_NEAR(sample_mean_via_swap({1, 0, 0, 0}).mean, 0.25, 1e-12);
    EXPECT_NEAR(sample_mean_via_swap({2.5, 2.5}).swap.overlap, 1.0, 1e-12);
    EXPECT_THROW(sample_mean_via_swap({0, 0}), Error);
}

TEST(MonteCarlo, Examples) {
    const auto c = quantum_monte_carlo({0.2, 0.3, 0.5}, {0.4, 0.4, 0.4}, 8);
    EXPECT_NEAR(c.a_exact, 0.4, 1e-12);
    EXPECT_LE(std::abs(c.a_hat - 0.4), qae_error_bound_sqrt(0.4, 8));
    const auto d = quantum_monte_carlo({0.25, 0.75}, {0.0, 1.0}, 8);
    EXPECT_LE(std::abs(d.a_hat - 0.75), qae_error_bound_sqrt(0.75, 8));
    EXPECT_THROW(quantum_monte_carlo({0.5, 0.5}, {0.0, 1.5}, 4), Error);
}

TEST(MonteCarlo, UniformReducesToBoundedMean) {
    const std::vector<std::uint64_t> table = {0, 3, 5, 7};
    const auto q = quantum_monte_carlo({0.25, 0.25, 0.25, 0.25}, {0.0, 3.0 / 7, 5.0 / 7, 1.0}, 7);
    const auto m = estimate_mean_bounded(FunctionOracle(2, 3, table), 7);
    EXPECT_NEAR(q.a_exact, m.a_exact, 1e-12);
    EXPECT_EQ(q.y_hat == m.y_hat || q.y_hat + m.y_hat == 128, true);
}

TEST(MonteCarlo, ClassicalBaselineConverges) {
    const double est = classical_monte_carlo({0.1, 0.9}, {1.0, 0.0}, 200000, 3);
    EXPECT_NEAR(est, 0.1, 4 * std::sqrt(0.09 / 200000));
}

} // namespace
} // namespace qstat
