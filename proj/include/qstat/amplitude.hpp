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

/**
 * @file
 * Amplitude amplification and estimation, and the algorithms built on them:
 * search, counting, bounded means, minimum / k-th smallest finding, Monte
 * Carlo expectations and the swap test.
 */

#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "qstat/encoding.hpp"
#include "qstat/fourier.hpp"
#include "qstat/gates.hpp"

namespace qstat {

struct GroverProblem {
    int n = 1;
    /// 1-bit marker over n-bit indices.
    FunctionOracle chi;
    /// State preparation; Walsh-Hadamard when empty.
    std::optional<Circuit> prep;

    GroverProblem(int n_qubits, FunctionOracle marker, std::optional<Circuit> a = std::nullopt);
    std::vector<std::uint64_t> marked() const;
};

struct GroverResult {
    std::uint64_t outcome = 0;
    double success_probability = 0.0;
    std::uint64_t oracle_calls = 0;
    std::uint64_t iterations = 0;
    bool found = false;
    /// Data register only.
    StateVector state{1};
};

/// round((pi/4) sqrt(N/|M|)).
std::uint64_t grover_default_iterations(std::uint64_t n_items, std::uint64_t n_marked);

/**
 * Grover iterations with an auxiliary |-> qubit taking the oracle kickback.
 * The outcome is sampled from the final state with `seed`.
 */
GroverResult grover_search(const GroverProblem &p, std::optional<std::uint64_t> iterations,
                           std::uint64_t seed);

/// Unknown-|M| search: randomized iteration counts with a capped growth factor.
GroverResult grover_search_unknown(const GroverProblem &p, std::uint64_t seed);

struct QaaResult {
    StateVector state{1};
    double good_probability = 0.0;
    /// |a_1| of the initial A|0>.
    double initial_amplitude = 0.0;
    std::uint64_t oracle_calls = 0;
};

/// t steps of Q = -A U_0 A^dag U_chi applied to A|0>.
QaaResult qaa(const Circuit &a, const FunctionOracle &chi, std::uint64_t t);

/// sin^2((2t+1) asin|a1|).
double qaa_success_law(double a1, std::uint64_t t);

struct AmplitudeEstimate {
    double a_hat = 0.0;
    int m = 0;
    std::uint64_t y_hat = 0;
    /// {y, 2^m - y}: both give the same estimate.
    std::vector<std::uint64_t> candidates;
    double probability = 0.0;
    /// Applications of Q (each uses one chi call, one A and one A^dag).
    std::uint64_t q_applications = 0;
    std::uint64_t a_calls = 0;
    /// Amplitude the estimate targets, read from the simulator.
    double a_exact = 0.0;
};

/// QPE over Q with an m-bit register; a_hat = sin^2(pi y / 2^m).
AmplitudeEstimate qae(const Circuit &a, const FunctionOracle &chi, int m,
                      ReadoutMode mode = ReadoutMode::Exact, std::uint64_t seed = 0);
/// Same, with A given as a dense unitary.
AmplitudeEstimate qae_dense(const CMat &a, const FunctionOracle &chi, int m,
                            ReadoutMode mode = ReadoutMode::Exact, std::uint64_t seed = 0);

/// The printed estimation bound: 2 pi a(1-a)/t + pi^2/t^2 with t = 2^m.
double qae_error_bound(double a, int m);
/// The same bound with sqrt(a(1-a)) in the first term.
double qae_error_bound_sqrt(double a, int m);

/**
 * Mean of F(i) = table[i] / full_scale over the domain via QAE on
 * N^{-1/2} sum_i |i>(sqrt(1-F(i))|0> + sqrt(F(i))|1>).
 * full_scale <= 0 selects 2^{codomain_bits} - 1, so the all-ones word is 1.
 */
AmplitudeEstimate estimate_mean_bounded(const FunctionOracle &f, int m, double full_scale = 0.0,
                                        ReadoutMode mode = ReadoutMode::Exact,
                                        std::uint64_t seed = 0);

struct CountEstimate {
    std::uint64_t count = 0;
    AmplitudeEstimate qae;
};

/// round(N a_hat) for a 0/1 oracle.
CountEstimate quantum_count(const FunctionOracle &f, int m,
                            ReadoutMode mode = ReadoutMode::Exact, std::uint64_t seed = 0);

struct SearchOutcome {
    std::uint64_t index = 0;
    std::uint64_t oracle_calls = 0;
    std::uint64_t iterations = 0;
    bool budget_exhausted = false;
    /// All values equal: any index is a minimum.
    bool degenerate = false;
};

/// Minimum-finding with a call budget of multiplier * (22.5 sqrt(N) + 1.4 log2(N)^2).
SearchOutcome find_minimum(const std::vector<double> &values, std::uint64_t seed,
                           double budget_multiplier = 1.0);
double minimum_call_budget(std::uint64_t n_items);

/// Index whose value's rank lies in (k - delta, k + delta); k is 1-based.
SearchOutcome kth_smallest(const std::vector<double> &values, std::uint64_t k, double delta,
                           std::uint64_t seed);

struct SwapTestResult {
    /// Pr[ancilla = 0].
    double p0 = 0.0;
    /// sqrt(2 p0 - 1) (or the signed dot product for the augmented variant).
    double overlap = 0.0;
    double std_error = 0.0;
    bool clamped = false;
    std::uint64_t shots = 0;
};

/// shots == 0 selects exact mode.
SwapTestResult swap_test(const StateVector &a, const StateVector &b, std::uint64_t shots = 0,
                         std::uint64_t seed = 0);
/// a.b for real unit vectors via the (v, 1)/sqrt(2) augmentation.
SwapTestResult swap_test_signed(const std::vector<double> &a, const std::vector<double> &b,
                                std::uint64_t shots = 0, std::uint64_t seed = 0);

struct SampleMeanResult {
    double mean = 0.0;
    /// sqrt(N) * mean.
    double scaled = 0.0;
    SwapTestResult swap;
};

SampleMeanResult sample_mean_via_swap(const std::vector<double> &x, std::uint64_t shots = 0,
                                      std::uint64_t seed = 0);

/// E_p[f] via QAE on sum_x sqrt(p(x))|x>(sqrt(1-f(x))|0> + sqrt(f(x))|1>).
AmplitudeEstimate quantum_monte_carlo(const std::vector<double> &p, const std::vector<double> &f,
                                      int m, ReadoutMode mode = ReadoutMode::Exact,
                                      std::uint64_t seed = 0);

/// Plain Monte Carlo with `samples` draws from p.
double classical_monte_carlo(const std::vector<double> &p, const std::vector<double> &f,
                             std::uint64_t samples, std::uint64_t seed);

/// Unitary whose first column is v (unit norm); a Householder reflection.
CMat householder_from(const CVec &v);

} // namespace qstat
