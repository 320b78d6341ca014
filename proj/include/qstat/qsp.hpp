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
 * Signal processing on one qubit and its matrix lifts.
 *
 * W(x) = [[x, i sqrt(1-x^2)], [i sqrt(1-x^2), x]], S(phi) = exp(i phi Z),
 * U_phi(x) = S(phi_0) prod_{j=1..d} W(x) S(phi_j).
 */

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "qstat/encoding.hpp"
#include "qstat/gates.hpp"

namespace qstat {

using Mat2 = Eigen::Matrix2cd;

struct PhaseSequence {
    std::vector<double> phases{0.0};
    /// The intended functional is Re <0|U|0> (two-branch readout) instead of <0|U|0>.
    bool real_part = false;
    std::string target;

    int degree() const { return static_cast<int>(phases.size()) - 1; }
    int parity() const { return degree() % 2; }
};

std::string phases_to_json(const PhaseSequence &p);
PhaseSequence phases_from_json(const std::string &text);

struct QspValue {
    Mat2 u;
    /// <0|U|0>.
    cplx p;
    /// <+|U|+>.
    cplx plus;
};

QspValue qsp_evaluate(const std::vector<double> &phases, double x);

struct PhaseSolveOptions {
    int max_iterations = 200;
    /// Sup-norm acceptance on a 1e-3 grid of [-1, 1].
    double tolerance = 1e-6;
    int max_degree = 1000;
};

/**
 * Symmetric phases whose Re <0|U|0> matches f, a polynomial of the given
 * degree and parity (degree mod 2) with sup |f| <= 1. Newton iteration on the
 * Chebyshev coefficients of the reduced phase vector.
 */
PhaseSequence solve_phases(const std::function<double(double)> &f, int degree,
                           const PhaseSolveOptions &opt = {});
/// Target given by monomial coefficients c_0 + c_1 x + ...
PhaseSequence solve_phases_monomial(const std::vector<double> &coeffs,
                                    const PhaseSolveOptions &opt = {});

/// Sup over a 1e-3 grid of |Re P(x) - f(x)| (or |P(x) - f(x)| when !real_part).
double phase_sup_error(const PhaseSequence &p, const std::function<double(double)> &f);

/**
 * [[A, i sqrt(I - A A^dag)], [i sqrt(I - A^dag A), A^dag]] with A zero-padded to
 * a square power-of-two size; the auxiliary qubit is the most significant.
 */
CMat block_encoding(const CMat &a);

struct QsvtResult {
    StateVector state{1};
    double success_probability = 0.0;
    std::uint64_t block_calls = 0;
};

/// Poly(H)|psi> for Hermitian H with ||H|| <= 1.
QsvtResult qet_apply(const CMat &h, const PhaseSequence &phi, const StateVector &psi);

enum class SvSide {
    /// sum_k P(sigma_k) |w_k><v_k| (odd degree).
    Left,
    /// sum_k P(sigma_k) |v_k><v_k| (even degree).
    Right,
};

/// Singular-value transform of A (any shape, ||A|| <= 1) applied to psi.
QsvtResult qsvt_apply(const CMat &a, const PhaseSequence &phi, const StateVector &psi,
                      SvSide side = SvSide::Left);

struct FixedPointPlan {
    /// Odd sequence length; the oracle is queried (length - 1) / 2 times.
    int length = 1;
    double delta = 0.0;
    double gamma = 0.0;
    std::vector<double> alpha;
    std::vector<double> beta;
};

/// Smallest odd L reaching error delta^2 for every overlap >= c.
int fixed_point_min_length(double c, double delta);
/// Plan for budget L >= the minimum; delta is tightened to 1 / T_L(1 / sqrt(1 - c^2)).
FixedPointPlan fixed_point_plan(double c, double delta, int length);
/// 1 - delta^2 T_L(T_{1/L}(1/delta) sqrt(1 - lambda))^2.
double fixed_point_success_law(double lambda, double delta, int length);

struct FixedPointResult {
    StateVector state{1};
    double success_probability = 0.0;
    std::uint64_t oracle_calls = 0;
    FixedPointPlan plan;
};

FixedPointResult fixed_point_search(const Circuit &a, const FunctionOracle &chi, double c,
                                    double delta, int length);

/// Odd Chebyshev approximation of 1/x on [1/kappa, 1], scaled to sup-norm `scale`.
struct InversePolynomial {
    int b = 0;
    int degree = 1;
    /// Coefficients on T_1, T_3, ...
    std::vector<double> odd_coeffs;
    double scale = 1.0;
    double evaluate(double x) const;
};

InversePolynomial inverse_polynomial(double kappa, double eps, double sup = 0.9);

struct QsvtInverseResult {
    StateVector state{1};
    double success_probability = 0.0;
    double fidelity = 0.0;
    int degree = 0;
};

QsvtInverseResult qsvt_invert(const CMat &a, double kappa, double eps, const StateVector &b);

struct QspSimResult {
    StateVector state{1};
    double success_probability = 0.0;
    int cos_degree = 0;
    int sin_degree = 0;
    double alpha = 1.0;
};

/**
 * e^{-iHt} as the coherent sum of two eigenvalue transforms of H / ||H||_1
 * with Jacobi-Anger cosine and sine polynomials.
 */
QspSimResult qsp_hamiltonian_sim(const CMat &h, double t, double eps, const StateVector &psi,
                                 int degree_cap = 400);

/// Truncated Jacobi-Anger parts: cos(tau x) on even and sin(tau x) on odd Chebyshev terms.
std::vector<double> jacobi_anger_cos(double tau, int degree);
std::vector<double> jacobi_anger_sin(double tau, int degree);
/// sum_k c_k T_k(x).
double chebyshev_sum(const std::vector<double> &c, double x);

} // namespace qstat
