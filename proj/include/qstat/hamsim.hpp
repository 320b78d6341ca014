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
 * Hamiltonian evolution: product formulas, truncated-Taylor LCU with
 * oblivious amplitude amplification, and the qubitization walk.
 *
 * Pauli labels read left to right from qubit 0: "XZ" is X on qubit 0 and Z
 * on qubit 1.
 */

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qstat/encoding.hpp"

namespace qstat {

CMat pauli_string(const std::string &label);

/// e^{-i h t} for Hermitian h.
CMat evolution_operator(const CMat &h, double t);

/// H = sum_l weights[l] * terms[l], each term Hermitian on n qubits.
struct HamiltonianSum {
    int n = 1;
    std::vector<double> weights;
    std::vector<CMat> terms;
    /// Pauli label per term when built from strings ("" otherwise).
    std::vector<std::string> labels;

    explicit HamiltonianSum(int n_qubits) : n(n_qubits) {}
    void add(double weight, CMat term, std::string label = "");
    /// Adds weight * P; negative weights are folded into the term sign.
    void add_pauli(double weight, const std::string &label);

    CMat dense() const;
    /// sum of weights; every weight positive and every term unitary.
    double lcu_norm() const;
    bool unitary_terms() const;
};

/// Pauli expansion of a Hermitian matrix on <= 6 qubits, dropping |c| <= tol.
HamiltonianSum pauli_decompose(const CMat &h, double tol = 1e-12);

struct HamiltonianFile {
    HamiltonianSum h;
    double t = 1.0;
};
/// {"terms": [{"alpha": 0.5, "pauli": "XZI"}, ...], "t": 1.0}
HamiltonianFile load_hamiltonian_json(const std::string &path);

/// (prod_l e^{-i w_l H_l t / r})^r.
StateVector trotter_evolve(const HamiltonianSum &h, double t, int r, const StateVector &s);

struct LcuResult {
    StateVector state{1};
    /// Product of per-segment postselection probabilities.
    double success_probability = 0.0;
    double min_segment_probability = 1.0;
    int segments = 0;
    /// Per-segment normalization sum_k (alpha t/r)^k / k!.
    double segment_norm = 0.0;
    std::size_t lcu_terms = 0;
};

/// Smallest r with sum_{k<=K} (alpha t / r)^k / k! <= 2.
int lcu_segments(double alpha, double t, int k);

/**
 * Truncated Taylor series per segment as an LCU (prepare, select, unprepare),
 * lowered to amplitude exactly 1/2 and boosted by one oblivious amplitude
 * amplification round. `segments` <= 0 picks lcu_segments.
 */
LcuResult lcu_evolve(const HamiltonianSum &h, double t, int k, const StateVector &s,
                     int segments = 0);

/**
 * U = i S (2 T T^dag - I) on (j, b) (x) (l, flag) with
 * index = j + dim*b + 2 dim (l + dim*flag).
 */
struct QubitizationWalk {
    /// Encoded matrix: H, or [[0, H], [H, 0]] when H has a negative diagonal entry.
    CMat encoded;
    /// Max row sum of |H|; the walk block-encodes H / norm.
    double norm = 1.0;
    bool lifted = false;
    /// Dimension of the original H.
    Eigen::Index dim = 1;
    /// Isometry columns T|j, b>.
    CMat t;

    Eigen::Index register_dim() const { return encoded.rows(); }
    Eigen::Index walk_dim() const { return 4 * register_dim() * register_dim(); }
    CVec apply(const CVec &v) const;
    CVec apply_adjoint(const CVec &v) const;
    CVec swap(const CVec &v) const;
    CMat matrix() const;
};

QubitizationWalk build_qubitization(const SparseHamiltonianAccess &h);

/// sum_{|m| > k} |J_m(z)|.
double bessel_tail(double z, int k);
/// Smallest k with bessel_tail(z, k) <= eps.
int bessel_truncation(double z, double eps);

struct QwEvolveResult {
    StateVector state{1};
    double success_probability = 0.0;
    double tail = 0.0;
    int k_max = 0;
};

/**
 * sum_{m=-k..k} J_m(-t norm) U^m between T and T^dag approximates e^{-iHt}.
 * eps > 0 rejects truncations whose Bessel tail exceeds it.
 */
QwEvolveResult qw_lcu_evolve(const QubitizationWalk &w, double t, int k_max,
                             const StateVector &s, double eps = 0.0);

} // namespace qstat
