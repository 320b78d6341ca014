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
 * Discrete coin walks, Szegedy walks on Markov chains and staged preparation
 * of stationary-distribution quantum samples.
 */

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qstat/state.hpp"

namespace qstat {

/**
 * Regular graph given by port labels: ports[v][e] is the vertex reached from
 * v along edge label e. Self-loops pad irregular vertices.
 */
struct PortGraph {
    std::vector<std::vector<int>> ports;

    PortGraph(std::vector<std::vector<int>> ports_);
    static PortGraph cycle(int n);

    int vertices() const { return static_cast<int>(ports.size()); }
    int degree() const { return static_cast<int>(ports[0].size()); }
    /// Qubits of the vertex register (low) and the edge register (high).
    int vertex_qubits() const;
    int edge_qubits() const;
};

/// U = S (C (x) I) on edge (x) vertex; S moves |e>|v> to |e>|ports[v][e]>.
CMat coin_walk_unitary(const PortGraph &g, const CMat &coin);
StateVector coin_walk_step(const PortGraph &g, const CMat &coin, const StateVector &s);
/// Pr[vertex = v] for the current state.
RVec vertex_distribution(const PortGraph &g, const StateVector &s);
/// (1/T) sum_{t=1..T} P_t(v | psi0).
RVec coin_walk_cesaro(const PortGraph &g, const CMat &coin, const StateVector &s0, int steps);

struct MarkovChain {
    RMat p;
    RVec pi;
    bool reversible = false;
    /// 1 - max |lambda| over the non-leading eigenvalues.
    double gap = 0.0;

    /// Validates P and computes pi when absent. `claim_reversible` forces a
    /// detailed-balance check.
    MarkovChain(RMat p_, std::optional<RVec> pi_ = std::nullopt, bool claim_reversible = false);
    int states() const { return static_cast<int>(p.rows()); }
};

/// min(1, pi_y/pi_x) acceptance over a symmetric proposal (uniform over other states when empty).
MarkovChain metropolis_chain(const RVec &pi, const std::optional<RMat> &proposal = std::nullopt);

/// Parses {"P": [[...]], "pi": [...], "reversible": bool}.
MarkovChain load_chain_json(const std::string &path);

struct WalkOperator {
    /// Qubits per register; x is the low register, y the high one.
    int n = 1;
    CMat w;
    CMat up;
    CMat r1;
    CMat r2;
    CMat swap;
    /// U_P applied to sqrt(pi) (x) |0>.
    CVec pi_lifted;
    /// Eigenvalue-1 check on pi_lifted; skipped for non-reversible chains.
    bool stationary_checked = false;
    double stationary_residual = 0.0;
};

WalkOperator build_szegedy(const MarkovChain &chain);

struct QmcmcStage {
    int m = 0;
    int rounds = 0;
    double gap = 0.0;
    double overlap = 0.0;
    double success_probability = 0.0;
    double fidelity = 0.0;
    std::uint64_t walk_steps = 0;
};

struct QmcmcResult {
    /// Single register: approximately sum_x sqrt(pi_r(x)) |x>.
    StateVector state{1};
    double fidelity = 0.0;
    std::uint64_t walk_steps = 0;
    std::vector<QmcmcStage> stages;
};

/**
 * Walks pi_0 (uniform) to pi_r through the chain list, projecting onto each
 * lifted stationary state with phase-0 postselected QPE over W_i.
 */
QmcmcResult qmcmc_prepare(const std::vector<MarkovChain> &chains, double overlap_floor,
                          double eps);

} // namespace qstat
