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
 * Adiabatic evolution, QAOA on diagonal cost functions, and a generic
 * parameter-optimization loop around state builders.
 */

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qstat/state.hpp"

namespace qstat {

struct Graph {
    int n = 0;
    std::vector<std::pair<int, int>> edges;
};

/// "u v" per line; blank lines and lines starting with '#' are skipped.
Graph load_edge_list(const std::string &path);
Graph parse_edge_list(const std::string &text);

/// Diagonal cost C(z) = sum_k C_k(z) with 0/1 clauses.
class CostHamiltonian {
  public:
    CostHamiltonian(int n, const std::vector<std::function<bool(std::uint64_t)>> &clauses);
    static CostHamiltonian maxcut(const Graph &g);

    int n_qubits() const { return n_; }
    std::size_t clause_count() const { return clauses_; }
    double value(std::uint64_t z) const { return diag_[static_cast<Eigen::Index>(z)]; }
    const RVec &diagonal() const { return diag_; }
    double max_value() const;
    std::uint64_t argmax() const;
    CostHamiltonian scaled(double c) const;

  private:
    CostHamiltonian() = default;
    int n_ = 1;
    std::size_t clauses_ = 0;
    RVec diag_;
};

struct QaoaParams {
    std::vector<double> gamma;
    std::vector<double> beta;

    int p() const { return static_cast<int>(gamma.size()); }
    /// gamma into [0, 2 pi), beta into [0, pi).
    void wrap();
    std::vector<double> flat() const;
    static QaoaParams from_flat(const std::vector<double> &x);
};

/// e^{-i gamma C} on every basis state.
void apply_cost_layer(StateVector &s, const CostHamiltonian &c, double gamma);
/// prod_j e^{-i beta X_j}.
void apply_mixer_layer(StateVector &s, double beta);

StateVector qaoa_state(const CostHamiltonian &c, const QaoaParams &params);
double qaoa_expectation(const CostHamiltonian &c, const QaoaParams &params);

struct OptimizerConfig {
    enum class Method { NelderMead, GradientDescent };
    Method method = Method::NelderMead;
    int restarts = 5;
    int max_evaluations = 2000;
    /// Stop when the best value improves by less than this (relative) over `window` iterations.
    double tolerance = 1e-6;
    int window = 20;
    double initial_step = 0.5;
    /// Finite-difference step for the gradient method.
    double fd_step = 1e-5;
    /// 0 evaluates expectations exactly; k > 0 averages k seeded measurements.
    std::uint64_t shots = 0;
};

struct OptimizeResult {
    std::vector<double> x;
    double value = 0.0;
    /// Best-so-far value after every objective evaluation, across restarts.
    std::vector<double> history;
    int evaluations = 0;
    bool converged = false;
};

/**
 * Minimizes f over the box [lower, upper] (values are clamped into the box).
 * Restart 0 starts at `start` when given; others draw uniform points from `seed`.
 */
OptimizeResult minimize(const std::function<double(const std::vector<double> &)> &f,
                        const std::vector<double> &lower, const std::vector<double> &upper,
                        const OptimizerConfig &cfg, std::uint64_t seed,
                        const std::optional<std::vector<double>> &start = std::nullopt);

struct QaoaResult {
    QaoaParams params;
    double expected_cost = 0.0;
    std::uint64_t best_bitstring = 0;
    double best_sampled_cost = 0.0;
    double maxcut_bruteforce = 0.0;
    std::vector<double> history;
    int evaluations = 0;
};

/**
 * Maximizes <C>. `warm_start` (p - 1 layers) seeds restart 0 with an identity
 * layer appended, so the optimum never drops below the shallower one.
 */
QaoaResult qaoa_optimize(const CostHamiltonian &c, int p, const OptimizerConfig &cfg,
                         std::uint64_t seed, const std::optional<QaoaParams> &warm_start = {},
                         std::uint64_t sample_shots = 1024);

std::string qaoa_result_json(const QaoaResult &r);

struct AnnealSchedule {
    CMat h_start;
    CMat h_end;
    double total_time = 1.0;
    /// 0 picks the count from a per-step splitting budget of 1e-6.
    int steps = 0;
    /// Monotone ramp on [0, 1] with ramp(0) = 0 and ramp(1) = 1.
    std::function<double(double)> ramp = [](double u) { return u; };
    int trace_points = 101;
};

struct AnnealPoint {
    double time = 0.0;
    double gap = 0.0;
    double fidelity = 0.0;
};

struct AnnealResult {
    StateVector state{1};
    double final_fidelity = 0.0;
    double min_gap = 0.0;
    bool gap_collapse = false;
    int steps = 0;
    std::vector<AnnealPoint> trace;
};

/// Lowest-eigenspace overlap of s with h.
double ground_fidelity(const CMat &h, const StateVector &s);

AnnealResult adiabatic_evolve(const AnnealSchedule &schedule, const StateVector &s0);

struct HybridResult {
    std::vector<double> theta;
    double value = 0.0;
    std::vector<double> trace;
    int evaluations = 0;
};

/// Shots-mode estimate: mean of k eigenbasis measurements of L.
double sampled_expectation(const StateVector &s, const Observable &l, std::uint64_t shots,
                           std::uint64_t seed);

/// theta* = argmin <psi(theta)|L|psi(theta)> over the box.
HybridResult hybrid_loop(const std::function<StateVector(const std::vector<double> &)> &builder,
                         const Observable &l, const std::vector<double> &lower,
                         const std::vector<double> &upper, const OptimizerConfig &cfg,
                         std::uint64_t seed,
                         const std::optional<std::vector<double>> &start = std::nullopt);

} // namespace qstat
