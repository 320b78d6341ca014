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
 * Gate descriptors, circuits and the statevector kernels that apply them.
 */

#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "qstat/state.hpp"

namespace qstat {

enum class GateKind {
    H,
    X,
    Y,
    Z,
    Rx,
    Ry,
    Rz,
    CNOT,
    Toffoli,
    CSwap,
    ControlledUnitary,
    DenseUnitary,
};

std::string to_string(GateKind k);
GateKind gate_kind_from_string(const std::string &s);

/**
 * One gate. Rotations follow R_a(phi) = exp(-i phi a / 2).
 * Controls fire on |1>.
 */
struct CircuitOp {
    GateKind kind = GateKind::H;
    Qubits targets;
    Qubits controls;
    double param = 0.0;
    /// Local matrix for ControlledUnitary / DenseUnitary (shared, immutable).
    std::shared_ptr<const CMat> matrix;

    static CircuitOp h(int t);
    static CircuitOp x(int t);
    static CircuitOp y(int t);
    static CircuitOp z(int t);
    static CircuitOp rx(int t, double phi);
    static CircuitOp ry(int t, double phi);
    static CircuitOp rz(int t, double phi);
    static CircuitOp cnot(int c, int t);
    static CircuitOp toffoli(int c0, int c1, int t);
    static CircuitOp cswap(int c, int t0, int t1);
    /// Validates unitarity once, here.
    static CircuitOp controlled(const CMat &u, Qubits controls, Qubits targets);
    static CircuitOp dense(const CMat &u, Qubits targets);

    /// 2^|targets| square matrix acting on the targets.
    CMat local_matrix() const;
    CircuitOp dagger() const;
};

class Circuit {
  public:
    explicit Circuit(int n_qubits);

    int n_qubits() const { return n_; }
    const std::vector<CircuitOp> &ops() const { return ops_; }
    std::size_t size() const { return ops_.size(); }

    Circuit &append(CircuitOp op);
    Circuit &append(const Circuit &other);

    /// Reversed order, each op daggered.
    Circuit inverse() const;

    void apply(StateVector &s) const;

    /// Full 2^n x 2^n matrix; intended for small n.
    CMat matrix() const;

  private:
    int n_;
    std::vector<CircuitOp> ops_;
};

void apply(const CircuitOp &op, StateVector &s);

/// Applies `u` (2^k x 2^k) to `targets`, conditioned on every control being |1>.
void apply_matrix(StateVector &s, const CMat &u, const Qubits &targets,
                  const Qubits &controls = {});

/// Multiplies each amplitude by phase(register value).
void apply_diagonal(StateVector &s, const Qubits &qubits,
                    const std::function<cplx(std::uint64_t)> &phase);

void walsh_hadamard(StateVector &s, const Qubits &qubits);

/// |x>|0> -> |x>(cos f(x)|0> + sin f(x)|1>), extended linearly.
void controlled_rotation_f(StateVector &s, const Qubits &data, int aux,
                           const std::function<double(std::uint64_t)> &f);

enum class PostselectMode { Exact, Sampled };

struct PostselectResult {
    /// Conditional state with the postselected qubits removed.
    StateVector state{1};
    double probability = 0.0;
    /// 1 in exact mode; number of prepare-and-measure rounds in sampled mode.
    std::uint64_t attempts = 1;
};

/// Conditions `qubits` on holding `value` and drops them from the register.
PostselectResult postselect(const StateVector &s, const Qubits &qubits, std::uint64_t value,
                            PostselectMode mode = PostselectMode::Exact, std::uint64_t seed = 0);
PostselectResult postselect(const StateVector &s, int qubit, int bit,
                            PostselectMode mode = PostselectMode::Exact, std::uint64_t seed = 0);

/// Conditions on `qubits` == value but keeps them (renormalized collapse).
StateVector project(const StateVector &s, const Qubits &qubits, std::uint64_t value,
                    double *probability = nullptr);

/// Standard single-qubit matrices.
CMat pauli_x();
CMat pauli_y();
CMat pauli_z();
CMat hadamard();

} // namespace qstat
