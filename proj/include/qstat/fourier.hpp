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
 * Quantum Fourier transform and phase estimation.
 *
 * QFT convention: y_k = N^{-1/2} sum_m x_m exp(+2 pi i k m / N), with the
 * register value read little-endian from its qubit list.
 */

#pragma once

#include <atomic>
#include <cstdint>
#include <memory>
#include <mutex>
#include <vector>

#include "qstat/gates.hpp"

namespace qstat {

/// Gate-level QFT on `reg` inside an n_qubits-wide circuit.
Circuit qft_circuit(int n_qubits, const Qubits &reg);

void qft(StateVector &s, const Qubits &reg);
void iqft(StateVector &s, const Qubits &reg);

/**
 * Dense unitary with cached repeated-squaring powers U^(2^j).
 * Each controlled power application is charged 2^j calls.
 */
class UnitaryAccessor {
  public:
    explicit UnitaryAccessor(CMat u, double tol = 1e-9);

    int n_qubits() const { return n_; }
    const CMat &matrix() const { return u_; }
    /// U^(2^j).
    const CMat &power(int j) const;

    std::uint64_t calls() const { return calls_->load(); }
    void add_calls(std::uint64_t k) const { calls_->fetch_add(k); }

  private:
    int n_;
    CMat u_;
    struct Cache {
        std::mutex mu;
        std::vector<std::unique_ptr<CMat>> powers;
    };
    std::shared_ptr<Cache> cache_;
    std::shared_ptr<std::atomic<std::uint64_t>> calls_;
};

/**
 * In-place QPE: Hadamards on `phase`, controlled U^(2^j) from phase[j] onto
 * `system`, then inverse QFT on `phase`. phase[0] is the least significant bit
 * of y, so y reads as a plain binary integer.
 */
void qpe_forward(StateVector &s, const UnitaryAccessor &u, const Qubits &system,
                 const Qubits &phase);
/// Exact inverse of qpe_forward (uncompute).
void qpe_inverse(StateVector &s, const UnitaryAccessor &u, const Qubits &system,
                 const Qubits &phase);

enum class ReadoutMode { Exact, Sampled };

struct QpeResult {
    int m = 0;
    /// Pr[y] for y in [0, 2^m).
    RVec distribution;
    /// Max-probability outcome (exact mode) or a sampled one.
    std::uint64_t y_hat = 0;
    double probability = 0.0;
    /// Joint state: system qubits low, phase register above them.
    StateVector state{1};
    std::uint64_t calls = 0;

    double theta() const { return static_cast<double>(y_hat) / static_cast<double>(1ULL << m); }
};

QpeResult qpe(const UnitaryAccessor &u, const StateVector &input, int m,
              ReadoutMode mode = ReadoutMode::Exact, std::uint64_t seed = 0);

/// Median of `reps` independent sampled QPE readouts.
std::uint64_t qpe_median(const UnitaryAccessor &u, const StateVector &input, int m, int reps,
                         std::uint64_t seed);

/// Fejer-kernel probability of reading y for phase theta on an m-bit register.
double qpe_outcome_probability(double theta, std::uint64_t y, int m);

} // namespace qstat
