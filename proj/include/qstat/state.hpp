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
 * Pure and mixed state containers, measurement and reductions.
 *
 * Qubit 0 is the least-significant bit of a basis index.
 */

#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "qstat/rng.hpp"
#include "qstat/types.hpp"

namespace qstat {

class StateVector {
  public:
    /// |0...0> on n qubits.
    explicit StateVector(int n_qubits);

    static StateVector basis(int n_qubits, std::uint64_t index);
    /// Uniform superposition over all 2^n basis states.
    static StateVector uniform(int n_qubits);
    /// Takes ownership of amplitudes; length must be 2^n and norm 1 within tol.
    static StateVector from_amplitudes(CVec amplitudes, double tol = 1e-10);
    /// Normalizes first; rejects the zero vector.
    static StateVector from_unnormalized(CVec amplitudes);

    int n_qubits() const { return n_; }
    std::size_t dim() const { return static_cast<std::size_t>(amps_.size()); }

    const CVec &amplitudes() const { return amps_; }
    /// In-place kernel access. Callers own the norm invariant.
    CVec &data() { return amps_; }

    cplx operator[](std::size_t i) const { return amps_[static_cast<Eigen::Index>(i)]; }

    double norm() const { return amps_.norm(); }
    void renormalize();

    /// Born probabilities of every basis index.
    RVec probabilities() const;
    /// Distribution of the integer held by `qubits` (qubits[0] is its LSB).
    RVec marginal(const Qubits &qubits) const;

    /// this ⊗ high: this occupies the low qubits.
    StateVector tensor(const StateVector &high) const;

  private:
    StateVector(int n, CVec amps) : n_(n), amps_(std::move(amps)) {}

    int n_;
    CVec amps_;
};

/// Named contiguous qubit ranges.
class RegisterLayout {
  public:
    struct Register {
        std::string name;
        int first = 0;
        int count = 0;
        Qubits qubits() const;
    };

    /// Appends a register above the existing ones.
    const Register &add(const std::string &name, int count);
    const Register &at(const std::string &name) const;
    int total_qubits() const { return total_; }
    const std::vector<Register> &registers() const { return regs_; }

  private:
    std::vector<Register> regs_;
    int total_ = 0;
};

class DensityMatrix {
  public:
    explicit DensityMatrix(CMat rho, double tol = 1e-10);

    int n_qubits() const { return n_; }
    std::size_t dim() const { return static_cast<std::size_t>(rho_.rows()); }
    const CMat &matrix() const { return rho_; }
    double purity() const;
    cplx trace() const { return rho_.trace(); }

  private:
    int n_;
    CMat rho_;
};

class Observable {
  public:
    explicit Observable(CMat matrix, double tol = 1e-10);

    const CMat &matrix() const { return k_; }
    std::size_t dim() const { return static_cast<std::size_t>(k_.rows()); }
    /// Ascending eigenvalues; computed once and shared between copies.
    const RVec &eigenvalues() const;
    const CMat &eigenvectors() const;

  private:
    struct EigenCache;
    CMat k_;
    std::shared_ptr<EigenCache> eig_;
    const EigenCache &eig() const;
};

struct MeasurementRecord {
    /// Basis index of the measured register, or eigenvector index for observables.
    std::uint64_t outcome = 0;
    /// Observable eigenvalue; equals the outcome for computational measurements.
    double value = 0.0;
    double probability = 0.0;
    StateVector post_state{1};
};

cplx inner_product(const StateVector &a, const StateVector &b);

MeasurementRecord measure_computational(const StateVector &s, const Qubits &qubits,
                                        std::uint64_t seed);
/// Eigenbasis measurement of an observable.
MeasurementRecord measure_observable(const StateVector &s, const Observable &k,
                                     std::uint64_t seed);

/// Histogram of `shots` independent register readouts (length 2^|qubits|).
std::vector<std::uint64_t> sample_counts(const StateVector &s, const Qubits &qubits,
                                         std::uint64_t shots, std::uint64_t seed);

/// Inverse-CDF draw from a discrete distribution.
std::size_t sample_index(const RVec &p, Rng &rng);

double expectation(const StateVector &s, const Observable &k);

DensityMatrix to_density(const StateVector &s);
/// Reduced state on `keep` (keep[0] becomes qubit 0 of the result).
DensityMatrix partial_trace(const DensityMatrix &rho, const Qubits &keep);
/// tr(K rho).
double expectation(const DensityMatrix &rho, const Observable &k);

/// Dense 2^n x 2^n embedding of a local matrix acting on `targets`.
CMat embed(const CMat &local, const Qubits &targets, int n_qubits);

void write_state(std::ostream &os, const StateVector &s);
StateVector read_state(std::istream &is);
void save_state(const std::string &path, const StateVector &s);
StateVector load_state(const std::string &path);

} // namespace qstat
