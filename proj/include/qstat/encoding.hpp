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
 * Classical data loaders and the query oracles every algorithm consumes.
 *
 * Oracles are backed by host-side tables. Each quantum application bumps an
 * atomic call counter; the counters are the cost model for benchmarks.
 */

#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "qstat/state.hpp"

namespace qstat {

/// x / |x| on ceil(log2 len) qubits, zero-padded at the high indices.
StateVector amplitude_encode(const CVec &x);
StateVector amplitude_encode(const std::vector<double> &x);

/// Uniform superposition of the given bitstrings ("01" is index 1).
StateVector basis_encode(const std::vector<std::string> &bitstrings);

/// Amplitudes sqrt(p_i).
StateVector qsample_encode(const std::vector<double> &p);

/// |x>|y> -> |x>|y xor f(x)>.
class FunctionOracle {
  public:
    FunctionOracle(int domain_bits, int codomain_bits, std::vector<std::uint64_t> table);
    static FunctionOracle from_function(int domain_bits, int codomain_bits,
                                        const std::function<std::uint64_t(std::uint64_t)> &f);

    FunctionOracle(const FunctionOracle &o);
    FunctionOracle &operator=(const FunctionOracle &o);

    int domain_bits() const { return n_; }
    int codomain_bits() const { return m_; }
    std::uint64_t domain_size() const { return table_.size(); }

    /// Classical evaluation; counted separately from quantum calls.
    std::uint64_t evaluate(std::uint64_t x) const;

    void apply(StateVector &s, const Qubits &in, const Qubits &out) const;
    /// Phase kickback form (-1)^{f(x)} for 0/1-valued oracles; one call.
    void apply_phase_flip(StateVector &s, const Qubits &in) const;

    std::uint64_t calls() const { return calls_.load(); }
    std::uint64_t classical_calls() const { return classical_calls_.load(); }
    void add_calls(std::uint64_t k) const { calls_.fetch_add(k); }
    void reset_calls() const;

    const std::vector<std::uint64_t> &table() const { return table_; }

  private:
    int n_;
    int m_;
    std::vector<std::uint64_t> table_;
    mutable std::atomic<std::uint64_t> calls_{0};
    mutable std::atomic<std::uint64_t> classical_calls_{0};
};

/// |y> -> exp(i g(y)) |y>.
class PhaseOracle {
  public:
    PhaseOracle(int bits, std::function<double(std::uint64_t)> g);
    PhaseOracle(const PhaseOracle &o);

    int bits() const { return n_; }
    void apply(StateVector &s, const Qubits &qubits) const;
    std::uint64_t calls() const { return calls_.load(); }

  private:
    int n_;
    std::vector<double> phases_;
    mutable std::atomic<std::uint64_t> calls_{0};
};

/// Row-sparse Hermitian matrix with entry and neighbour queries.
class SparseHamiltonianAccess {
  public:
    /// Entries with |h| <= drop_tol are treated as structural zeros.
    explicit SparseHamiltonianAccess(const CMat &h, double drop_tol = 1e-14);

    std::size_t dim() const { return static_cast<std::size_t>(h_.rows()); }
    /// Max nonzeros in any row (at least 1).
    std::size_t sparsity() const { return d_; }
    cplx entry(std::size_t j, std::size_t k) const;
    /// Column of the l-th nonzero in row j, or dim() when row j has fewer than l+1.
    std::size_t column(std::size_t j, std::size_t l) const;
    const std::vector<std::size_t> &row(std::size_t j) const { return rows_[j]; }

    double spectral_norm() const { return norm2_; }
    /// Induced 1-norm: max absolute row sum.
    double one_norm() const { return norm1_; }
    double max_norm() const { return normmax_; }
    double frobenius_norm() const { return normf_; }

    const CMat &dense() const { return h_; }

  private:
    CMat h_;
    std::vector<std::vector<std::size_t>> rows_;
    std::size_t d_ = 1;
    double norm2_ = 0, norm1_ = 0, normmax_ = 0, normf_ = 0;
};

/// One row per vector; blank lines and '#' comments skipped.
RMat load_csv_matrix(const std::string &path);

/// MatrixMarket coordinate file (real/complex, general/symmetric/hermitian).
CMat load_matrix_market(const std::string &path);
/// JSON array of probabilities.
std::vector<double> load_probability_json(const std::string &path);

} // namespace qstat
