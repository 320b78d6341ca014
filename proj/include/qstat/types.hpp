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
 * Shared numeric aliases, error type and qubit-count limits.
 */

#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace qstat {

using cplx = std::complex<double>;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;
using RVec = Eigen::VectorXd;
using RMat = Eigen::MatrixXd;
using Qubits = std::vector<int>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr cplx kI{0.0, 1.0};

/// Absolute ceiling on simulated register width.
inline constexpr int kHardQubitCap = 24;

class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Thrown for malformed user input (configs, files, schemas).
class ConfigError : public Error {
  public:
    using Error::Error;
};

/// Current qubit cap: QSTAT_MAX_QUBITS if set, clamped to kHardQubitCap.
int max_qubits();

/// Throws unless 1 <= n <= max_qubits().
void check_qubit_count(int n);

/// Smallest n with 2^n >= dim (at least 1).
int qubits_for(std::size_t dim);

bool is_unitary(const CMat &u, double tol = 1e-10);
bool is_hermitian(const CMat &h, double tol = 1e-10);

} // namespace qstat
