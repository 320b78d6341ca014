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

#include "qstat/types.hpp"

#include <cstdlib>
#include <string>

namespace qstat {

int max_qubits() {
    const char *env = std::getenv("QSTAT_MAX_QUBITS");
    if (env == nullptr || *env == '\0') {
        return kHardQubitCap;
    }
    char *end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || v < 1) {
        throw ConfigError(std::string("QSTAT_MAX_QUBITS is not a positive integer: ") + env);
    }
    return v > kHardQubitCap ? kHardQubitCap : static_cast<int>(v);
}

void check_qubit_count(int n) {
    if (n < 1) {
        throw Error("register must hold at least one qubit");
    }
    if (n > max_qubits()) {
        throw Error("state of " + std::to_string(n) + " qubits exceeds cap of " +
                    std::to_string(max_qubits()));
    }
}

int qubits_for(std::size_t dim) {
    int n = 1;
    while ((std::size_t{1} << n) < dim) {
        ++n;
    }
    return n;
}

bool is_unitary(const CMat &u, double tol) {
    if (u.rows() != u.cols() || u.rows() == 0) {
        return false;
    }
    const CMat r = u.adjoint() * u - CMat::Identity(u.rows(), u.cols());
    return r.cwiseAbs().maxCoeff() <= tol;
}

bool is_hermitian(const CMat &h, double tol) {
    if (h.rows() != h.cols()) {
        return false;
    }
    return (h - h.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

} // namespace qstat
