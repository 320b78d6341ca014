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

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qstat/types.hpp"

namespace qstat::detail {

/// Integer held by `qubits` inside basis index `idx`.
inline std::uint64_t gather_bits(std::uint64_t idx, const Qubits &qubits) {
    std::uint64_t v = 0;
    for (std::size_t j = 0; j < qubits.size(); ++j) {
        v |= ((idx >> qubits[j]) & 1ULL) << j;
    }
    return v;
}

/// Scatter the low bits of `v` onto `qubits`.
inline std::uint64_t scatter_bits(std::uint64_t v, const Qubits &qubits) {
    std::uint64_t idx = 0;
    for (std::size_t j = 0; j < qubits.size(); ++j) {
        idx |= ((v >> j) & 1ULL) << qubits[j];
    }
    return idx;
}

inline std::uint64_t mask_of(const Qubits &qubits) {
    std::uint64_t m = 0;
    for (int q : qubits) {
        m |= 1ULL << q;
    }
    return m;
}

inline void check_qubits(const Qubits &qubits, int n_qubits, const char *what) {
    std::uint64_t seen = 0;
    for (int q : qubits) {
        if (q < 0 || q >= n_qubits) {
            throw Error(std::string(what) + ": qubit " + std::to_string(q) + " out of range");
        }
        if (seen & (1ULL << q)) {
            throw Error(std::string(what) + ": repeated qubit " + std::to_string(q));
        }
        seen |= 1ULL << q;
    }
}

inline Qubits range(int first, int count) {
    Qubits q(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        q[static_cast<std::size_t>(i)] = first + i;
    }
    return q;
}

} // namespace qstat::detail
