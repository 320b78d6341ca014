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

#include "qstat/rng.hpp"

#include <cmath>

#include "qstat/types.hpp"

namespace qstat {

std::uint64_t Rng::below(std::uint64_t n) {
    if (n == 0) {
        throw Error("Rng::below: empty range");
    }
    const std::uint64_t limit = max() - max() % n;
    std::uint64_t r;
    do {
        r = (*this)();
    } while (r >= limit);
    return r % n;
}

double Rng::normal() {
    double u1 = uniform();
    while (u1 <= 0.0) {
        u1 = uniform();
    }
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
}

Rng Rng::split(std::uint64_t stream) const {
    return Rng(mix(key_ ^ mix(stream + kGamma)), 0);
}

} // namespace qstat
