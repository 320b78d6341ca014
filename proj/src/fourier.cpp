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

#include "qstat/fourier.hpp"

#include <algorithm>
#include <cmath>

#include "bits.hpp"

namespace qstat {

namespace {

CMat phase_gate(double theta) {
    CMat p = CMat::Identity(2, 2);
    p(1, 1) = std::polar(1.0, theta);
    return p;
}

} // namespace

Circuit qft_circuit(int n_qubits, const Qubits &reg) {
    detail::check_qubits(reg, n_qubits, "qft");
    Circuit c(n_qubits);
    const int n = static_cast<int>(reg.size());
    for (int j = n - 1; j >= 0; --j) {
        c.append(CircuitOp::h(reg[static_cast<std::size_t>(j)]));
        for (int k = j - 1; k >= 0; --k) {
            const double theta = 2.0 * kPi / static_cast<double>(1ULL << (j - k + 1));
            c.append(CircuitOp::controlled(phase_gate(theta), {reg[static_cast<std::size_t>(k)]},
                                           {reg[static_cast<std::size_t>(j)]}));
        }
    }
    const CMat sw = [] {
        CMat s = CMat::Zero(4, 4);
        s(0, 0) = s(3, 3) = s(1, 2) = s(2, 1) = 1.0;
        return s;
    }();
    for (int i = 0; i < n / 2; ++i) {
        c.append(CircuitOp::dense(sw, {reg[static_cast<std::size_t>(i)],
                                       reg[static_cast<std::size_t>(n - 1 - i)]}));
    }
    return c;
}

void qft(StateVector &s, const Qubits &reg) { qft_circuit(s.n_qubits(), reg).apply(s); }

void iqft(StateVector &s, const Qubits &reg) {
    qft_circuit(s.n_qubits(), reg).inverse().apply(s);
}

UnitaryAccessor::UnitaryAccessor(CMat u, double tol)
    : u_(std::move(u)), cache_(std::make_shared<Cache>()),
      calls_(std::make_shared<std::atomic<std::uint64_t>>(0)) {
    const auto d = static_cast<std::size_t>(u_.rows());
    if (u_.rows() != u_.cols() || d < 2 || (d & (d - 1)) != 0) {
        throw Error("UnitaryAccessor: matrix must be square with power-of-two size");
    }
    if (!is_unitary(u_, tol)) {
        throw Error("UnitaryAccessor: matrix is not unitary");
    }
    n_ = qubits_for(d);
}

const CMat &UnitaryAccessor::power(int j) const {
    if (j < 0 || j > 62) {
        throw Error("UnitaryAccessor: power index out of range");
    }
    std::lock_guard<std::mutex> lock(cache_->mu);
    auto &p = cache_->powers;
    if (p.empty()) {
        p.push_back(std::make_unique<CMat>(u_));
    }
    while (static_cast<int>(p.size()) <= j) {
        const CMat &last = *p.back();
        p.push_back(std::make_unique<CMat>(last * last));
    }
    return *p[static_cast<std::size_t>(j)];
}

void qpe_forward(StateVector &s, const UnitaryAccessor &u, const Qubits &system,
                 const Qubits &phase) {
    if (phase.empty()) {
        throw Error("qpe: phase register must hold at least one qubit");
    }
    if (static_cast<int>(system.size()) != u.n_qubits()) {
        throw Error("qpe: system register width differs from the unitary");
    }
    walsh_hadamard(s, phase);
    for (std::size_t j = 0; j < phase.size(); ++j) {
        apply_matrix(s, u.power(static_cast<int>(j)), system, {phase[j]});
        u.add_calls(1ULL << j);
    }
    iqft(s, phase);
}

void qpe_inverse(StateVector &s, const UnitaryAccessor &u, const Qubits &system,
                 const Qubits &phase) {
    qft(s, phase);
    for (std::size_t jj = phase.size(); jj-- > 0;) {
        apply_matrix(s, u.power(static_cast<int>(jj)).adjoint(), system, {phase[jj]});
        u.add_calls(1ULL << jj);
    }
    walsh_hadamard(s, phase);
}

QpeResult qpe(const UnitaryAccessor &u, const StateVector &input, int m, ReadoutMode mode,
              std::uint64_t seed) {
    if (m < 1) {
        throw Error("qpe: m must be at least 1");
    }
    if (input.n_qubits() != u.n_qubits()) {
        throw Error("qpe: input width differs from the unitary");
    }
    const int ns = input.n_qubits();
    QpeResult r;
    r.m = m;
    r.state = input.tensor(StateVector(m));
    const Qubits system = detail::range(0, ns);
    const Qubits phase = detail::range(ns, m);
    const std::uint64_t before = u.calls();
    qpe_forward(r.state, u, system, phase);
    r.calls = u.calls() - before;
    r.distribution = r.state.marginal(phase);
    if (mode == ReadoutMode::Exact) {
        Eigen::Index best = 0;
        r.distribution.maxCoeff(&best);
        r.y_hat = static_cast<std::uint64_t>(best);
    } else {
        Rng rng(seed);
        r.y_hat = static_cast<std::uint64_t>(sample_index(r.distribution, rng));
    }
    r.probability = r.distribution[static_cast<Eigen::Index>(r.y_hat)];
    return r;
}

std::uint64_t qpe_median(const UnitaryAccessor &u, const StateVector &input, int m, int reps,
                         std::uint64_t seed) {
    if (reps < 1) {
        throw Error("qpe_median: reps must be positive");
    }
    const QpeResult base = qpe(u, input, m);
    Rng rng(seed);
    std::vector<std::uint64_t> ys;
    for (int k = 0; k < reps; ++k) {
        ys.push_back(static_cast<std::uint64_t>(sample_index(base.distribution, rng)));
    }
    u.add_calls(base.calls * static_cast<std::uint64_t>(reps - 1));
    std::nth_element(ys.begin(), ys.begin() + reps / 2, ys.end());
    return ys[static_cast<std::size_t>(reps / 2)];
}

double qpe_outcome_probability(double theta, std::uint64_t y, int m) {
    const double big_n = static_cast<double>(1ULL << m);
    double delta = theta - static_cast<double>(y) / big_n;
    delta -= std::round(delta);
    const double den = std::sin(kPi * delta);
    if (std::abs(den) < 1e-15) {
        return 1.0;
    }
    const double num = std::sin(kPi * big_n * delta);
    return (num * num) / (big_n * big_n * den * den);
}

} // namespace qstat
