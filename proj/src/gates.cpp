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

#include "qstat/gates.hpp"

#include <algorithm>
#include <cmath>

#include "bits.hpp"

namespace qstat {

namespace {

struct KindName {
    GateKind kind;
    const char *name;
};

constexpr KindName kNames[] = {
    {GateKind::H, "H"},
    {GateKind::X, "X"},
    {GateKind::Y, "Y"},
    {GateKind::Z, "Z"},
    {GateKind::Rx, "Rx"},
    {GateKind::Ry, "Ry"},
    {GateKind::Rz, "Rz"},
    {GateKind::CNOT, "CNOT"},
    {GateKind::Toffoli, "Toffoli"},
    {GateKind::CSwap, "CSwap"},
    {GateKind::ControlledUnitary, "ControlledUnitary"},
    {GateKind::DenseUnitary, "DenseUnitary"},
};

CMat rotation(const CMat &pauli, double phi) {
    return std::cos(phi / 2) * CMat::Identity(2, 2) - kI * std::sin(phi / 2) * pauli;
}

CMat swap_matrix() {
    CMat s = CMat::Zero(4, 4);
    s(0, 0) = s(3, 3) = 1.0;
    s(1, 2) = s(2, 1) = 1.0;
    return s;
}

/// Spread the bits of i around zero bits at the sorted positions.
inline std::uint64_t insert_zeros(std::uint64_t i, const std::vector<int> &sorted_pos) {
    for (int p : sorted_pos) {
        const std::uint64_t low = i & ((1ULL << p) - 1);
        i = ((i >> p) << (p + 1)) | low;
    }
    return i;
}

CircuitOp simple(GateKind k, Qubits t, Qubits c = {}, double param = 0.0) {
    CircuitOp op;
    op.kind = k;
    op.targets = std::move(t);
    op.controls = std::move(c);
    op.param = param;
    return op;
}

} // namespace

CMat pauli_x() {
    CMat m = CMat::Zero(2, 2);
    m(0, 1) = m(1, 0) = 1.0;
    return m;
}

CMat pauli_y() {
    CMat m = CMat::Zero(2, 2);
    m(0, 1) = -kI;
    m(1, 0) = kI;
    return m;
}

CMat pauli_z() {
    CMat m = CMat::Zero(2, 2);
    m(0, 0) = 1.0;
    m(1, 1) = -1.0;
    return m;
}

CMat hadamard() {
    CMat m(2, 2);
    const double r = 1.0 / std::sqrt(2.0);
    m << r, r, r, -r;
    return m;
}

std::string to_string(GateKind k) {
    for (const auto &kn : kNames) {
        if (kn.kind == k) {
            return kn.name;
        }
    }
    return "?";
}

GateKind gate_kind_from_string(const std::string &s) {
    for (const auto &kn : kNames) {
        if (s == kn.name) {
            return kn.kind;
        }
    }
    throw Error("unknown gate kind '" + s + "'");
}

CircuitOp CircuitOp::h(int t) { return simple(GateKind::H, {t}); }
CircuitOp CircuitOp::x(int t) { return simple(GateKind::X, {t}); }
CircuitOp CircuitOp::y(int t) { return simple(GateKind::Y, {t}); }
CircuitOp CircuitOp::z(int t) { return simple(GateKind::Z, {t}); }
CircuitOp CircuitOp::rx(int t, double phi) { return simple(GateKind::Rx, {t}, {}, phi); }
CircuitOp CircuitOp::ry(int t, double phi) { return simple(GateKind::Ry, {t}, {}, phi); }
CircuitOp CircuitOp::rz(int t, double phi) { return simple(GateKind::Rz, {t}, {}, phi); }
CircuitOp CircuitOp::cnot(int c, int t) { return simple(GateKind::CNOT, {t}, {c}); }
CircuitOp CircuitOp::toffoli(int c0, int c1, int t) {
    return simple(GateKind::Toffoli, {t}, {c0, c1});
}
CircuitOp CircuitOp::cswap(int c, int t0, int t1) {
    return simple(GateKind::CSwap, {t0, t1}, {c});
}

CircuitOp CircuitOp::controlled(const CMat &u, Qubits controls, Qubits targets) {
    if (!is_unitary(u)) {
        throw Error("ControlledUnitary matrix is not unitary");
    }
    if (u.rows() != static_cast<Eigen::Index>(1ULL << targets.size())) {
        throw Error("ControlledUnitary matrix size does not match target count");
    }
    CircuitOp op = simple(GateKind::ControlledUnitary, std::move(targets), std::move(controls));
    op.matrix = std::make_shared<const CMat>(u);
    return op;
}

CircuitOp CircuitOp::dense(const CMat &u, Qubits targets) {
    if (!is_unitary(u)) {
        throw Error("DenseUnitary matrix is not unitary");
    }
    if (u.rows() != static_cast<Eigen::Index>(1ULL << targets.size())) {
        throw Error("DenseUnitary matrix size does not match target count");
    }
    CircuitOp op = simple(GateKind::DenseUnitary, std::move(targets));
    op.matrix = std::make_shared<const CMat>(u);
    return op;
}

CMat CircuitOp::local_matrix() const {
    switch (kind) {
    case GateKind::H:
        return hadamard();
    case GateKind::X:
    case GateKind::CNOT:
    case GateKind::Toffoli:
        return pauli_x();
    case GateKind::Y:
        return pauli_y();
    case GateKind::Z:
        return pauli_z();
    case GateKind::Rx:
        return rotation(pauli_x(), param);
    case GateKind::Ry:
        return rotation(pauli_y(), param);
    case GateKind::Rz:
        return rotation(pauli_z(), param);
    case GateKind::CSwap:
        return swap_matrix();
    case GateKind::ControlledUnitary:
    case GateKind::DenseUnitary:
        if (!matrix) {
            throw Error(to_string(kind) + " op carries no matrix");
        }
        return *matrix;
    }
    throw Error("unhandled gate kind");
}

CircuitOp CircuitOp::dagger() const {
    CircuitOp d = *this;
    switch (kind) {
    case GateKind::Rx:
    case GateKind::Ry:
    case GateKind::Rz:
        d.param = -param;
        break;
    case GateKind::ControlledUnitary:
    case GateKind::DenseUnitary:
        d.matrix = std::make_shared<const CMat>(matrix->adjoint());
        break;
    default:
        break;
    }
    return d;
}

Circuit::Circuit(int n_qubits) : n_(n_qubits) { check_qubit_count(n_qubits); }

Circuit &Circuit::append(CircuitOp op) {
    Qubits all = op.targets;
    all.insert(all.end(), op.controls.begin(), op.controls.end());
    detail::check_qubits(all, n_, "Circuit::append");
    ops_.push_back(std::move(op));
    return *this;
}

Circuit &Circuit::append(const Circuit &other) {
    if (other.n_ > n_) {
        throw Error("Circuit::append: appended circuit is wider");
    }
    for (const auto &op : other.ops_) {
        ops_.push_back(op);
    }
    return *this;
}

Circuit Circuit::inverse() const {
    Circuit inv(n_);
    inv.ops_.reserve(ops_.size());
    for (auto it = ops_.rbegin(); it != ops_.rend(); ++it) {
        inv.ops_.push_back(it->dagger());
    }
    return inv;
}

void Circuit::apply(StateVector &s) const {
    if (s.n_qubits() != n_) {
        throw Error("Circuit::apply: width mismatch");
    }
    for (const auto &op : ops_) {
        qstat::apply(op, s);
    }
}

CMat Circuit::matrix() const {
    const auto dim = static_cast<Eigen::Index>(1ULL << n_);
    CMat m(dim, dim);
    for (Eigen::Index c = 0; c < dim; ++c) {
        StateVector s = StateVector::basis(n_, static_cast<std::uint64_t>(c));
        apply(s);
        m.col(c) = s.amplitudes();
    }
    return m;
}

void apply(const CircuitOp &op, StateVector &s) {
    apply_matrix(s, op.local_matrix(), op.targets, op.controls);
}

void apply_matrix(StateVector &s, const CMat &u, const Qubits &targets, const Qubits &controls) {
    const int n = s.n_qubits();
    Qubits all = targets;
    all.insert(all.end(), controls.begin(), controls.end());
    detail::check_qubits(all, n, "apply_matrix");
    if (targets.empty()) {
        throw Error("apply_matrix: no target qubits");
    }
    const std::size_t k = targets.size();
    const auto kdim = static_cast<Eigen::Index>(1ULL << k);
    if (u.rows() != kdim || u.cols() != kdim) {
        throw Error("apply_matrix: matrix size does not match target count");
    }

    std::vector<int> sorted_t(targets.begin(), targets.end());
    std::sort(sorted_t.begin(), sorted_t.end());
    const std::uint64_t cmask = detail::mask_of(controls);
    const std::uint64_t outer = s.dim() >> k;
    CVec &a = s.data();

    if (k == 1) {
        const std::uint64_t stride = 1ULL << targets[0];
        const cplx u00 = u(0, 0), u01 = u(0, 1), u10 = u(1, 0), u11 = u(1, 1);
        for (std::uint64_t i = 0; i < outer; ++i) {
            const std::uint64_t i0 = insert_zeros(i, sorted_t);
            if ((i0 & cmask) != cmask) {
                continue;
            }
            const auto p0 = static_cast<Eigen::Index>(i0);
            const auto p1 = static_cast<Eigen::Index>(i0 | stride);
            const cplx a0 = a[p0];
            const cplx a1 = a[p1];
            a[p0] = u00 * a0 + u01 * a1;
            a[p1] = u10 * a0 + u11 * a1;
        }
        return;
    }

    std::vector<std::uint64_t> offs(static_cast<std::size_t>(kdim));
    for (std::uint64_t j = 0; j < offs.size(); ++j) {
        offs[j] = detail::scatter_bits(j, targets);
    }
    CVec buf(kdim);
    CVec out(kdim);
    for (std::uint64_t i = 0; i < outer; ++i) {
        const std::uint64_t base = insert_zeros(i, sorted_t);
        if ((base & cmask) != cmask) {
            continue;
        }
        for (Eigen::Index j = 0; j < kdim; ++j) {
            buf[j] = a[static_cast<Eigen::Index>(base | offs[static_cast<std::size_t>(j)])];
        }
        out.noalias() = u * buf;
        for (Eigen::Index j = 0; j < kdim; ++j) {
            a[static_cast<Eigen::Index>(base | offs[static_cast<std::size_t>(j)])] = out[j];
        }
    }
}

void apply_diagonal(StateVector &s, const Qubits &qubits,
                    const std::function<cplx(std::uint64_t)> &phase) {
    detail::check_qubits(qubits, s.n_qubits(), "apply_diagonal");
    const std::uint64_t kdim = 1ULL << qubits.size();
    std::vector<cplx> table(kdim);
    for (std::uint64_t v = 0; v < kdim; ++v) {
        table[v] = phase(v);
        if (std::abs(std::abs(table[v]) - 1.0) > 1e-10) {
            throw Error("apply_diagonal: entry is not a unit-modulus phase");
        }
    }
    CVec &a = s.data();
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        a[i] *= table[detail::gather_bits(static_cast<std::uint64_t>(i), qubits)];
    }
}

void walsh_hadamard(StateVector &s, const Qubits &qubits) {
    const CMat h = hadamard();
    for (int q : qubits) {
        apply_matrix(s, h, {q});
    }
}

void controlled_rotation_f(StateVector &s, const Qubits &data, int aux,
                           const std::function<double(std::uint64_t)> &f) {
    Qubits all = data;
    all.push_back(aux);
    detail::check_qubits(all, s.n_qubits(), "controlled_rotation_f");
    const std::uint64_t kdim = 1ULL << data.size();
    std::vector<double> c(kdim), sn(kdim);
    for (std::uint64_t x = 0; x < kdim; ++x) {
        const double v = f(x);
        if (!std::isfinite(v)) {
            throw Error("controlled_rotation_f: f(" + std::to_string(x) + ") is not finite");
        }
        c[x] = std::cos(v);
        sn[x] = std::sin(v);
    }
    const std::uint64_t stride = 1ULL << aux;
    CVec &a = s.data();
    const std::vector<int> pos{aux};
    for (std::uint64_t i = 0; i < (s.dim() >> 1); ++i) {
        const std::uint64_t i0 = insert_zeros(i, pos);
        const std::uint64_t x = detail::gather_bits(i0, data);
        const auto p0 = static_cast<Eigen::Index>(i0);
        const auto p1 = static_cast<Eigen::Index>(i0 | stride);
        const cplx a0 = a[p0];
        const cplx a1 = a[p1];
        a[p0] = c[x] * a0 - sn[x] * a1;
        a[p1] = sn[x] * a0 + c[x] * a1;
    }
}

StateVector project(const StateVector &s, const Qubits &qubits, std::uint64_t value,
                    double *probability) {
    detail::check_qubits(qubits, s.n_qubits(), "project");
    CVec a = s.amplitudes();
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        if (detail::gather_bits(static_cast<std::uint64_t>(i), qubits) != value) {
            a[i] = 0.0;
        }
    }
    const double p = a.squaredNorm();
    if (probability != nullptr) {
        *probability = p;
    }
    if (p <= 1e-14) {
        throw Error("project: branch has zero probability");
    }
    a /= std::sqrt(p);
    return StateVector::from_amplitudes(std::move(a), 1e-8);
}

PostselectResult postselect(const StateVector &s, const Qubits &qubits, std::uint64_t value,
                            PostselectMode mode, std::uint64_t seed) {
    detail::check_qubits(qubits, s.n_qubits(), "postselect");
    if (qubits.empty()) {
        throw Error("postselect: empty qubit set");
    }
    if (value >= (1ULL << qubits.size())) {
        throw Error("postselect: value does not fit the register");
    }
    const int n = s.n_qubits();
    const int rest_n = n - static_cast<int>(qubits.size());
    Qubits rest;
    const std::uint64_t mask = detail::mask_of(qubits);
    for (int q = 0; q < n; ++q) {
        if (!(mask & (1ULL << q))) {
            rest.push_back(q);
        }
    }
    const std::uint64_t fixed = detail::scatter_bits(value, qubits);
    const std::uint64_t rdim = rest_n > 0 ? (1ULL << rest_n) : 1;
    CVec out(static_cast<Eigen::Index>(rdim));
    for (std::uint64_t r = 0; r < rdim; ++r) {
        out[static_cast<Eigen::Index>(r)] =
            s[fixed | detail::scatter_bits(r, rest)];
    }
    const double p = out.squaredNorm();
    if (p <= 1e-14) {
        throw Error("postselect: branch has zero probability");
    }
    PostselectResult res;
    res.probability = p;
    if (mode == PostselectMode::Sampled) {
        Rng rng(seed);
        std::uint64_t tries = 1;
        while (rng.uniform() >= p) {
            ++tries;
        }
        res.attempts = tries;
    }
    if (rest_n == 0) {
        // Nothing left: return the trivial one-qubit |0> carrier.
        res.state = StateVector(1);
        return res;
    }
    out /= std::sqrt(p);
    res.state = StateVector::from_amplitudes(std::move(out), 1e-8);
    return res;
}

PostselectResult postselect(const StateVector &s, int qubit, int bit, PostselectMode mode,
                            std::uint64_t seed) {
    if (bit != 0 && bit != 1) {
        throw Error("postselect: bit must be 0 or 1");
    }
    return postselect(s, Qubits{qubit}, static_cast<std::uint64_t>(bit), mode, seed);
}

} // namespace qstat
