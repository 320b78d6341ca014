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

#include "qstat/state.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <istream>
#include <mutex>
#include <ostream>

#include <Eigen/Eigenvalues>

#include "bits.hpp"

namespace qstat {

using detail::gather_bits;

StateVector::StateVector(int n_qubits) : n_(n_qubits) {
    check_qubit_count(n_qubits);
    amps_ = CVec::Zero(Eigen::Index{1} << n_qubits);
    amps_[0] = 1.0;
}

StateVector StateVector::basis(int n_qubits, std::uint64_t index) {
    StateVector s(n_qubits);
    if (index >= s.dim()) {
        throw Error("basis index out of range");
    }
    s.amps_[0] = 0.0;
    s.amps_[static_cast<Eigen::Index>(index)] = 1.0;
    return s;
}

StateVector StateVector::uniform(int n_qubits) {
    StateVector s(n_qubits);
    s.amps_.setConstant(1.0 / std::sqrt(static_cast<double>(s.dim())));
    return s;
}

StateVector StateVector::from_amplitudes(CVec amplitudes, double tol) {
    const auto len = static_cast<std::size_t>(amplitudes.size());
    if (len < 2 || (len & (len - 1)) != 0) {
        throw Error("amplitude vector length must be a power of two >= 2");
    }
    const int n = qubits_for(len);
    check_qubit_count(n);
    if (std::abs(amplitudes.squaredNorm() - 1.0) > tol) {
        throw Error("amplitude vector is not normalized");
    }
    return StateVector(n, std::move(amplitudes));
}

StateVector StateVector::from_unnormalized(CVec amplitudes) {
    const double nrm = amplitudes.norm();
    if (!(nrm > 0.0) || !std::isfinite(nrm)) {
        throw Error("cannot normalize a zero or non-finite vector");
    }
    amplitudes /= nrm;
    return from_amplitudes(std::move(amplitudes));
}

void StateVector::renormalize() {
    const double nrm = amps_.norm();
    if (!(nrm > 0.0)) {
        throw Error("cannot renormalize the zero vector");
    }
    amps_ /= nrm;
}

RVec StateVector::probabilities() const { return amps_.cwiseAbs2(); }

RVec StateVector::marginal(const Qubits &qubits) const {
    detail::check_qubits(qubits, n_, "marginal");
    RVec p = RVec::Zero(Eigen::Index{1} << qubits.size());
    for (Eigen::Index i = 0; i < amps_.size(); ++i) {
        p[static_cast<Eigen::Index>(gather_bits(static_cast<std::uint64_t>(i), qubits))] +=
            std::norm(amps_[i]);
    }
    return p;
}

StateVector StateVector::tensor(const StateVector &high) const {
    check_qubit_count(n_ + high.n_);
    CVec out(amps_.size() * high.amps_.size());
    for (Eigen::Index h = 0; h < high.amps_.size(); ++h) {
        out.segment(h * amps_.size(), amps_.size()) = high.amps_[h] * amps_;
    }
    return StateVector(n_ + high.n_, std::move(out));
}

Qubits RegisterLayout::Register::qubits() const { return detail::range(first, count); }

const RegisterLayout::Register &RegisterLayout::add(const std::string &name, int count) {
    if (count < 1) {
        throw Error("register '" + name + "' must hold at least one qubit");
    }
    for (const auto &r : regs_) {
        if (r.name == name) {
            throw Error("duplicate register name '" + name + "'");
        }
    }
    regs_.push_back(Register{name, total_, count});
    total_ += count;
    return regs_.back();
}

const RegisterLayout::Register &RegisterLayout::at(const std::string &name) const {
    for (const auto &r : regs_) {
        if (r.name == name) {
            return r;
        }
    }
    throw Error("no register named '" + name + "'");
}

DensityMatrix::DensityMatrix(CMat rho, double tol) : rho_(std::move(rho)) {
    const auto d = static_cast<std::size_t>(rho_.rows());
    if (rho_.rows() != rho_.cols() || d < 2 || (d & (d - 1)) != 0) {
        throw Error("density matrix must be square with power-of-two dimension");
    }
    n_ = qubits_for(d);
    if (!is_hermitian(rho_, tol)) {
        throw Error("density matrix is not Hermitian");
    }
    if (std::abs(rho_.trace() - 1.0) > tol) {
        throw Error("density matrix trace differs from 1");
    }
    Eigen::SelfAdjointEigenSolver<CMat> es(rho_, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -tol) {
        throw Error("density matrix has a negative eigenvalue");
    }
}

double DensityMatrix::purity() const { return (rho_ * rho_).trace().real(); }

struct Observable::EigenCache {
    std::once_flag once;
    RVec values;
    CMat vectors;
};

Observable::Observable(CMat matrix, double tol)
    : k_(std::move(matrix)), eig_(std::make_shared<EigenCache>()) {
    if (!is_hermitian(k_, tol)) {
        throw Error("observable is not Hermitian");
    }
}

const Observable::EigenCache &Observable::eig() const {
    std::call_once(eig_->once, [this] {
        Eigen::SelfAdjointEigenSolver<CMat> es(k_);
        eig_->values = es.eigenvalues();
        eig_->vectors = es.eigenvectors();
    });
    return *eig_;
}

const RVec &Observable::eigenvalues() const { return eig().values; }
const CMat &Observable::eigenvectors() const { return eig().vectors; }

cplx inner_product(const StateVector &a, const StateVector &b) {
    if (a.dim() != b.dim()) {
        throw Error("inner_product: dimension mismatch");
    }
    return a.amplitudes().dot(b.amplitudes());
}

std::size_t sample_index(const RVec &p, Rng &rng) {
    const double total = p.sum();
    double u = rng.uniform() * total;
    for (Eigen::Index i = 0; i < p.size(); ++i) {
        u -= p[i];
        if (u < 0.0) {
            return static_cast<std::size_t>(i);
        }
    }
    for (Eigen::Index i = p.size() - 1; i >= 0; --i) {
        if (p[i] > 0.0) {
            return static_cast<std::size_t>(i);
        }
    }
    return 0;
}

MeasurementRecord measure_computational(const StateVector &s, const Qubits &qubits,
                                        std::uint64_t seed) {
    if (qubits.empty()) {
        throw Error("measure_computational: empty qubit set");
    }
    const RVec p = s.marginal(qubits);
    Rng rng(seed);
    const auto outcome = static_cast<std::uint64_t>(sample_index(p, rng));
    const double prob = p[static_cast<Eigen::Index>(outcome)];

    CVec post = s.amplitudes();
    for (Eigen::Index i = 0; i < post.size(); ++i) {
        if (gather_bits(static_cast<std::uint64_t>(i), qubits) != outcome) {
            post[i] = 0.0;
        }
    }
    post /= std::sqrt(prob);
    MeasurementRecord rec;
    rec.outcome = outcome;
    rec.value = static_cast<double>(outcome);
    rec.probability = prob;
    rec.post_state = StateVector::from_amplitudes(std::move(post), 1e-8);
    return rec;
}

MeasurementRecord measure_observable(const StateVector &s, const Observable &k,
                                     std::uint64_t seed) {
    if (k.dim() != s.dim()) {
        throw Error("measure_observable: dimension mismatch");
    }
    const CVec coeffs = k.eigenvectors().adjoint() * s.amplitudes();
    Rng rng(seed);
    const auto j = static_cast<Eigen::Index>(sample_index(coeffs.cwiseAbs2(), rng));
    MeasurementRecord rec;
    rec.outcome = static_cast<std::uint64_t>(j);
    rec.value = k.eigenvalues()[j];
    rec.probability = std::norm(coeffs[j]);
    CVec post = k.eigenvectors().col(j) * (coeffs[j] / std::abs(coeffs[j]));
    rec.post_state = StateVector::from_unnormalized(std::move(post));
    return rec;
}

std::vector<std::uint64_t> sample_counts(const StateVector &s, const Qubits &qubits,
                                         std::uint64_t shots, std::uint64_t seed) {
    const RVec p = s.marginal(qubits);
    std::vector<double> cdf(static_cast<std::size_t>(p.size()));
    double acc = 0.0;
    for (Eigen::Index i = 0; i < p.size(); ++i) {
        acc += p[i];
        cdf[static_cast<std::size_t>(i)] = acc;
    }
    std::vector<std::uint64_t> counts(cdf.size(), 0);
    Rng rng(seed);
    for (std::uint64_t k = 0; k < shots; ++k) {
        const double u = rng.uniform() * acc;
        auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
        if (it == cdf.end()) {
            --it;
        }
        ++counts[static_cast<std::size_t>(it - cdf.begin())];
    }
    return counts;
}

double expectation(const StateVector &s, const Observable &k) {
    if (k.dim() != s.dim()) {
        throw Error("expectation: dimension mismatch");
    }
    return s.amplitudes().dot(k.matrix() * s.amplitudes()).real();
}

DensityMatrix to_density(const StateVector &s) {
    return DensityMatrix(s.amplitudes() * s.amplitudes().adjoint());
}

DensityMatrix partial_trace(const DensityMatrix &rho, const Qubits &keep) {
    const int n = rho.n_qubits();
    if (keep.empty()) {
        throw Error("partial_trace: keep set is empty");
    }
    detail::check_qubits(keep, n, "partial_trace");
    Qubits traced;
    const std::uint64_t keep_mask = detail::mask_of(keep);
    for (int q = 0; q < n; ++q) {
        if (!(keep_mask & (1ULL << q))) {
            traced.push_back(q);
        }
    }
    const std::uint64_t dk = 1ULL << keep.size();
    const std::uint64_t dt = 1ULL << traced.size();
    CMat out = CMat::Zero(static_cast<Eigen::Index>(dk), static_cast<Eigen::Index>(dk));
    const CMat &m = rho.matrix();
    for (std::uint64_t a = 0; a < dk; ++a) {
        const std::uint64_t ia = detail::scatter_bits(a, keep);
        for (std::uint64_t b = 0; b < dk; ++b) {
            const std::uint64_t ib = detail::scatter_bits(b, keep);
            cplx acc = 0.0;
            for (std::uint64_t t = 0; t < dt; ++t) {
                const std::uint64_t it = detail::scatter_bits(t, traced);
                acc += m(static_cast<Eigen::Index>(ia | it), static_cast<Eigen::Index>(ib | it));
            }
            out(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = acc;
        }
    }
    return DensityMatrix(std::move(out), 1e-9);
}

double expectation(const DensityMatrix &rho, const Observable &k) {
    if (k.dim() != rho.dim()) {
        throw Error("expectation: dimension mismatch");
    }
    return (k.matrix() * rho.matrix()).trace().real();
}

CMat embed(const CMat &local, const Qubits &targets, int n_qubits) {
    detail::check_qubits(targets, n_qubits, "embed");
    const auto k = static_cast<Eigen::Index>(1ULL << targets.size());
    if (local.rows() != k || local.cols() != k) {
        throw Error("embed: local matrix size does not match target count");
    }
    const auto dim = static_cast<Eigen::Index>(1ULL << n_qubits);
    const std::uint64_t tmask = detail::mask_of(targets);
    CMat full = CMat::Zero(dim, dim);
    for (Eigen::Index c = 0; c < dim; ++c) {
        const auto uc = static_cast<std::uint64_t>(c);
        const std::uint64_t rest = uc & ~tmask;
        const auto lc = static_cast<Eigen::Index>(gather_bits(uc, targets));
        for (Eigen::Index lr = 0; lr < k; ++lr) {
            const std::uint64_t r = rest | detail::scatter_bits(static_cast<std::uint64_t>(lr), targets);
            full(static_cast<Eigen::Index>(r), c) = local(lr, lc);
        }
    }
    return full;
}

namespace {

constexpr char kMagic[4] = {'Q', 'S', 'V', '1'};

void put_u64(std::ostream &os, std::uint64_t v) {
    char b[8];
    for (int i = 0; i < 8; ++i) {
        b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
    }
    os.write(b, 8);
}

std::uint64_t get_u64(std::istream &is) {
    unsigned char b[8];
    if (!is.read(reinterpret_cast<char *>(b), 8)) {
        throw Error("state dump truncated");
    }
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) {
        v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    }
    return v;
}

void put_f64(std::ostream &os, double x) {
    std::uint64_t v;
    std::memcpy(&v, &x, sizeof v);
    put_u64(os, v);
}

double get_f64(std::istream &is) {
    const std::uint64_t v = get_u64(is);
    double x;
    std::memcpy(&x, &v, sizeof x);
    return x;
}

} // namespace

void write_state(std::ostream &os, const StateVector &s) {
    os.write(kMagic, 4);
    const auto n = static_cast<std::uint32_t>(s.n_qubits());
    char nb[4];
    for (int i = 0; i < 4; ++i) {
        nb[i] = static_cast<char>((n >> (8 * i)) & 0xff);
    }
    os.write(nb, 4);
    put_u64(os, 0);
    for (std::size_t i = 0; i < s.dim(); ++i) {
        put_f64(os, s[i].real());
        put_f64(os, s[i].imag());
    }
    if (!os) {
        throw Error("failed to write state dump");
    }
}

StateVector read_state(std::istream &is) {
    char hdr[16];
    if (!is.read(hdr, 16) || std::memcmp(hdr, kMagic, 4) != 0) {
        throw Error("not a QSV1 state dump");
    }
    std::uint32_t n = 0;
    for (int i = 0; i < 4; ++i) {
        n |= static_cast<std::uint32_t>(static_cast<unsigned char>(hdr[4 + i])) << (8 * i);
    }
    check_qubit_count(static_cast<int>(n));
    CVec amps(Eigen::Index{1} << n);
    for (Eigen::Index i = 0; i < amps.size(); ++i) {
        const double re = get_f64(is);
        const double im = get_f64(is);
        amps[i] = cplx(re, im);
    }
    return StateVector::from_amplitudes(std::move(amps), 1e-8);
}

void save_state(const std::string &path, const StateVector &s) {
    std::ofstream os(path, std::ios::binary);
    if (!os) {
        throw Error("cannot open " + path + " for writing");
    }
    write_state(os, s);
}

StateVector load_state(const std::string &path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) {
        throw Error("cannot open " + path);
    }
    return read_state(is);
}

} // namespace qstat
