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

// Reference constructions shared by the tests. Everything here is written
// from first principles so that it can serve as an oracle for the library.

#pragma once

#include <cmath>
#include <cstdint>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include "qstat/rng.hpp"
#include "qstat/state.hpp"
#include "qstat/types.hpp"

namespace qstat::test {

inline Qubits span(int first, int count) {
    Qubits q;
    for (int i = 0; i < count; ++i) {
        q.push_back(first + i);
    }
    return q;
}

inline CVec random_vector(Eigen::Index d, Rng &rng) {
    CVec v(d);
    for (Eigen::Index i = 0; i < d; ++i) {
        v[i] = cplx(rng.normal(), rng.normal());
    }
    return v;
}

inline StateVector random_state(int n, Rng &rng) {
    return StateVector::from_unnormalized(random_vector(Eigen::Index{1} << n, rng));
}

inline CMat random_matrix(Eigen::Index r, Eigen::Index c, Rng &rng) {
    CMat m(r, c);
    for (Eigen::Index i = 0; i < r; ++i) {
        for (Eigen::Index j = 0; j < c; ++j) {
            m(i, j) = cplx(rng.normal(), rng.normal());
        }
    }
    return m;
}

/// Haar-ish unitary: Q of a Gaussian matrix with the R diagonal phases removed.
inline CMat random_unitary(Eigen::Index d, Rng &rng) {
    Eigen::HouseholderQR<CMat> qr(random_matrix(d, d, rng));
    CMat q = qr.householderQ();
    const CMat r = qr.matrixQR();
    for (Eigen::Index i = 0; i < d; ++i) {
        q.col(i) *= std::polar(1.0, std::arg(r(i, i)));
    }
    return q;
}

inline CMat random_hermitian(Eigen::Index d, Rng &rng) {
    const CMat g = random_matrix(d, d, rng);
    return (g + g.adjoint()) / 2.0;
}

/// Hermitian with prescribed eigenvalues in a random eigenbasis.
inline CMat hermitian_with_spectrum(const RVec &ev, Rng &rng) {
    const CMat u = random_unitary(ev.size(), rng);
    return u * ev.cast<cplx>().asDiagonal() * u.adjoint();
}

inline CMat kron(const CMat &a, const CMat &b) {
    CMat k(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            k.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return k;
}

/**
 * Full 2^n matrix of `local` on `targets` (targets[0] = local LSB), fired when
 * every control is 1. Built entry by entry from basis-index arithmetic.
 */
inline CMat full_operator(const CMat &local, const Qubits &targets, const Qubits &controls, int n) {
    const Eigen::Index dim = Eigen::Index{1} << n;
    CMat out = CMat::Zero(dim, dim);
    for (Eigen::Index col = 0; col < dim; ++col) {
        bool on = true;
        for (int c : controls) {
            on = on && ((col >> c) & 1);
        }
        if (!on) {
            out(col, col) = 1.0;
            continue;
        }
        Eigen::Index in_local = 0;
        Eigen::Index rest = col;
        for (std::size_t k = 0; k < targets.size(); ++k) {
            in_local |= ((col >> targets[k]) & 1) << k;
            rest &= ~(Eigen::Index{1} << targets[k]);
        }
        for (Eigen::Index out_local = 0; out_local < local.rows(); ++out_local) {
            Eigen::Index row = rest;
            for (std::size_t k = 0; k < targets.size(); ++k) {
                row |= ((out_local >> k) & 1) << targets[k];
            }
            out(row, col) += local(out_local, in_local);
        }
    }
    return out;
}

inline CMat expm_hermitian(const CMat &h, double t) {
    Eigen::SelfAdjointEigenSolver<CMat> es(h);
    CVec ph(h.rows());
    for (Eigen::Index i = 0; i < h.rows(); ++i) {
        ph[i] = std::polar(1.0, -es.eigenvalues()[i] * t);
    }
    return es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();
}

inline double fidelity(const CVec &a, const CVec &b) {
    return std::norm(a.normalized().dot(b.normalized()));
}

/// Chebyshev T_d(x) by the three-term recurrence.
inline double chebyshev_t(int d, double x) {
    double t0 = 1.0;
    double t1 = x;
    if (d == 0) {
        return t0;
    }
    for (int k = 1; k < d; ++k) {
        const double t2 = 2.0 * x * t1 - t0;
        t0 = t1;
        t1 = t2;
    }
    return t1;
}

} // namespace qstat::test
