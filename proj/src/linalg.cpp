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

#include "qstat/linalg.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>

#include "bits.hpp"

namespace qstat {

namespace {

std::int64_t signed_readout(std::uint64_t y, int m) {
    const auto big = static_cast<std::int64_t>(1ULL << m);
    const auto v = static_cast<std::int64_t>(y);
    return v >= big / 2 ? v - big : v;
}

double max_row_sum(const CMat &h) { return h.cwiseAbs().rowwise().sum().maxCoeff(); }

/// exp(i pi h / scale): phase lambda / (2 scale) per eigenvector.
CMat phase_unitary(const CMat &h, double scale) {
    Eigen::SelfAdjointEigenSolver<CMat> es(h);
    const RVec &w = es.eigenvalues();
    CVec d(w.size());
    for (Eigen::Index i = 0; i < w.size(); ++i) {
        d[i] = std::polar(1.0, kPi * w[i] / scale);
    }
    return es.eigenvectors() * d.asDiagonal() * es.eigenvectors().adjoint();
}

/// QPE, rotate an auxiliary by asin(amp(lambda~)), uncompute, keep aux = 1 and phase = 0.
/// amp returns a value in [-1, 1], or nullopt to drop the estimate.
QpeTransformResult qpe_transform(const CMat &h, const StateVector &psi, int m, double scale,
                                 double c,
                                 const std::function<std::optional<double>(double)> &amp) {
    if (m < 2) {
        throw Error("phase register needs at least two qubits");
    }
    if (h.rows() != h.cols() || static_cast<std::size_t>(h.rows()) != psi.dim()) {
        throw Error("operator and state dimensions differ");
    }
    if (!is_hermitian(h, 1e-10)) {
        throw Error("operator is not Hermitian");
    }
    const int n = psi.n_qubits();
    check_qubit_count(n + m + 1);
    const Qubits system = detail::range(0, n);
    const Qubits phase = detail::range(n, m);
    const int aux = n + m;

    UnitaryAccessor u(phase_unitary(h, scale), 1e-8);
    StateVector s = psi.tensor(StateVector(m + 1));
    qpe_forward(s, u, system, phase);

    const auto big = static_cast<double>(1ULL << m);
    std::vector<double> angle(1ULL << m, 0.0);
    std::vector<bool> dropped(1ULL << m, false);
    for (std::uint64_t y = 0; y < angle.size(); ++y) {
        const double lam = static_cast<double>(signed_readout(y, m)) / big * 2.0 * scale;
        const auto a = amp(lam);
        if (!a) {
            dropped[y] = true;
        } else {
            angle[y] = std::asin(std::clamp(*a, -1.0, 1.0));
        }
    }
    QpeTransformResult r;
    r.scale = scale;
    r.c = c;
    const RVec pm = s.marginal(phase);
    for (std::uint64_t y = 0; y < angle.size(); ++y) {
        if (dropped[y]) {
            r.discarded_mass += pm[static_cast<Eigen::Index>(y)];
        }
    }
    if (r.discarded_mass > 1.0 - 1e-12) {
        throw Error("all eigen-mass lies below the regularization floor");
    }
    controlled_rotation_f(s, phase, aux, [&](std::uint64_t y) { return angle[y]; });
    r.success_probability = s.marginal({aux})[1];
    if (r.success_probability < 1e-14) {
        throw Error("transformed state vanishes");
    }
    qpe_inverse(s, u, system, phase);
    r.unitary_calls = u.calls();

    Qubits ps = phase;
    ps.push_back(aux);
    const PostselectResult post = postselect(s, ps, 1ULL << m);
    r.uncompute_probability = post.probability / r.success_probability;
    r.state = post.state;
    return r;
}

} // namespace

double qpe_scale_for(double norm, int m) {
    if (m < 2) {
        throw Error("qpe_scale_for: m must be at least 2");
    }
    if (!(norm > 0.0)) {
        return 1.0;
    }
    const double half = static_cast<double>(1ULL << (m - 1));
    return norm * half / (half - 1.0);
}

QpeTransformResult apply_hermitian(const CMat &h, const StateVector &psi, int m, double c,
                                   double scale) {
    if (h.rows() == psi.amplitudes().size() && (h * psi.amplitudes()).norm() < 1e-12) {
        throw Error("apply_hermitian: H|psi> = 0");
    }
    if (scale <= 0.0) {
        scale = qpe_scale_for(max_row_sum(h), m);
    }
    if (c <= 0.0) {
        c = scale;
    }
    return qpe_transform(h, psi, m, scale, c, [c](double lam) -> std::optional<double> {
        if (std::abs(lam) > c) {
            throw Error("apply_hermitian: C is below a representable eigenvalue");
        }
        return lam / c;
    });
}

LinearSystem::LinearSystem(CMat a_, CVec b_) : a(std::move(a_)), b(std::move(b_)) {
    if (a.rows() == 0 || a.cols() == 0) {
        throw Error("LinearSystem: empty matrix");
    }
    if (b.size() != a.rows()) {
        throw Error("LinearSystem: b length differs from the row count");
    }
    if (!(b.norm() > 0.0)) {
        throw Error("LinearSystem: b is zero");
    }
    if (!a.allFinite() || !b.allFinite()) {
        throw Error("LinearSystem: non-finite entries");
    }
}

bool LinearSystem::hermitian() const { return a.rows() == a.cols() && is_hermitian(a, 1e-12); }

double LinearSystem::condition_number() const {
    Eigen::JacobiSVD<CMat> svd(a);
    const RVec &sv = svd.singularValues();
    const double top = sv.maxCoeff();
    double low = top;
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
        if (sv[i] > 1e-12 * top) {
            low = std::min(low, sv[i]);
        }
    }
    return top / low;
}

CVec LinearSystem::classical_solution() const {
    return a.completeOrthogonalDecomposition().solve(b);
}

CMat dilation(const CMat &a) {
    const Eigen::Index rows = a.rows();
    const Eigen::Index cols = a.cols();
    const auto d = Eigen::Index{1} << qubits_for(static_cast<std::size_t>(rows + cols));
    CMat out = CMat::Zero(d, d);
    out.block(0, rows, rows, cols) = a;
    out.block(rows, 0, cols, rows) = a.adjoint();
    return out;
}

HhlResult hhl_solve(const LinearSystem &sys, const HhlOptions &opt) {
    if (opt.kappa_target < 1.0) {
        throw Error("hhl_solve: kappa_target must be at least 1");
    }
    HhlResult res;
    res.dilated = !sys.hermitian();
    CMat h;
    CVec rhs;
    Eigen::Index offset = 0;
    if (res.dilated) {
        h = dilation(sys.a);
        rhs = CVec::Zero(h.rows());
        rhs.head(sys.b.size()) = sys.b;
        offset = sys.a.rows();
    } else {
        const auto d = Eigen::Index{1} << qubits_for(static_cast<std::size_t>(sys.a.rows()));
        h = CMat::Zero(d, d);
        h.topLeftCorner(sys.a.rows(), sys.a.cols()) = sys.a;
        rhs = CVec::Zero(d);
        rhs.head(sys.b.size()) = sys.b;
    }
    double scale = opt.scale;
    if (scale <= 0.0) {
        Eigen::SelfAdjointEigenSolver<CMat> es(h, Eigen::EigenvaluesOnly);
        scale = qpe_scale_for(es.eigenvalues().cwiseAbs().maxCoeff(), opt.m);
    }
    const double floor = scale / (2.0 * opt.kappa_target);
    res.qpe = qpe_transform(h, StateVector::from_unnormalized(rhs), opt.m, scale, floor,
                            [floor](double lam) -> std::optional<double> {
                                if (std::abs(lam) < floor) {
                                    return std::nullopt;
                                }
                                return floor / lam;
                            });
    const CVec &full = res.qpe.state.amplitudes();
    res.x = full.segment(offset, sys.a.cols());
    const double nx = res.x.norm();
    if (!(nx > 0.0)) {
        throw Error("hhl_solve: solution block is empty");
    }
    res.x /= nx;
    const CVec exact = sys.classical_solution().normalized();
    res.fidelity = std::norm(exact.dot(res.x));
    return res;
}

double GradientGrid::scale() const {
    if (d > 0.0) {
        return d;
    }
    const double n = static_cast<double>(1ULL << bits);
    return n / (2.0 * gradient_bound * width);
}

double GradientGrid::resolution() const { return 1.0 / (scale() * width); }

GradientResult jordan_gradient(const std::function<double(const std::vector<double> &)> &f,
                               const std::vector<double> &x0, const GradientGrid &grid) {
    if (grid.dim < 1 || grid.bits < 1 || static_cast<std::size_t>(grid.dim) != x0.size()) {
        throw Error("jordan_gradient: grid dimension differs from x0");
    }
    if (!(grid.width > 0.0) || !(grid.gradient_bound > 0.0)) {
        throw Error("jordan_gradient: width and gradient bound must be positive");
    }
    const int total = grid.dim * grid.bits;
    check_qubit_count(total);
    const double n = static_cast<double>(1ULL << grid.bits);
    const double d = grid.scale();
    if (d * grid.width * grid.gradient_bound > n / 2.0 * (1.0 + 1e-12)) {
        throw Error("jordan_gradient: scale D wraps the gradient bound around the register");
    }
    const std::uint64_t mask = (1ULL << grid.bits) - 1;
    PhaseOracle oracle(total, [&](std::uint64_t idx) {
        std::vector<double> x = x0;
        for (int j = 0; j < grid.dim; ++j) {
            const auto k = static_cast<double>((idx >> (j * grid.bits)) & mask);
            x[static_cast<std::size_t>(j)] += grid.width * (k - n / 2.0) / n;
        }
        return 2.0 * kPi * d * f(x);
    });
    StateVector s = StateVector::uniform(total);
    oracle.apply(s, detail::range(0, total));

    GradientResult r;
    r.oracle_calls = oracle.calls();
    for (int j = 0; j < grid.dim; ++j) {
        const Qubits reg = detail::range(j * grid.bits, grid.bits);
        iqft(s, reg);
        const RVec pm = s.marginal(reg);
        Eigen::Index best = 0;
        pm.maxCoeff(&best);
        const std::int64_t y = signed_readout(static_cast<std::uint64_t>(best), grid.bits);
        r.readouts.push_back(y);
        r.probability.push_back(pm[best]);
        r.gradient.push_back(static_cast<double>(y) / (d * grid.width));
    }
    return r;
}

CMat swap_channel_step(const CMat &rho, const CMat &sigma, double dt) {
    if (rho.rows() != sigma.rows() || rho.cols() != sigma.cols()) {
        throw Error("swap_channel_step: dimension mismatch");
    }
    const double c = std::cos(dt);
    const double s = std::sin(dt);
    return c * c * sigma + s * s * rho * sigma.trace() -
           kI * s * c * (rho * sigma - sigma * rho);
}

namespace {

/// One swap-trick step on X (system low, phase register high), controlled by phase bit q.
void controlled_swap_step(CMat &x, const CMat &rho, int n_sys, int q, double c, double s) {
    const Eigen::Index ds = rho.rows();
    const Eigen::Index nb = x.rows() / ds;
    CMat rx(x.rows(), x.cols());
    CMat xr(x.rows(), x.cols());
    CMat tr(x.rows(), x.cols());
    for (Eigen::Index a = 0; a < nb; ++a) {
        for (Eigen::Index b = 0; b < nb; ++b) {
            const auto blk = x.block(a * ds, b * ds, ds, ds);
            rx.block(a * ds, b * ds, ds, ds) = rho * blk;
            xr.block(a * ds, b * ds, ds, ds) = blk * rho;
            tr.block(a * ds, b * ds, ds, ds) = blk.trace() * rho;
        }
    }
    const std::uint64_t bit = 1ULL << (n_sys + q);
    for (Eigen::Index col = 0; col < x.cols(); ++col) {
        const bool bc = (static_cast<std::uint64_t>(col) & bit) != 0;
        for (Eigen::Index row = 0; row < x.rows(); ++row) {
            const bool br = (static_cast<std::uint64_t>(row) & bit) != 0;
            if (br && bc) {
                x(row, col) = c * c * x(row, col) + s * s * tr(row, col) -
                              kI * s * c * (rx(row, col) - xr(row, col));
            } else if (br) {
                x(row, col) = c * x(row, col) - kI * s * rx(row, col);
            } else if (bc) {
                x(row, col) = c * x(row, col) + kI * s * xr(row, col);
            }
        }
    }
}

} // namespace

QpcaResult qpca(const DensityMatrix &rho, std::uint64_t n_copies, double t, int m,
                const std::optional<StateVector> &probe, double eps, double report_floor) {
    if (m < 1 || !(t > 0.0) || n_copies == 0) {
        throw Error("qpca: need m >= 1, t > 0 and at least one copy");
    }
    if (!(eps > 0.0) || static_cast<double>(n_copies) < t * t / eps) {
        throw Error("qpca: n_copies is below t^2 / eps for the requested accuracy");
    }
    const int n = rho.n_qubits();
    if (n + m > 12) {
        throw Error("qpca: density simulation is limited to 12 qubits");
    }
    CMat sigma;
    if (probe) {
        if (probe->n_qubits() != n) {
            throw Error("qpca: probe width differs from rho");
        }
        sigma = probe->amplitudes() * probe->amplitudes().adjoint();
    } else {
        sigma = rho.matrix();
    }
    const Eigen::Index ds = sigma.rows();
    const Eigen::Index nb = Eigen::Index{1} << m;
    CMat x = CMat::Zero(ds * nb, ds * nb);
    x.topLeftCorner(ds, ds) = sigma;

    const int total = n + m;
    const Qubits phase = detail::range(n, m);
    Circuit hs(total);
    for (int q : phase) {
        hs.append(CircuitOp::h(q));
    }
    const CMat hm = hs.matrix();
    x = hm * x * hm.adjoint();

    const double dt = t / static_cast<double>(n_copies);
    const double c = std::cos(dt);
    const double s = std::sin(dt);
    QpcaResult r;
    for (int j = 0; j < m; ++j) {
        const std::uint64_t steps = n_copies << j;
        for (std::uint64_t k = 0; k < steps; ++k) {
            controlled_swap_step(x, rho.matrix(), n, j, c, s);
        }
        r.copies += steps;
    }
    Circuit inv(total);
    inv.append(qft_circuit(total, phase).inverse());
    const CMat im = inv.matrix();
    x = im * x * im.adjoint();

    Eigen::SelfAdjointEigenSolver<CMat> es(rho.matrix());
    r.distribution = RVec::Zero(nb);
    const auto big = static_cast<double>(nb);
    for (Eigen::Index y = 0; y < nb; ++y) {
        const CMat blk = x.block(y * ds, y * ds, ds, ds);
        const double p = blk.trace().real();
        r.distribution[y] = p;
        if (p < report_floor) {
            continue;
        }
        QpcaComponent comp;
        comp.y = static_cast<std::uint64_t>(y);
        comp.probability = p;
        const auto turns = static_cast<double>((nb - y) % nb) / big;
        comp.eigenvalue = turns * 2.0 * kPi / t;
        for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
            const CVec v = es.eigenvectors().col(k);
            const double ov = std::abs(v.dot(blk * v)) / p;
            if (ov > comp.eigenvector_overlap) {
                comp.eigenvector_overlap = ov;
                comp.matched_eigenvalue = es.eigenvalues()[k];
            }
        }
        r.components.push_back(comp);
    }
    return r;
}

} // namespace qstat
