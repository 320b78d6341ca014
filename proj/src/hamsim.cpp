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

#include "qstat/hamsim.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <Eigen/Eigenvalues>
#include <json.hpp>

#include "bits.hpp"
#include "qstat/amplitude.hpp"
#include "qstat/gates.hpp"

namespace qstat {

namespace {

/// Row r of a Pauli string has its only entry at column r ^ flip.
struct PauliMask {
    std::uint64_t flip = 0;
    std::uint64_t zmask = 0;
    int y_count = 0;

    cplx entry_phase(std::uint64_t col) const {
        // P|col> = phase |col ^ flip>; Y|0> = i|1>, Y|1> = -i|0>.
        static const cplx ipow[4] = {1.0, kI, -1.0, -kI};
        const int minus = std::popcount(col & zmask) & 1;
        cplx ph = ipow[y_count % 4];
        return minus ? -ph : ph;
    }
};

PauliMask parse_pauli(const std::string &label) {
    PauliMask m;
    for (std::size_t q = 0; q < label.size(); ++q) {
        const std::uint64_t bit = 1ULL << q;
        switch (label[q]) {
        case 'I':
            break;
        case 'X':
            m.flip |= bit;
            break;
        case 'Y':
            m.flip |= bit;
            m.zmask |= bit;
            ++m.y_count;
            break;
        case 'Z':
            m.zmask |= bit;
            break;
        default:
            throw ConfigError("bad Pauli label '" + label + "'");
        }
    }
    return m;
}

CVec apply_dense_full(const CMat &u, const CVec &v) { return u * v; }

} // namespace

CMat pauli_string(const std::string &label) {
    if (label.empty()) {
        throw ConfigError("empty Pauli label");
    }
    const int n = static_cast<int>(label.size());
    check_qubit_count(n);
    const PauliMask pm = parse_pauli(label);
    const Eigen::Index d = Eigen::Index{1} << n;
    CMat p = CMat::Zero(d, d);
    for (Eigen::Index c = 0; c < d; ++c) {
        const auto uc = static_cast<std::uint64_t>(c);
        p(static_cast<Eigen::Index>(uc ^ pm.flip), c) = pm.entry_phase(uc);
    }
    return p;
}

CMat evolution_operator(const CMat &h, double t) {
    if (!is_hermitian(h, 1e-10)) {
        throw Error("evolution_operator: matrix is not Hermitian");
    }
    Eigen::SelfAdjointEigenSolver<CMat> es(h);
    CVec ph(es.eigenvalues().size());
    for (Eigen::Index i = 0; i < ph.size(); ++i) {
        ph[i] = std::polar(1.0, -es.eigenvalues()[i] * t);
    }
    return es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();
}

void HamiltonianSum::add(double weight, CMat term, std::string label) {
    const Eigen::Index d = Eigen::Index{1} << n;
    if (term.rows() != d || term.cols() != d) {
        throw Error("HamiltonianSum: term dimension differs from 2^n");
    }
    if (!is_hermitian(term, 1e-10)) {
        throw Error("HamiltonianSum: term is not Hermitian");
    }
    if (!std::isfinite(weight)) {
        throw Error("HamiltonianSum: non-finite weight");
    }
    weights.push_back(weight);
    terms.push_back(std::move(term));
    labels.push_back(std::move(label));
}

void HamiltonianSum::add_pauli(double weight, const std::string &label) {
    if (static_cast<int>(label.size()) != n) {
        throw ConfigError("Pauli label '" + label + "' has the wrong length");
    }
    CMat p = pauli_string(label);
    if (weight < 0.0) {
        add(-weight, -p, "-" + label);
    } else {
        add(weight, std::move(p), label);
    }
}

CMat HamiltonianSum::dense() const {
    const Eigen::Index d = Eigen::Index{1} << n;
    CMat h = CMat::Zero(d, d);
    for (std::size_t l = 0; l < terms.size(); ++l) {
        h += weights[l] * terms[l];
    }
    return h;
}

bool HamiltonianSum::unitary_terms() const {
    for (std::size_t l = 0; l < terms.size(); ++l) {
        if (!(weights[l] > 0.0) || !is_unitary(terms[l], 1e-10)) {
            return false;
        }
    }
    return !terms.empty();
}

double HamiltonianSum::lcu_norm() const {
    if (!unitary_terms()) {
        throw Error("HamiltonianSum: LCU form needs positive weights and unitary terms");
    }
    double s = 0.0;
    for (double w : weights) {
        s += w;
    }
    return s;
}

HamiltonianSum pauli_decompose(const CMat &h, double tol) {
    const int n = qubits_for(static_cast<std::size_t>(h.rows()));
    if (h.rows() != h.cols() || h.rows() != (Eigen::Index{1} << n) || n > 6) {
        throw Error("pauli_decompose: need a square power-of-two matrix on at most 6 qubits");
    }
    if (!is_hermitian(h, 1e-10)) {
        throw Error("pauli_decompose: matrix is not Hermitian");
    }
    static const char letters[4] = {'I', 'X', 'Y', 'Z'};
    HamiltonianSum out(n);
    const std::uint64_t count = 1ULL << (2 * n);
    const Eigen::Index d = h.rows();
    for (std::uint64_t code = 0; code < count; ++code) {
        std::string label(static_cast<std::size_t>(n), 'I');
        for (int q = 0; q < n; ++q) {
            label[static_cast<std::size_t>(q)] = letters[(code >> (2 * q)) & 3ULL];
        }
        const PauliMask pm = parse_pauli(label);
        cplx tr = 0.0;
        for (Eigen::Index c = 0; c < d; ++c) {
            const auto uc = static_cast<std::uint64_t>(c);
            tr += pm.entry_phase(uc) * h(c, static_cast<Eigen::Index>(uc ^ pm.flip));
        }
        const double coef = tr.real() / static_cast<double>(d);
        if (std::abs(coef) > tol) {
            out.add_pauli(coef, label);
        }
    }
    return out;
}

HamiltonianFile load_hamiltonian_json(const std::string &path) {
    std::ifstream is(path);
    if (!is) {
        throw ConfigError("cannot open " + path);
    }
    nlohmann::json j;
    try {
        is >> j;
    } catch (const nlohmann::json::exception &e) {
        throw ConfigError(std::string("bad JSON in ") + path + ": " + e.what());
    }
    for (const auto &[key, _] : j.items()) {
        if (key != "terms" && key != "t") {
            throw ConfigError("unknown Hamiltonian key '" + key + "'");
        }
    }
    if (!j.contains("terms") || !j["terms"].is_array() || j["terms"].empty()) {
        throw ConfigError("Hamiltonian file needs a non-empty \"terms\" array");
    }
    try {
        const int n = static_cast<int>(j["terms"][0].at("pauli").get<std::string>().size());
        HamiltonianFile f{HamiltonianSum(n), j.value("t", 1.0)};
        for (const auto &term : j["terms"]) {
            for (const auto &[key, _] : term.items()) {
                if (key != "alpha" && key != "pauli") {
                    throw ConfigError("unknown term key '" + key + "'");
                }
            }
            f.h.add_pauli(term.at("alpha").get<double>(), term.at("pauli").get<std::string>());
        }
        return f;
    } catch (const nlohmann::json::exception &e) {
        throw ConfigError(std::string("bad Hamiltonian term: ") + e.what());
    }
}

StateVector trotter_evolve(const HamiltonianSum &h, double t, int r, const StateVector &s) {
    if (r < 1) {
        throw Error("trotter_evolve: r must be at least 1");
    }
    if (s.n_qubits() != h.n) {
        throw Error("trotter_evolve: state width differs from the Hamiltonian");
    }
    std::vector<CMat> steps;
    for (std::size_t l = 0; l < h.terms.size(); ++l) {
        steps.push_back(evolution_operator(h.weights[l] * h.terms[l], t / r));
    }
    CVec v = s.amplitudes();
    for (int k = 0; k < r; ++k) {
        for (const auto &u : steps) {
            v = apply_dense_full(u, v);
        }
    }
    return StateVector::from_amplitudes(std::move(v), 1e-8);
}

int lcu_segments(double alpha, double t, int k) {
    if (k < 0) {
        throw Error("lcu_segments: K must be non-negative");
    }
    const double at = std::abs(alpha * t);
    for (int r = 1; r < 1 << 24; ++r) {
        double term = 1.0;
        double sum = 1.0;
        for (int j = 1; j <= k; ++j) {
            term *= at / r / j;
            sum += term;
        }
        if (sum <= 2.0) {
            return r;
        }
    }
    throw Error("lcu_segments: no feasible segmentation");
}

namespace {

struct LcuTerms {
    std::vector<double> coef;
    std::vector<CMat> unitaries;
};

LcuTerms taylor_terms(const HamiltonianSum &h, double tau, int k) {
    LcuTerms out;
    const Eigen::Index d = Eigen::Index{1} << h.n;
    struct Partial {
        double c;
        CMat u;
    };
    std::vector<Partial> level{{1.0, CMat::Identity(d, d)}};
    out.coef.push_back(1.0);
    out.unitaries.push_back(level[0].u);
    for (int order = 1; order <= k; ++order) {
        std::vector<Partial> next;
        for (const auto &p : level) {
            for (std::size_t l = 0; l < h.terms.size(); ++l) {
                next.push_back({p.c * h.weights[l] * tau / order, p.u * h.terms[l]});
                if (out.coef.size() + next.size() > (1u << 14)) {
                    throw ConfigError("lcu_evolve: Taylor expansion exceeds 16384 terms");
                }
            }
        }
        cplx phase = 1.0;
        for (int j = 0; j < order; ++j) {
            phase *= -kI;
        }
        for (const auto &p : next) {
            out.coef.push_back(p.c);
            out.unitaries.push_back(phase * p.u);
        }
        level = std::move(next);
    }
    return out;
}

/// One segment: -W R W^dag R W on |0>|psi>, postselected onto the ancilla zero state.
PostselectResult lcu_segment(const LcuTerms &terms, const StateVector &psi, double s_norm) {
    const int n = psi.n_qubits();
    const auto count = terms.coef.size();
    const int a = qubits_for(count);
    check_qubit_count(n + a + 1);
    const Qubits anc = detail::range(n, a);
    const int pad = n + a;
    Qubits flags = anc;
    flags.push_back(pad);

    CVec prep = CVec::Zero(Eigen::Index{1} << a);
    for (std::size_t j = 0; j < count; ++j) {
        prep[static_cast<Eigen::Index>(j)] = std::sqrt(terms.coef[j] / s_norm);
    }
    // The preparation is the reflection alpha (I - 2 u u^dag / |u|^2) with first
    // column prep, applied as a rank-one update on the ancilla register.
    const double r0 = std::abs(prep[0]);
    const cplx alpha = r0 > 0.0 ? prep[0] / r0 : cplx(1.0);
    CVec u = -prep;
    u[0] += alpha;
    const double un = u.squaredNorm();
    const double lower = std::acos(std::clamp(s_norm / 2.0, -1.0, 1.0));
    CMat ry(2, 2);
    ry << std::cos(lower), -std::sin(lower), std::sin(lower), std::cos(lower);

    const Eigen::Index ds = Eigen::Index{1} << n;
    auto select = [&](StateVector &s, bool adjoint) {
        CVec &v = s.data();
        for (Eigen::Index pb = 0; pb < 2; ++pb) {
            for (std::size_t j = 0; j < count; ++j) {
                const Eigen::Index base = (static_cast<Eigen::Index>(j) << n) + (pb << (n + a));
                const CVec slice = v.segment(base, ds);
                const CMat &u = terms.unitaries[j];
                v.segment(base, ds) = adjoint ? CVec(u.adjoint() * slice) : CVec(u * slice);
            }
        }
    };
    const Eigen::Index da = Eigen::Index{1} << a;
    auto prepare = [&](StateVector &s, bool adjoint) {
        const cplx ph = adjoint ? std::conj(alpha) : alpha;
        CVec &v = s.data();
        for (Eigen::Index pb = 0; pb < 2; ++pb) {
            for (Eigen::Index x = 0; x < ds; ++x) {
                const Eigen::Index base = x + (pb << (n + a));
                cplx dot = 0.0;
                for (Eigen::Index j = 0; j < da; ++j) {
                    dot += std::conj(u[j]) * v[base + (j << n)];
                }
                const cplx k = un > 1e-30 ? 2.0 * dot / un : cplx(0.0);
                for (Eigen::Index j = 0; j < da; ++j) {
                    cplx &e = v[base + (j << n)];
                    e = ph * (e - k * u[j]);
                }
            }
        }
    };
    auto w = [&](StateVector &s) {
        apply_matrix(s, ry, {pad}, {});
        prepare(s, false);
        select(s, false);
        prepare(s, true);
    };
    auto w_dag = [&](StateVector &s) {
        prepare(s, false);
        select(s, true);
        prepare(s, true);
        apply_matrix(s, ry.adjoint(), {pad}, {});
    };
    auto reflect = [&](StateVector &s) {
        apply_diagonal(s, flags, [](std::uint64_t v) { return v == 0 ? cplx(1.0) : cplx(-1.0); });
    };

    StateVector s = psi.tensor(StateVector(a + 1));
    w(s);
    reflect(s);
    w_dag(s);
    reflect(s);
    w(s);
    s.data() *= -1.0;
    return postselect(s, flags, 0);
}

} // namespace

LcuResult lcu_evolve(const HamiltonianSum &h, double t, int k, const StateVector &s,
                     int segments) {
    if (k < 0) {
        throw Error("lcu_evolve: K must be non-negative");
    }
    if (s.n_qubits() != h.n) {
        throw Error("lcu_evolve: state width differs from the Hamiltonian");
    }
    const double alpha = h.lcu_norm();
    LcuResult res;
    LcuTerms terms;
    const Eigen::Index d = Eigen::Index{1} << h.n;
    const bool single = h.terms.size() == 1 &&
                        (h.terms[0] * h.terms[0] - CMat::Identity(d, d)).norm() < 1e-10;
    if (single) {
        const double theta = alpha * t;
        const double c = std::cos(theta);
        const double sn = std::sin(theta);
        terms.coef = {std::abs(c), std::abs(sn)};
        terms.unitaries = {(c < 0 ? -1.0 : 1.0) * CMat::Identity(d, d),
                           (sn < 0 ? kI : -kI) * h.terms[0]};
        res.segments = 1;
    } else {
        res.segments = segments > 0 ? segments : lcu_segments(alpha, t, k);
        terms = taylor_terms(h, t / res.segments, k);
    }
    for (double c : terms.coef) {
        res.segment_norm += c;
    }
    if (res.segment_norm > 2.0 + 1e-12) {
        throw Error("lcu_evolve: segment normalization exceeds 2; use more segments");
    }
    res.lcu_terms = terms.coef.size();
    res.success_probability = 1.0;
    StateVector cur = s;
    for (int seg = 0; seg < res.segments; ++seg) {
        const PostselectResult pr = lcu_segment(terms, cur, res.segment_norm);
        res.success_probability *= pr.probability;
        res.min_segment_probability = std::min(res.min_segment_probability, pr.probability);
        cur = pr.state;
    }
    res.state = std::move(cur);
    return res;
}

CVec QubitizationWalk::swap(const CVec &v) const {
    const Eigen::Index half = 2 * register_dim();
    CVec out(v.size());
    for (Eigen::Index q = 0; q < half; ++q) {
        for (Eigen::Index p = 0; p < half; ++p) {
            out[q + half * p] = v[p + half * q];
        }
    }
    return out;
}

CVec QubitizationWalk::apply(const CVec &v) const {
    const CVec r = 2.0 * (t * (t.adjoint() * v)) - v;
    return kI * swap(r);
}

CVec QubitizationWalk::apply_adjoint(const CVec &v) const {
    const CVec sv = swap(v);
    return -kI * (2.0 * (t * (t.adjoint() * sv)) - sv);
}

CMat QubitizationWalk::matrix() const {
    const Eigen::Index d = walk_dim();
    CMat u(d, d);
    for (Eigen::Index c = 0; c < d; ++c) {
        u.col(c) = apply(CVec::Unit(d, c));
    }
    return u;
}

QubitizationWalk build_qubitization(const SparseHamiltonianAccess &h) {
    QubitizationWalk w;
    w.dim = static_cast<Eigen::Index>(h.dim());
    const CMat &hm = h.dense();
    w.lifted = (hm.diagonal().real().array() < -1e-14).any();
    if (w.lifted) {
        w.encoded = CMat::Zero(2 * w.dim, 2 * w.dim);
        w.encoded.topRightCorner(w.dim, w.dim) = hm;
        w.encoded.bottomLeftCorner(w.dim, w.dim) = hm;
    } else {
        w.encoded = hm;
    }
    w.norm = h.one_norm() > 0.0 ? h.one_norm() : 1.0;
    const Eigen::Index nd = w.register_dim();
    if (4 * nd * nd > (Eigen::Index{1} << 16)) {
        throw Error("build_qubitization: walk space too large for dense simulation");
    }
    const Eigen::Index half = 2 * nd;
    auto idx = [&](Eigen::Index j, Eigen::Index b, Eigen::Index l, Eigen::Index flag) {
        return (j + nd * b) + half * (l + nd * flag);
    };
    const CMat &k = w.encoded;
    auto upper = [&](Eigen::Index j, Eigen::Index l) { return std::sqrt(std::conj(k(j, l)) / w.norm); };
    w.t = CMat::Zero(4 * nd * nd, half);
    for (Eigen::Index j = 0; j < nd; ++j) {
        std::vector<Eigen::Index> support;
        double rowsum = 0.0;
        for (Eigen::Index l = 0; l < nd; ++l) {
            if (std::abs(k(j, l)) > 1e-14) {
                support.push_back(l);
                rowsum += std::abs(k(j, l));
            }
        }
        if (support.empty()) {
            support.push_back(j);
        }
        const double resid = std::sqrt(std::max(0.0, 1.0 - rowsum / w.norm) /
                                       static_cast<double>(support.size()));
        for (Eigen::Index l : support) {
            cplx a = 0.0;
            if (std::abs(k(j, l)) > 1e-14) {
                if (j < l) {
                    a = upper(j, l);
                } else if (j > l) {
                    a = (k(l, j) / w.norm) / std::conj(upper(l, j));
                } else {
                    a = std::sqrt(k(j, j).real() / w.norm);
                }
            }
            w.t(idx(j, 0, l, 0), j) = a;
            w.t(idx(j, 0, l, 1), j) = resid;
        }
        w.t(idx(j, 1, 0, 1), j + nd) = 1.0;
    }
    return w;
}

namespace {

double bessel(int m, double z) {
    const int am = std::abs(m);
    double v = std::cyl_bessel_j(static_cast<double>(am), std::abs(z));
    int sign_flips = 0;
    if (z < 0.0 && (am & 1)) {
        ++sign_flips;
    }
    if (m < 0 && (am & 1)) {
        ++sign_flips;
    }
    return (sign_flips & 1) ? -v : v;
}

} // namespace

double bessel_tail(double z, int k) {
    if (k < 0) {
        throw Error("bessel_tail: k must be non-negative");
    }
    const double az = std::abs(z);
    double tail = 0.0;
    for (int m = k + 1;; ++m) {
        const double term = std::abs(std::cyl_bessel_j(static_cast<double>(m), az));
        tail += 2.0 * term;
        if (m > az + 20.0 && term < 1e-300 + 1e-18 * tail) {
            break;
        }
        if (m > k + 100000) {
            break;
        }
    }
    return tail;
}

int bessel_truncation(double z, double eps) {
    if (!(eps > 0.0)) {
        throw Error("bessel_truncation: eps must be positive");
    }
    for (int k = 0; k < 100000; ++k) {
        if (bessel_tail(z, k) <= eps) {
            return k;
        }
    }
    throw Error("bessel_truncation: no feasible truncation");
}

QwEvolveResult qw_lcu_evolve(const QubitizationWalk &w, double t, int k_max, const StateVector &s,
                             double eps) {
    if (k_max < 0) {
        throw Error("qw_lcu_evolve: k_max must be non-negative");
    }
    if (static_cast<Eigen::Index>(s.dim()) != w.dim) {
        throw Error("qw_lcu_evolve: state dimension differs from H");
    }
    const double z = -t * w.norm;
    QwEvolveResult res;
    res.k_max = k_max;
    res.tail = bessel_tail(z, k_max);
    if (eps > 0.0 && res.tail > eps) {
        throw Error("qw_lcu_evolve: truncation infeasible for the requested eps");
    }
    const Eigen::Index nd = w.register_dim();
    CVec in = CVec::Zero(2 * nd);
    if (w.lifted) {
        in.head(w.dim) = s.amplitudes() / std::sqrt(2.0);
        in.segment(w.dim, w.dim) = s.amplitudes() / std::sqrt(2.0);
    } else {
        in.head(w.dim) = s.amplitudes();
    }
    const CVec v0 = w.t * in;
    double l1 = std::abs(bessel(0, z));
    CVec acc = bessel(0, z) * v0;
    CVec up = v0;
    CVec down = v0;
    for (int m = 1; m <= k_max; ++m) {
        up = w.apply(up);
        down = w.apply_adjoint(down);
        const double jp = bessel(m, z);
        const double jm = bessel(-m, z);
        acc += jp * up + jm * down;
        l1 += std::abs(jp) + std::abs(jm);
    }
    const CVec back = w.t.adjoint() * acc;
    CVec out;
    if (w.lifted) {
        out = (back.head(w.dim) + back.segment(w.dim, w.dim)) / std::sqrt(2.0);
    } else {
        out = back.head(w.dim);
    }
    res.success_probability = out.squaredNorm() / (l1 * l1);
    res.state = StateVector::from_unnormalized(out);
    return res;
}

} // namespace qstat
