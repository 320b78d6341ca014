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

#include "qstat/walks.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <json.hpp>

#include "bits.hpp"
#include "qstat/amplitude.hpp"
#include "qstat/fourier.hpp"
#include "qstat/gates.hpp"

namespace qstat {

PortGraph::PortGraph(std::vector<std::vector<int>> ports_) : ports(std::move(ports_)) {
    if (ports.empty() || ports[0].empty()) {
        throw Error("PortGraph: empty graph");
    }
    const std::size_t d = ports[0].size();
    const int nv = vertices();
    for (const auto &row : ports) {
        if (row.size() != d) {
            throw Error("PortGraph: non-regular graph without padding");
        }
        for (int w : row) {
            if (w < 0 || w >= nv) {
                throw Error("PortGraph: port target out of range");
            }
        }
    }
    for (std::size_t e = 0; e < d; ++e) {
        std::vector<bool> hit(static_cast<std::size_t>(nv), false);
        for (const auto &row : ports) {
            const auto w = static_cast<std::size_t>(row[e]);
            if (hit[w]) {
                throw Error("PortGraph: edge label " + std::to_string(e) +
                            " does not permute the vertices");
            }
            hit[w] = true;
        }
    }
    check_qubit_count(vertex_qubits() + edge_qubits());
}

PortGraph PortGraph::cycle(int n) {
    if (n < 3) {
        throw Error("PortGraph::cycle: need at least three vertices");
    }
    std::vector<std::vector<int>> p(static_cast<std::size_t>(n));
    for (int v = 0; v < n; ++v) {
        p[static_cast<std::size_t>(v)] = {(v + 1) % n, (v + n - 1) % n};
    }
    return PortGraph(std::move(p));
}

int PortGraph::vertex_qubits() const { return qubits_for(static_cast<std::size_t>(vertices())); }
int PortGraph::edge_qubits() const { return qubits_for(static_cast<std::size_t>(degree())); }

CMat coin_walk_unitary(const PortGraph &g, const CMat &coin) {
    const int d = g.degree();
    if (coin.rows() != d || !is_unitary(coin, 1e-10)) {
        throw Error("coin_walk: coin must be a d x d unitary");
    }
    const Eigen::Index vdim = Eigen::Index{1} << g.vertex_qubits();
    const Eigen::Index edim = Eigen::Index{1} << g.edge_qubits();
    CMat c = CMat::Identity(edim, edim);
    c.topLeftCorner(d, d) = coin;
    CMat ci = CMat::Zero(vdim * edim, vdim * edim);
    for (Eigen::Index e0 = 0; e0 < edim; ++e0) {
        for (Eigen::Index e1 = 0; e1 < edim; ++e1) {
            for (Eigen::Index v = 0; v < vdim; ++v) {
                ci(v + e0 * vdim, v + e1 * vdim) = c(e0, e1);
            }
        }
    }
    CMat shift = CMat::Identity(vdim * edim, vdim * edim);
    for (int e = 0; e < d; ++e) {
        for (int v = 0; v < g.vertices(); ++v) {
            const Eigen::Index from = v + e * vdim;
            const Eigen::Index to = g.ports[static_cast<std::size_t>(v)][static_cast<std::size_t>(e)] + e * vdim;
            shift(from, from) = 0.0;
            shift(to, from) = 1.0;
        }
    }
    return shift * ci;
}

StateVector coin_walk_step(const PortGraph &g, const CMat &coin, const StateVector &s) {
    if (s.n_qubits() != g.vertex_qubits() + g.edge_qubits()) {
        throw Error("coin_walk_step: state width differs from the walk registers");
    }
    return StateVector::from_amplitudes(coin_walk_unitary(g, coin) * s.amplitudes(), 1e-9);
}

RVec vertex_distribution(const PortGraph &g, const StateVector &s) {
    const RVec pm = s.marginal(detail::range(0, g.vertex_qubits()));
    return pm.head(g.vertices());
}

RVec coin_walk_cesaro(const PortGraph &g, const CMat &coin, const StateVector &s0, int steps) {
    if (steps < 1) {
        throw Error("coin_walk_cesaro: T must be at least 1");
    }
    if (s0.n_qubits() != g.vertex_qubits() + g.edge_qubits()) {
        throw Error("coin_walk_cesaro: state width differs from the walk registers");
    }
    const CMat u = coin_walk_unitary(g, coin);
    CVec a = s0.amplitudes();
    RVec acc = RVec::Zero(g.vertices());
    const Eigen::Index vdim = Eigen::Index{1} << g.vertex_qubits();
    for (int t = 0; t < steps; ++t) {
        a = u * a;
        for (Eigen::Index i = 0; i < a.size(); ++i) {
            const Eigen::Index v = i % vdim;
            if (v < g.vertices()) {
                acc[v] += std::norm(a[i]);
            }
        }
    }
    return acc / static_cast<double>(steps);
}

namespace {

RVec stationary_of(const RMat &p) {
    const Eigen::Index n = p.rows();
    RMat m(n + 1, n);
    m.topRows(n) = p.transpose() - RMat::Identity(n, n);
    m.row(n).setOnes();
    RVec rhs = RVec::Zero(n + 1);
    rhs[n] = 1.0;
    RVec pi = m.colPivHouseholderQr().solve(rhs);
    if ((m * pi - rhs).norm() > 1e-9) {
        throw Error("MarkovChain: no unique stationary distribution");
    }
    return pi.cwiseMax(0.0) / pi.cwiseMax(0.0).sum();
}

double absolute_gap(const RMat &p) {
    if (p.rows() < 2) {
        return 1.0;
    }
    Eigen::EigenSolver<RMat> es(p, false);
    std::vector<double> mods;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
        mods.push_back(std::abs(es.eigenvalues()[i]));
    }
    std::sort(mods.begin(), mods.end(), std::greater<>());
    return std::max(0.0, 1.0 - mods[1]);
}

} // namespace

MarkovChain::MarkovChain(RMat p_, std::optional<RVec> pi_, bool claim_reversible)
    : p(std::move(p_)) {
    const Eigen::Index n = p.rows();
    if (n == 0 || p.cols() != n) {
        throw Error("MarkovChain: P must be square");
    }
    if ((p.array() < -1e-15).any() || !p.allFinite()) {
        throw Error("MarkovChain: P has negative or non-finite entries");
    }
    for (Eigen::Index x = 0; x < n; ++x) {
        if (std::abs(p.row(x).sum() - 1.0) > 1e-12) {
            throw Error("MarkovChain: row " + std::to_string(x) + " does not sum to 1");
        }
    }
    if (pi_) {
        if (pi_->size() != n || std::abs(pi_->sum() - 1.0) > 1e-10 || (pi_->array() < 0.0).any()) {
            throw Error("MarkovChain: pi is not a distribution over the states");
        }
        if ((pi_->transpose() * p - pi_->transpose()).norm() > 1e-9) {
            throw Error("MarkovChain: supplied pi is not stationary");
        }
        pi = *pi_;
    } else {
        pi = stationary_of(p);
    }
    reversible = true;
    for (Eigen::Index x = 0; x < n && reversible; ++x) {
        for (Eigen::Index y = 0; y < n; ++y) {
            if (std::abs(pi[x] * p(x, y) - pi[y] * p(y, x)) > 1e-10) {
                reversible = false;
                break;
            }
        }
    }
    if (claim_reversible && !reversible) {
        throw Error("MarkovChain: detailed balance fails for a chain flagged reversible");
    }
    gap = absolute_gap(p);
}

MarkovChain metropolis_chain(const RVec &pi, const std::optional<RMat> &proposal) {
    const Eigen::Index n = pi.size();
    if (n < 2 || (pi.array() <= 0.0).any() || std::abs(pi.sum() - 1.0) > 1e-10) {
        throw Error("metropolis_chain: pi must be a positive distribution on >= 2 states");
    }
    RMat k;
    if (proposal) {
        k = *proposal;
        if (k.rows() != n || k.cols() != n || (k - k.transpose()).norm() > 1e-12) {
            throw Error("metropolis_chain: proposal must be symmetric n x n");
        }
    } else {
        k = RMat::Constant(n, n, 1.0 / static_cast<double>(n - 1));
        k.diagonal().setZero();
    }
    RMat p = RMat::Zero(n, n);
    for (Eigen::Index x = 0; x < n; ++x) {
        double stay = 1.0;
        for (Eigen::Index y = 0; y < n; ++y) {
            if (y != x) {
                p(x, y) = k(x, y) * std::min(1.0, pi[y] / pi[x]);
                stay -= p(x, y);
            }
        }
        p(x, x) = stay;
    }
    return MarkovChain(p, pi, true);
}

MarkovChain load_chain_json(const std::string &path) {
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
        if (key != "P" && key != "pi" && key != "reversible") {
            throw ConfigError("unknown chain key '" + key + "'");
        }
    }
    if (!j.contains("P")) {
        throw ConfigError("chain file needs a \"P\" matrix");
    }
    try {
        const auto rows = j.at("P").get<std::vector<std::vector<double>>>();
        RMat p(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.size()));
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (rows[r].size() != rows.size()) {
                throw ConfigError("P must be square");
            }
            for (std::size_t c = 0; c < rows.size(); ++c) {
                p(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
            }
        }
        std::optional<RVec> pi;
        if (j.contains("pi")) {
            const auto v = j.at("pi").get<std::vector<double>>();
            pi = RVec::Map(v.data(), static_cast<Eigen::Index>(v.size()));
        }
        return MarkovChain(p, pi, j.value("reversible", false));
    } catch (const nlohmann::json::exception &e) {
        throw ConfigError(std::string("bad chain field: ") + e.what());
    }
}

WalkOperator build_szegedy(const MarkovChain &chain) {
    WalkOperator op;
    const int ns = chain.states();
    op.n = qubits_for(static_cast<std::size_t>(ns));
    check_qubit_count(2 * op.n);
    const Eigen::Index d = Eigen::Index{1} << op.n;
    const Eigen::Index dd = d * d;

    // index = x + d * y
    op.up = CMat::Identity(dd, dd);
    for (Eigen::Index x = 0; x < ns; ++x) {
        CVec row = CVec::Zero(d);
        for (Eigen::Index y = 0; y < ns; ++y) {
            row[y] = std::sqrt(chain.p(x, y));
        }
        row.normalize();
        const CMat hx = householder_from(row);
        for (Eigen::Index a = 0; a < d; ++a) {
            for (Eigen::Index b = 0; b < d; ++b) {
                op.up(x + d * a, x + d * b) = hx(a, b);
            }
        }
    }
    CMat proj = CMat::Zero(dd, dd);
    for (Eigen::Index x = 0; x < ns; ++x) {
        const CVec v = op.up.col(x);
        proj += v * v.adjoint();
    }
    op.r1 = 2.0 * proj - CMat::Identity(dd, dd);
    op.swap = CMat::Zero(dd, dd);
    for (Eigen::Index x = 0; x < d; ++x) {
        for (Eigen::Index y = 0; y < d; ++y) {
            op.swap(y + d * x, x + d * y) = 1.0;
        }
    }
    op.r2 = op.swap * op.r1 * op.swap;
    op.w = op.r2 * op.r1;

    CVec root = CVec::Zero(dd);
    for (Eigen::Index x = 0; x < ns; ++x) {
        root[x] = std::sqrt(chain.pi[x]);
    }
    op.pi_lifted = op.up * root;
    if (chain.reversible) {
        op.stationary_checked = true;
        op.stationary_residual = (op.w * op.pi_lifted - op.pi_lifted).norm();
    }
    return op;
}

namespace {

/// Largest |amplitude of y = 0| for phases at least `gap` turns away from 0.
double fejer_leak(int m, double gap) {
    const double big = static_cast<double>(1ULL << m);
    double worst = 0.0;
    const int samples = 8192;
    for (int k = 0; k <= samples; ++k) {
        const double x = gap + (1.0 - 2.0 * gap) * static_cast<double>(k) / samples;
        const double den = big * std::sin(kPi * x);
        const double a = std::abs(den) < 1e-300 ? 1.0 : std::abs(std::sin(kPi * big * x) / den);
        worst = std::max(worst, a);
    }
    return worst;
}

double overlap_of(const RVec &a, const RVec &b) { return a.cwiseProduct(b).cwiseSqrt().sum(); }

} // namespace

QmcmcResult qmcmc_prepare(const std::vector<MarkovChain> &chains, double overlap_floor,
                          double eps) {
    if (chains.empty()) {
        throw Error("qmcmc_prepare: need at least the initial chain");
    }
    if (!(overlap_floor > 0.0 && overlap_floor <= 1.0) || !(eps > 0.0 && eps < 1.0)) {
        throw Error("qmcmc_prepare: need 0 < p <= 1 and 0 < eps < 1");
    }
    const int ns = chains[0].states();
    for (const auto &c : chains) {
        if (c.states() != ns) {
            throw Error("qmcmc_prepare: chains act on different state spaces");
        }
    }
    const RVec uniform = RVec::Constant(ns, 1.0 / ns);
    if ((chains[0].pi - uniform).norm() > 1e-10) {
        throw Error("qmcmc_prepare: the first stationary distribution must be uniform");
    }
    for (std::size_t i = 1; i < chains.size(); ++i) {
        if (overlap_of(chains[i - 1].pi, chains[i].pi) < overlap_floor) {
            throw Error("qmcmc_prepare: overlap floor violated at stage " + std::to_string(i));
        }
    }
    const int n = qubits_for(static_cast<std::size_t>(ns));
    const Qubits yreg = detail::range(n, n);
    const auto stages = static_cast<double>(chains.size() - 1);

    QmcmcResult res;
    CVec single = CVec::Zero(Eigen::Index{1} << n);
    single.head(ns) = uniform.cwiseSqrt().cast<cplx>();
    res.state = StateVector::from_amplitudes(single, 1e-10);
    if (chains.size() == 1) {
        res.fidelity = 1.0;
        return res;
    }

    WalkOperator prev = build_szegedy(chains[0]);
    StateVector lifted = StateVector::from_amplitudes(prev.up * res.state.tensor(StateVector(n)).amplitudes(), 1e-9);
    for (std::size_t i = 1; i < chains.size(); ++i) {
        const MarkovChain &ch = chains[i];
        if (ch.gap < 1e-12) {
            throw Error("qmcmc_prepare: chain " + std::to_string(i) + " has no spectral gap");
        }
        WalkOperator cur = build_szegedy(ch);
        QmcmcStage st;
        st.gap = ch.gap;
        st.overlap = overlap_of(chains[i - 1].pi, ch.pi);

        StateVector back = StateVector::from_unnormalized(prev.up.adjoint() * lifted.amplitudes());
        const StateVector x_only = postselect(back, yreg, 0).state;
        lifted = StateVector::from_amplitudes(cur.up * x_only.tensor(StateVector(n)).amplitudes(), 1e-9);

        st.m = static_cast<int>(std::ceil(std::log2(1.0 / std::sqrt(ch.gap)))) + 2;
        st.m = std::max(st.m, 1);
        const double phase_gap = 2.0 * std::acos(std::clamp(1.0 - ch.gap, -1.0, 1.0)) / (2.0 * kPi);
        const double leak = fejer_leak(st.m, std::min(phase_gap, 0.5));
        const double start = std::sqrt(std::max(0.0, 1.0 - st.overlap * st.overlap)) / st.overlap;
        const double target = std::sqrt(eps / stages);
        st.rounds = 1;
        if (start > target && leak > 0.0) {
            if (leak >= 1.0) {
                throw Error("qmcmc_prepare: phase register cannot resolve the walk gap");
            }
            st.rounds = std::max(1, static_cast<int>(std::ceil(std::log(target / start) / std::log(leak))));
        }
        st.rounds = std::min(st.rounds, 256);

        UnitaryAccessor u(cur.w, 1e-8);
        st.success_probability = 1.0;
        const Qubits phase = detail::range(2 * n, st.m);
        for (int k = 0; k < st.rounds; ++k) {
            StateVector s = lifted.tensor(StateVector(st.m));
            qpe_forward(s, u, detail::range(0, 2 * n), phase);
            const PostselectResult pr = postselect(s, phase, 0);
            st.success_probability *= pr.probability;
            lifted = pr.state;
        }
        st.walk_steps = u.calls();
        st.fidelity = std::norm(cur.pi_lifted.dot(lifted.amplitudes()));
        res.walk_steps += st.walk_steps;
        res.stages.push_back(st);
        prev = std::move(cur);
    }
    StateVector back = StateVector::from_unnormalized(prev.up.adjoint() * lifted.amplitudes());
    res.state = postselect(back, yreg, 0).state;
    CVec exact = CVec::Zero(Eigen::Index{1} << n);
    exact.head(ns) = chains.back().pi.cwiseSqrt().cast<cplx>();
    res.fidelity = std::norm(exact.dot(res.state.amplitudes()));
    return res;
}

} // namespace qstat
