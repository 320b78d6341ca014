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


#include <fstream>

#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>

#include "qstat/gates.hpp"
#include "qstat/walks.hpp"
#include "support.hpp"

namespace qstat {
namespace {

/// Time-averaged limit: the vertex marginal of sum_g P_g rho P_g over the
/// distinct eigenvalues g of the walk unitary.
RVec cesaro_limit(const PortGraph &g, const CMat &u, const CVec &psi) {
    Eigen::ComplexEigenSolver<CMat> es(u);
    const CVec lam = es.eigenvalues();
    // Unitary with possibly degenerate spectrum: orthonormalize each eigenspace.
    std::vector<bool> used(std::size_t(lam.size()), false);
    const Eigen::Index vdim = Eigen::Index{1} << g.vertex_qubits();
    RVec out = RVec::Zero(g.vertices());
    for (Eigen::Index i = 0; i < lam.size(); ++i) {
        if (used[std::size_t(i)]) {
            continue;
        }
        std::vector<Eigen::Index> group;
        for (Eigen::Index j = i; j < lam.size(); ++j) {
            if (!used[std::size_t(j)] && std::abs(lam[j] - lam[i]) < 1e-7) {
                used[std::size_t(j)] = true;
                group.push_back(j);
            }
        }
        CMat basis(u.rows(), Eigen::Index(group.size()));
        for (std::size_t k = 0; k < group.size(); ++k) {
            basis.col(Eigen::Index(k)) = es.eigenvectors().col(group[k]);
        }
        const CMat q = Eigen::HouseholderQR<CMat>(basis).householderQ() *
                       CMat::Identity(u.rows(), Eigen::Index(group.size()));
        const CVec part = q * (q.adjoint() * psi);
        for (Eigen::Index k = 0; k < part.size(); ++k) {
            if (k % vdim < g.vertices()) {
                out[k % vdim] += std::norm(part[k]);
            }
        }
    }
    return out;
}

TEST(CoinWalk, FirstStepSplits) {
    const PortGraph g = PortGraph::cycle(8);
    const StateVector s = coin_walk_step(g, hadamard(), StateVector(4));
    const RVec d = vertex_distribution(g, s);
    EXPECT_NEAR(d[1], 0.5, 1e-15);
    EXPECT_NEAR(d[7], 0.5, 1e-15);
    EXPECT_NEAR(d.sum(), 1.0, 1e-15);
}

TEST(CoinWalk, UnitaryOnPaddedRegisters) {
    const PortGraph g = PortGraph::cycle(5);
    const CMat u = coin_walk_unitary(g, hadamard());
    EXPECT_EQ(u.rows(), 16);
    EXPECT_LE((u.adjoint() * u - CMat::Identity(16, 16)).norm(), 1e-12);
    Rng rng(1);
    const PortGraph k4({{1, 2, 3}, {0, 3, 2}, {3, 0, 1}, {2, 1, 0}});
    const CMat c = test::random_unitary(3, rng);
    const CMat w = coin_walk_unitary(k4, c);
    EXPECT_LE((w.adjoint() * w - CMat::Identity(w.rows(), w.rows())).norm(), 1e-12);
    EXPECT_THROW(coin_walk_unitary(g, CMat::Ones(2, 2)), Error);
}

TEST(CoinWalk, CesaroAverageApproachesEigenspaceLimit) {
    const PortGraph g = PortGraph::cycle(5);
    const CMat u = coin_walk_unitary(g, hadamard());
    const StateVector s0(4);
    const RVec limit = cesaro_limit(g, u, s0.amplitudes());
    EXPECT_NEAR(limit.sum(), 1.0, 1e-10);
    const RVec avg = coin_walk_cesaro(g, hadamard(), s0, 512);
    EXPECT_LE((avg - limit).cwiseAbs().maxCoeff(), 1e-2);
    const RVec longer = coin_walk_cesaro(g, hadamard(), s0, 4096);
    EXPECT_LE((longer - limit).cwiseAbs().maxCoeff(), (avg - limit).cwiseAbs().maxCoeff() + 1e-12);
}

TEST(CoinWalk, Rejections) {
    EXPECT_THROW(PortGraph::cycle(2), Error);
    EXPECT_THROW(coin_walk_cesaro(PortGraph::cycle(4), hadamard(), StateVector(2), 4), Error);
}

TEST(MarkovChain, StationaryAndReversible) {
    RMat p(3, 3);
    p << 0.5, 0.5, 0.0, 0.25, 0.5, 0.25, 0.0, 0.5, 0.5;
    const MarkovChain c(p);
    EXPECT_NEAR(c.pi[0], 0.25, 1e-12);
    EXPECT_NEAR(c.pi[1], 0.5, 1e-12);
    EXPECT_TRUE(c.reversible);
    EXPECT_NEAR(c.gap, 0.5, 1e-12);

    RMat bad = p;
    bad(0, 0) = 0.6;
    EXPECT_THROW(MarkovChain{bad}, Error);
    RMat cyc(3, 3);
    cyc << 0, 1, 0, 0, 0, 1, 1, 0, 0;
    EXPECT_FALSE(MarkovChain(cyc).reversible);
    EXPECT_THROW(MarkovChain(cyc, std::nullopt, true), Error);
}

TEST(MarkovChain, MetropolisSatisfiesDetailedBalance) {
    Rng rng(2);
    RVec pi(6);
    for (Eigen::Index i = 0; i < 6; ++i) {
        pi[i] = 0.1 + rng.uniform();
    }
    pi /= pi.sum();
    const MarkovChain c = metropolis_chain(pi);
    for (Eigen::Index x = 0; x < 6; ++x) {
        EXPECT_NEAR(c.p.row(x).sum(), 1.0, 1e-12);
        for (Eigen::Index y = 0; y < 6; ++y) {
            EXPECT_NEAR(pi[x] * c.p(x, y), pi[y] * c.p(y, x), 1e-14);
        }
    }
    EXPECT_LE((pi.transpose() * c.p - pi.transpose()).norm(), 1e-12);
}

TEST(MarkovChain, JsonLoader) {
    const std::string path = ::testing::TempDir() + "/chain.json";
    std::ofstream(path) << R"({"P": [[0.5, 0.5], [0.5, 0.5]], "reversible": true})";
    EXPECT_NEAR(load_chain_json(path).pi[1], 0.5, 1e-12);
    std::ofstream(path) << R"({"P": [[1.0]], "q": 1})";
    EXPECT_THROW(load_chain_json(path), ConfigError);
}

TEST(Szegedy, StationaryLiftIsFixed) {
    Rng rng(3);
    for (int trial = 0; trial < 10; ++trial) {
        RVec pi(5);
        for (Eigen::Index i = 0; i < 5; ++i) {
            pi[i] = 0.05 + rng.uniform();
        }
        pi /= pi.sum();
        const WalkOperator w = build_szegedy(metropolis_chain(pi));
        EXPECT_TRUE(w.stationary_checked);
        EXPECT_LE(w.stationary_residual, 1e-10);
        EXPECT_LE((w.w * w.pi_lifted - w.pi_lifted).norm(), 1e-10);
        EXPECT_LE((w.w.adjoint() * w.w - CMat::Identity(w.w.rows(), w.w.rows())).norm(), 1e-10);
    }
}

TEST(Szegedy, SpectrumFollowsChainEigenvalues) {
    RMat p(4, 4);
    p << 0.4, 0.3, 0.2, 0.1, 0.3, 0.3, 0.2, 0.2, 0.2, 0.2, 0.3, 0.3, 0.1, 0.2, 0.3, 0.4;
    const MarkovChain c(p);
    const WalkOperator w = build_szegedy(c);
    Eigen::SelfAdjointEigenSolver<RMat> chain(p);
    Eigen::ComplexEigenSolver<CMat> walk(w.w);
    for (Eigen::Index k = 0; k < 4; ++k) {
        const double lam = chain.eigenvalues()[k];
        for (double sign : {1.0, -1.0}) {
            const cplx want = std::polar(1.0, sign * 2.0 * std::acos(lam));
            double best = 1e9;
            for (Eigen::Index i = 0; i < walk.eigenvalues().size(); ++i) {
                best = std::min(best, std::abs(walk.eigenvalues()[i] - want));
            }
            EXPECT_LE(best, 1e-8) << "lambda " << lam;
        }
    }
}

TEST(Qmcmc, ReachesTargetWithinEps) {
    RVec e(4);
    e << 0.0, 0.7, 0.2, 1.1;
    std::vector<MarkovChain> chains;
    for (double beta : {0.0, 0.5, 1.0}) {
        RVec q = (-beta * e).array().exp();
        chains.push_back(metropolis_chain(q / q.sum()));
    }
    const double eps = 1e-3;
    const QmcmcResult r = qmcmc_prepare(chains, 0.5, eps);
    ASSERT_EQ(r.stages.size(), 2u);
    for (const auto &st : r.stages) {
        EXPECT_GE(st.fidelity, 1.0 - eps / 2.0);
        EXPECT_GT(st.success_probability, 0.0);
    }
    EXPECT_GE(r.fidelity, 1.0 - eps);
    EXPECT_GT(r.walk_steps, 0u);
}

TEST(Qmcmc, Rejections) {
    const RVec skew = (RVec(2) << 0.9, 0.1).finished();
    EXPECT_THROW(qmcmc_prepare({metropolis_chain(skew)}, 0.5, 0.1), Error);
    const RVec flat = RVec::Constant(2, 0.5);
    const RVec sharp = (RVec(2) << 0.999, 0.001).finished();
    EXPECT_THROW(qmcmc_prepare({metropolis_chain(flat), metropolis_chain(sharp)}, 0.9, 0.1), Error);
}

} // namespace
} // namespace qstat
