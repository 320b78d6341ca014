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


#include <gtest/gtest.h>

#include <Eigen/SVD>

#include "qstat/linalg.hpp"
#include "support.hpp"

namespace qstat {
namespace {

TEST(ApplyHermitian, GridSpectrumGivesExactProduct) {
    Rng rng(1);
    RVec ev(4);
    ev << 0.5, -0.25, 0.75, 0.125;
    const CMat h = test::hermitian_with_spectrum(ev, rng);
    const StateVector psi = test::random_state(2, rng);
    const auto r = apply_hermitian(h, psi, 4, 1.0, 1.0);
    const CVec target = h * psi.amplitudes();
    EXPECT_NEAR(test::fidelity(r.state.amplitudes(), target), 1.0, 1e-10);
    EXPECT_NEAR(r.success_probability, target.squaredNorm(), 1e-10);
    EXPECT_NEAR(r.uncompute_probability, 1.0, 1e-10);
    EXPECT_EQ(r.unitary_calls, 2u * 15u);
}

TEST(ApplyHermitian, SuccessLawOverRandomStates) {
    Rng rng(2);
    RVec ev(4);
    ev << 0.375, -0.5, 0.25, -0.125;
    const CMat h = test::hermitian_with_spectrum(ev, rng);
    for (int trial = 0; trial < 10; ++trial) {
        const StateVector psi = test::random_state(2, rng);
        const double c = 1.0 + rng.uniform();
        const auto r = apply_hermitian(h, psi, 4, c, 1.0);
        EXPECT_NEAR(r.success_probability, (h * psi.amplitudes()).squaredNorm() / (c * c), 1e-10);
    }
}

TEST(ApplyHermitian, Rejections) {
    const CMat h = pauli_z();
    EXPECT_THROW(apply_hermitian(CMat::Zero(2, 2), StateVector(1), 3), Error);
    EXPECT_THROW(apply_hermitian(h * kI, StateVector(1), 3), Error);
    EXPECT_THROW(apply_hermitian(h, StateVector(1), 3, 0.5, 1.0), Error);
}

TEST(Dilation, EigenpairsAreSignedSingularValues) {
    Rng rng(3);
    const CMat a = test::random_matrix(3, 2, rng);
    const CMat d = dilation(a);
    EXPECT_EQ(d.rows(), 8);
    EXPECT_LE((d - d.adjoint()).norm(), 0.0);
    Eigen::JacobiSVD<CMat> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
    for (Eigen::Index i = 0; i < 2; ++i) {
        for (double sign : {1.0, -1.0}) {
            CVec v = CVec::Zero(8);
            v.head(3) = svd.matrixU().col(i);
            v.segment(3, 2) = sign * svd.matrixV().col(i);
            EXPECT_LE((d * v - sign * svd.singularValues()[i] * v).norm(), 1e-12);
        }
    }
}

TEST(LinearSystem, ConditionNumberAndValidation) {
    RMat a(2, 2);
    a << 4, 0, 0, 0.5;
    const LinearSystem sys(a.cast<cplx>(), CVec::Ones(2));
    EXPECT_NEAR(sys.condition_number(), 8.0, 1e-12);
    EXPECT_TRUE(sys.hermitian());
    EXPECT_THROW(LinearSystem(CMat::Identity(2, 2), CVec::Zero(2)), Error);
    EXPECT_THROW(LinearSystem(CMat::Identity(2, 2), CVec::Ones(3)), Error);
}

TEST(Hhl, GridEigenvaluesSolveExactly) {
    Rng rng(4);
    RVec ev(4);
    ev << 0.5, -0.5, 0.25, 0.75;
    const CMat a = test::hermitian_with_spectrum(ev, rng);
    const CVec b = test::random_vector(4, rng);
    HhlOptions opt;
    opt.m = 4;
    opt.scale = 1.0;
    opt.kappa_target = 4.0;
    const auto r = hhl_solve(LinearSystem(a, b), opt);
    EXPECT_NEAR(r.fidelity, 1.0, 1e-10);
    EXPECT_FALSE(r.dilated);
}

TEST(Hhl, RandomHermitianHighFidelity) {
    Rng rng(5);
    for (int trial = 0; trial < 5; ++trial) {
        RVec ev(4);
        for (Eigen::Index i = 0; i < 4; ++i) {
            ev[i] = (rng.below(2) ? 1.0 : -1.0) * (0.125 + 0.875 * rng.uniform());
        }
        ev[0] = 1.0;
        ev[1] = 0.125;
        const CMat a = test::hermitian_with_spectrum(ev, rng);
        HhlOptions opt;
        opt.m = 8;
        opt.kappa_target = 8.0;
        const auto r = hhl_solve(LinearSystem(a, test::random_vector(4, rng)), opt);
        EXPECT_GE(r.fidelity, 0.99);
    }
}

TEST(Hhl, ScaleInvariance) {
    Rng rng(6);
    RVec ev(4);
    ev << 0.9, -0.3, 0.6, 0.2;
    const CMat a = test::hermitian_with_spectrum(ev, rng);
    const CVec b = test::random_vector(4, rng);
    const auto one = hhl_solve(LinearSystem(a, b));
    const auto three = hhl_solve(LinearSystem(3.0 * a, b));
    EXPECT_NEAR(test::fidelity(one.x, three.x), 1.0, 1e-9);
    EXPECT_NEAR(one.fidelity, three.fidelity, 1e-9);
}

TEST(Hhl, NonHermitianUsesDilation) {
    RMat a(2, 2);
    a << 1.0, 0.5, 0.0, 1.0;
    const auto r = hhl_solve(LinearSystem(a.cast<cplx>(), CVec::Ones(2)), HhlOptions{8, 8.0, 0.0});
    EXPECT_TRUE(r.dilated);
    EXPECT_GE(r.fidelity, 0.99);
}

TEST(Gradient, LinearFunctionIsExact) {
    const std::vector<double> g = {0.25, -0.5, 0.375};
    GradientGrid grid;
    grid.dim = 3;
    grid.bits = 4;
    grid.width = 0.01;
    grid.gradient_bound = 1.0;
    const auto r = jordan_gradient(
        [&](const std::vector<double> &x) { return g[0] * x[0] + g[1] * x[1] + g[2] * x[2] + 7.0; },
        {0.1, 0.2, 0.3}, grid);
    EXPECT_EQ(r.oracle_calls, 1u);
    for (std::size_t i = 0; i < 3; ++i) {
        EXPECT_NEAR(r.gradient[i], g[i], 1e-12);
        EXPECT_NEAR(r.probability[i], 1.0, 1e-10);
    }
}

TEST(Gradient, SmoothFunctionAgreesWithCentralDifferences) {
    const auto f = [](const std::vector<double> &x) { return std::sin(x[0]) * std::exp(0.3 * x[1]); };
    const std::vector<double> x0 = {0.4, -0.7};
    GradientGrid grid;
    grid.dim = 2;
    grid.bits = 6;
    grid.width = 1e-3;
    grid.gradient_bound = 1.0;
    const auto r = jordan_gradient(f, x0, grid);
    const double h = 1e-6;
    for (std::size_t i = 0; i < 2; ++i) {
        std::vector<double> up = x0;
        std::vector<double> dn = x0;
        up[i] += h;
        dn[i] -= h;
        const double cd = (f(up) - f(dn)) / (2 * h);
        EXPECT_LE(std::abs(r.gradient[i] - cd), grid.resolution()) << i;
    }
}

TEST(Gradient, RejectsWrappingScale) {
    GradientGrid grid;
    grid.d = 1e9;
    EXPECT_THROW(jordan_gradient([](const std::vector<double> &x) { return x[0]; }, {0.0}, grid), Error);
}

TEST(SwapChannel, MatchesExplicitPartialTrace) {
    Rng rng(7);
    const CMat g1 = test::random_matrix(2, 2, rng);
    const CMat g2 = test::random_matrix(2, 2, rng);
    const CMat rho = g1 * g1.adjoint() / (g1 * g1.adjoint()).trace();
    const CMat sigma = g2 * g2.adjoint() / (g2 * g2.adjoint()).trace();
    const double dt = 0.37;
    CMat sw = CMat::Zero(4, 4);
    sw(0, 0) = sw(3, 3) = sw(1, 2) = sw(2, 1) = 1.0;
    const CMat u = std::cos(dt) * CMat::Identity(4, 4) - kI * std::sin(dt) * sw;
    const CMat joint = u * test::kron(rho, sigma) * u.adjoint();
    CMat reduced = CMat::Zero(2, 2);
    for (Eigen::Index k = 0; k < 2; ++k) {
        reduced += joint.block(2 * k, 2 * k, 2, 2);
    }
    EXPECT_LE((swap_channel_step(rho, sigma, dt) - reduced).norm(), 1e-12);
}

TEST(Qpca, RecoversPrincipalComponents) {
    Rng rng(8);
    RVec ev(2);
    ev << 0.75, 0.25;
    const DensityMatrix rho(test::hermitian_with_spectrum(ev, rng));
    const auto r = qpca(rho, 400, 2.0 * kPi, 2);
    int major = 0;
    for (const auto &c : r.components) {
        if (c.probability < 0.05) {
            continue;
        }
        ++major;
        EXPECT_NEAR(c.eigenvalue, c.matched_eigenvalue, 1e-12);
        EXPECT_NEAR(c.probability, c.matched_eigenvalue, 0.05);
        EXPECT_GE(c.eigenvector_overlap, 0.9);
    }
    EXPECT_EQ(major, 2);
    EXPECT_GE(r.distribution.maxCoeff(), 0.7);
    EXPECT_EQ(r.copies, 400u * 3u);
    EXPECT_THROW(qpca(rho, 10, 2.0 * kPi, 2), Error);
}

} // namespace
} // namespace qstat
