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

/**
 * @file
 * Linear algebra on top of phase estimation: applying a Hermitian matrix,
 * linear-system solving, gradient estimation and principal components.
 *
 * Eigenvalues lambda are mapped to phases theta = lambda / (2 scale), so the
 * representable range is [-scale, scale) and readouts are two's complement.
 */

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "qstat/encoding.hpp"
#include "qstat/fourier.hpp"

namespace qstat {

struct QpeTransformResult {
    /// System register only, renormalized.
    StateVector state{1};
    /// Pr[auxiliary = 1] before any postselection of the phase register.
    double success_probability = 0.0;
    /// Pr[phase register back at 0 | auxiliary = 1].
    double uncompute_probability = 0.0;
    /// Eigen-mass whose estimate fell below the regularization floor.
    double discarded_mass = 0.0;
    double scale = 0.0;
    double c = 0.0;
    std::uint64_t unitary_calls = 0;
};

/// norm * 2^(m-1) / (2^(m-1) - 1): eigenvalues in [-norm, norm] stay off the wrap point.
double qpe_scale_for(double norm, int m);

/**
 * Maps psi to a state proportional to h psi: QPE, a rotation of the auxiliary
 * by asin(lambda~ / c), uncompute. `scale` <= 0 selects qpe_scale_for with the
 * max-row-sum norm; `c` <= 0 selects the largest representable |lambda~|.
 */
QpeTransformResult apply_hermitian(const CMat &h, const StateVector &psi, int m,
                                   double c = 0.0, double scale = 0.0);

struct LinearSystem {
    CMat a;
    CVec b;

    LinearSystem(CMat a_, CVec b_);
    bool hermitian() const;
    /// sigma_max / sigma_min over the non-zero singular values.
    double condition_number() const;
    /// Classical least-norm solution.
    CVec classical_solution() const;
};

/// [[0, A], [A^dag, 0]] zero-padded to a power-of-two dimension.
CMat dilation(const CMat &a);

struct HhlOptions {
    int m = 7;
    /// Estimates with |lambda~| / scale below 1 / (2 kappa_target) are dropped.
    double kappa_target = 32.0;
    /// <= 0 selects qpe_scale_for with the spectral norm.
    double scale = 0.0;
};

struct HhlResult {
    /// Normalized solution estimate in the column space of A.
    CVec x;
    QpeTransformResult qpe;
    double fidelity = 0.0;
    bool dilated = false;
};

HhlResult hhl_solve(const LinearSystem &sys, const HhlOptions &opt = {});

struct GradientGrid {
    int dim = 1;
    /// Qubits per coordinate.
    int bits = 4;
    /// Side length of the sampling box around x0.
    double width = 1e-3;
    /// Largest |df/dx_i| the grid must represent without wrap-around.
    double gradient_bound = 1.0;
    /// Phase scale D; <= 0 derives it from gradient_bound.
    double d = 0.0;

    /// Phase scale putting gradient_bound at half the register range.
    double scale() const;
    /// Gradient resolution: one register step.
    double resolution() const;
};

struct GradientResult {
    std::vector<double> gradient;
    std::vector<std::int64_t> readouts;
    /// Max-probability mass of each coordinate register.
    std::vector<double> probability;
    std::uint64_t oracle_calls = 0;
};

/**
 * Gradient from a single phase-oracle call on a dim x bits grid:
 * phase 2 pi D f(x0 + delta), inverse QFT per coordinate.
 */
GradientResult jordan_gradient(const std::function<double(const std::vector<double> &)> &f,
                               const std::vector<double> &x0, const GradientGrid &grid);

/// One step of tr_1[e^{-i S dt} (rho (x) sigma) e^{i S dt}].
CMat swap_channel_step(const CMat &rho, const CMat &sigma, double dt);

struct QpcaComponent {
    std::uint64_t y = 0;
    double eigenvalue = 0.0;
    double probability = 0.0;
    /// Largest |<chi_j|sigma_y|chi_j>| over eigenvectors chi_j of rho.
    double eigenvector_overlap = 0.0;
    /// Eigenvalue of rho paired with that eigenvector.
    double matched_eigenvalue = 0.0;
};

struct QpcaResult {
    std::vector<QpcaComponent> components;
    RVec distribution;
    /// Copies of rho consumed.
    std::uint64_t copies = 0;
};

/**
 * Phase estimation over the swap-trick simulation of e^{-i rho t}, with
 * n_copies steps per unit controlled evolution. The probe defaults to rho
 * itself. Throws when n_copies < t^2 / eps.
 */
QpcaResult qpca(const DensityMatrix &rho, std::uint64_t n_copies, double t, int m,
                const std::optional<StateVector> &probe = std::nullopt, double eps = 0.1,
                double report_floor = 1e-6);

} // namespace qstat
