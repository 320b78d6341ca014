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


// Acceptance runner: one PASS/FAIL line per criterion. Criteria listed with
// --expect-fail must fail and all others must pass for a zero exit status.

#include <chrono>
#include <cstdio>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <Eigen/SVD>

#include "qstat/amplitude.hpp"
#include "qstat/bench.hpp"
#include "qstat/fourier.hpp"
#include "qstat/hamsim.hpp"
#include "qstat/linalg.hpp"
#include "qstat/qsp.hpp"
#include "qstat/variational.hpp"
#include "qstat/walks.hpp"
#include "support.hpp"

namespace qstat {
namespace {

struct Verdict {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char *f, double a, double b = 0.0, double c = 0.0, double d = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c, d);
    return buf;
}

Circuit one_qubit_prep(double a) {
    Circuit c(1);
    c.append(CircuitOp::ry(0, 2.0 * std::asin(std::sqrt(a))));
    return c;
}

/// Hermitian with |eigenvalues| spread over [1/kappa, 1], both ends present.
CMat conditioned_hermitian(Eigen::Index d, double kappa, Rng &rng) {
    RVec ev(d);
    for (Eigen::Index i = 0; i < d; ++i) {
        const double mag = i == 0 ? 1.0 : i == 1 ? 1.0 / kappa : 1.0 / kappa + (1.0 - 1.0 / kappa) * rng.uniform();
        ev[i] = (rng.below(2) ? -1.0 : 1.0) * mag;
    }
    return test::hermitian_with_spectrum(ev, rng);
}

double slope(const std::vector<double> &x, const std::vector<double> &y) {
    return fit_power_law(x, y).exponent;
}

Verdict grover_optimality() {
    double worst = 1.0;
    for (int n : {4, 6, 8, 10}) {
        const auto chi = FunctionOracle::from_function(n, 1, [](std::uint64_t x) { return x == 3 ? 1ULL : 0ULL; });
        worst = std::min(worst, grover_search(GroverProblem(n, chi), std::nullopt, 1).success_probability);
    }
    const std::vector<double> sizes = {16, 64, 256, 1024};
    const ScalingFit q = scaling_study("grover", sizes, 1);
    const ScalingFit c = scaling_study("classical", sizes, 1);
    const bool ok = worst >= 0.95 && q.exponent >= 0.45 && q.exponent <= 0.55 && c.exponent >= 0.95 &&
                    c.exponent <= 1.05;
    return {ok, fmt("min success %.4f, quantum exponent %.3f, classical exponent %.3f", worst, q.exponent,
                    c.exponent)};
}

Verdict qae_bound() {
    Rng rng(2024);
    int total = 0;
    int printed = 0;
    int with_sqrt = 0;
    double worst_excess = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const double a = rng.uniform();
        const Circuit prep = one_qubit_prep(a);
        const auto chi = FunctionOracle::from_function(1, 1, [](std::uint64_t x) { return x; });
        for (int m = 4; m <= 8; ++m) {
            const AmplitudeEstimate e = qae(prep, chi, m);
            const double err = std::abs(e.a_hat - a);
            ++total;
            printed += err <= qae_error_bound(a, m);
            with_sqrt += err <= qae_error_bound_sqrt(a, m);
            worst_excess = std::max(worst_excess, err - qae_error_bound(a, m));
        }
    }
    return {printed == total,
            fmt("%.0f/%.0f within the printed bound (worst excess %.2e); %.0f/500 within the sqrt(a(1-a)) form",
                printed, total, worst_excess, with_sqrt)};
}

Verdict swap_law() {
    Rng rng(3);
    double worst = 0.0;
    double worst_sigma = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 1 + int(rng.below(3));
        const StateVector a = test::random_state(n, rng);
        const StateVector b = test::random_state(n, rng);
        const double law = (1.0 + std::norm(a.amplitudes().dot(b.amplitudes()))) / 2.0;
        worst = std::max(worst, std::abs(swap_test(a, b).p0 - law));
        if (trial < 10) {
            const double sigma = std::sqrt(law * (1.0 - law) / 1e5);
            const double dev = std::abs(swap_test(a, b, 100000, rng()).p0 - law);
            worst_sigma = std::max(worst_sigma, sigma > 0 ? dev / sigma : 0.0);
        }
    }
    return {worst <= 1e-12 && worst_sigma <= 4.0,
            fmt("exact deviation %.2e, shot deviation %.2f sigma", worst, worst_sigma)};
}

Verdict qpe_guarantee() {
    double grid_worst = 1.0;
    for (int m = 1; m <= 6; ++m) {
        for (std::uint64_t y = 0; y < (1ULL << m); ++y) {
            CMat u = CMat::Identity(2, 2);
            u(1, 1) = std::polar(1.0, 2.0 * kPi * double(y) / double(1ULL << m));
            const QpeResult r = qpe(UnitaryAccessor(u), StateVector::basis(1, 1), m);
            grid_worst = std::min(grid_worst, r.y_hat == y ? r.distribution[Eigen::Index(y)] : 0.0);
        }
    }
    Rng rng(4);
    double off_worst = 1.0;
    for (int trial = 0; trial < 50; ++trial) {
        const double theta = rng.uniform();
        const int m = 3 + int(rng.below(5));
        CMat u = CMat::Identity(2, 2);
        u(1, 1) = std::polar(1.0, 2.0 * kPi * theta);
        const QpeResult r = qpe(UnitaryAccessor(u), StateVector::basis(1, 1), m);
        const auto nearest = std::uint64_t(std::llround(theta * double(1ULL << m))) % (1ULL << m);
        off_worst = std::min(off_worst, r.distribution[Eigen::Index(nearest)]);
    }
    return {grid_worst >= 1.0 - 1e-10 && off_worst >= 4.0 / (kPi * kPi),
            fmt("grid min probability %.12f, off-grid nearest min %.4f (floor %.4f)", grid_worst, off_worst,
                4.0 / (kPi * kPi))};
}

Verdict hhl_fidelity() {
    Rng rng(5);
    double herm = 1.0;
    for (Eigen::Index d : {4, 8}) {
        for (int trial = 0; trial < 3; ++trial) {
            const CMat a = conditioned_hermitian(d, 8.0, rng);
            HhlOptions opt;
            opt.m = 7;
            herm = std::min(herm, hhl_solve(LinearSystem(a, test::random_vector(d, rng)), opt).fidelity);
        }
    }
    double dil = 1.0;
    for (int trial = 0; trial < 3; ++trial) {
        Eigen::JacobiSVD<CMat> svd(test::random_matrix(4, 6, rng), Eigen::ComputeFullU | Eigen::ComputeFullV);
        RVec s(4);
        s << 1.0, 0.125, 0.5, 0.3;
        CMat sig = CMat::Zero(4, 6);
        sig.diagonal() = s.cast<cplx>();
        const CMat a = svd.matrixU() * sig * svd.matrixV().adjoint();
        HhlOptions opt;
        opt.m = 7;
        dil = std::min(dil, hhl_solve(LinearSystem(a, test::random_vector(4, rng)), opt).fidelity);
    }
    return {herm >= 0.999 && dil >= 0.99, fmt("Hermitian min fidelity %.6f, 4x6 dilation min fidelity %.6f", herm, dil)};
}

Verdict trotter_order() {
    Rng rng(6);
    double lo = 0.0;
    double hi = -10.0;
    for (int trial = 0; trial < 5; ++trial) {
        HamiltonianSum h(2);
        h.add(1.0, test::random_hermitian(4, rng));
        h.add(1.0, test::random_hermitian(4, rng));
        const StateVector s = test::random_state(2, rng);
        const CVec ref = test::expm_hermitian(h.dense(), 1.0) * s.amplitudes();
        std::vector<double> rs;
        std::vector<double> errs;
        for (int r : {16, 32, 64, 128, 256}) {
            rs.push_back(r);
            errs.push_back((trotter_evolve(h, 1.0, r, s).amplitudes() - ref).norm());
        }
        const double k = slope(rs, errs);
        lo = std::min(lo, k);
        hi = std::max(hi, k);
    }
    return {lo >= -1.2 && hi <= -0.8, fmt("slopes in [%.4f, %.4f]", lo, hi)};
}

Verdict qubitization_spectrum() {
    Rng rng(7);
    double worst = 0.0;
    int lifted = 0;
    for (Eigen::Index d : {4, 8}) {
        for (int trial = 0; trial < 3; ++trial) {
            const CMat h = test::random_hermitian(d, rng);
            const QubitizationWalk w = build_qubitization(SparseHamiltonianAccess(h));
            lifted += w.lifted;
            Eigen::SelfAdjointEigenSolver<CMat> es(w.encoded);
            for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
                CVec in = CVec::Zero(w.t.cols());
                in.head(w.register_dim()) = es.eigenvectors().col(i);
                const CVec v0 = w.t * in;
                const CVec sv = w.swap(v0);
                const double th = std::asin(es.eigenvalues()[i] / w.norm);
                // mu = e^{i th} and mu = -e^{-i th} on the invariant plane.
                for (const cplx mu : {std::polar(1.0, th), -std::polar(1.0, -th)}) {
                    const CVec v = v0 + kI * mu * sv;
                    worst = std::max(worst, (w.apply(v) - mu * v).norm() / v.norm());
                }
            }
        }
    }
    return {worst <= 1e-9, fmt("max eigen-relation residual %.2e (%.0f lifted instances)", worst, lifted)};
}

Verdict lcu_qsp_fidelity() {
    Rng rng(8);
    double taylor = 1.0;
    double qsp = 1.0;
    for (int trial = 0; trial < 3; ++trial) {
        HamiltonianSum h(2);
        for (const char *label : {"XI", "ZY", "IZ"}) {
            h.add_pauli(rng.normal(), label);
        }
        const CMat dense = h.dense();
        const double t = 2.0 / Eigen::SelfAdjointEigenSolver<CMat>(dense).eigenvalues().cwiseAbs().maxCoeff();
        const StateVector s = test::random_state(2, rng);
        const CVec ref = test::expm_hermitian(dense, t) * s.amplitudes();
        taylor = std::min(taylor, test::fidelity(ref, lcu_evolve(h, t, 8, s).state.amplitudes()));
        qsp = std::min(qsp, test::fidelity(ref, qsp_hamiltonian_sim(dense, t, 1e-9, s).state.amplitudes()));
    }
    return {taylor >= 1.0 - 1e-8 && qsp >= 1.0 - 1e-8,
            fmt("||Ht|| = 2: Taylor K=8 infidelity %.2e, Jacobi-Anger (tail 1e-9) infidelity %.2e", 1.0 - taylor,
                1.0 - qsp)};
}

Verdict szegedy_stationarity() {
    Rng rng(9);
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        const Eigen::Index n = 2 + Eigen::Index(rng.below(7));
        RVec pi(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            pi[i] = 0.05 + rng.uniform();
        }
        pi /= pi.sum();
        const WalkOperator w = build_szegedy(metropolis_chain(pi));
        worst = std::max(worst, (w.w * w.pi_lifted - w.pi_lifted).norm());
    }
    const PortGraph g = PortGraph::cycle(4);
    const StateVector s0(g.vertex_qubits() + g.edge_qubits());
    const int steps = 256;
    const RVec c1 = coin_walk_cesaro(g, hadamard(), s0, steps);
    const RVec c2 = coin_walk_cesaro(g, hadamard(), s0, 2 * steps);
    const double drift = (c1 - c2).cwiseAbs().maxCoeff();
    StateVector s = s0;
    RVec prev = vertex_distribution(g, s);
    double swing = 0.0;
    for (int t = 1; t <= 2 * steps; ++t) {
        s = coin_walk_step(g, hadamard(), s);
        const RVec cur = vertex_distribution(g, s);
        if (t > 2 * steps - 16) {
            swing = std::max(swing, 0.5 * (cur - prev).cwiseAbs().sum());
        }
        prev = cur;
    }
    return {worst <= 1e-10 && drift <= 4.0 / steps && swing > 0.05,
            fmt("max |W pi - pi| %.2e; 4-cycle Cesaro drift %.2e (T=%.0f vs 2T), late raw TV swing %.3f", worst,
                drift, steps, swing)};
}

Verdict qmcmc_fidelity() {
    RVec e(8);
    for (Eigen::Index i = 0; i < 8; ++i) {
        e[i] = std::sin(1.3 * double(i)) + 0.1 * double(i);
    }
    std::vector<MarkovChain> chains;
    for (double beta : {0.0, 0.5, 1.0, 1.5, 2.0}) {
        RVec q = (-beta * e).array().exp();
        chains.push_back(metropolis_chain(q / q.sum()));
    }
    const double eps = 1e-2;
    const QmcmcResult r = qmcmc_prepare(chains, 0.5, eps);
    RVec target = (-2.0 * e).array().exp();
    target /= target.sum();
    CVec exact = CVec::Zero(8);
    exact.head(8) = target.cwiseSqrt().cast<cplx>();
    const double fid = std::norm(exact.dot(r.state.amplitudes()));
    return {fid >= 1.0 - eps, fmt("fidelity %.6f after %.0f stages, %.0f walk steps", fid, double(r.stages.size()),
                                  double(r.walk_steps))};
}

Verdict qsp_identities() {
    double worst = 0.0;
    for (int i = 0; i <= 1000; ++i) {
        const double x = -1.0 + 2.0 * i / 1000.0;
        worst = std::max(worst, std::abs(qsp_evaluate({0.0, 0.0}, x).p - x));
        worst = std::max(worst, std::abs(qsp_evaluate({0.0, 0.0, 0.0}, x).p - (2.0 * x * x - 1.0)));
        for (int d = 0; d <= 10; ++d) {
            const cplx p = qsp_evaluate(std::vector<double>(std::size_t(d + 1), 0.0), x).p;
            worst = std::max(worst, std::abs(p - test::chebyshev_t(d, x)));
        }
    }
    return {worst <= 1e-12, fmt("max deviation %.2e over 1001 points", worst)};
}

Verdict qsvt_inversion() {
    Rng rng(12);
    const double eps = 1e-3;
    double fid = 1.0;
    std::vector<double> scale;
    std::vector<double> degree;
    std::ostringstream degs;
    for (double kappa : {2.0, 4.0, 8.0}) {
        const CMat a = conditioned_hermitian(4, kappa, rng);
        const QsvtInverseResult r = qsvt_invert(a, kappa, eps, test::random_state(2, rng));
        fid = std::min(fid, r.fidelity);
        scale.push_back(kappa * std::log(kappa / eps));
        degree.push_back(r.degree);
        degs << (degs.tellp() ? "," : "") << r.degree;
    }
    // Least-squares constant c in degree ~ c * kappa log(kappa / eps), and the worst relative residual.
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < scale.size(); ++i) {
        num += scale[i] * degree[i];
        den += scale[i] * scale[i];
    }
    const double c = num / den;
    double resid = 0.0;
    for (std::size_t i = 0; i < scale.size(); ++i) {
        resid = std::max(resid, std::abs(degree[i] - c * scale[i]) / (c * scale[i]));
    }
    return {fid >= 1.0 - eps && resid <= 0.25,
            "min fidelity " + fmt("%.6f", fid) + ", degrees " + degs.str() +
                fmt(", fit c = %.3f, max relative residual %.3f", c, resid)};
}

Verdict fixed_point_monotone() {
    const int n = 6;
    const auto chi = FunctionOracle::from_function(n, 1, [](std::uint64_t x) { return x == 5 ? 1ULL : 0ULL; });
    Circuit a(n);
    for (int q = 0; q < n; ++q) {
        a.append(CircuitOp::h(q));
    }
    const double c = 1.0 / 8.0;
    const double delta = 0.1;
    const int lmin = fixed_point_min_length(c, delta);
    bool below = true;
    bool monotone = true;
    double last = 1.0;
    int max_calls = 0;
    for (int l = lmin; l <= lmin + 40; l += 2) {
        const FixedPointResult r = fixed_point_search(a, chi, c, delta, l);
        const double err = 1.0 - r.success_probability;
        below = below && err <= delta * delta + 1e-12;
        monotone = monotone && err <= last + 1e-12;
        last = err;
        max_calls = int(r.oracle_calls);
    }
    // Grover over the same call budgets: success rises past 1 - delta^2, then falls back.
    const GroverProblem gp(n, chi);
    bool reached = false;
    double after_peak_min = 1.0;
    for (int t = 0; t <= max_calls; ++t) {
        const double p = grover_search(gp, std::uint64_t(t), 0).success_probability;
        if (p >= 1.0 - delta * delta) {
            reached = true;
        } else if (reached) {
            after_peak_min = std::min(after_peak_min, p);
        }
    }
    const bool overshoot = reached && after_peak_min < 1.0 - delta * delta;
    return {below && monotone && overshoot,
            fmt("L=%.0f..%.0f: error <= delta^2 and non-increasing = %.0f; Grover drops to %.3f after its peak", lmin,
                lmin + 40, below && monotone, after_peak_min)};
}

Verdict qaoa_triangle() {
    const CostHamiltonian c = CostHamiltonian::maxcut(parse_edge_list("0 1\n1 2\n0 2\n"));
    std::optional<QaoaParams> warm;
    double last = -1.0;
    bool monotone = true;
    double best_cut = 0.0;
    std::ostringstream vals;
    for (int p = 1; p <= 3; ++p) {
        const QaoaResult r = qaoa_optimize(c, p, OptimizerConfig{}, 14, warm);
        monotone = monotone && r.expected_cost >= last - 1e-9;
        last = r.expected_cost;
        best_cut = std::max(best_cut, r.best_sampled_cost);
        warm = r.params;
        vals << (p > 1 ? ", " : "") << fmt("%.6f", r.expected_cost);
    }
    return {monotone && best_cut == c.max_value(),
            "<C> by depth " + vals.str() + fmt("; best sampled cut %.0f of %.0f", best_cut, c.max_value())};
}

Verdict qmc_speedup() {
    const ScalingFit q = scaling_study("qmc_quantum", {3, 7, 15, 31, 63, 127, 255, 511, 1023}, 1);
    const ScalingFit c = scaling_study("qmc_classical", {3, 7, 15, 31, 63, 127, 255, 511, 1023}, 1);
    const bool ok = q.exponent >= -1.25 && q.exponent <= -0.75 && c.exponent >= -2.25 && c.exponent <= -1.75;
    return {ok, fmt("calls ~ eps^k: quantum k = %.3f, classical k = %.3f", q.exponent, c.exponent)};
}

struct Criterion {
    int id;
    const char *name;
    double limit_s;
    std::function<Verdict()> check;
};

} // namespace
} // namespace qstat

int main(int argc, char **argv) {
    using namespace qstat;
    CLI::App app{"qstat acceptance criteria"};
    std::vector<int> expect_fail;
    std::vector<int> only;
    app.add_option("--expect-fail", expect_fail, "criteria that are known to fail")->delimiter(',');
    app.add_option("--only", only, "run a subset")->delimiter(',');
    CLI11_PARSE(app, argc, argv);

    const std::vector<Criterion> criteria = {
        {1, "grover optimality", 10, grover_optimality},
        {2, "qae error bound", 20, qae_bound},
        {3, "swap test law", 10, swap_law},
        {4, "qpe grid guarantee", 10, qpe_guarantee},
        {5, "hhl fidelity", 30, hhl_fidelity},
        {6, "trotter order", 10, trotter_order},
        {7, "qubitization spectrum", 10, qubitization_spectrum},
        {8, "lcu and qsp simulation fidelity", 20, lcu_qsp_fidelity},
        {9, "szegedy stationarity and coin walk", 20, szegedy_stationarity},
        {10, "quantum mcmc", 30, qmcmc_fidelity},
        {11, "qsp identities", 5, qsp_identities},
        {12, "qsvt inversion", 30, qsvt_inversion},
        {13, "fixed-point monotonicity", 10, fixed_point_monotone},
        {14, "qaoa triangle", 30, qaoa_triangle},
        {15, "qmc speedup signature", 60, qmc_speedup},
    };
    const std::set<int> expected(expect_fail.begin(), expect_fail.end());
    const std::set<int> subset(only.begin(), only.end());
    bool as_expected = true;
    for (const auto &c : criteria) {
        if (!subset.empty() && subset.count(c.id) == 0) {
            continue;
        }
        const auto t0 = std::chrono::steady_clock::now();
        Verdict v;
        try {
            v = c.check();
        } catch (const std::exception &e) {
            v = {false, std::string("error: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (secs >= c.limit_s) {
            v.pass = false;
            v.detail += fmt(" [over the %.0f s limit]", c.limit_s);
        }
        const bool known = expected.count(c.id) > 0;
        std::printf("%s  %2d  %-36s %s (%.2f s)%s\n", v.pass ? "PASS" : "FAIL", c.id, c.name, v.detail.c_str(), secs,
                    known ? (v.pass ? "  [expected to fail, but passed]" : "  [known failure]") : "");
        std::fflush(stdout);
        as_expected = as_expected && v.pass != known;
    }
    return as_expected ? 0 : 1;
}
