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

#include "qstat/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <thread>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <gsl/gsl_cdf.h>

#include "bits.hpp"
#include "qstat/amplitude.hpp"
#include "qstat/circuit_json.hpp"
#include "qstat/fourier.hpp"
#include "qstat/hamsim.hpp"
#include "qstat/linalg.hpp"
#include "qstat/qsp.hpp"
#include "qstat/rng.hpp"
#include "qstat/variational.hpp"
#include "qstat/walks.hpp"

#ifndef QSTAT_VERSION
#define QSTAT_VERSION "0.1.0"
#endif

namespace qstat {

using nlohmann::json;

namespace {

class Params {
  public:
    Params(const json &j, std::initializer_list<const char *> allowed, const std::string &alg)
        : j_(j), alg_(alg) {
        if (!j_.is_object()) {
            throw ConfigError(alg + ": params must be a JSON object");
        }
        std::set<std::string> ok(allowed.begin(), allowed.end());
        for (const auto &[key, _] : j_.items()) {
            if (ok.count(key) == 0) {
                throw ConfigError(alg + ": unknown key 'params." + key + "'");
            }
        }
    }

    bool has(const char *key) const { return j_.contains(key); }

    template <class T> T get(const char *key, T fallback) const {
        if (!j_.contains(key)) {
            return fallback;
        }
        try {
            return j_.at(key).get<T>();
        } catch (const json::exception &e) {
            throw ConfigError(alg_ + ": bad value for 'params." + key + "': " + e.what());
        }
    }

    const json &raw(const char *key) const { return j_.at(key); }

    CMat matrix(const char *key) const {
        try {
            return matrix_from_json(j_.at(key));
        } catch (const json::exception &e) {
            throw ConfigError(alg_ + ": bad matrix 'params." + key + "': " + e.what());
        }
    }

  private:
    const json &j_;
    std::string alg_;
};

struct Outcome {
    json est = json::object();
    json exact = json::object();
    json err = json::object();
    std::uint64_t calls = 0;
    bool passed = false;
};

std::set<std::uint64_t> marked_set(const Params &p, std::uint64_t n_items,
                                   std::vector<std::uint64_t> fallback) {
    const auto marked = p.get<std::vector<std::uint64_t>>("marked", std::move(fallback));
    std::set<std::uint64_t> s;
    for (auto m : marked) {
        if (m >= n_items) {
            throw ConfigError("marked index " + std::to_string(m) + " outside the domain");
        }
        s.insert(m);
    }
    return s;
}

FunctionOracle marker(int n, const std::set<std::uint64_t> &marked) {
    return FunctionOracle::from_function(
        n, 1, [&marked](std::uint64_t x) { return marked.count(x) ? 1ULL : 0ULL; });
}

ReadoutMode readout(const Params &p) {
    const auto mode = p.get<std::string>("mode", "exact");
    if (mode == "exact") {
        return ReadoutMode::Exact;
    }
    if (mode == "sampled") {
        return ReadoutMode::Sampled;
    }
    throw ConfigError("mode must be 'exact' or 'sampled'");
}

CVec random_unit(Eigen::Index d, Rng &rng) {
    CVec v(d);
    for (Eigen::Index i = 0; i < d; ++i) {
        v[i] = cplx(rng.normal(), rng.normal());
    }
    return v.normalized();
}

/// Hermitian with eigenvalues of alternating sign and magnitudes spread over [1/kappa, 1].
CMat random_hermitian(Eigen::Index d, double kappa, Rng &rng) {
    CMat g(d, d);
    for (Eigen::Index i = 0; i < d; ++i) {
        for (Eigen::Index j = 0; j < d; ++j) {
            g(i, j) = cplx(rng.normal(), rng.normal());
        }
    }
    Eigen::SelfAdjointEigenSolver<CMat> es((g + g.adjoint()) / 2.0);
    RVec ev(d);
    for (Eigen::Index i = 0; i < d; ++i) {
        const double mag = d > 1 ? 1.0 / kappa + (1.0 - 1.0 / kappa) * i / (d - 1.0) : 1.0;
        ev[i] = (i % 2 ? -1.0 : 1.0) * mag;
    }
    return es.eigenvectors() * ev.cast<cplx>().asDiagonal() * es.eigenvectors().adjoint();
}

HamiltonianSum hamiltonian_terms(const Params &p, const std::vector<std::pair<double, std::string>> &fallback) {
    std::vector<std::pair<double, std::string>> terms = fallback;
    if (p.has("terms")) {
        terms.clear();
        const json &t = p.raw("terms");
        if (!t.is_array() || t.empty()) {
            throw ConfigError("params.terms must be a non-empty array");
        }
        for (const auto &term : t) {
            for (const auto &[key, _] : term.items()) {
                if (key != "alpha" && key != "pauli") {
                    throw ConfigError("unknown key 'params.terms[]." + key + "'");
                }
            }
            try {
                terms.emplace_back(term.at("alpha").get<double>(), term.at("pauli").get<std::string>());
            } catch (const json::exception &e) {
                throw ConfigError(std::string("bad Hamiltonian term: ") + e.what());
            }
        }
    }
    HamiltonianSum h(static_cast<int>(terms[0].second.size()));
    for (const auto &[a, s] : terms) {
        h.add_pauli(a, s);
    }
    return h;
}

StateVector initial_state(const Params &p, int n) {
    if (p.has("psi")) {
        const auto v = p.get<std::vector<double>>("psi", {});
        CVec a(static_cast<Eigen::Index>(v.size()));
        for (std::size_t i = 0; i < v.size(); ++i) {
            a[static_cast<Eigen::Index>(i)] = v[i];
        }
        return StateVector::from_unnormalized(a);
    }
    return StateVector(n);
}

double fidelity(const CVec &a, const CVec &b) { return std::norm(a.normalized().dot(b.normalized())); }

json vec_json(const CVec &v) {
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        out.push_back({v[i].real(), v[i].imag()});
    }
    return out;
}

json vec_json(const RVec &v) { return std::vector<double>(v.data(), v.data() + v.size()); }

// ---------------------------------------------------------------- amplitude suite

Outcome run_grover(const json &j, std::uint64_t seed) {
    const Params p(j, {"n", "marked", "iterations"}, "grover");
    const int n = p.get<int>("n", 6);
    check_qubit_count(n + 1);
    const auto marked = marked_set(p, 1ULL << n, {0});
    GroverProblem gp(n, marker(n, marked));
    std::optional<std::uint64_t> iters;
    if (p.has("iterations")) {
        iters = p.get<std::uint64_t>("iterations", 0);
    }
    const GroverResult r = grover_search(gp, iters, seed);
    const double law = qaa_success_law(std::sqrt(double(marked.size()) / double(1ULL << n)), r.iterations);
    Outcome o;
    o.est = {{"success_probability", r.success_probability}, {"outcome", r.outcome},
             {"iterations", r.iterations}, {"found", r.found}};
    o.exact = {{"success_probability", law}};
    o.err = {{"success_probability", std::abs(r.success_probability - law)}};
    o.calls = r.oracle_calls;
    o.passed = std::abs(r.success_probability - law) <= 1e-9;
    return o;
}

Outcome run_qaa(const json &j, std::uint64_t) {
    const Params p(j, {"n", "marked", "angle", "t"}, "qaa");
    const int n = p.get<int>("n", 3);
    check_qubit_count(n + 1);
    const auto marked = marked_set(p, 1ULL << n, {0});
    const double angle = p.get<double>("angle", kPi / 2.0);
    Circuit a(n);
    for (int q = 0; q < n; ++q) {
        a.append(CircuitOp::ry(q, angle));
    }
    const FunctionOracle chi = marker(n, marked);
    const QaaResult probe = qaa(a, chi, 0);
    const double theta = std::asin(std::min(1.0, probe.initial_amplitude));
    const auto t = p.get<std::uint64_t>(
        "t", static_cast<std::uint64_t>(std::max(0.0, std::round(kPi / (4.0 * theta) - 0.5))));
    const QaaResult r = qaa(a, chi, t);
    const double law = qaa_success_law(r.initial_amplitude, t);
    Outcome o;
    o.est = {{"good_probability", r.good_probability}, {"t", t},
             {"initial_amplitude", r.initial_amplitude}};
    o.exact = {{"good_probability", law}};
    o.err = {{"good_probability", std::abs(r.good_probability - law)}};
    o.calls = r.oracle_calls;
    o.passed = std::abs(r.good_probability - law) <= 1e-9;
    return o;
}

Outcome run_qae(const json &j, std::uint64_t seed) {
    const Params p(j, {"a", "m", "mode"}, "qae");
    const double a = p.get<double>("a", 0.3);
    const int m = p.get<int>("m", 6);
    if (!(a >= 0.0 && a <= 1.0)) {
        throw ConfigError("qae: a must lie in [0, 1]");
    }
    Circuit c(1);
    c.append(CircuitOp::ry(0, 2.0 * std::asin(std::sqrt(a))));
    const auto chi = FunctionOracle::from_function(1, 1, [](std::uint64_t x) { return x; });
    const AmplitudeEstimate r = qae(c, chi, m, readout(p), seed);
    const double err = std::abs(r.a_hat - a);
    Outcome o;
    o.est = {{"a_hat", r.a_hat}, {"y_hat", r.y_hat}, {"probability", r.probability}};
    o.exact = {{"a", a}, {"bound", qae_error_bound(a, m)}, {"bound_sqrt", qae_error_bound_sqrt(a, m)}};
    o.err = {{"a", err}, {"within_bound", err <= qae_error_bound(a, m)},
             {"within_bound_sqrt", err <= qae_error_bound_sqrt(a, m)}};
    o.calls = r.q_applications;
    o.passed = err <= qae_error_bound(a, m);
    return o;
}

Outcome run_mean(const json &j, std::uint64_t seed) {
    const Params p(j, {"values", "bits", "m", "full_scale", "mode"}, "mean");
    const auto values = p.get<std::vector<std::uint64_t>>("values", {0, 1, 2, 3, 4, 5, 6, 7});
    const int n = qubits_for(values.size());
    if ((std::size_t{1} << n) != values.size()) {
        throw ConfigError("mean: the number of values must be a power of two");
    }
    const std::uint64_t top = *std::max_element(values.begin(), values.end());
    const int bits = p.get<int>("bits", std::max(1, qubits_for(top + 1)));
    const int m = p.get<int>("m", 8);
    const double full = p.get<double>("full_scale", 0.0);
    const FunctionOracle f(n, bits, values);
    const AmplitudeEstimate r = estimate_mean_bounded(f, m, full, readout(p), seed);
    const double err = std::abs(r.a_hat - r.a_exact);
    Outcome o;
    o.est = {{"mean", r.a_hat}};
    o.exact = {{"mean", r.a_exact}};
    o.err = {{"mean", err}};
    o.calls = r.q_applications;
    o.passed = err <= qae_error_bound_sqrt(r.a_exact, m);
    return o;
}

std::vector<double> value_list(const Params &p, std::uint64_t seed, int default_n) {
    if (p.has("values")) {
        return p.get<std::vector<double>>("values", {});
    }
    const int n = p.get<int>("n", default_n);
    Rng rng(seed ^ 0xabcdefULL);
    std::vector<double> v(std::size_t{1} << n);
    for (auto &x : v) {
        x = rng.uniform();
    }
    return v;
}

Outcome run_min(const json &j, std::uint64_t seed) {
    const Params p(j, {"values", "n", "budget_multiplier"}, "min");
    const auto v = value_list(p, seed, 5);
    const SearchOutcome r = find_minimum(v, seed, p.get<double>("budget_multiplier", 1.0));
    const double best = *std::min_element(v.begin(), v.end());
    Outcome o;
    o.est = {{"index", r.index}, {"value", v[r.index]}, {"budget_exhausted", r.budget_exhausted}};
    o.exact = {{"value", best}, {"budget", minimum_call_budget(v.size())}};
    o.err = {{"value", v[r.index] - best}};
    o.calls = r.oracle_calls;
    o.passed = v[r.index] == best;
    return o;
}

Outcome run_kth(const json &j, std::uint64_t seed) {
    const Params p(j, {"values", "n", "k", "delta"}, "kth");
    const auto v = value_list(p, seed, 4);
    const auto k = p.get<std::uint64_t>("k", 3);
    const double delta = p.get<double>("delta", 0.5);
    const SearchOutcome r = kth_smallest(v, k, delta, seed);
    const double x = v[r.index];
    const auto below = static_cast<double>(std::count_if(v.begin(), v.end(), [x](double y) { return y < x; }));
    const auto ties = static_cast<double>(std::count(v.begin(), v.end(), x));
    // Any rank the tied block can take counts.
    const bool ok = below + 1.0 < k + delta && below + ties > k - delta;
    Outcome o;
    o.est = {{"index", r.index}, {"value", x}, {"rank_low", below + 1.0}, {"rank_high", below + ties}};
    o.exact = {{"k", k}};
    o.err = {{"rank", std::max(0.0, std::min(std::abs(below + 1.0 - k), std::abs(below + ties - k)))}};
    o.calls = r.oracle_calls;
    o.passed = ok;
    return o;
}

Outcome run_count(const json &j, std::uint64_t seed) {
    const Params p(j, {"n", "marked", "m", "mode"}, "count");
    const int n = p.get<int>("n", 4);
    const auto marked = marked_set(p, 1ULL << n, {1, 2, 3});
    const int m = p.get<int>("m", 7);
    const CountEstimate r = quantum_count(marker(n, marked), m, readout(p), seed);
    Outcome o;
    o.est = {{"count", r.count}, {"a_hat", r.qae.a_hat}};
    o.exact = {{"count", marked.size()}};
    o.err = {{"count", std::abs(double(r.count) - double(marked.size()))}};
    o.calls = r.qae.q_applications;
    o.passed = r.count == marked.size();
    return o;
}

Outcome run_qmc(const json &j, std::uint64_t seed) {
    const Params p(j, {"p", "f", "m", "mode"}, "qmc");
    const auto pr = p.get<std::vector<double>>("p", {0.1, 0.2, 0.3, 0.4});
    const auto f = p.get<std::vector<double>>("f", {0.0, 0.5, 0.25, 1.0});
    const int m = p.get<int>("m", 8);
    const AmplitudeEstimate r = quantum_monte_carlo(pr, f, m, readout(p), seed);
    const double err = std::abs(r.a_hat - r.a_exact);
    Outcome o;
    o.est = {{"mean", r.a_hat}};
    o.exact = {{"mean", r.a_exact}};
    o.err = {{"mean", err}};
    o.calls = r.q_applications;
    o.passed = err <= qae_error_bound_sqrt(r.a_exact, m);
    return o;
}

Outcome run_swap(const json &j, std::uint64_t seed) {
    const Params p(j, {"a", "b", "n", "shots"}, "swap");
    const auto shots = p.get<std::uint64_t>("shots", 0);
    StateVector a(1);
    StateVector b(1);
    if (p.has("a") || p.has("b")) {
        a = amplitude_encode(p.get<std::vector<double>>("a", {1.0, 0.0}));
        b = amplitude_encode(p.get<std::vector<double>>("b", {1.0, 0.0}));
    } else {
        Rng rng(seed ^ 0x5a5aULL);
        const int n = p.get<int>("n", 2);
        const Eigen::Index d = Eigen::Index{1} << n;
        a = StateVector::from_amplitudes(random_unit(d, rng));
        b = StateVector::from_amplitudes(random_unit(d, rng));
    }
    const SwapTestResult r = swap_test(a, b, shots, seed);
    const double law = (1.0 + std::norm(inner_product(a, b))) / 2.0;
    const double err = std::abs(r.p0 - law);
    const double sigma = shots ? std::sqrt(law * (1.0 - law) / double(shots)) : 0.0;
    Outcome o;
    o.est = {{"p0", r.p0}, {"overlap", r.overlap}, {"std_error", r.std_error}};
    o.exact = {{"p0", law}};
    o.err = {{"p0", err}, {"sigma", sigma}};
    o.calls = std::max<std::uint64_t>(shots, 1);
    o.passed = shots == 0 ? err <= 1e-12 : err <= 4.0 * sigma + 1e-12;
    return o;
}

// ---------------------------------------------------------------- Fourier

Outcome run_qft(const json &j, std::uint64_t seed) {
    const Params p(j, {"n", "basis", "random"}, "qft");
    const int n = p.get<int>("n", 3);
    StateVector s = StateVector::basis(n, p.get<std::uint64_t>("basis", 5));
    if (p.get<bool>("random", false)) {
        Rng rng(seed);
        s = StateVector::from_amplitudes(random_unit(Eigen::Index{1} << n, rng));
    }
    const CVec in = s.amplitudes();
    qft(s, detail::range(0, n));
    const Eigen::Index d = in.size();
    CVec ref = CVec::Zero(d);
    for (Eigen::Index k = 0; k < d; ++k) {
        for (Eigen::Index m = 0; m < d; ++m) {
            ref[k] += in[m] * std::polar(1.0, 2.0 * kPi * double(k * m % d) / double(d));
        }
    }
    ref /= std::sqrt(double(d));
    const double err = (ref - s.amplitudes()).cwiseAbs().maxCoeff();
    Outcome o;
    o.est = {{"amplitudes", vec_json(s.amplitudes())}};
    o.exact = {{"amplitudes", vec_json(ref)}};
    o.err = {{"max_abs", err}};
    o.passed = err <= 1e-12;
    return o;
}

Outcome run_qpe(const json &j, std::uint64_t seed) {
    const Params p(j, {"theta", "m", "mode"}, "qpe");
    const double theta = p.get<double>("theta", 0.3);
    const int m = p.get<int>("m", 6);
    CMat u = CMat::Identity(2, 2);
    u(1, 1) = std::polar(1.0, 2.0 * kPi * theta);
    const UnitaryAccessor acc(u);
    const QpeResult r = qpe(acc, StateVector::basis(1, 1), m, readout(p), seed);
    const double grid = double(1ULL << m);
    const double frac = theta - std::floor(theta);
    const auto nearest = static_cast<std::uint64_t>(std::llround(frac * grid)) % (1ULL << m);
    const bool on_grid = std::abs(frac * grid - std::round(frac * grid)) < 1e-12;
    const double pn = r.distribution[static_cast<Eigen::Index>(nearest)];
    double dist = std::abs(r.theta() - frac);
    dist = std::min(dist, 1.0 - dist);
    Outcome o;
    o.est = {{"theta", r.theta()}, {"y_hat", r.y_hat}, {"nearest_probability", pn}};
    o.exact = {{"theta", frac}, {"on_grid", on_grid}};
    o.err = {{"theta", dist}};
    o.calls = r.calls;
    o.passed = on_grid ? pn >= 1.0 - 1e-10 : pn >= 4.0 / (kPi * kPi);
    return o;
}

// ---------------------------------------------------------------- linear algebra

Outcome run_hhl(const json &j, std::uint64_t seed) {
    const Params p(j, {"a", "b", "n", "kappa", "m", "kappa_target", "min_fidelity"}, "hhl");
    Rng rng(seed);
    const CMat a = p.has("a") ? p.matrix("a")
                              : random_hermitian(p.get<int>("n", 4), p.get<double>("kappa", 8.0), rng);
    CVec b;
    if (p.has("b")) {
        const auto bv = p.get<std::vector<double>>("b", {});
        b = Eigen::Map<const RVec>(bv.data(), Eigen::Index(bv.size())).cast<cplx>();
    } else {
        b = random_unit(a.rows(), rng);
    }
    HhlOptions opt;
    opt.m = p.get<int>("m", 7);
    opt.kappa_target = p.get<double>("kappa_target", 32.0);
    const LinearSystem sys(a, b);
    const HhlResult r = hhl_solve(sys, opt);
    const double tol = p.get<double>("min_fidelity", 0.99);
    Outcome o;
    o.est = {{"fidelity", r.fidelity}, {"success_probability", r.qpe.success_probability},
             {"dilated", r.dilated}, {"kappa", sys.condition_number()}};
    o.exact = {{"x", vec_json(CVec(sys.classical_solution().normalized()))}};
    o.err = {{"infidelity", 1.0 - r.fidelity}};
    o.calls = r.qpe.unitary_calls;
    o.passed = r.fidelity >= tol;
    return o;
}

Outcome run_gradient(const json &j, std::uint64_t) {
    const Params p(j, {"gradient", "curvature", "x0", "bits", "width", "bound"}, "gradient");
    const auto g = p.get<std::vector<double>>("gradient", {1.5, -2.25});
    const double curv = p.get<double>("curvature", 0.0);
    const auto x0 = p.get<std::vector<double>>("x0", std::vector<double>(g.size(), 0.0));
    if (x0.size() != g.size() || g.empty()) {
        throw ConfigError("gradient: x0 and gradient must have equal non-zero length");
    }
    GradientGrid grid{static_cast<int>(g.size()), p.get<int>("bits", 6), p.get<double>("width", 1e-3),
                      p.get<double>("bound", 4.0)};
    const auto f = [&](const std::vector<double> &x) {
        double v = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            v += g[i] * x[i] + curv * x[i] * x[i];
        }
        return v;
    };
    const GradientResult r = jordan_gradient(f, x0, grid);
    double worst = 0.0;
    std::vector<double> exact(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        exact[i] = g[i] + 2.0 * curv * x0[i];
        worst = std::max(worst, std::abs(r.gradient[i] - exact[i]));
    }
    Outcome o;
    o.est = {{"gradient", r.gradient}, {"resolution", grid.resolution()}};
    o.exact = {{"gradient", exact}};
    o.err = {{"max_abs", worst}};
    o.calls = r.oracle_calls;
    o.passed = worst <= grid.resolution() + 1e-12;
    return o;
}

Outcome run_qpca(const json &j, std::uint64_t) {
    const Params p(j, {"eigenvalues", "rho", "copies", "t", "m", "eps"}, "qpca");
    CMat rho;
    if (p.has("rho")) {
        rho = p.matrix("rho");
    } else {
        const auto ev = p.get<std::vector<double>>("eigenvalues", {0.75, 0.25});
        rho = CMat::Zero(Eigen::Index(ev.size()), Eigen::Index(ev.size()));
        for (std::size_t i = 0; i < ev.size(); ++i) {
            rho(Eigen::Index(i), Eigen::Index(i)) = ev[i];
        }
    }
    const double t = p.get<double>("t", 2.0 * kPi);
    const int m = p.get<int>("m", 2);
    const QpcaResult r = qpca(DensityMatrix(rho), p.get<std::uint64_t>("copies", 200), t, m,
                              std::nullopt, p.get<double>("eps", 0.2));
    Eigen::SelfAdjointEigenSolver<CMat> es(rho);
    const double res = 2.0 * kPi / (t * double(1ULL << m));
    json comps = json::array();
    bool ok = true;
    for (const auto &c : r.components) {
        comps.push_back({{"y", c.y}, {"eigenvalue", c.eigenvalue}, {"probability", c.probability},
                         {"overlap", c.eigenvector_overlap}});
        if (c.probability > 0.1) {
            double best = 1e300;
            for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
                best = std::min(best, std::abs(es.eigenvalues()[i] - c.eigenvalue));
            }
            ok = ok && best <= res + 1e-12;
        }
    }
    Outcome o;
    o.est = {{"components", comps}};
    o.exact = {{"eigenvalues", vec_json(RVec(es.eigenvalues()))}, {"resolution", res}};
    o.err = json::object();
    o.calls = r.copies;
    o.passed = ok;
    return o;
}

// ---------------------------------------------------------------- walks

Outcome run_coinwalk(const json &j, std::uint64_t) {
    const Params p(j, {"n", "steps"}, "coinwalk");
    const int n = p.get<int>("n", 4);
    const int steps = p.get<int>("steps", 256);
    const PortGraph g = PortGraph::cycle(n);
    CMat h(2, 2);
    h << 1, 1, 1, -1;
    h /= std::sqrt(2.0);
    const StateVector s0(g.vertex_qubits() + g.edge_qubits());
    const RVec c1 = coin_walk_cesaro(g, h, s0, steps);
    const RVec c2 = coin_walk_cesaro(g, h, s0, 2 * steps);
    const double drift = 0.5 * (c1 - c2).cwiseAbs().sum();
    // Raw distribution: largest total-variation jump over the last 16 steps.
    StateVector s = s0;
    RVec prev = vertex_distribution(g, s);
    double swing = 0.0;
    for (int t = 1; t <= 2 * steps; ++t) {
        s = coin_walk_step(g, h, s);
        const RVec cur = vertex_distribution(g, s);
        if (t > 2 * steps - 16) {
            swing = std::max(swing, 0.5 * (cur - prev).cwiseAbs().sum());
        }
        prev = cur;
    }
    Outcome o;
    o.est = {{"cesaro", vec_json(c2)}, {"cesaro_drift", drift}, {"raw_swing", swing}};
    o.exact = {{"drift_bound", 4.0 / steps}};
    o.err = {{"cesaro_drift", drift}};
    o.calls = static_cast<std::uint64_t>(3 * steps);
    o.passed = drift <= 4.0 / steps && swing > 0.05;
    return o;
}

Outcome run_szegedy(const json &j, std::uint64_t seed) {
    const Params p(j, {"pi", "n", "chains"}, "szegedy");
    std::vector<RVec> targets;
    if (p.has("pi")) {
        const auto v = p.get<std::vector<double>>("pi", {});
        targets.push_back(Eigen::Map<const RVec>(v.data(), Eigen::Index(v.size())));
    } else {
        Rng rng(seed);
        const int count = p.get<int>("chains", 20);
        const int nmax = p.get<int>("n", 8);
        for (int c = 0; c < count; ++c) {
            const int n = 2 + static_cast<int>(rng.below(static_cast<std::uint64_t>(nmax - 1)));
            RVec pi(n);
            for (int i = 0; i < n; ++i) {
                pi[i] = 0.05 + rng.uniform();
            }
            targets.push_back(pi / pi.sum());
        }
    }
    double worst = 0.0;
    double min_gap = 1.0;
    for (const auto &pi : targets) {
        const MarkovChain mc = metropolis_chain(pi);
        const WalkOperator w = build_szegedy(mc);
        worst = std::max(worst, w.stationary_residual);
        min_gap = std::min(min_gap, mc.gap);
    }
    Outcome o;
    o.est = {{"max_residual", worst}, {"chains", targets.size()}, {"min_gap", min_gap}};
    o.exact = {{"residual", 0.0}};
    o.err = {{"max_residual", worst}};
    o.calls = targets.size();
    o.passed = worst <= 1e-10;
    return o;
}

Outcome run_qmcmc(const json &j, std::uint64_t) {
    const Params p(j, {"energies", "betas", "eps", "overlap_floor"}, "qmcmc");
    std::vector<double> e(8);
    for (int i = 0; i < 8; ++i) {
        e[std::size_t(i)] = std::sin(i * 1.3) + 0.1 * i;
    }
    e = p.get<std::vector<double>>("energies", e);
    const auto betas = p.get<std::vector<double>>("betas", {0.0, 0.5, 1.0, 1.5, 2.0});
    const double eps = p.get<double>("eps", 1e-2);
    const RVec en = Eigen::Map<const RVec>(e.data(), Eigen::Index(e.size()));
    std::vector<MarkovChain> chains;
    RVec target;
    for (double beta : betas) {
        RVec q = (-beta * en).array().exp();
        q /= q.sum();
        chains.push_back(metropolis_chain(q));
        target = q;
    }
    const QmcmcResult r = qmcmc_prepare(chains, p.get<double>("overlap_floor", 0.5), eps);
    Outcome o;
    o.est = {{"fidelity", r.fidelity}, {"stages", r.stages.size()}};
    o.exact = {{"target", vec_json(target)}};
    o.err = {{"infidelity", 1.0 - r.fidelity}};
    o.calls = r.walk_steps;
    o.passed = r.fidelity >= 1.0 - eps;
    return o;
}

// ---------------------------------------------------------------- Hamiltonian simulation

Outcome run_trotter(const json &j, std::uint64_t) {
    const Params p(j, {"terms", "t", "r", "rs", "psi"}, "trotter");
    const HamiltonianSum h = hamiltonian_terms(p, {{1.0, "X"}, {1.0, "Z"}});
    const double t = p.get<double>("t", 1.0);
    const StateVector s = initial_state(p, h.n);
    const CVec ref = evolution_operator(h.dense(), t) * s.amplitudes();
    std::vector<int> rs = p.get<std::vector<int>>("rs", {16, 32, 64, 128, 256});
    if (p.has("r")) {
        rs = {p.get<int>("r", 1)};
    }
    std::vector<double> xs;
    std::vector<double> errs;
    for (int r : rs) {
        const StateVector out = trotter_evolve(h, t, r, s);
        xs.push_back(r);
        errs.push_back((out.amplitudes() - ref).norm());
    }
    Outcome o;
    o.est = {{"r", rs}, {"error", errs}};
    o.exact = {{"state", vec_json(ref)}};
    o.passed = true;
    if (rs.size() >= 4) {
        const ScalingFit fit = fit_power_law(xs, errs);
        o.est["slope"] = fit.exponent;
        o.err = {{"slope_from_first_order", std::abs(fit.exponent + 1.0)}};
        o.passed = fit.exponent >= -1.2 && fit.exponent <= -0.8;
    }
    for (int r : rs) {
        o.calls += static_cast<std::uint64_t>(r) * h.terms.size();
    }
    return o;
}

Outcome run_lcu(const json &j, std::uint64_t) {
    const Params p(j, {"terms", "t", "k", "method", "eps", "psi", "min_fidelity"}, "lcu");
    const HamiltonianSum h = hamiltonian_terms(p, {{1.0 / std::sqrt(2.0), "X"}, {1.0 / std::sqrt(2.0), "Z"}});
    const double t = p.get<double>("t", 0.5);
    const StateVector s = initial_state(p, h.n);
    const CVec ref = evolution_operator(h.dense(), t) * s.amplitudes();
    const auto method = p.get<std::string>("method", "taylor");
    Outcome o;
    double fid = 0.0;
    if (method == "taylor") {
        const LcuResult r = lcu_evolve(h, t, p.get<int>("k", 8), s);
        fid = fidelity(ref, r.state.amplitudes());
        o.est = {{"fidelity", fid}, {"success_probability", r.success_probability},
                 {"segments", r.segments}, {"lcu_terms", r.lcu_terms}};
        o.calls = static_cast<std::uint64_t>(3 * r.segments);
    } else if (method == "qsp") {
        const QspSimResult r = qsp_hamiltonian_sim(h.dense(), t, p.get<double>("eps", 1e-8), s);
        fid = fidelity(ref, r.state.amplitudes());
        o.est = {{"fidelity", fid}, {"success_probability", r.success_probability},
                 {"cos_degree", r.cos_degree}, {"sin_degree", r.sin_degree}};
        o.calls = static_cast<std::uint64_t>(r.cos_degree + r.sin_degree);
    } else {
        throw ConfigError("lcu: method must be 'taylor' or 'qsp'");
    }
    o.exact = {{"state", vec_json(ref)}};
    o.err = {{"infidelity", 1.0 - fid}};
    o.passed = fid >= p.get<double>("min_fidelity", 1.0 - 1e-8);
    return o;
}

Outcome run_qubitize(const json &j, std::uint64_t seed) {
    const Params p(j, {"h", "n", "t", "k", "eps"}, "qubitize");
    Rng rng(seed);
    CMat h;
    if (p.has("h")) {
        h = p.matrix("h");
    } else {
        const int n = p.get<int>("n", 4);
        CMat g(n, n);
        for (int a = 0; a < n; ++a) {
            for (int b = 0; b < n; ++b) {
                g(a, b) = cplx(rng.normal(), rng.normal());
            }
        }
        h = (g + g.adjoint()) / 2.0;
    }
    const SparseHamiltonianAccess acc(h);
    const QubitizationWalk w = build_qubitization(acc);
    Eigen::SelfAdjointEigenSolver<CMat> es(w.encoded);
    double worst = 0.0;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
        CVec in = CVec::Zero(2 * w.register_dim());
        in.head(w.register_dim()) = es.eigenvectors().col(i);
        const CVec v0 = w.t * in;
        const CVec sv = w.swap(v0);
        const double th = std::asin(std::clamp(es.eigenvalues()[i] / w.norm, -1.0, 1.0));
        for (const cplx mu : {std::polar(1.0, th), -std::polar(1.0, -th)}) {
            const CVec v = v0 + kI * mu * sv;
            if (v.norm() < 1e-12) {
                continue;
            }
            worst = std::max(worst, (w.apply(v) - mu * v).norm() / v.norm());
        }
    }
    const double t = p.get<double>("t", 1.0);
    const double eps = p.get<double>("eps", 1e-10);
    const int k = p.get<int>("k", bessel_truncation(t * w.norm, eps));
    const StateVector s = StateVector::from_amplitudes(random_unit(h.rows(), rng));
    const QwEvolveResult r = qw_lcu_evolve(w, t, k, s);
    const double fid = fidelity(evolution_operator(h, t) * s.amplitudes(), r.state.amplitudes());
    Outcome o;
    o.est = {{"eigen_error", worst}, {"fidelity", fid}, {"k", k}, {"lifted", w.lifted},
             {"norm", w.norm}, {"success_probability", r.success_probability}};
    o.exact = {{"eigen_error", 0.0}};
    o.err = {{"eigen_error", worst}, {"infidelity", 1.0 - fid}};
    o.calls = static_cast<std::uint64_t>(2 * k);
    o.passed = worst <= 1e-9 && fid >= 1.0 - 1e-8;
    return o;
}

// ---------------------------------------------------------------- signal processing

Outcome run_qsp(const json &j, std::uint64_t) {
    const Params p(j, {"phases", "coefficients", "points"}, "qsp");
    const int points = p.get<int>("points", 1001);
    Outcome o;
    if (p.has("coefficients")) {
        const auto c = p.get<std::vector<double>>("coefficients", {});
        const PhaseSequence ph = solve_phases_monomial(c);
        const double err = phase_sup_error(ph, [&c](double x) {
            double v = 0.0;
            for (std::size_t k = c.size(); k-- > 0;) {
                v = v * x + c[k];
            }
            return v;
        });
        o.est = {{"phases", ph.phases}};
        o.err = {{"sup", err}};
        o.calls = static_cast<std::uint64_t>(ph.degree());
        o.passed = err <= 1e-6;
        return o;
    }
    const auto phases = p.get<std::vector<double>>("phases", {0.0, 0.0, 0.0});
    const int d = static_cast<int>(phases.size()) - 1;
    const bool zeros = std::all_of(phases.begin(), phases.end(), [](double x) { return x == 0.0; });
    double law = 0.0;
    double cheb_err = 0.0;
    for (int i = 0; i < points; ++i) {
        const double x = -1.0 + 2.0 * i / (points - 1);
        const QspValue v = qsp_evaluate(phases, x);
        const double unit = std::norm(v.u(0, 0)) + std::norm(v.u(0, 1));
        law = std::max(law, std::abs(unit - 1.0));
        if (zeros) {
            cheb_err = std::max(cheb_err, std::abs(v.p - std::cos(d * std::acos(x))));
        }
    }
    o.est = {{"degree", d}};
    o.err = {{"unitarity", law}};
    if (zeros) {
        o.err["chebyshev"] = cheb_err;
    }
    o.calls = static_cast<std::uint64_t>(d);
    o.passed = law <= 1e-8 && cheb_err <= 1e-12;
    return o;
}

PhaseSequence phases_param(const Params &p, std::vector<double> fallback) {
    if (p.has("coefficients")) {
        return solve_phases_monomial(p.get<std::vector<double>>("coefficients", {}));
    }
    PhaseSequence ph;
    ph.phases = p.get<std::vector<double>>("phases", std::move(fallback));
    return ph;
}

Outcome run_qsvt(const json &j, std::uint64_t) {
    const Params p(j, {"a", "phases", "coefficients", "psi"}, "qsvt");
    CMat a = CMat::Zero(2, 2);
    a(0, 0) = 0.9;
    a(1, 1) = 0.3;
    if (p.has("a")) {
        a = p.matrix("a");
    }
    const PhaseSequence ph = phases_param(p, {0.0, 0.0, 0.0, 0.0});
    const int nq = qubits_for(static_cast<std::size_t>(a.cols()));
    StateVector psi = StateVector::uniform(nq);
    if (p.has("psi")) {
        psi = initial_state(p, nq);
    }
    const SvSide side = ph.parity() ? SvSide::Left : SvSide::Right;
    const QsvtResult r = qsvt_apply(a, ph, psi, side);
    Eigen::JacobiSVD<CMat> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Eigen::Index d = r.state.amplitudes().size();
    CVec ref = CVec::Zero(d);
    const CVec in = psi.amplitudes().head(a.cols());
    for (Eigen::Index k = 0; k < svd.singularValues().size(); ++k) {
        const cplx pv = qsp_evaluate(ph.phases, svd.singularValues()[k]).p;
        const double val = ph.real_part ? pv.real() : 0.0;
        const cplx poly = ph.real_part ? cplx(val) : pv;
        const cplx c = svd.matrixV().col(k).dot(in);
        if (side == SvSide::Left) {
            ref.head(a.rows()) += poly * c * svd.matrixU().col(k);
        } else {
            ref.head(a.cols()) += poly * c * svd.matrixV().col(k);
        }
    }
    const double err = (std::sqrt(r.success_probability) * r.state.amplitudes() - ref).norm();
    Outcome o;
    o.est = {{"success_probability", r.success_probability}};
    o.exact = {{"success_probability", ref.squaredNorm()}};
    o.err = {{"unnormalized_state", err}};
    o.calls = r.block_calls;
    o.passed = err <= 1e-8;
    return o;
}

Outcome run_invert(const json &j, std::uint64_t seed) {
    const Params p(j, {"a", "n", "kappa", "eps", "b"}, "invert");
    const double kappa = p.get<double>("kappa", 2.0);
    const double eps = p.get<double>("eps", 1e-3);
    Rng rng(seed);
    CMat a;
    if (p.has("a")) {
        a = p.matrix("a");
    } else if (p.has("n")) {
        const int n = p.get<int>("n", 4);
        a = random_hermitian(n, kappa, rng);
    } else {
        a = CMat::Zero(2, 2);
        a(0, 0) = 1.0;
        a(1, 1) = 1.0 / kappa;
    }
    StateVector b = StateVector::uniform(qubits_for(static_cast<std::size_t>(a.rows())));
    if (p.has("b")) {
        b = StateVector::from_unnormalized(
            Eigen::Map<const RVec>(p.get<std::vector<double>>("b", {}).data(), a.rows()).cast<cplx>());
    }
    const QsvtInverseResult r = qsvt_invert(a, kappa, eps, b);
    Outcome o;
    o.est = {{"fidelity", r.fidelity}, {"degree", r.degree},
             {"success_probability", r.success_probability}};
    o.exact = {{"degree_scale", kappa * std::log(kappa / eps)}};
    o.err = {{"infidelity", 1.0 - r.fidelity}};
    o.calls = static_cast<std::uint64_t>(r.degree);
    o.passed = r.fidelity >= 1.0 - eps;
    return o;
}

Outcome run_fixedpoint(const json &j, std::uint64_t) {
    const Params p(j, {"n", "marked", "delta", "c", "length"}, "fixedpoint");
    const int n = p.get<int>("n", 6);
    const auto marked = marked_set(p, 1ULL << n, {5});
    const double delta = p.get<double>("delta", 0.1);
    const double c = p.get<double>("c", std::sqrt(double(marked.size()) / double(1ULL << n)));
    const int length = p.get<int>("length", fixed_point_min_length(c, delta));
    Circuit a(n);
    for (int q = 0; q < n; ++q) {
        a.append(CircuitOp::h(q));
    }
    const FixedPointResult r = fixed_point_search(a, marker(n, marked), c, delta, length);
    Outcome o;
    o.est = {{"success_probability", r.success_probability}, {"length", r.plan.length},
             {"delta_used", r.plan.delta}};
    o.exact = {{"floor", 1.0 - delta * delta}};
    o.err = {{"error", 1.0 - r.success_probability}};
    o.calls = r.oracle_calls;
    o.passed = r.success_probability >= 1.0 - delta * delta - 1e-12;
    return o;
}

// ---------------------------------------------------------------- variational

Outcome run_qaoa(const json &j, std::uint64_t seed) {
    const Params p(j, {"edges", "edge_list", "p", "restarts", "shots", "sample_shots"}, "qaoa");
    Graph g;
    if (p.has("edge_list")) {
        g = load_edge_list(p.get<std::string>("edge_list", ""));
    } else {
        const auto edges = p.get<std::vector<std::pair<int, int>>>("edges", {{0, 1}, {1, 2}, {0, 2}});
        std::ostringstream os;
        for (const auto &[u, v] : edges) {
            os << u << ' ' << v << '\n';
        }
        g = parse_edge_list(os.str());
    }
    const CostHamiltonian cost = CostHamiltonian::maxcut(g);
    OptimizerConfig cfg;
    cfg.restarts = p.get<int>("restarts", 5);
    cfg.shots = p.get<std::uint64_t>("shots", 0);
    const int pmax = p.get<int>("p", 3);
    std::optional<QaoaParams> warm;
    std::vector<double> expc;
    json layers = json::array();
    QaoaResult last;
    Outcome o;
    for (int layer = 1; layer <= pmax; ++layer) {
        last = qaoa_optimize(cost, layer, cfg, seed, warm, p.get<std::uint64_t>("sample_shots", 1024));
        warm = last.params;
        expc.push_back(last.expected_cost);
        layers.push_back(json::parse(qaoa_result_json(last)));
        o.calls += static_cast<std::uint64_t>(last.evaluations);
    }
    bool monotone = true;
    for (std::size_t i = 1; i < expc.size(); ++i) {
        monotone = monotone && expc[i] >= expc[i - 1] - 1e-12;
    }
    o.est = {{"expC", expc}, {"layers", layers}, {"best_cut", last.best_sampled_cost},
             {"monotone", monotone}};
    o.exact = {{"maxcut_bruteforce", cost.max_value()}};
    o.err = {{"cut_gap", cost.max_value() - last.best_sampled_cost}};
    o.passed = monotone && last.best_sampled_cost == cost.max_value();
    return o;
}

Outcome run_adiabatic(const json &j, std::uint64_t) {
    const Params p(j, {"h_start", "h_end", "total_time", "steps", "min_fidelity"}, "adiabatic");
    CMat hs = -pauli_x();
    CMat he = -pauli_z();
    if (p.has("h_start")) {
        hs = p.matrix("h_start");
    }
    if (p.has("h_end")) {
        he = p.matrix("h_end");
    }
    AnnealSchedule sch;
    sch.h_start = hs;
    sch.h_end = he;
    sch.total_time = p.get<double>("total_time", 10.0);
    sch.steps = p.get<int>("steps", 0);
    Eigen::SelfAdjointEigenSolver<CMat> es(hs);
    const AnnealResult r = adiabatic_evolve(sch, StateVector::from_amplitudes(es.eigenvectors().col(0)));
    Outcome o;
    o.est = {{"fidelity", r.final_fidelity}, {"steps", r.steps}, {"min_gap", r.min_gap},
             {"gap_collapse", r.gap_collapse}};
    o.exact = {{"fidelity", 1.0}};
    o.err = {{"infidelity", 1.0 - r.final_fidelity}};
    o.calls = static_cast<std::uint64_t>(r.steps);
    o.passed = r.final_fidelity >= p.get<double>("min_fidelity", 0.9);
    return o;
}

// ---------------------------------------------------------------- harness

Outcome run_scaling(const json &j, std::uint64_t seed) {
    const Params p(j, {"algorithm", "sizes", "expect_low", "expect_high"}, "scaling");
    const auto alg = p.get<std::string>("algorithm", "grover");
    std::vector<double> fallback = {16, 32, 64, 128, 256, 512, 1024};
    if (alg == "qmc_quantum" || alg == "qmc_classical") {
        fallback = {3, 7, 15, 31, 63, 127, 255, 511, 1023};
    }
    const ScalingFit fit = scaling_study(alg, p.get<std::vector<double>>("sizes", fallback), seed);
    json table = json::array();
    for (const auto &[x, y] : fit.table) {
        table.push_back({x, y});
    }
    Outcome o;
    o.est = {{"exponent", fit.exponent}, {"ci_low", fit.ci_low}, {"ci_high", fit.ci_high},
             {"table", table}};
    o.passed = true;
    if (p.has("expect_low") || p.has("expect_high")) {
        const double lo = p.get<double>("expect_low", -1e300);
        const double hi = p.get<double>("expect_high", 1e300);
        o.exact = {{"expect_low", lo}, {"expect_high", hi}};
        o.passed = fit.exponent >= lo && fit.exponent <= hi;
    }
    for (const auto &row : fit.table) {
        o.calls += static_cast<std::uint64_t>(row.second);
    }
    return o;
}

Outcome run_golden(const json &j, std::uint64_t seed) {
    const Params p(j, {"suite", "dir", "capture"}, "golden");
    const GoldenReport r = golden_check(p.get<std::string>("suite", "bell"),
                                        p.get<std::string>("dir", "golden"), seed,
                                        p.get<bool>("capture", false));
    Outcome o;
    o.est = {{"diffs", r.diffs}, {"warnings", r.warnings}};
    o.passed = r.passed;
    return o;
}

using Runner = std::function<Outcome(const json &, std::uint64_t)>;

const std::map<std::string, Runner> &registry() {
    static const std::map<std::string, Runner> r = {
        {"grover", run_grover},       {"qaa", run_qaa},           {"qae", run_qae},
        {"mean", run_mean},           {"min", run_min},           {"kth", run_kth},
        {"count", run_count},         {"qmc", run_qmc},           {"swap", run_swap},
        {"qft", run_qft},             {"qpe", run_qpe},           {"hhl", run_hhl},
        {"gradient", run_gradient},   {"qpca", run_qpca},         {"coinwalk", run_coinwalk},
        {"szegedy", run_szegedy},     {"qmcmc", run_qmcmc},       {"trotter", run_trotter},
        {"lcu", run_lcu},             {"qubitize", run_qubitize}, {"qsp", run_qsp},
        {"qsvt", run_qsvt},           {"invert", run_invert},     {"fixedpoint", run_fixedpoint},
        {"qaoa", run_qaoa},           {"adiabatic", run_adiabatic}, {"scaling", run_scaling},
        {"golden", run_golden},
    };
    return r;
}

std::uint64_t repetition_seed(std::uint64_t seed, int rep) {
    return rep == 0 ? seed : Rng(seed).split(static_cast<std::uint64_t>(rep))();
}

void flatten(const json &j, const std::string &prefix, std::vector<std::pair<std::string, std::string>> &out) {
    if (j.is_object()) {
        for (const auto &[k, v] : j.items()) {
            flatten(v, prefix.empty() ? k : prefix + "." + k, out);
        }
    } else if (j.is_number() || j.is_boolean()) {
        out.emplace_back(prefix, j.dump());
    }
}

} // namespace

ExperimentConfig parse_config(const json &j) {
    if (!j.is_object()) {
        throw ConfigError("config must be a JSON object");
    }
    static const std::set<std::string> keys = {"algorithm", "params", "seed", "repetitions", "out", "csv"};
    for (const auto &[key, _] : j.items()) {
        if (keys.count(key) == 0) {
            throw ConfigError("unknown config key '" + key + "'");
        }
    }
    ExperimentConfig c;
    try {
        c.algorithm = j.value("algorithm", std::string());
        c.params = j.value("params", json::object());
        c.seed = j.value("seed", std::uint64_t{0});
        c.repetitions = j.value("repetitions", 1);
        c.out = j.value("out", std::string());
        c.csv = j.value("csv", false);
    } catch (const json::exception &e) {
        throw ConfigError(std::string("bad config value: ") + e.what());
    }
    if (c.repetitions < 1) {
        throw ConfigError("repetitions must be at least 1");
    }
    if (!c.params.is_object()) {
        throw ConfigError("params must be a JSON object");
    }
    return c;
}

ExperimentConfig load_config(const std::string &path) {
    std::ifstream is(path);
    if (!is) {
        throw ConfigError("cannot open config " + path);
    }
    json j;
    try {
        is >> j;
    } catch (const json::exception &e) {
        throw ConfigError("bad JSON in " + path + ": " + e.what());
    }
    return parse_config(j);
}

std::vector<std::string> algorithms() {
    std::vector<std::string> out;
    for (const auto &[k, _] : registry()) {
        out.push_back(k);
    }
    return out;
}

std::string version_stamp() { return QSTAT_VERSION; }

RunResult run(const ExperimentConfig &config) {
    const auto it = registry().find(config.algorithm);
    if (it == registry().end()) {
        throw ConfigError("unknown algorithm '" + config.algorithm + "'");
    }
    const auto t0 = std::chrono::steady_clock::now();
    std::vector<Outcome> outs(static_cast<std::size_t>(config.repetitions));
    std::vector<std::exception_ptr> errs(outs.size());
    {
        std::vector<std::thread> workers;
        const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
        for (std::size_t base = 0; base < outs.size(); base += hw) {
            workers.clear();
            for (std::size_t r = base; r < std::min(outs.size(), base + hw); ++r) {
                workers.emplace_back([&, r] {
                    try {
                        outs[r] = it->second(config.params, repetition_seed(config.seed, int(r)));
                    } catch (...) {
                        errs[r] = std::current_exception();
                    }
                });
            }
            for (auto &w : workers) {
                w.join();
            }
        }
    }
    for (std::size_t r = 0; r < errs.size(); ++r) {
        if (!errs[r]) {
            continue;
        }
        try {
            std::rethrow_exception(errs[r]);
        } catch (const ConfigError &) {
            throw;
        } catch (const std::exception &e) {
            throw Error(config.algorithm + " (repetition " + std::to_string(r) + "): " + e.what());
        }
    }
    RunResult res;
    res.config = config;
    res.estimates = outs[0].est;
    res.exact = outs[0].exact;
    res.errors = outs[0].err;
    res.passed = true;
    for (std::size_t r = 0; r < outs.size(); ++r) {
        res.oracle_calls += outs[r].calls;
        res.passed = res.passed && outs[r].passed;
        if (r > 0) {
            res.repetitions.push_back({{"estimates", outs[r].est},
                                       {"errors", outs[r].err},
                                       {"passed", outs[r].passed}});
        }
    }
    res.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    res.version = version_stamp();
    return res;
}

json to_json(const RunResult &r) {
    json j;
    j["config"] = {{"algorithm", r.config.algorithm}, {"params", r.config.params},
                   {"seed", r.config.seed}, {"repetitions", r.config.repetitions}};
    j["estimates"] = r.estimates;
    j["exact"] = r.exact;
    j["errors"] = r.errors;
    if (!r.repetitions.empty()) {
        j["repetitions"] = r.repetitions;
    }
    j["oracle_calls"] = r.oracle_calls;
    j["passed"] = r.passed;
    j["wall_ms"] = r.wall_ms;
    j["version"] = r.version;
    return j;
}

std::pair<std::string, std::string> to_csv(const RunResult &r) {
    std::vector<std::pair<std::string, std::string>> cols = {
        {"algorithm", r.config.algorithm}, {"seed", std::to_string(r.config.seed)}};
    flatten(r.estimates, "est", cols);
    flatten(r.exact, "exact", cols);
    flatten(r.errors, "err", cols);
    cols.emplace_back("oracle_calls", std::to_string(r.oracle_calls));
    cols.emplace_back("passed", r.passed ? "true" : "false");
    std::string head;
    std::string row;
    for (std::size_t i = 0; i < cols.size(); ++i) {
        head += (i ? "," : "") + cols[i].first;
        row += (i ? "," : "") + cols[i].second;
    }
    return {head, row};
}

ScalingFit fit_power_law(const std::vector<double> &x, const std::vector<double> &y) {
    if (x.size() != y.size() || x.size() < 4) {
        throw Error("fit_power_law: need at least 4 (x, y) points");
    }
    const auto n = static_cast<double>(x.size());
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > 0.0) || !(y[i] > 0.0)) {
            throw Error("fit_power_law: values must be positive");
        }
        mx += std::log(x[i]) / n;
        my += std::log(y[i]) / n;
    }
    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = std::log(x[i]) - mx;
        sxx += dx * dx;
        sxy += dx * (std::log(y[i]) - my);
    }
    if (sxx <= 0.0) {
        throw Error("fit_power_law: degenerate size grid");
    }
    ScalingFit f;
    f.exponent = sxy / sxx;
    f.intercept = my - f.exponent * mx;
    double sse = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = std::log(y[i]) - (f.intercept + f.exponent * std::log(x[i]));
        sse += r * r;
        f.table.emplace_back(x[i], y[i]);
    }
    f.std_error = std::sqrt(sse / (n - 2.0) / sxx);
    const double tq = gsl_cdf_tdist_Pinv(0.975, n - 2.0);
    f.ci_low = f.exponent - tq * f.std_error;
    f.ci_high = f.exponent + tq * f.std_error;
    return f;
}

namespace {

double median_abs_error(std::vector<double> e) {
    std::sort(e.begin(), e.end());
    return e[e.size() / 2];
}

} // namespace

ScalingFit scaling_study(const std::string &algorithm, const std::vector<double> &sizes,
                         std::uint64_t seed) {
    std::set<double> distinct(sizes.begin(), sizes.end());
    if (sizes.size() < 4 || distinct.size() != sizes.size()) {
        throw Error("scaling_study: need at least 4 distinct grid points");
    }
    std::vector<double> calls;
    std::vector<double> errors;
    Rng rng(seed);
    const std::vector<double> qp = {0.1, 0.2, 0.3, 0.4};
    const std::vector<double> qf = {0.0, 0.5, 0.25, 1.0};
    const double mean = 0.575;
    constexpr int kTrials = 65;
    for (double size : sizes) {
        if (algorithm == "grover" || algorithm == "classical") {
            const auto nn = static_cast<std::uint64_t>(size);
            const int n = qubits_for(nn);
            if ((1ULL << n) != nn || double(nn) != size) {
                throw Error("scaling_study: N must be a power of two");
            }
            if (algorithm == "grover") {
                const std::uint64_t target = rng.below(nn);
                GroverProblem gp(n, FunctionOracle::from_function(
                                        n, 1, [target](std::uint64_t x) { return x == target ? 1ULL : 0ULL; }));
                calls.push_back(double(grover_search(gp, std::nullopt, rng()).oracle_calls));
            } else {
                // Exhaustive scan in a fixed order; mean queries over random targets.
                double total = 0.0;
                const int trials = 256;
                for (int t = 0; t < trials; ++t) {
                    total += double(rng.below(nn) + 1);
                }
                calls.push_back(total / trials);
            }
        } else if (algorithm == "qmc_quantum" || algorithm == "qmc_classical") {
            std::vector<double> e;
            if (algorithm == "qmc_quantum") {
                const int m = static_cast<int>(std::lround(std::log2(size + 1.0)));
                if (m < 1 || std::ldexp(1.0, m) - 1.0 != size) {
                    throw Error("scaling_study: quantum budgets must be 2^m - 1");
                }
                for (int t = 0; t < kTrials; ++t) {
                    e.push_back(std::abs(quantum_monte_carlo(qp, qf, m, ReadoutMode::Sampled, rng()).a_hat - mean));
                }
            } else {
                if (size < 1.0 || std::floor(size) != size) {
                    throw Error("scaling_study: sample budgets must be positive integers");
                }
                for (int t = 0; t < 4 * kTrials; ++t) {
                    e.push_back(std::abs(classical_monte_carlo(qp, qf, std::uint64_t(size), rng()) - mean));
                }
            }
            errors.push_back(median_abs_error(e));
            calls.push_back(size);
        } else {
            throw ConfigError("scaling_study: unknown algorithm '" + algorithm + "'");
        }
    }
    if (errors.empty()) {
        return fit_power_law(sizes, calls);
    }
    // err ~ calls^s, so calls ~ eps^(1/s).
    const ScalingFit e = fit_power_law(calls, errors);
    if (e.ci_high >= 0.0) {
        throw Error("scaling_study: error does not decrease with the budget");
    }
    ScalingFit f;
    f.exponent = 1.0 / e.exponent;
    f.intercept = -e.intercept / e.exponent;
    f.std_error = e.std_error / (e.exponent * e.exponent);
    f.ci_low = 1.0 / e.ci_high;
    f.ci_high = 1.0 / e.ci_low;
    for (std::size_t i = 0; i < calls.size(); ++i) {
        f.table.emplace_back(errors[i], calls[i]);
    }
    return f;
}

std::string scaling_csv(const ScalingFit &fit) {
    std::ostringstream os;
    os << "size,calls\n";
    os.precision(17);
    for (const auto &[x, y] : fit.table) {
        os << x << ',' << y << '\n';
    }
    return os.str();
}

std::vector<std::string> golden_suites() { return {"bell", "ghz3", "random3"}; }

std::string golden_dump(const std::string &suite, std::uint64_t seed) {
    Circuit c(suite == "bell" ? 2 : 3);
    if (suite == "bell") {
        c.append(CircuitOp::h(0)).append(CircuitOp::cnot(0, 1));
    } else if (suite == "ghz3") {
        c.append(CircuitOp::h(0)).append(CircuitOp::cnot(0, 1)).append(CircuitOp::cnot(1, 2));
    } else if (suite == "random3") {
        Rng rng(seed);
        for (int layer = 0; layer < 4; ++layer) {
            for (int q = 0; q < 3; ++q) {
                c.append(CircuitOp::ry(q, 2.0 * kPi * rng.uniform()));
                c.append(CircuitOp::rz(q, 2.0 * kPi * rng.uniform()));
            }
            c.append(CircuitOp::cnot(layer % 3, (layer + 1) % 3));
        }
    } else {
        throw ConfigError("unknown golden suite '" + suite + "'");
    }
    StateVector s(c.n_qubits());
    c.apply(s);
    std::ostringstream os;
    os << "# qstat golden suite=" << suite << " seed=" << seed << " version=" << version_stamp()
       << '\n';
    write_state(os, s);
    return os.str();
}

GoldenReport golden_check(const std::string &suite, const std::string &dir, std::uint64_t seed,
                          bool capture) {
    const std::string path = dir + "/" + suite + ".golden";
    const std::string now = golden_dump(suite, seed);
    GoldenReport rep;
    if (capture) {
        std::ofstream os(path, std::ios::binary);
        if (!os.write(now.data(), static_cast<std::streamsize>(now.size()))) {
            throw Error("cannot write golden " + path);
        }
        rep.passed = true;
        return rep;
    }
    std::ifstream is(path, std::ios::binary);
    if (!is) {
        throw Error("missing golden file " + path);
    }
    std::stringstream ss;
    ss << is.rdbuf();
    const std::string old = ss.str();
    const auto split = [](const std::string &s) {
        const auto nl = s.find('\n');
        return nl == std::string::npos ? std::make_pair(s, std::string())
                                       : std::make_pair(s.substr(0, nl), s.substr(nl + 1));
    };
    const auto [old_head, old_body] = split(old);
    const auto [new_head, new_body] = split(now);
    const auto field = [](const std::string &head, const std::string &key) {
        const auto at = head.find(key + "=");
        if (at == std::string::npos) {
            return std::string();
        }
        const auto end = head.find(' ', at);
        return head.substr(at + key.size() + 1, end == std::string::npos ? end : end - at - key.size() - 1);
    };
    for (const char *key : {"suite", "seed"}) {
        if (field(old_head, key) != field(new_head, key)) {
            rep.diffs.push_back(std::string(key) + ": golden " + field(old_head, key) + ", now " +
                                field(new_head, key));
        }
    }
    if (field(old_head, "version") != field(new_head, "version")) {
        rep.warnings.push_back("version: golden " + field(old_head, "version") + ", now " +
                               field(new_head, "version"));
    }
    if (old_body != new_body) {
        std::istringstream a(old_body);
        std::istringstream b(new_body);
        try {
            const StateVector sa = read_state(a);
            const StateVector sb = read_state(b);
            if (sa.dim() != sb.dim()) {
                rep.diffs.push_back("dimension: golden " + std::to_string(sa.dim()) + ", now " +
                                    std::to_string(sb.dim()));
            } else {
                for (std::size_t i = 0; i < sa.dim() && rep.diffs.size() < 16; ++i) {
                    if (sa[i] != sb[i]) {
                        std::ostringstream os;
                        os.precision(17);
                        os << "amplitude " << i << ": golden " << sa[i] << ", now " << sb[i];
                        rep.diffs.push_back(os.str());
                    }
                }
            }
        } catch (const Error &e) {
            rep.diffs.push_back(std::string("unreadable dump: ") + e.what());
        }
        if (rep.diffs.empty()) {
            rep.diffs.push_back("dump bytes differ");
        }
    }
    rep.passed = rep.diffs.empty();
    return rep;
}

} // namespace qstat
