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

#include "qstat/amplitude.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bits.hpp"

namespace qstat {

namespace {

/// 2|0><0| - I on `qubits`.
void reflect_about_zero(StateVector &s, const Qubits &qubits) {
    apply_diagonal(s, qubits, [](std::uint64_t v) { return v == 0 ? cplx(1.0) : cplx(-1.0); });
}

Circuit widen(const Circuit &c, int n_qubits) {
    Circuit w(n_qubits);
    w.append(c);
    return w;
}

Circuit walsh_circuit(int n) {
    Circuit c(n);
    for (int q = 0; q < n; ++q) {
        c.append(CircuitOp::h(q));
    }
    return c;
}

double good_mass(const CVec &psi, const FunctionOracle &chi) {
    double g = 0.0;
    for (Eigen::Index i = 0; i < psi.size(); ++i) {
        if (chi.table()[static_cast<std::size_t>(i)] & 1ULL) {
            g += std::norm(psi[i]);
        }
    }
    return g;
}

AmplitudeEstimate qae_from_state(const CVec &psi, const FunctionOracle &chi, int m,
                                 ReadoutMode mode, std::uint64_t seed) {
    if (m < 1) {
        throw Error("qae: m must be at least 1");
    }
    if (static_cast<std::size_t>(psi.size()) != chi.domain_size()) {
        throw Error("qae: marker domain differs from the prepared register");
    }
    const Eigen::Index d = psi.size();
    CMat q = 2.0 * psi * psi.adjoint() - CMat::Identity(d, d);
    for (Eigen::Index c = 0; c < d; ++c) {
        if (chi.table()[static_cast<std::size_t>(c)] & 1ULL) {
            q.col(c) *= -1.0;
        }
    }
    UnitaryAccessor u(q, 1e-8);
    const QpeResult r = qpe(u, StateVector::from_amplitudes(psi, 1e-8), m, mode, seed);

    AmplitudeEstimate est;
    est.m = m;
    est.y_hat = r.y_hat;
    const std::uint64_t big = 1ULL << m;
    const double s = std::sin(kPi * static_cast<double>(r.y_hat) / static_cast<double>(big));
    est.a_hat = s * s;
    est.candidates = {r.y_hat, (big - r.y_hat) % big};
    est.probability = r.probability;
    est.q_applications = r.calls;
    est.a_calls = 2 * r.calls + 1;
    est.a_exact = good_mass(psi, chi);
    chi.add_calls(r.calls);
    return est;
}

/// Block-diagonal R_y per basis state of the low register, rotating the top qubit.
CMat value_rotation(const std::vector<double> &f, int n) {
    const Eigen::Index dlow = Eigen::Index{1} << n;
    CMat r = CMat::Zero(2 * dlow, 2 * dlow);
    for (Eigen::Index x = 0; x < dlow; ++x) {
        const double v = x < static_cast<Eigen::Index>(f.size()) ? f[static_cast<std::size_t>(x)] : 0.0;
        const double c = std::sqrt(1.0 - v);
        const double s = std::sqrt(v);
        r(x, x) = c;
        r(x + dlow, x) = s;
        r(x, x + dlow) = -s;
        r(x + dlow, x + dlow) = c;
    }
    return r;
}

FunctionOracle top_bit_marker(int n_total) {
    return FunctionOracle::from_function(n_total, 1, [n_total](std::uint64_t x) {
        return (x >> (n_total - 1)) & 1ULL;
    });
}

} // namespace

GroverProblem::GroverProblem(int n_qubits, FunctionOracle marker, std::optional<Circuit> a)
    : n(n_qubits), chi(std::move(marker)), prep(std::move(a)) {
    if (chi.domain_bits() != n) {
        throw Error("GroverProblem: marker width differs from n");
    }
    if (prep && prep->n_qubits() != n) {
        throw Error("GroverProblem: preparation width differs from n");
    }
}

std::vector<std::uint64_t> GroverProblem::marked() const {
    std::vector<std::uint64_t> m;
    for (std::uint64_t x = 0; x < chi.domain_size(); ++x) {
        if (chi.table()[x] & 1ULL) {
            m.push_back(x);
        }
    }
    return m;
}

std::uint64_t grover_default_iterations(std::uint64_t n_items, std::uint64_t n_marked) {
    if (n_marked == 0) {
        throw Error("grover: marked set is empty");
    }
    return static_cast<std::uint64_t>(
        std::llround(kPi / 4.0 * std::sqrt(static_cast<double>(n_items) / static_cast<double>(n_marked))));
}

GroverResult grover_search(const GroverProblem &p, std::optional<std::uint64_t> iterations,
                           std::uint64_t seed) {
    const auto marked = p.marked();
    if (marked.empty()) {
        throw Error("grover_search: marked set is empty");
    }
    const std::uint64_t n_items = 1ULL << p.n;
    const std::uint64_t t = iterations ? *iterations : grover_default_iterations(n_items, marked.size());

    const int aux = p.n;
    const Qubits data = detail::range(0, p.n);
    StateVector s(p.n + 1);
    apply(CircuitOp::x(aux), s);
    apply(CircuitOp::h(aux), s);
    const Circuit a = widen(p.prep ? *p.prep : walsh_circuit(p.n), p.n + 1);
    const Circuit a_inv = a.inverse();
    a.apply(s);

    const std::uint64_t before = p.chi.calls();
    for (std::uint64_t k = 0; k < t; ++k) {
        p.chi.apply(s, data, {aux});
        a_inv.apply(s);
        reflect_about_zero(s, data);
        a.apply(s);
    }
    apply(CircuitOp::h(aux), s);

    GroverResult r;
    r.iterations = t;
    r.oracle_calls = p.chi.calls() - before;
    r.state = postselect(s, aux, 1).state;
    const RVec probs = r.state.probabilities();
    for (std::uint64_t x : marked) {
        r.success_probability += probs[static_cast<Eigen::Index>(x)];
    }
    Rng rng(seed);
    r.outcome = static_cast<std::uint64_t>(sample_index(probs, rng));
    r.found = (p.chi.table()[r.outcome] & 1ULL) != 0;
    return r;
}

GroverResult grover_search_unknown(const GroverProblem &p, std::uint64_t seed) {
    const double sqrt_n = std::sqrt(static_cast<double>(1ULL << p.n));
    const double cap = 20.0 * sqrt_n + 10.0;
    const bool any_marked = !p.marked().empty();
    Rng rng(seed);
    double m = 1.0;
    GroverResult total;
    std::uint64_t calls = 0;
    std::uint64_t iters = 0;
    while (static_cast<double>(calls) < cap) {
        const auto j = rng.below(static_cast<std::uint64_t>(std::ceil(m)));
        std::uint64_t outcome = rng.below(1ULL << p.n);
        if (any_marked) {
            GroverResult g = grover_search(p, j, rng());
            outcome = g.outcome;
            total.state = g.state;
            total.success_probability = g.success_probability;
        } else {
            p.chi.add_calls(j);
        }
        calls += j + 1;
        iters += j;
        if (p.chi.evaluate(outcome) & 1ULL) {
            total.outcome = outcome;
            total.found = true;
            break;
        }
        m = std::min(m * 6.0 / 5.0, sqrt_n);
    }
    total.oracle_calls = calls;
    total.iterations = iters;
    return total;
}

double qaa_success_law(double a1, std::uint64_t t) {
    const double s = std::sin((2.0 * static_cast<double>(t) + 1.0) * std::asin(std::abs(a1)));
    return s * s;
}

QaaResult qaa(const Circuit &a, const FunctionOracle &chi, std::uint64_t t) {
    const int n = a.n_qubits();
    if (chi.domain_bits() != n) {
        throw Error("qaa: marker width differs from the algorithm register");
    }
    const Qubits reg = detail::range(0, n);
    StateVector s(n);
    a.apply(s);
    QaaResult r;
    const double p0 = good_mass(s.amplitudes(), chi);
    if (p0 <= 0.0) {
        throw Error("qaa: initial good probability is zero");
    }
    r.initial_amplitude = std::sqrt(p0);
    const Circuit a_inv = a.inverse();
    const std::uint64_t before = chi.calls();
    for (std::uint64_t k = 0; k < t; ++k) {
        chi.apply_phase_flip(s, reg);
        a_inv.apply(s);
        reflect_about_zero(s, reg);
        a.apply(s);
    }
    r.oracle_calls = chi.calls() - before;
    r.good_probability = good_mass(s.amplitudes(), chi);
    r.state = std::move(s);
    return r;
}

AmplitudeEstimate qae(const Circuit &a, const FunctionOracle &chi, int m, ReadoutMode mode,
                      std::uint64_t seed) {
    StateVector s(a.n_qubits());
    a.apply(s);
    return qae_from_state(s.amplitudes(), chi, m, mode, seed);
}

AmplitudeEstimate qae_dense(const CMat &a, const FunctionOracle &chi, int m, ReadoutMode mode,
                            std::uint64_t seed) {
    if (!is_unitary(a, 1e-9)) {
        throw Error("qae: A is not unitary");
    }
    return qae_from_state(a.col(0), chi, m, mode, seed);
}

double qae_error_bound(double a, int m) {
    const double t = static_cast<double>(1ULL << m);
    return 2.0 * kPi * a * (1.0 - a) / t + kPi * kPi / (t * t);
}

double qae_error_bound_sqrt(double a, int m) {
    const double t = static_cast<double>(1ULL << m);
    return 2.0 * kPi * std::sqrt(std::max(0.0, a * (1.0 - a))) / t + kPi * kPi / (t * t);
}

AmplitudeEstimate estimate_mean_bounded(const FunctionOracle &f, int m, double full_scale,
                                        ReadoutMode mode, std::uint64_t seed) {
    const int n = f.domain_bits();
    const double denom =
        full_scale > 0.0 ? full_scale : static_cast<double>((1ULL << f.codomain_bits()) - 1);
    std::vector<double> vals(f.domain_size());
    for (std::uint64_t x = 0; x < vals.size(); ++x) {
        vals[x] = static_cast<double>(f.table()[x]) / denom;
        if (vals[x] > 1.0) {
            throw Error("estimate_mean_bounded: value exceeds full scale");
        }
    }
    Circuit a(n + 1);
    for (int q = 0; q < n; ++q) {
        a.append(CircuitOp::h(q));
    }
    a.append(CircuitOp::dense(value_rotation(vals, n), detail::range(0, n + 1)));
    f.add_calls(1);
    AmplitudeEstimate est = qae(a, top_bit_marker(n + 1), m, mode, seed);
    f.add_calls(est.a_calls);
    return est;
}

CountEstimate quantum_count(const FunctionOracle &f, int m, ReadoutMode mode, std::uint64_t seed) {
    CountEstimate c;
    c.qae = qae(walsh_circuit(f.domain_bits()), f, m, mode, seed);
    c.count = static_cast<std::uint64_t>(
        std::llround(static_cast<double>(f.domain_size()) * c.qae.a_hat));
    return c;
}

double minimum_call_budget(std::uint64_t n_items) {
    const double nn = static_cast<double>(n_items);
    const double lg = std::log2(nn);
    return 22.5 * std::sqrt(nn) + 1.4 * lg * lg;
}

namespace {

int index_bits(std::size_t n_items) {
    if (n_items < 2) {
        throw Error("search needs at least two items");
    }
    return qubits_for(n_items);
}

/// Uniform draw from {x : lo < v[x] < hi} by randomized Grover search. Returns
/// nullopt when the call cap is exhausted.
std::optional<std::uint64_t> sample_between(const std::vector<double> &v, double lo, double hi,
                                            Rng &rng, std::uint64_t &calls, double cap) {
    const int n = index_bits(v.size());
    auto marker = FunctionOracle::from_function(n, 1, [&](std::uint64_t x) -> std::uint64_t {
        return x < v.size() && v[x] > lo && v[x] < hi ? 1 : 0;
    });
    GroverProblem p(n, marker);
    const bool any = !p.marked().empty();
    const double sqrt_n = std::sqrt(static_cast<double>(1ULL << n));
    double m = 1.0;
    while (static_cast<double>(calls) < cap) {
        const auto j = rng.below(static_cast<std::uint64_t>(std::ceil(m)));
        std::uint64_t outcome;
        if (any) {
            outcome = grover_search(p, j, rng()).outcome;
        } else {
            outcome = rng.below(1ULL << n);
        }
        calls += j + 1;
        if (marker.table()[outcome] & 1ULL) {
            return outcome;
        }
        m = std::min(m * 6.0 / 5.0, sqrt_n);
    }
    return std::nullopt;
}

/// #{x : v[x] < t} (strict) or <= t, via quantum counting.
std::uint64_t count_below(const std::vector<double> &v, double t, bool inclusive,
                          std::uint64_t &calls) {
    const int n = index_bits(v.size());
    auto marker = FunctionOracle::from_function(n, 1, [&](std::uint64_t x) -> std::uint64_t {
        if (x >= v.size()) {
            return 0;
        }
        return (inclusive ? v[x] <= t : v[x] < t) ? 1 : 0;
    });
    const CountEstimate c = quantum_count(marker, n + 4);
    calls += c.qae.q_applications;
    return c.count;
}

} // namespace

SearchOutcome find_minimum(const std::vector<double> &values, std::uint64_t seed,
                           double budget_multiplier) {
    const std::size_t n_items = values.size();
    index_bits(n_items);
    SearchOutcome out;
    out.degenerate = std::all_of(values.begin(), values.end(),
                                 [&](double v) { return v == values[0]; });
    Rng rng(seed);
    std::uint64_t y = rng.below(n_items);
    const double budget = budget_multiplier * minimum_call_budget(n_items);
    std::uint64_t calls = 0;
    while (static_cast<double>(calls) < budget) {
        const auto cand = sample_between(values, -std::numeric_limits<double>::infinity(),
                                         values[y], rng, calls, budget);
        ++out.iterations;
        if (!cand) {
            break;
        }
        y = *cand;
    }
    out.index = y;
    out.oracle_calls = calls;
    out.budget_exhausted = true;
    return out;
}

SearchOutcome kth_smallest(const std::vector<double> &values, std::uint64_t k, double delta,
                           std::uint64_t seed) {
    const std::size_t n_items = values.size();
    index_bits(n_items);
    if (k < 1 || k > n_items) {
        throw Error("kth_smallest: k must lie in [1, N]");
    }
    if (delta < 0.5) {
        throw Error("kth_smallest: delta must be at least 1/2");
    }
    const double inf = std::numeric_limits<double>::infinity();
    double lo = -inf;
    double hi = inf;
    const double kk = static_cast<double>(k);
    Rng rng(seed);
    SearchOutcome out;
    std::uint64_t calls = 0;
    const double cap = 1e7;
    const int max_rounds = 64 * (index_bits(n_items) + 1);
    for (int round = 0; round < max_rounds; ++round) {
        ++out.iterations;
        const auto l = sample_between(values, lo, hi, rng, calls, cap);
        if (!l) {
            out.budget_exhausted = true;
            break;
        }
        const double fl = values[*l];
        const auto rank_lo = static_cast<double>(count_below(values, fl, false, calls) + 1);
        const auto rank_hi = static_cast<double>(count_below(values, fl, true, calls));
        out.index = *l;
        if (rank_hi > kk - delta && rank_lo < kk + delta) {
            out.oracle_calls = calls;
            return out;
        }
        if (rank_hi <= kk - delta) {
            lo = fl;
        } else {
            hi = fl;
        }
    }
    out.oracle_calls = calls;
    out.budget_exhausted = true;
    return out;
}

SwapTestResult swap_test(const StateVector &a, const StateVector &b, std::uint64_t shots,
                         std::uint64_t seed) {
    if (a.n_qubits() != b.n_qubits()) {
        throw Error("swap_test: dimension mismatch");
    }
    const int n = a.n_qubits();
    const int anc = 2 * n;
    StateVector s = a.tensor(b).tensor(StateVector(1));
    apply(CircuitOp::h(anc), s);
    for (int q = 0; q < n; ++q) {
        apply(CircuitOp::cswap(anc, q, n + q), s);
    }
    apply(CircuitOp::h(anc), s);
    const RVec pm = s.marginal({anc});

    SwapTestResult r;
    r.shots = shots;
    if (shots == 0) {
        r.p0 = pm[0];
    } else {
        const auto counts = sample_counts(s, {anc}, shots, seed);
        r.p0 = static_cast<double>(counts[0]) / static_cast<double>(shots);
        r.std_error = std::sqrt(std::max(r.p0 * (1.0 - r.p0), 0.0) / static_cast<double>(shots));
    }
    double arg = 2.0 * r.p0 - 1.0;
    if (arg < 0.0) {
        r.clamped = true;
        arg = 0.0;
    }
    r.overlap = std::sqrt(arg);
    return r;
}

SwapTestResult swap_test_signed(const std::vector<double> &a, const std::vector<double> &b,
                                std::uint64_t shots, std::uint64_t seed) {
    if (a.size() != b.size() || a.empty()) {
        throw Error("swap_test_signed: vectors must be non-empty and equal length");
    }
    auto augment = [](const std::vector<double> &v) {
        double nrm = 0.0;
        for (double x : v) {
            nrm += x * x;
        }
        nrm = std::sqrt(nrm);
        if (!(nrm > 0.0)) {
            throw Error("swap_test_signed: zero vector");
        }
        std::vector<double> out;
        for (double x : v) {
            out.push_back(x / nrm / std::sqrt(2.0));
        }
        out.push_back(1.0 / std::sqrt(2.0));
        return out;
    };
    SwapTestResult r =
        swap_test(amplitude_encode(augment(a)), amplitude_encode(augment(b)), shots, seed);
    r.overlap = 2.0 * r.overlap - 1.0;
    r.std_error *= 2.0 / std::max(std::sqrt(std::max(2.0 * r.p0 - 1.0, 1e-300)), 1e-12);
    return r;
}

SampleMeanResult sample_mean_via_swap(const std::vector<double> &x, std::uint64_t shots,
                                      std::uint64_t seed) {
    double nrm = 0.0;
    for (double v : x) {
        nrm += v * v;
    }
    nrm = std::sqrt(nrm);
    if (x.empty() || !(nrm > 0.0)) {
        throw Error("sample_mean_via_swap: zero vector");
    }
    const std::vector<double> ones(x.size(), 1.0);
    const double root_n = std::sqrt(static_cast<double>(x.size()));
    SampleMeanResult r;
    r.swap = swap_test_signed(x, ones, shots, seed);
    r.scaled = r.swap.overlap * nrm;
    r.mean = r.scaled / root_n;
    return r;
}

AmplitudeEstimate quantum_monte_carlo(const std::vector<double> &p, const std::vector<double> &f,
                                      int m, ReadoutMode mode, std::uint64_t seed) {
    if (p.size() != f.size() || p.empty()) {
        throw Error("quantum_monte_carlo: p and f must have equal non-zero length");
    }
    for (double v : f) {
        if (!(v >= 0.0 && v <= 1.0)) {
            throw Error("quantum_monte_carlo: f must map into [0, 1]");
        }
    }
    const StateVector ps = qsample_encode(p);
    const int n = ps.n_qubits();
    Circuit a(n + 1);
    a.append(CircuitOp::dense(householder_from(ps.amplitudes()), detail::range(0, n)));
    a.append(CircuitOp::dense(value_rotation(f, n), detail::range(0, n + 1)));
    return qae(a, top_bit_marker(n + 1), m, mode, seed);
}

double classical_monte_carlo(const std::vector<double> &p, const std::vector<double> &f,
                             std::uint64_t samples, std::uint64_t seed) {
    if (samples == 0) {
        throw Error("classical_monte_carlo: need at least one sample");
    }
    RVec pv(static_cast<Eigen::Index>(p.size()));
    for (std::size_t i = 0; i < p.size(); ++i) {
        pv[static_cast<Eigen::Index>(i)] = p[i];
    }
    Rng rng(seed);
    double acc = 0.0;
    for (std::uint64_t k = 0; k < samples; ++k) {
        acc += f[sample_index(pv, rng)];
    }
    return acc / static_cast<double>(samples);
}

CMat householder_from(const CVec &v) {
    const Eigen::Index d = v.size();
    if (std::abs(v.norm() - 1.0) > 1e-10) {
        throw Error("householder_from: vector must have unit norm");
    }
    const double r0 = std::abs(v[0]);
    const cplx alpha = r0 > 0.0 ? v[0] / r0 : cplx(1.0);
    CVec u = -v;
    u[0] += alpha;
    const double un = u.squaredNorm();
    CMat h = CMat::Identity(d, d);
    if (un > 1e-30) {
        h -= (2.0 / un) * u * u.adjoint();
    }
    return alpha * h;
}

} // namespace qstat
