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

#include "qstat/variational.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <fstream>
#include <limits>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <gsl/gsl_multimin.h>
#include <json.hpp>

#include "bits.hpp"
#include "qstat/gates.hpp"
#include "qstat/rng.hpp"

namespace qstat {

Graph parse_edge_list(const std::string &text) {
    Graph g;
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') {
            continue;
        }
        std::istringstream ls(line);
        int u = -1;
        int v = -1;
        std::string extra;
        if (!(ls >> u >> v) || (ls >> extra) || u < 0 || v < 0 || u == v) {
            throw ConfigError("edge list line " + std::to_string(lineno) + ": expected 'u v'");
        }
        g.edges.emplace_back(u, v);
        g.n = std::max({g.n, u + 1, v + 1});
    }
    if (g.edges.empty()) {
        throw ConfigError("edge list has no edges");
    }
    return g;
}

Graph load_edge_list(const std::string &path) {
    std::ifstream is(path);
    if (!is) {
        throw ConfigError("cannot open " + path);
    }
    std::stringstream ss;
    ss << is.rdbuf();
    return parse_edge_list(ss.str());
}

CostHamiltonian::CostHamiltonian(int n,
                                 const std::vector<std::function<bool(std::uint64_t)>> &clauses)
    : n_(n), clauses_(clauses.size()) {
    if (n < 1 || n > 20) {
        throw Error("CostHamiltonian: need 1 <= n <= 20");
    }
    const Eigen::Index d = Eigen::Index{1} << n;
    diag_ = RVec::Zero(d);
    for (Eigen::Index z = 0; z < d; ++z) {
        for (const auto &c : clauses) {
            if (c(static_cast<std::uint64_t>(z))) {
                diag_[z] += 1.0;
            }
        }
    }
}

CostHamiltonian CostHamiltonian::maxcut(const Graph &g) {
    std::vector<std::function<bool(std::uint64_t)>> clauses;
    for (const auto &[u, v] : g.edges) {
        clauses.emplace_back([u = u, v = v](std::uint64_t z) {
            return ((z >> u) & 1ULL) != ((z >> v) & 1ULL);
        });
    }
    return CostHamiltonian(g.n, clauses);
}

double CostHamiltonian::max_value() const { return diag_.maxCoeff(); }

std::uint64_t CostHamiltonian::argmax() const {
    Eigen::Index i = 0;
    diag_.maxCoeff(&i);
    return static_cast<std::uint64_t>(i);
}

CostHamiltonian CostHamiltonian::scaled(double c) const {
    CostHamiltonian out;
    out.n_ = n_;
    out.clauses_ = clauses_;
    out.diag_ = diag_ * c;
    return out;
}

void QaoaParams::wrap() {
    for (double &g : gamma) {
        g = std::fmod(g, 2.0 * kPi);
        if (g < 0.0) {
            g += 2.0 * kPi;
        }
    }
    for (double &b : beta) {
        b = std::fmod(b, kPi);
        if (b < 0.0) {
            b += kPi;
        }
    }
}

std::vector<double> QaoaParams::flat() const {
    std::vector<double> x = gamma;
    x.insert(x.end(), beta.begin(), beta.end());
    return x;
}

QaoaParams QaoaParams::from_flat(const std::vector<double> &x) {
    if (x.size() % 2 != 0) {
        throw Error("QaoaParams: flat vector length must be even");
    }
    const auto p = static_cast<std::ptrdiff_t>(x.size() / 2);
    QaoaParams q;
    q.gamma.assign(x.begin(), x.begin() + p);
    q.beta.assign(x.begin() + p, x.end());
    return q;
}

void apply_cost_layer(StateVector &s, const CostHamiltonian &c, double gamma) {
    if (s.n_qubits() != c.n_qubits()) {
        throw Error("apply_cost_layer: state width differs from the cost");
    }
    CVec &a = s.data();
    for (Eigen::Index z = 0; z < a.size(); ++z) {
        a[z] *= std::polar(1.0, -gamma * c.diagonal()[z]);
    }
}

void apply_mixer_layer(StateVector &s, double beta) {
    CMat m(2, 2);
    m << std::cos(beta), -kI * std::sin(beta), -kI * std::sin(beta), std::cos(beta);
    for (int q = 0; q < s.n_qubits(); ++q) {
        apply_matrix(s, m, {q});
    }
}

StateVector qaoa_state(const CostHamiltonian &c, const QaoaParams &params) {
    if (params.gamma.size() != params.beta.size()) {
        throw Error("qaoa_state: gamma and beta lengths differ");
    }
    StateVector s = StateVector::uniform(c.n_qubits());
    for (int k = 0; k < params.p(); ++k) {
        apply_cost_layer(s, c, params.gamma[static_cast<std::size_t>(k)]);
        apply_mixer_layer(s, params.beta[static_cast<std::size_t>(k)]);
    }
    return s;
}

double qaoa_expectation(const CostHamiltonian &c, const QaoaParams &params) {
    return qaoa_state(c, params).probabilities().dot(c.diagonal());
}

namespace {

struct Objective {
    const std::function<double(const std::vector<double> &)> *f = nullptr;
    const std::vector<double> *lower = nullptr;
    const std::vector<double> *upper = nullptr;
    bool clamp = true;
    OptimizeResult *result = nullptr;
    double best = std::numeric_limits<double>::infinity();
    std::vector<double> best_x;
    int evaluations = 0;
    std::exception_ptr error;

    std::vector<double> point(const double *x, std::size_t n) const {
        std::vector<double> v(x, x + n);
        if (clamp) {
            for (std::size_t i = 0; i < n; ++i) {
                v[i] = std::clamp(v[i], (*lower)[i], (*upper)[i]);
            }
        }
        return v;
    }

    double operator()(const std::vector<double> &v) {
        ++evaluations;
        const double y = (*f)(v);
        if (y < best) {
            best = y;
            best_x = v;
        }
        result->history.push_back(std::min(result->history.empty()
                                               ? std::numeric_limits<double>::infinity()
                                               : result->history.back(),
                                           y));
        return y;
    }
};

double gsl_trampoline(const gsl_vector *x, void *params) {
    auto *obj = static_cast<Objective *>(params);
    try {
        return (*obj)(obj->point(x->data, x->size));
    } catch (...) {
        obj->error = std::current_exception();
        return std::numeric_limits<double>::quiet_NaN();
    }
}

bool stalled(const std::vector<double> &best_per_iter, const OptimizerConfig &cfg) {
    const auto w = static_cast<std::size_t>(cfg.window);
    if (best_per_iter.size() <= w) {
        return false;
    }
    const double then = best_per_iter[best_per_iter.size() - 1 - w];
    const double now = best_per_iter.back();
    return (then - now) <= cfg.tolerance * std::max(std::abs(then), 1e-12);
}

bool nelder_mead(Objective &obj, std::vector<double> start, const OptimizerConfig &cfg) {
    const std::size_t n = start.size();
    gsl_multimin_function fn{&gsl_trampoline, n, &obj};
    gsl_vector *x = gsl_vector_alloc(n);
    gsl_vector *step = gsl_vector_alloc(n);
    for (std::size_t i = 0; i < n; ++i) {
        gsl_vector_set(x, i, start[i]);
        const double span = (*obj.upper)[i] - (*obj.lower)[i];
        gsl_vector_set(step, i, std::min(cfg.initial_step, std::isfinite(span) ? span / 4 : 1.0));
    }
    gsl_multimin_fminimizer *m =
        gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, n);
    const int base = obj.evaluations;
    gsl_multimin_fminimizer_set(m, &fn, x, step);
    std::vector<double> per_iter;
    bool converged = false;
    while (!obj.error && obj.evaluations - base < cfg.max_evaluations) {
        if (gsl_multimin_fminimizer_iterate(m) != 0) {
            break;
        }
        per_iter.push_back(obj.best);
        if (gsl_multimin_fminimizer_size(m) < 1e-10 || stalled(per_iter, cfg)) {
            converged = true;
            break;
        }
    }
    gsl_multimin_fminimizer_free(m);
    gsl_vector_free(step);
    gsl_vector_free(x);
    if (obj.error) {
        std::rethrow_exception(obj.error);
    }
    return converged;
}

bool gradient_descent(Objective &obj, std::vector<double> x, const OptimizerConfig &cfg) {
    const std::size_t n = x.size();
    const int base = obj.evaluations;
    double fx = obj(obj.point(x.data(), n));
    double rate = cfg.initial_step;
    std::vector<double> per_iter;
    while (obj.evaluations - base < cfg.max_evaluations) {
        std::vector<double> grad(n);
        for (std::size_t i = 0; i < n; ++i) {
            std::vector<double> hi = x;
            std::vector<double> lo = x;
            hi[i] += cfg.fd_step;
            lo[i] -= cfg.fd_step;
            grad[i] = (obj(obj.point(hi.data(), n)) - obj(obj.point(lo.data(), n))) /
                      (2.0 * cfg.fd_step);
        }
        double g2 = 0.0;
        for (double g : grad) {
            g2 += g * g;
        }
        if (g2 < 1e-24) {
            return true;
        }
        bool moved = false;
        while (rate > 1e-12 && obj.evaluations - base < cfg.max_evaluations) {
            std::vector<double> trial = x;
            for (std::size_t i = 0; i < n; ++i) {
                trial[i] -= rate * grad[i];
            }
            trial = obj.point(trial.data(), n);
            const double ft = obj(trial);
            if (ft <= fx - 1e-4 * rate * g2) {
                x = trial;
                fx = ft;
                rate *= 1.5;
                moved = true;
                break;
            }
            rate *= 0.5;
        }
        if (!moved) {
            return true;
        }
        per_iter.push_back(obj.best);
        if (stalled(per_iter, cfg)) {
            return true;
        }
    }
    return false;
}

OptimizeResult minimize_impl(const std::function<double(const std::vector<double> &)> &f,
                             const std::vector<double> &lower, const std::vector<double> &upper,
                             const OptimizerConfig &cfg, std::uint64_t seed,
                             const std::optional<std::vector<double>> &start, bool clamp) {
    if (lower.size() != upper.size() || lower.empty()) {
        throw Error("minimize: box bounds must be non-empty and of equal length");
    }
    for (std::size_t i = 0; i < lower.size(); ++i) {
        if (!(lower[i] <= upper[i]) || !std::isfinite(lower[i]) || !std::isfinite(upper[i])) {
            throw Error("minimize: invalid box bounds");
        }
    }
    if (start && start->size() != lower.size()) {
        throw Error("minimize: start point has the wrong dimension");
    }
    if (cfg.restarts < 1 || cfg.max_evaluations < 1) {
        throw Error("minimize: need at least one restart and one evaluation");
    }
    OptimizeResult res;
    Objective obj;
    obj.f = &f;
    obj.lower = &lower;
    obj.upper = &upper;
    obj.clamp = clamp;
    obj.result = &res;
    Rng rng(seed);
    bool all_converged = true;
    for (int r = 0; r < cfg.restarts; ++r) {
        std::vector<double> x0(lower.size());
        for (std::size_t i = 0; i < x0.size(); ++i) {
            x0[i] = lower[i] + (upper[i] - lower[i]) * rng.uniform();
        }
        if (r == 0 && start) {
            x0 = *start;
        }
        const bool ok = cfg.method == OptimizerConfig::Method::NelderMead
                            ? nelder_mead(obj, x0, cfg)
                            : gradient_descent(obj, x0, cfg);
        all_converged = all_converged && ok;
    }
    res.x = obj.best_x;
    res.value = obj.best;
    res.evaluations = obj.evaluations;
    res.converged = all_converged;
    return res;
}

} // namespace

OptimizeResult minimize(const std::function<double(const std::vector<double> &)> &f,
                        const std::vector<double> &lower, const std::vector<double> &upper,
                        const OptimizerConfig &cfg, std::uint64_t seed,
                        const std::optional<std::vector<double>> &start) {
    return minimize_impl(f, lower, upper, cfg, seed, start, true);
}

QaoaResult qaoa_optimize(const CostHamiltonian &c, int p, const OptimizerConfig &cfg,
                         std::uint64_t seed, const std::optional<QaoaParams> &warm_start,
                         std::uint64_t sample_shots) {
    if (p < 1) {
        throw Error("qaoa_optimize: p must be at least 1");
    }
    std::vector<double> lower(static_cast<std::size_t>(2 * p), 0.0);
    std::vector<double> upper(static_cast<std::size_t>(2 * p));
    for (int k = 0; k < p; ++k) {
        upper[static_cast<std::size_t>(k)] = 2.0 * kPi;
        upper[static_cast<std::size_t>(p + k)] = kPi;
    }
    std::optional<std::vector<double>> start;
    if (warm_start) {
        if (warm_start->p() != p - 1) {
            throw Error("qaoa_optimize: warm start must have p - 1 layers");
        }
        QaoaParams w = *warm_start;
        w.gamma.push_back(0.0);
        w.beta.push_back(0.0);
        start = w.flat();
    }
    std::uint64_t eval_seed = seed ^ 0x51ed270b27a1f3c5ULL;
    const auto objective = [&](const std::vector<double> &x) {
        const StateVector s = qaoa_state(c, QaoaParams::from_flat(x));
        if (cfg.shots == 0) {
            return -s.probabilities().dot(c.diagonal());
        }
        const auto counts = sample_counts(s, detail::range(0, c.n_qubits()), cfg.shots, ++eval_seed);
        double acc = 0.0;
        for (std::size_t z = 0; z < counts.size(); ++z) {
            acc += static_cast<double>(counts[z]) * c.value(z);
        }
        return -acc / static_cast<double>(cfg.shots);
    };
    // The landscape is periodic, so the box only seeds restarts.
    const OptimizeResult opt = minimize_impl(objective, lower, upper, cfg, seed, start, false);
    QaoaResult r;
    r.params = QaoaParams::from_flat(opt.x);
    r.params.wrap();
    r.expected_cost = qaoa_expectation(c, r.params);
    r.history.reserve(opt.history.size());
    for (double h : opt.history) {
        r.history.push_back(-h);
    }
    r.evaluations = opt.evaluations;
    r.maxcut_bruteforce = c.max_value();
    const StateVector s = qaoa_state(c, r.params);
    const auto counts = sample_counts(s, detail::range(0, c.n_qubits()),
                                      std::max<std::uint64_t>(sample_shots, 1), seed + 1);
    r.best_sampled_cost = -1.0;
    for (std::size_t z = 0; z < counts.size(); ++z) {
        if (counts[z] > 0 && c.value(z) > r.best_sampled_cost) {
            r.best_sampled_cost = c.value(z);
            r.best_bitstring = z;
        }
    }
    return r;
}

std::string qaoa_result_json(const QaoaResult &r) {
    nlohmann::json j;
    j["p"] = r.params.p();
    j["gamma"] = r.params.gamma;
    j["beta"] = r.params.beta;
    j["expC"] = r.expected_cost;
    j["best_bitstring"] = r.best_bitstring;
    j["best_cut"] = r.best_sampled_cost;
    j["maxcut_bruteforce"] = r.maxcut_bruteforce;
    j["evaluations"] = r.evaluations;
    return j.dump();
}

double ground_fidelity(const CMat &h, const StateVector &s) {
    if (static_cast<std::size_t>(h.rows()) != s.dim()) {
        throw Error("ground_fidelity: dimension mismatch");
    }
    Eigen::SelfAdjointEigenSolver<CMat> es(h);
    const double e0 = es.eigenvalues()[0];
    double f = 0.0;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
        if (es.eigenvalues()[i] > e0 + 1e-9) {
            break;
        }
        f += std::norm(es.eigenvectors().col(i).dot(s.amplitudes()));
    }
    return f;
}

namespace {

struct Propagator {
    CMat v;
    RVec e;
    CVec apply(const CVec &x, double scale) const {
        CVec y = v.adjoint() * x;
        for (Eigen::Index i = 0; i < y.size(); ++i) {
            y[i] *= std::polar(1.0, -scale * e[i]);
        }
        return v * y;
    }
};

Propagator propagator(const CMat &h) {
    Eigen::SelfAdjointEigenSolver<CMat> es(h);
    return {es.eigenvectors(), es.eigenvalues()};
}

} // namespace

AnnealResult adiabatic_evolve(const AnnealSchedule &sch, const StateVector &s0) {
    const Eigen::Index d = sch.h_start.rows();
    if (sch.h_start.cols() != d || sch.h_end.rows() != d || sch.h_end.cols() != d ||
        static_cast<std::size_t>(d) != s0.dim()) {
        throw Error("adiabatic_evolve: dimension mismatch");
    }
    if (!is_hermitian(sch.h_start) || !is_hermitian(sch.h_end)) {
        throw Error("adiabatic_evolve: Hamiltonians must be Hermitian");
    }
    if (!(sch.total_time >= 0.0)) {
        throw Error("adiabatic_evolve: total time must be non-negative");
    }
    if (std::abs(sch.ramp(0.0)) > 1e-12 || std::abs(sch.ramp(1.0) - 1.0) > 1e-12) {
        throw Error("adiabatic_evolve: ramp must satisfy ramp(0) = 0 and ramp(1) = 1");
    }
    if (ground_fidelity(sch.h_start, s0) < 1.0 - 1e-8) {
        throw Error("adiabatic_evolve: initial state is not a ground state of the start Hamiltonian");
    }
    AnnealResult r;
    const CMat comm = sch.h_start * sch.h_end - sch.h_end * sch.h_start;
    const double cnorm = Eigen::JacobiSVD<CMat>(comm).singularValues()[0];
    const double hnorm = std::max(Eigen::JacobiSVD<CMat>(sch.h_start).singularValues()[0],
                                  Eigen::JacobiSVD<CMat>(sch.h_end).singularValues()[0]);
    if (sch.steps > 0) {
        r.steps = sch.steps;
    } else {
        double need = 16.0;
        if (cnorm > 0.0) {
            need = std::max(need, sch.total_time / std::sqrt(8e-6 / cnorm));
        }
        need = std::max(need, 4.0 * sch.total_time * hnorm);
        if (need > 5e6) {
            throw Error("adiabatic_evolve: step count from the error budget exceeds 5e6");
        }
        r.steps = static_cast<int>(std::ceil(need));
    }
    const Propagator ps = propagator(sch.h_start);
    const Propagator pe = propagator(sch.h_end);
    const double dt = sch.total_time / r.steps;
    const int points = std::max(2, sch.trace_points);
    auto record = [&](int step, const CVec &v) {
        const double u = static_cast<double>(step) / r.steps;
        const double b = sch.ramp(u);
        const CMat h = (1.0 - b) * sch.h_start + b * sch.h_end;
        Eigen::SelfAdjointEigenSolver<CMat> es(h);
        AnnealPoint pt;
        pt.time = u * sch.total_time;
        pt.gap = d > 1 ? es.eigenvalues()[1] - es.eigenvalues()[0] : 0.0;
        pt.fidelity = ground_fidelity(h, StateVector::from_amplitudes(v, 1e-6));
        r.trace.push_back(pt);
    };
    CVec v = s0.amplitudes();
    int next_mark = 0;
    int mark_index = 0;
    for (int k = 0; k <= r.steps; ++k) {
        if (k == next_mark) {
            record(k, v);
            ++mark_index;
            next_mark = static_cast<int>(std::llround(static_cast<double>(mark_index) * r.steps /
                                                      (points - 1)));
            if (next_mark <= k) {
                next_mark = k + 1;
            }
        }
        if (k == r.steps) {
            break;
        }
        const double b = sch.ramp((k + 0.5) / r.steps);
        v = pe.apply(ps.apply(v, (1.0 - b) * dt), b * dt);
    }
    r.state = StateVector::from_amplitudes(v, 1e-6);
    r.final_fidelity = ground_fidelity(sch.h_end, r.state);
    r.min_gap = std::numeric_limits<double>::infinity();
    for (const auto &pt : r.trace) {
        r.min_gap = std::min(r.min_gap, pt.gap);
    }
    r.gap_collapse = d > 1 && r.min_gap < 1e-6;
    return r;
}

double sampled_expectation(const StateVector &s, const Observable &l, std::uint64_t shots,
                           std::uint64_t seed) {
    if (shots == 0) {
        throw Error("sampled_expectation: shots must be at least 1");
    }
    if (l.dim() != s.dim()) {
        throw Error("sampled_expectation: dimension mismatch");
    }
    const CVec coeffs = l.eigenvectors().adjoint() * s.amplitudes();
    const RVec p = coeffs.cwiseAbs2();
    Rng rng(seed);
    double acc = 0.0;
    for (std::uint64_t k = 0; k < shots; ++k) {
        acc += l.eigenvalues()[static_cast<Eigen::Index>(sample_index(p, rng))];
    }
    return acc / static_cast<double>(shots);
}

HybridResult hybrid_loop(const std::function<StateVector(const std::vector<double> &)> &builder,
                         const Observable &l, const std::vector<double> &lower,
                         const std::vector<double> &upper, const OptimizerConfig &cfg,
                         std::uint64_t seed, const std::optional<std::vector<double>> &start) {
    std::uint64_t eval_seed = seed ^ 0x2545f4914f6cdd1dULL;
    const auto objective = [&](const std::vector<double> &theta) {
        const StateVector s = builder(theta);
        if (cfg.shots == 0) {
            return expectation(s, l);
        }
        return sampled_expectation(s, l, cfg.shots, ++eval_seed);
    };
    const OptimizeResult opt = minimize(objective, lower, upper, cfg, seed, start);
    HybridResult r;
    r.theta = opt.x;
    r.value = expectation(builder(opt.x), l);
    r.trace = opt.history;
    r.evaluations = opt.evaluations;
    return r;
}

} // namespace qstat
