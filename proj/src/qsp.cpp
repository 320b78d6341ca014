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

#include "qstat/qsp.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <json.hpp>

#include "bits.hpp"

namespace qstat {

namespace {

constexpr int kGridPoints = 2001;

Mat2 signal(double x) {
    const double s = std::sqrt(std::max(0.0, 1.0 - x * x));
    Mat2 w;
    w << x, kI * s, kI * s, x;
    return w;
}

Mat2 rotation(double phi) {
    Mat2 s = Mat2::Zero();
    s(0, 0) = std::polar(1.0, phi);
    s(1, 1) = std::polar(1.0, -phi);
    return s;
}

double grid_x(int k) { return -1.0 + 2.0 * k / (kGridPoints - 1); }

double cheb(int n, double x) { return std::cos(n * std::acos(std::clamp(x, -1.0, 1.0))); }

/// T_n(y) for any real y.
double cheb_any(double n, double y) {
    if (std::abs(y) <= 1.0) {
        return std::cos(n * std::acos(y));
    }
    const double v = std::cosh(n * std::acosh(std::abs(y)));
    return (y < 0.0 && std::fmod(n, 2.0) == 1.0) ? -v : v;
}

void check_target(const std::function<double(double)> &f, int degree) {
    const int parity = degree % 2;
    for (int k = 0; k < kGridPoints; ++k) {
        const double x = grid_x(k);
        const double v = f(x);
        if (!std::isfinite(v) || std::abs(v) > 1.0 + 1e-12) {
            throw Error("solve_phases: target exceeds 1 in magnitude on [-1, 1]");
        }
        const double mirror = parity ? -f(-x) : f(-x);
        if (std::abs(mirror - v) > 1e-9) {
            throw Error("solve_phases: target parity differs from degree parity");
        }
    }
}

std::vector<double> expand(const Eigen::VectorXd &reduced, int d) {
    std::vector<double> phi(static_cast<std::size_t>(d + 1));
    for (int k = 0; k <= d; ++k) {
        phi[static_cast<std::size_t>(k)] = reduced[std::min(k, d - k)];
    }
    return phi;
}

} // namespace

QspValue qsp_evaluate(const std::vector<double> &phases, double x) {
    if (phases.empty()) {
        throw Error("qsp_evaluate: empty phase sequence");
    }
    if (!(std::abs(x) <= 1.0)) {
        throw Error("qsp_evaluate: x must lie in [-1, 1]");
    }
    const Mat2 w = signal(x);
    Mat2 u = rotation(phases[0]);
    for (std::size_t j = 1; j < phases.size(); ++j) {
        u = u * w * rotation(phases[j]);
    }
    QspValue v;
    v.u = u;
    v.p = u(0, 0);
    v.plus = u.sum() / 2.0;
    return v;
}

std::string phases_to_json(const PhaseSequence &p) {
    nlohmann::json j;
    j["phases"] = p.phases;
    j["degree"] = p.degree();
    j["parity"] = p.parity();
    j["real_part"] = p.real_part;
    j["target"] = p.target;
    return j.dump();
}

PhaseSequence phases_from_json(const std::string &text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception &e) {
        throw ConfigError(std::string("bad phase JSON: ") + e.what());
    }
    PhaseSequence p;
    if (j.is_array()) {
        p.phases = j.get<std::vector<double>>();
    } else {
        for (const auto &[key, _] : j.items()) {
            if (key != "phases" && key != "degree" && key != "parity" && key != "real_part" &&
                key != "target") {
                throw ConfigError("unknown phase key '" + key + "'");
            }
        }
        try {
            p.phases = j.at("phases").get<std::vector<double>>();
            p.real_part = j.value("real_part", false);
            p.target = j.value("target", std::string());
        } catch (const nlohmann::json::exception &e) {
            throw ConfigError(std::string("bad phase JSON: ") + e.what());
        }
        if (j.contains("degree") && j["degree"].get<int>() != p.degree()) {
            throw ConfigError("phase JSON degree does not match the phase count");
        }
        if (j.contains("parity") && j["parity"].get<int>() != p.parity()) {
            throw ConfigError("phase JSON parity does not match the phase count");
        }
    }
    if (p.phases.empty()) {
        throw ConfigError("phase JSON has no phases");
    }
    return p;
}

PhaseSequence solve_phases(const std::function<double(double)> &f, int degree,
                           const PhaseSolveOptions &opt) {
    if (degree < 0 || degree > opt.max_degree) {
        throw Error("solve_phases: degree outside [0, " + std::to_string(opt.max_degree) + "]");
    }
    check_target(f, degree);
    const int d = degree;
    const int parity = d % 2;
    const int nr = (d + 2) / 2;

    std::vector<double> nodes(static_cast<std::size_t>(nr));
    for (int k = 0; k < nr; ++k) {
        nodes[static_cast<std::size_t>(k)] = std::cos((2.0 * k + 1.0) * kPi / (4.0 * nr));
    }
    // Chebyshev coefficients on T_{2j+parity} from samples at the positive nodes.
    Eigen::MatrixXd coef_map(nr, nr);
    for (int j = 0; j < nr; ++j) {
        for (int k = 0; k < nr; ++k) {
            double c = 2.0 / nr * cheb(2 * j + parity, nodes[static_cast<std::size_t>(k)]);
            if (j == 0 && parity == 0) {
                c /= 2.0;
            }
            coef_map(j, k) = c;
        }
    }
    Eigen::VectorXd samples(nr);
    for (int k = 0; k < nr; ++k) {
        samples[k] = f(nodes[static_cast<std::size_t>(k)]);
    }
    const Eigen::VectorXd target = coef_map * samples;

    Eigen::VectorXd psi = Eigen::VectorXd::Zero(nr);
    psi[0] = kPi / 4.0;

    std::vector<Mat2> prefix(static_cast<std::size_t>(d + 1));
    std::vector<Mat2> suffix(static_cast<std::size_t>(d + 1));
    bool converged = false;
    for (int it = 0; it < opt.max_iterations; ++it) {
        const std::vector<double> phi = expand(psi, d);
        Eigen::VectorXd values(nr);
        Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(nr, nr);
        for (int k = 0; k < nr; ++k) {
            const Mat2 w = signal(nodes[static_cast<std::size_t>(k)]);
            // prefix[j] = S(phi_0) W ... W, suffix[j] = W S(phi_{j+1}) ... S(phi_d).
            prefix[0] = Mat2::Identity();
            for (int j = 1; j <= d; ++j) {
                prefix[static_cast<std::size_t>(j)] =
                    prefix[static_cast<std::size_t>(j - 1)] *
                    rotation(phi[static_cast<std::size_t>(j - 1)]) * w;
            }
            suffix[static_cast<std::size_t>(d)] = Mat2::Identity();
            for (int j = d - 1; j >= 0; --j) {
                suffix[static_cast<std::size_t>(j)] =
                    w * rotation(phi[static_cast<std::size_t>(j + 1)]) *
                    suffix[static_cast<std::size_t>(j + 1)];
            }
            const Mat2 full = prefix[0] * rotation(phi[0]) * suffix[0];
            values[k] = full(0, 0).real();
            for (int j = 0; j <= d; ++j) {
                Mat2 ds = rotation(phi[static_cast<std::size_t>(j)]);
                ds(0, 0) *= kI;
                ds(1, 1) *= -kI;
                const Mat2 g = prefix[static_cast<std::size_t>(j)] * ds *
                               suffix[static_cast<std::size_t>(j)];
                jac(k, std::min(j, d - j)) += g(0, 0).real();
            }
        }
        const Eigen::VectorXd resid = coef_map * values - target;
        if (resid.lpNorm<Eigen::Infinity>() < 1e-14) {
            converged = true;
            break;
        }
        const Eigen::MatrixXd jc = coef_map * jac;
        const Eigen::VectorXd step = jc.colPivHouseholderQr().solve(resid);
        if (!step.allFinite()) {
            break;
        }
        psi -= step;
        if (step.lpNorm<Eigen::Infinity>() < 1e-15) {
            converged = true;
            break;
        }
    }
    PhaseSequence out;
    out.phases = expand(psi, d);
    out.real_part = true;
    const double err = phase_sup_error(out, f);
    if (!converged && err > opt.tolerance) {
        throw Error("solve_phases: Newton iteration did not converge");
    }
    if (err > opt.tolerance) {
        throw Error("solve_phases: sup error " + std::to_string(err) + " above tolerance");
    }
    return out;
}

PhaseSequence solve_phases_monomial(const std::vector<double> &coeffs,
                                    const PhaseSolveOptions &opt) {
    int degree = static_cast<int>(coeffs.size()) - 1;
    while (degree > 0 && coeffs[static_cast<std::size_t>(degree)] == 0.0) {
        --degree;
    }
    if (degree < 0) {
        throw Error("solve_phases: empty coefficient list");
    }
    for (int k = 0; k <= degree; ++k) {
        if ((k - degree) % 2 != 0 && std::abs(coeffs[static_cast<std::size_t>(k)]) > 1e-14) {
            throw Error("solve_phases: target is not parity-definite");
        }
    }
    auto f = [coeffs, degree](double x) {
        double v = 0.0;
        for (int k = degree; k >= 0; --k) {
            v = v * x + coeffs[static_cast<std::size_t>(k)];
        }
        return v;
    };
    PhaseSequence p = solve_phases(f, degree, opt);
    p.target = "monomial";
    return p;
}

double phase_sup_error(const PhaseSequence &p, const std::function<double(double)> &f) {
    double worst = 0.0;
    for (int k = 0; k < kGridPoints; ++k) {
        const double x = grid_x(k);
        const cplx v = qsp_evaluate(p.phases, x).p;
        const double e = p.real_part ? std::abs(v.real() - f(x)) : std::abs(v - f(x));
        worst = std::max(worst, e);
    }
    return worst;
}

namespace {

CMat psd_sqrt(const CMat &m) {
    Eigen::SelfAdjointEigenSolver<CMat> es(m);
    RVec ev = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    return es.eigenvectors() * ev.cast<cplx>().asDiagonal() * es.eigenvectors().adjoint();
}

CMat pad_square(const CMat &a, int &qubits) {
    const auto m = static_cast<std::size_t>(std::max(a.rows(), a.cols()));
    qubits = qubits_for(m);
    const Eigen::Index d = Eigen::Index{1} << qubits;
    CMat p = CMat::Zero(d, d);
    p.topLeftCorner(a.rows(), a.cols()) = a;
    return p;
}

struct BlockPair {
    CMat u;
    CMat v;
    int n = 0;
};

BlockPair block_pair(const CMat &a) {
    BlockPair b;
    b.u = block_encoding(a);
    b.n = qubits_for(static_cast<std::size_t>(b.u.rows())) - 1;
    const Eigen::Index d = b.u.rows() / 2;
    RVec z = RVec::Ones(2 * d);
    z.tail(d).setConstant(-1.0);
    b.v = z.cast<cplx>().asDiagonal() * b.u.adjoint() * z.cast<cplx>().asDiagonal();
    return b;
}

/**
 * S(phi_d) first, then alternating U, V with S(phi_j) between. `sign` (if >= 0)
 * negates every phase when set; `ctrl` (if >= 0) gates the whole sequence on
 * ctrl == ctrl_value.
 */
void apply_sequence(StateVector &s, const BlockPair &bp, const std::vector<double> &phases,
                    int sign, int ctrl, int ctrl_value) {
    const int aux = bp.n;
    Qubits block = detail::range(0, bp.n + 1);
    Qubits diag{aux};
    if (sign >= 0) {
        diag.push_back(sign);
    }
    if (ctrl >= 0) {
        diag.push_back(ctrl);
    }
    auto phase = [&](double phi) {
        apply_diagonal(s, diag, [&](std::uint64_t v) {
            const bool a = v & 1ULL;
            std::uint64_t rest = v >> 1;
            double sg = 1.0;
            if (sign >= 0) {
                sg = (rest & 1ULL) ? -1.0 : 1.0;
                rest >>= 1;
            }
            if (ctrl >= 0 && static_cast<int>(rest & 1ULL) != ctrl_value) {
                return cplx(1.0);
            }
            return std::polar(1.0, sg * (a ? -phi : phi));
        });
    };
    const CMat x = pauli_x();
    auto walk = [&](const CMat &m) {
        if (ctrl < 0) {
            apply_matrix(s, m, block);
            return;
        }
        if (ctrl_value == 0) {
            apply_matrix(s, x, {ctrl});
        }
        apply_matrix(s, m, block, {ctrl});
        if (ctrl_value == 0) {
            apply_matrix(s, x, {ctrl});
        }
    };
    const int d = static_cast<int>(phases.size()) - 1;
    phase(phases[static_cast<std::size_t>(d)]);
    for (int j = d; j >= 1; --j) {
        walk((d - j) % 2 == 0 ? bp.u : bp.v);
        phase(phases[static_cast<std::size_t>(j - 1)]);
    }
}

StateVector embed_input(const StateVector &psi, int n) {
    const Eigen::Index d = Eigen::Index{1} << n;
    if (static_cast<Eigen::Index>(psi.dim()) > d) {
        throw Error("qsvt: input state larger than the encoded operator");
    }
    CVec v = CVec::Zero(d);
    v.head(static_cast<Eigen::Index>(psi.dim())) = psi.amplitudes();
    return StateVector::from_amplitudes(std::move(v));
}

QsvtResult run_qsvt(const CMat &a, const PhaseSequence &phi, const StateVector &psi) {
    if (phi.phases.empty()) {
        throw Error("qsvt: empty phase sequence");
    }
    const BlockPair bp = block_pair(a);
    const int n = bp.n;
    StateVector s = embed_input(psi, n).tensor(StateVector(phi.real_part ? 2 : 1));
    const int sign = phi.real_part ? n + 1 : -1;
    if (sign >= 0) {
        apply_matrix(s, hadamard(), {sign});
    }
    apply_sequence(s, bp, phi.phases, sign, -1, 0);
    Qubits flags{n};
    if (sign >= 0) {
        apply_matrix(s, hadamard(), {sign});
        flags.push_back(sign);
    }
    double p = 0.0;
    for (Eigen::Index i = 0; i < (Eigen::Index{1} << n); ++i) {
        p += std::norm(s.amplitudes()[i]);
    }
    if (p < 1e-300) {
        throw Error("qsvt: zero postselection probability");
    }
    const PostselectResult pr = postselect(s, flags, 0);
    QsvtResult r;
    r.state = pr.state;
    r.success_probability = pr.probability;
    r.block_calls = static_cast<std::uint64_t>(phi.degree());
    return r;
}

} // namespace

CMat block_encoding(const CMat &a) {
    const Eigen::JacobiSVD<CMat> svd(a);
    if (svd.singularValues().size() > 0 && svd.singularValues()[0] > 1.0 + 1e-10) {
        throw Error("block_encoding: operator norm exceeds 1");
    }
    int n = 0;
    const CMat p = pad_square(a, n);
    check_qubit_count(n + 1);
    const Eigen::Index d = p.rows();
    const CMat id = CMat::Identity(d, d);
    CMat u(2 * d, 2 * d);
    u.topLeftCorner(d, d) = p;
    u.topRightCorner(d, d) = kI * psd_sqrt(id - p * p.adjoint());
    u.bottomLeftCorner(d, d) = kI * psd_sqrt(id - p.adjoint() * p);
    u.bottomRightCorner(d, d) = p.adjoint();
    return u;
}

QsvtResult qet_apply(const CMat &h, const PhaseSequence &phi, const StateVector &psi) {
    if (!is_hermitian(h, 1e-10)) {
        throw Error("qet_apply: operator is not Hermitian");
    }
    if (static_cast<std::size_t>(h.rows()) != psi.dim() &&
        (Eigen::Index{1} << qubits_for(static_cast<std::size_t>(h.rows()))) !=
            static_cast<Eigen::Index>(psi.dim())) {
        throw Error("qet_apply: state dimension differs from H");
    }
    return run_qsvt(h, phi, psi);
}

QsvtResult qsvt_apply(const CMat &a, const PhaseSequence &phi, const StateVector &psi,
                      SvSide side) {
    const int want = side == SvSide::Left ? 1 : 0;
    if (phi.parity() != want) {
        throw Error("qsvt_apply: phase parity does not match the requested transform side");
    }
    if (static_cast<Eigen::Index>(psi.dim()) < a.cols()) {
        throw Error("qsvt_apply: state dimension smaller than the column count");
    }
    return run_qsvt(a, phi, psi);
}

int fixed_point_min_length(double c, double delta) {
    if (!(c > 0.0 && c <= 1.0)) {
        throw Error("fixed_point_search: overlap bound must lie in (0, 1]");
    }
    if (!(delta > 0.0 && delta < 1.0)) {
        throw Error("fixed_point_search: delta must lie in (0, 1)");
    }
    if (c >= 1.0) {
        return 1;
    }
    const double limit = 1.0 / std::sqrt(1.0 - c * c);
    for (int l = 1; l < 2000001; l += 2) {
        if (std::cosh(std::acosh(1.0 / delta) / l) <= limit) {
            return l;
        }
    }
    throw Error("fixed_point_search: required length exceeds 2e6");
}

FixedPointPlan fixed_point_plan(double c, double delta, int length) {
    const int lmin = fixed_point_min_length(c, delta);
    if (length % 2 == 0) {
        --length;
    }
    if (length < lmin) {
        throw Error("fixed_point_search: budget " + std::to_string(length) +
                    " below the minimum " + std::to_string(lmin));
    }
    FixedPointPlan plan;
    plan.length = length;
    if (c >= 1.0) {
        plan.delta = 0.0;
        plan.gamma = 0.0;
    } else {
        const double y = 1.0 / std::sqrt(1.0 - c * c);
        plan.delta = std::min(delta, 1.0 / std::cosh(length * std::acosh(y)));
        plan.gamma = 1.0 / std::cosh(std::acosh(1.0 / plan.delta) / length);
    }
    const int l = (length - 1) / 2;
    const double root = std::sqrt(std::max(0.0, 1.0 - plan.gamma * plan.gamma));
    plan.alpha.resize(static_cast<std::size_t>(l));
    plan.beta.resize(static_cast<std::size_t>(l));
    for (int j = 1; j <= l; ++j) {
        const double t = std::tan(2.0 * kPi * j / length) * root;
        plan.alpha[static_cast<std::size_t>(j - 1)] = 2.0 * (kPi / 2.0 - std::atan(t));
    }
    for (int j = 1; j <= l; ++j) {
        plan.beta[static_cast<std::size_t>(l - j)] = -plan.alpha[static_cast<std::size_t>(j - 1)];
    }
    return plan;
}

double fixed_point_success_law(double lambda, double delta, int length) {
    if (delta <= 0.0) {
        return 1.0;
    }
    const double g = std::cosh(std::acosh(1.0 / delta) / length);
    const double t = cheb_any(length, g * std::sqrt(std::max(0.0, 1.0 - lambda)));
    return 1.0 - delta * delta * t * t;
}

FixedPointResult fixed_point_search(const Circuit &a, const FunctionOracle &chi, double c,
                                    double delta, int length) {
    const int n = a.n_qubits();
    if (chi.domain_bits() != n) {
        throw Error("fixed_point_search: oracle width differs from the preparer");
    }
    FixedPointResult r;
    r.plan = fixed_point_plan(c, delta, length);
    const Circuit a_inv = a.inverse();
    const Qubits all = detail::range(0, n);
    const auto &table = chi.table();

    StateVector s(n);
    a.apply(s);
    for (std::size_t j = 0; j < r.plan.alpha.size(); ++j) {
        const double beta = r.plan.beta[j];
        const double alpha = r.plan.alpha[j];
        apply_diagonal(s, all, [&](std::uint64_t x) {
            return table[x] != 0 ? std::polar(1.0, beta) : cplx(1.0);
        });
        chi.add_calls(1);
        a_inv.apply(s);
        apply_diagonal(s, all, [&](std::uint64_t x) {
            return x == 0 ? std::polar(1.0, -alpha) : cplx(1.0);
        });
        a.apply(s);
        s.data() *= -1.0;
    }
    for (std::uint64_t x = 0; x < s.dim(); ++x) {
        if (table[x] != 0) {
            r.success_probability += std::norm(s[x]);
        }
    }
    r.oracle_calls = r.plan.alpha.size();
    r.state = std::move(s);
    return r;
}

double InversePolynomial::evaluate(double x) const {
    double v = 0.0;
    for (std::size_t j = 0; j < odd_coeffs.size(); ++j) {
        v += odd_coeffs[j] * cheb(static_cast<int>(2 * j + 1), x);
    }
    return scale * v;
}

InversePolynomial inverse_polynomial(double kappa, double eps, double sup) {
    if (!(kappa >= 1.0) || !(eps > 0.0 && eps < 1.0) || !(sup > 0.0 && sup <= 1.0)) {
        throw Error("inverse_polynomial: need kappa >= 1, 0 < eps < 1, 0 < sup <= 1");
    }
    InversePolynomial p;
    p.b = std::max(1, static_cast<int>(std::ceil(kappa * kappa * std::log(kappa / eps))));
    const int j0 = std::min(
        p.b - 1, static_cast<int>(std::ceil(std::sqrt(p.b * std::log(4.0 * p.b / eps)))));
    const double b2 = 2.0 * p.b;
    const double log_norm = std::lgamma(b2 + 1.0) - b2 * std::log(2.0);
    // Tail sums of the binomial weights from the top down.
    std::vector<double> tail(static_cast<std::size_t>(p.b + 2), 0.0);
    for (int i = p.b; i >= 1; --i) {
        const double lw = log_norm - std::lgamma(p.b + i + 1.0) - std::lgamma(p.b - i + 1.0);
        tail[static_cast<std::size_t>(i)] = tail[static_cast<std::size_t>(i + 1)] + std::exp(lw);
    }
    for (int j = 0; j <= std::max(0, j0); ++j) {
        const double sgn = (j % 2) ? -1.0 : 1.0;
        p.odd_coeffs.push_back(4.0 * sgn * tail[static_cast<std::size_t>(j + 1)]);
    }
    p.degree = 2 * static_cast<int>(p.odd_coeffs.size()) - 1;
    double peak = 0.0;
    const int samples = 20000;
    for (int k = 0; k <= samples; ++k) {
        const double x = static_cast<double>(k) / samples;
        peak = std::max(peak, std::abs(p.evaluate(x)));
    }
    p.scale = sup / peak;
    return p;
}

QsvtInverseResult qsvt_invert(const CMat &a, double kappa, double eps, const StateVector &b) {
    if (static_cast<Eigen::Index>(b.dim()) < a.rows()) {
        throw Error("qsvt_invert: right-hand side shorter than the row count");
    }
    const Eigen::JacobiSVD<CMat> svd(a);
    const RVec &sv = svd.singularValues();
    if (sv.size() == 0 || sv[0] > 1.0 + 1e-10 || sv[sv.size() - 1] < 1.0 / kappa - 1e-10) {
        throw Error("qsvt_invert: singular values outside [1/kappa, 1]");
    }
    QsvtInverseResult r;
    PhaseSequence phi;
    const Eigen::Index d = Eigen::Index{1} << qubits_for(
                               static_cast<std::size_t>(std::max(a.rows(), a.cols())));
    const bool identity_like =
        (sv.array() - 1.0).abs().maxCoeff() < 1e-12;
    if (identity_like) {
        phi.phases = {0.0, 0.0};
        phi.real_part = false;
    } else {
        const InversePolynomial poly = inverse_polynomial(kappa, eps);
        phi = solve_phases([&poly](double x) { return poly.evaluate(x); }, poly.degree);
        phi.target = "inverse";
    }
    r.degree = phi.degree();
    const QsvtResult q = run_qsvt(a.adjoint(), phi, b);
    r.state = q.state;
    r.success_probability = q.success_probability;
    const CVec rhs = b.amplitudes().head(a.rows());
    const CVec x = a.completeOrthogonalDecomposition().solve(rhs);
    CVec ref = CVec::Zero(d);
    ref.head(a.cols()) = x.normalized();
    r.fidelity = std::norm(ref.dot(r.state.amplitudes().head(d)));
    return r;
}

std::vector<double> jacobi_anger_cos(double tau, int degree) {
    std::vector<double> c(static_cast<std::size_t>(std::max(degree, 0) + 1), 0.0);
    c[0] = std::cyl_bessel_j(0.0, std::abs(tau));
    for (int k = 2; k <= degree; k += 2) {
        const double sgn = (k / 2) % 2 ? -1.0 : 1.0;
        c[static_cast<std::size_t>(k)] = 2.0 * sgn * std::cyl_bessel_j(double(k), std::abs(tau));
    }
    return c;
}

std::vector<double> jacobi_anger_sin(double tau, int degree) {
    std::vector<double> c(static_cast<std::size_t>(std::max(degree, 0) + 1), 0.0);
    const double odd_sign = tau < 0.0 ? -1.0 : 1.0;
    for (int k = 1; k <= degree; k += 2) {
        const double sgn = (k / 2) % 2 ? -1.0 : 1.0;
        c[static_cast<std::size_t>(k)] =
            2.0 * sgn * odd_sign * std::cyl_bessel_j(double(k), std::abs(tau));
    }
    return c;
}

double chebyshev_sum(const std::vector<double> &c, double x) {
    // Clenshaw recurrence.
    double b1 = 0.0;
    double b2 = 0.0;
    for (std::size_t k = c.size(); k-- > 1;) {
        const double b0 = 2.0 * x * b1 - b2 + c[k];
        b2 = b1;
        b1 = b0;
    }
    return c.empty() ? 0.0 : x * b1 - b2 + c[0];
}

QspSimResult qsp_hamiltonian_sim(const CMat &h, double t, double eps, const StateVector &psi,
                                 int degree_cap) {
    if (!is_hermitian(h, 1e-10)) {
        throw Error("qsp_hamiltonian_sim: operator is not Hermitian");
    }
    if (!(eps > 0.0)) {
        throw Error("qsp_hamiltonian_sim: eps must be positive");
    }
    if (static_cast<Eigen::Index>(psi.dim()) != h.rows()) {
        throw Error("qsp_hamiltonian_sim: state dimension differs from H");
    }
    QspSimResult r;
    const SparseHamiltonianAccess acc(h);
    r.alpha = acc.one_norm() > 0.0 ? acc.one_norm() : 1.0;
    const double tau = r.alpha * t;
    int k = 0;
    while (2.0 * (std::abs(std::cyl_bessel_j(double(k + 1), std::abs(tau))) +
                  std::abs(std::cyl_bessel_j(double(k + 2), std::abs(tau)))) >
               eps / 8.0 ||
           k < std::abs(tau)) {
        if (++k > degree_cap) {
            throw ConfigError("qsp_hamiltonian_sim: eps needs a degree above the cap " +
                              std::to_string(degree_cap));
        }
    }
    r.cos_degree = k % 2 == 0 ? k : k + 1;
    r.sin_degree = k % 2 == 1 ? k : k + 1;
    const std::vector<double> cc = jacobi_anger_cos(tau, r.cos_degree);
    const std::vector<double> sc = jacobi_anger_sin(tau, r.sin_degree);
    double peak = 1.0;
    for (int i = 0; i < kGridPoints; ++i) {
        const double x = grid_x(i);
        peak = std::max({peak, std::abs(chebyshev_sum(cc, x)), std::abs(chebyshev_sum(sc, x))});
    }
    const double shrink = 0.9 / peak;
    const PhaseSequence pc =
        solve_phases([&](double x) { return shrink * chebyshev_sum(cc, x); }, r.cos_degree);
    const PhaseSequence ps =
        solve_phases([&](double x) { return shrink * chebyshev_sum(sc, x); }, r.sin_degree);

    const BlockPair bp = block_pair(h / r.alpha);
    const int n = bp.n;
    const int sign = n + 1;
    const int sel = n + 2;
    StateVector s = embed_input(psi, n).tensor(StateVector(3));
    apply_matrix(s, hadamard(), {sign});
    apply_matrix(s, hadamard(), {sel});
    apply_sequence(s, bp, pc.phases, sign, sel, 0);
    apply_sequence(s, bp, ps.phases, sign, sel, 1);
    apply_diagonal(s, {sel}, [](std::uint64_t v) { return v ? -kI : cplx(1.0); });
    apply_matrix(s, hadamard(), {sign});
    apply_matrix(s, hadamard(), {sel});
    const PostselectResult pr = postselect(s, {n, sign, sel}, 0);
    r.state = pr.state;
    r.success_probability = pr.probability;
    return r;
}

} // namespace qstat
