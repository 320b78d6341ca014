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

#include "qstat/encoding.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <json.hpp>

#include "bits.hpp"

namespace qstat {

StateVector amplitude_encode(const CVec &x) {
    if (x.size() == 0 || !(x.norm() > 0.0)) {
        throw Error("amplitude_encode: zero vector");
    }
    const int n = qubits_for(static_cast<std::size_t>(x.size()));
    check_qubit_count(n);
    CVec padded = CVec::Zero(Eigen::Index{1} << n);
    padded.head(x.size()) = x / x.norm();
    return StateVector::from_amplitudes(std::move(padded));
}

StateVector amplitude_encode(const std::vector<double> &x) {
    CVec v(static_cast<Eigen::Index>(x.size()));
    for (std::size_t i = 0; i < x.size(); ++i) {
        v[static_cast<Eigen::Index>(i)] = x[i];
    }
    return amplitude_encode(v);
}

StateVector basis_encode(const std::vector<std::string> &bitstrings) {
    if (bitstrings.empty()) {
        throw Error("basis_encode: empty dataset");
    }
    const std::size_t width = bitstrings[0].size();
    if (width == 0) {
        throw Error("basis_encode: empty bitstring");
    }
    std::set<std::uint64_t> seen;
    for (const auto &b : bitstrings) {
        if (b.size() != width) {
            throw Error("basis_encode: bitstrings differ in length");
        }
        std::uint64_t v = 0;
        for (char ch : b) {
            if (ch != '0' && ch != '1') {
                throw Error("basis_encode: '" + b + "' is not a bitstring");
            }
            v = (v << 1) | static_cast<std::uint64_t>(ch - '0');
        }
        if (!seen.insert(v).second) {
            throw Error("basis_encode: duplicate bitstring '" + b + "'");
        }
    }
    const int n = static_cast<int>(width);
    check_qubit_count(n);
    CVec a = CVec::Zero(Eigen::Index{1} << n);
    const double amp = 1.0 / std::sqrt(static_cast<double>(seen.size()));
    for (std::uint64_t v : seen) {
        a[static_cast<Eigen::Index>(v)] = amp;
    }
    return StateVector::from_amplitudes(std::move(a));
}

StateVector qsample_encode(const std::vector<double> &p) {
    if (p.empty()) {
        throw Error("qsample_encode: empty distribution");
    }
    double total = 0.0;
    for (double v : p) {
        if (!(v >= 0.0)) {
            throw Error("qsample_encode: negative probability mass");
        }
        total += v;
    }
    if (std::abs(total - 1.0) > 1e-12) {
        throw Error("qsample_encode: probabilities do not sum to 1");
    }
    const int n = qubits_for(p.size());
    check_qubit_count(n);
    CVec a = CVec::Zero(Eigen::Index{1} << n);
    for (std::size_t i = 0; i < p.size(); ++i) {
        a[static_cast<Eigen::Index>(i)] = std::sqrt(p[i]);
    }
    return StateVector::from_amplitudes(std::move(a), 1e-11);
}

FunctionOracle::FunctionOracle(int domain_bits, int codomain_bits,
                               std::vector<std::uint64_t> table)
    : n_(domain_bits), m_(codomain_bits), table_(std::move(table)) {
    if (n_ < 1 || m_ < 1 || n_ > kHardQubitCap || m_ > 63) {
        throw Error("FunctionOracle: invalid register widths");
    }
    if (table_.size() != (1ULL << n_)) {
        throw Error("FunctionOracle: table length must be 2^domain_bits");
    }
    for (std::uint64_t v : table_) {
        if (v >> m_) {
            throw Error("FunctionOracle: table value exceeds codomain");
        }
    }
}

FunctionOracle FunctionOracle::from_function(
    int domain_bits, int codomain_bits, const std::function<std::uint64_t(std::uint64_t)> &f) {
    std::vector<std::uint64_t> t(1ULL << domain_bits);
    for (std::uint64_t x = 0; x < t.size(); ++x) {
        t[x] = f(x);
    }
    return FunctionOracle(domain_bits, codomain_bits, std::move(t));
}

FunctionOracle::FunctionOracle(const FunctionOracle &o)
    : n_(o.n_), m_(o.m_), table_(o.table_), calls_(o.calls_.load()),
      classical_calls_(o.classical_calls_.load()) {}

FunctionOracle &FunctionOracle::operator=(const FunctionOracle &o) {
    n_ = o.n_;
    m_ = o.m_;
    table_ = o.table_;
    calls_.store(o.calls_.load());
    classical_calls_.store(o.classical_calls_.load());
    return *this;
}

std::uint64_t FunctionOracle::evaluate(std::uint64_t x) const {
    if (x >= table_.size()) {
        throw Error("FunctionOracle: argument out of domain");
    }
    classical_calls_.fetch_add(1);
    return table_[x];
}

void FunctionOracle::reset_calls() const {
    calls_.store(0);
    classical_calls_.store(0);
}

void FunctionOracle::apply(StateVector &s, const Qubits &in, const Qubits &out) const {
    if (static_cast<int>(in.size()) != n_) {
        throw Error("FunctionOracle: input register width differs from domain bits");
    }
    if (static_cast<int>(out.size()) < m_) {
        throw Error("FunctionOracle: output register narrower than codomain");
    }
    Qubits all = in;
    all.insert(all.end(), out.begin(), out.end());
    detail::check_qubits(all, s.n_qubits(), "FunctionOracle");
    const std::uint64_t omask = detail::mask_of(out);
    const CVec &a = s.amplitudes();
    CVec b(a.size());
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        const auto ui = static_cast<std::uint64_t>(i);
        const std::uint64_t x = detail::gather_bits(ui, in);
        const std::uint64_t y = detail::gather_bits(ui, out) ^ table_[x];
        b[static_cast<Eigen::Index>((ui & ~omask) | detail::scatter_bits(y, out))] = a[i];
    }
    s.data() = std::move(b);
    calls_.fetch_add(1);
}

void FunctionOracle::apply_phase_flip(StateVector &s, const Qubits &in) const {
    if (static_cast<int>(in.size()) != n_) {
        throw Error("FunctionOracle: input register width differs from domain bits");
    }
    detail::check_qubits(in, s.n_qubits(), "FunctionOracle");
    CVec &a = s.data();
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        if (table_[detail::gather_bits(static_cast<std::uint64_t>(i), in)] & 1ULL) {
            a[i] = -a[i];
        }
    }
    calls_.fetch_add(1);
}

PhaseOracle::PhaseOracle(int bits, std::function<double(std::uint64_t)> g) : n_(bits) {
    if (bits < 1 || bits > kHardQubitCap) {
        throw Error("PhaseOracle: invalid width");
    }
    phases_.resize(1ULL << bits);
    for (std::uint64_t y = 0; y < phases_.size(); ++y) {
        phases_[y] = g(y);
        if (!std::isfinite(phases_[y])) {
            throw Error("PhaseOracle: non-finite phase");
        }
    }
}

PhaseOracle::PhaseOracle(const PhaseOracle &o)
    : n_(o.n_), phases_(o.phases_), calls_(o.calls_.load()) {}

void PhaseOracle::apply(StateVector &s, const Qubits &qubits) const {
    if (static_cast<int>(qubits.size()) != n_) {
        throw Error("PhaseOracle: register width mismatch");
    }
    detail::check_qubits(qubits, s.n_qubits(), "PhaseOracle");
    CVec &a = s.data();
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        const double g = phases_[detail::gather_bits(static_cast<std::uint64_t>(i), qubits)];
        a[i] *= std::polar(1.0, g);
    }
    calls_.fetch_add(1);
}

SparseHamiltonianAccess::SparseHamiltonianAccess(const CMat &h, double drop_tol) : h_(h) {
    if (h.rows() != h.cols() || h.rows() == 0) {
        throw Error("SparseHamiltonianAccess: matrix must be square");
    }
    if (!is_hermitian(h, 1e-10)) {
        throw Error("SparseHamiltonianAccess: matrix is not Hermitian");
    }
    const auto n = static_cast<std::size_t>(h.rows());
    rows_.resize(n);
    d_ = 1;
    for (std::size_t j = 0; j < n; ++j) {
        double rowsum = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            const double a = std::abs(h(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k)));
            if (a > drop_tol) {
                rows_[j].push_back(k);
                rowsum += a;
                normmax_ = std::max(normmax_, a);
            }
        }
        d_ = std::max(d_, rows_[j].size());
        norm1_ = std::max(norm1_, rowsum);
    }
    normf_ = h.norm();
    Eigen::SelfAdjointEigenSolver<CMat> es(h, Eigen::EigenvaluesOnly);
    norm2_ = es.eigenvalues().cwiseAbs().maxCoeff();
}

cplx SparseHamiltonianAccess::entry(std::size_t j, std::size_t k) const {
    if (j >= dim() || k >= dim()) {
        throw Error("SparseHamiltonianAccess: index out of range");
    }
    return h_(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k));
}

std::size_t SparseHamiltonianAccess::column(std::size_t j, std::size_t l) const {
    if (j >= dim()) {
        throw Error("SparseHamiltonianAccess: row out of range");
    }
    return l < rows_[j].size() ? rows_[j][l] : dim();
}

RMat load_csv_matrix(const std::string &path) {
    std::ifstream is(path);
    if (!is) {
        throw ConfigError("cannot open " + path);
    }
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(is, line)) {
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') {
            continue;
        }
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            try {
                std::size_t used = 0;
                row.push_back(std::stod(cell, &used));
            } catch (const std::exception &) {
                throw ConfigError("non-numeric CSV cell '" + cell + "' in " + path);
            }
        }
        if (!rows.empty() && row.size() != rows[0].size()) {
            throw ConfigError("ragged CSV rows in " + path);
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) {
        throw ConfigError("empty CSV file " + path);
    }
    RMat m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows[0].size()));
    for (std::size_t r = 0; r < rows.size(); ++r) {
        for (std::size_t c = 0; c < rows[r].size(); ++c) {
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
        }
    }
    return m;
}

CMat load_matrix_market(const std::string &path) {
    std::ifstream is(path);
    if (!is) {
        throw ConfigError("cannot open " + path);
    }
    std::string line;
    if (!std::getline(is, line) || line.rfind("%%MatrixMarket", 0) != 0) {
        throw ConfigError(path + ": missing MatrixMarket banner");
    }
    std::stringstream banner(line);
    std::string tag, object, format, field, symmetry;
    banner >> tag >> object >> format >> field >> symmetry;
    for (auto *w : {&object, &format, &field, &symmetry}) {
        std::transform(w->begin(), w->end(), w->begin(),
                       [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
    }
    if (object != "matrix" || format != "coordinate") {
        throw ConfigError(path + ": only coordinate matrices are supported");
    }
    if (field != "real" && field != "complex" && field != "integer") {
        throw ConfigError(path + ": unsupported field '" + field + "'");
    }
    if (symmetry != "general" && symmetry != "symmetric" && symmetry != "hermitian") {
        throw ConfigError(path + ": unsupported symmetry '" + symmetry + "'");
    }
    while (std::getline(is, line) && (line.empty() || line[0] == '%')) {
    }
    long rows = 0, cols = 0, nnz = 0;
    if (!(std::stringstream(line) >> rows >> cols >> nnz) || rows <= 0 || cols <= 0 || nnz < 0) {
        throw ConfigError(path + ": bad size line");
    }
    CMat m = CMat::Zero(rows, cols);
    for (long k = 0; k < nnz; ++k) {
        if (!std::getline(is, line)) {
            throw ConfigError(path + ": fewer entries than declared");
        }
        std::stringstream es(line);
        long r = 0, c = 0;
        double re = 0.0, im = 0.0;
        if (!(es >> r >> c >> re) || (field == "complex" && !(es >> im))) {
            throw ConfigError(path + ": bad entry line '" + line + "'");
        }
        if (r < 1 || r > rows || c < 1 || c > cols) {
            throw ConfigError(path + ": entry index out of range");
        }
        const cplx v(re, im);
        m(r - 1, c - 1) = v;
        if (r != c && symmetry == "symmetric") {
            m(c - 1, r - 1) = v;
        } else if (r != c && symmetry == "hermitian") {
            m(c - 1, r - 1) = std::conj(v);
        }
    }
    return m;
}

std::vector<double> load_probability_json(const std::string &path) {
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
    if (!j.is_array()) {
        throw ConfigError("probability file must hold a JSON array");
    }
    const auto p = j.get<std::vector<double>>();
    double total = 0.0;
    for (double v : p) {
        if (!(v >= 0.0)) {
            throw ConfigError(path + ": probabilities must be non-negative");
        }
        total += v;
    }
    if (p.empty() || std::abs(total - 1.0) > 1e-9) {
        throw ConfigError(path + ": probabilities must sum to 1");
    }
    return p;
}

} // namespace qstat
