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

#include "qstat/circuit_json.hpp"

#include <set>

namespace qstat {

using nlohmann::json;

json matrix_to_json(const CMat &m) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            row.push_back({m(r, c).real(), m(r, c).imag()});
        }
        rows.push_back(row);
    }
    return rows;
}

CMat matrix_from_json(const json &j) {
    if (!j.is_array() || j.empty()) {
        throw ConfigError("matrix must be a non-empty array of rows");
    }
    const auto rows = static_cast<Eigen::Index>(j.size());
    const auto cols = static_cast<Eigen::Index>(j[0].size());
    CMat m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
        const json &row = j[static_cast<std::size_t>(r)];
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
            throw ConfigError("matrix rows must have equal length");
        }
        for (Eigen::Index c = 0; c < cols; ++c) {
            const json &e = row[static_cast<std::size_t>(c)];
            if (e.is_number()) {
                m(r, c) = e.get<double>();
            } else if (e.is_array() && e.size() == 2) {
                m(r, c) = cplx(e[0].get<double>(), e[1].get<double>());
            } else {
                throw ConfigError("matrix entry must be a number or [re, im]");
            }
        }
    }
    return m;
}

json circuit_to_json(const Circuit &c) {
    json ops = json::array();
    for (const auto &op : c.ops()) {
        json o;
        o["kind"] = to_string(op.kind);
        o["t"] = op.targets;
        if (!op.controls.empty()) {
            o["c"] = op.controls;
        }
        switch (op.kind) {
        case GateKind::Rx:
        case GateKind::Ry:
        case GateKind::Rz:
            o["p"] = {op.param};
            break;
        case GateKind::ControlledUnitary:
        case GateKind::DenseUnitary:
            o["U"] = matrix_to_json(*op.matrix);
            break;
        default:
            break;
        }
        ops.push_back(o);
    }
    return json{{"n_qubits", c.n_qubits()}, {"ops", ops}};
}

namespace {

Qubits qubit_list(const json &o, const char *key) {
    if (!o.contains(key)) {
        return {};
    }
    return o.at(key).get<Qubits>();
}

void expect_arity(const Qubits &q, std::size_t n, const std::string &what) {
    if (q.size() != n) {
        throw ConfigError(what + " expects " + std::to_string(n) + " qubit(s)");
    }
}

} // namespace

Circuit circuit_from_json(const json &j) {
    static const std::set<std::string> top_keys{"n_qubits", "ops"};
    static const std::set<std::string> op_keys{"kind", "t", "c", "p", "U"};
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (!top_keys.count(it.key())) {
            throw ConfigError("unknown circuit key '" + it.key() + "'");
        }
    }
    Circuit c(j.at("n_qubits").get<int>());
    for (const json &o : j.at("ops")) {
        for (auto it = o.begin(); it != o.end(); ++it) {
            if (!op_keys.count(it.key())) {
                throw ConfigError("unknown op key '" + it.key() + "'");
            }
        }
        const std::string kind = o.at("kind").get<std::string>();
        const GateKind k = gate_kind_from_string(kind);
        const Qubits t = qubit_list(o, "t");
        const Qubits ctl = qubit_list(o, "c");
        const double p = o.contains("p") ? o.at("p").at(0).get<double>() : 0.0;
        switch (k) {
        case GateKind::H:
        case GateKind::X:
        case GateKind::Y:
        case GateKind::Z:
        case GateKind::Rx:
        case GateKind::Ry:
        case GateKind::Rz: {
            expect_arity(t, 1, kind);
            CircuitOp op = k == GateKind::H   ? CircuitOp::h(t[0])
                           : k == GateKind::X ? CircuitOp::x(t[0])
                           : k == GateKind::Y ? CircuitOp::y(t[0])
                           : k == GateKind::Z ? CircuitOp::z(t[0])
                           : k == GateKind::Rx ? CircuitOp::rx(t[0], p)
                           : k == GateKind::Ry ? CircuitOp::ry(t[0], p)
                                               : CircuitOp::rz(t[0], p);
            c.append(op);
            break;
        }
        case GateKind::CNOT:
            expect_arity(t, 1, kind);
            expect_arity(ctl, 1, kind + " control");
            c.append(CircuitOp::cnot(ctl[0], t[0]));
            break;
        case GateKind::Toffoli:
            expect_arity(t, 1, kind);
            expect_arity(ctl, 2, kind + " control");
            c.append(CircuitOp::toffoli(ctl[0], ctl[1], t[0]));
            break;
        case GateKind::CSwap:
            expect_arity(t, 2, kind);
            expect_arity(ctl, 1, kind + " control");
            c.append(CircuitOp::cswap(ctl[0], t[0], t[1]));
            break;
        case GateKind::ControlledUnitary:
            c.append(CircuitOp::controlled(matrix_from_json(o.at("U")), ctl, t));
            break;
        case GateKind::DenseUnitary:
            c.append(CircuitOp::dense(matrix_from_json(o.at("U")), t));
            break;
        }
    }
    return c;
}

} // namespace qstat
