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
 * Circuit <-> JSON.
 *
 * {"n_qubits":2,"ops":[{"kind":"H","t":[0]},{"kind":"CNOT","c":[0],"t":[1]}]}
 * Rotations carry "p":[angle]; matrix ops carry "U" as rows of [re, im] pairs.
 */

#pragma once

#include <string>

#include <json.hpp>

#include "qstat/gates.hpp"

namespace qstat {

nlohmann::json circuit_to_json(const Circuit &c);
Circuit circuit_from_json(const nlohmann::json &j);

nlohmann::json matrix_to_json(const CMat &m);
CMat matrix_from_json(const nlohmann::json &j);

} // namespace qstat
