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
 * Experiment harness behind the qstat command line: config validation,
 * dispatch, scaling fits and golden state dumps.
 */

#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace qstat {

struct ExperimentConfig {
    std::string algorithm;
    nlohmann::json params = nlohmann::json::object();
    std::uint64_t seed = 0;
    int repetitions = 1;
    std::string out;
    bool csv = false;
};

/// Top-level keys: algorithm, params, seed, repetitions, out, csv. Anything else is a ConfigError.
ExperimentConfig parse_config(const nlohmann::json &j);
ExperimentConfig load_config(const std::string &path);

std::vector<std::string> algorithms();
std::string version_stamp();

struct RunResult {
    ExperimentConfig config;
    nlohmann::json estimates = nlohmann::json::object();
    nlohmann::json exact = nlohmann::json::object();
    nlohmann::json errors = nlohmann::json::object();
    /// One entry per repetition beyond the first, in repetition order.
    nlohmann::json repetitions = nlohmann::json::array();
    std::uint64_t oracle_calls = 0;
    double wall_ms = 0.0;
    std::string version;
    bool passed = false;
};

/// Deterministic in (config, seed) apart from wall_ms and version.
RunResult run(const ExperimentConfig &config);
nlohmann::json to_json(const RunResult &r);
/// header + row; columns are the flattened estimates, exact values and errors.
std::pair<std::string, std::string> to_csv(const RunResult &r);

struct ScalingFit {
    double exponent = 0.0;
    double intercept = 0.0;
    double std_error = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    /// (size, calls) rows.
    std::vector<std::pair<double, double>> table;
};

/// Least-squares slope of log y on log x with a 95% confidence interval.
ScalingFit fit_power_law(const std::vector<double> &x, const std::vector<double> &y);

/**
 * Call counts over a size grid. "grover" and "classical" take N and fit calls
 * against N. "qmc_quantum" (budgets 2^m - 1) and "qmc_classical" (sample
 * counts) take call budgets, measure the median absolute error at each, and
 * report the calls-vs-error exponent; table rows are then (error, calls).
 */
ScalingFit scaling_study(const std::string &algorithm, const std::vector<double> &sizes,
                         std::uint64_t seed);
std::string scaling_csv(const ScalingFit &fit);

struct GoldenReport {
    bool passed = false;
    std::vector<std::string> diffs;
    std::vector<std::string> warnings;
};

std::vector<std::string> golden_suites();
/// Seeded state dump of a suite (header line plus QSV1 bytes).
std::string golden_dump(const std::string &suite, std::uint64_t seed);
/// Compares against dir/<suite>.golden; capture writes the file instead.
GoldenReport golden_check(const std::string &suite, const std::string &dir, std::uint64_t seed,
                          bool capture = false);

} // namespace qstat
