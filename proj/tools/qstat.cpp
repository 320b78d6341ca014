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

// qstat <subcommand> --config f.json --seed u64 --out dir

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "qstat/bench.hpp"
#include "qstat/types.hpp"

namespace {

constexpr int kExitTolerance = 2;
constexpr int kExitConfig = 3;

struct Options {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<int> repetitions;
    std::string out;
    bool csv = false;
};

void append_line(const std::filesystem::path &path, const std::string &line) {
    std::ofstream os(path, std::ios::app);
    if (!os) {
        throw qstat::Error("cannot write " + path.string());
    }
    os << line << '\n';
}

int execute(const std::string &algorithm, const Options &opt) {
    qstat::ExperimentConfig cfg;
    if (!opt.config.empty()) {
        cfg = qstat::load_config(opt.config);
    }
    if (!cfg.algorithm.empty() && cfg.algorithm != algorithm) {
        throw qstat::ConfigError("config is for '" + cfg.algorithm + "' but the subcommand is '" +
                                 algorithm + "'");
    }
    cfg.algorithm = algorithm;
    if (opt.seed) {
        cfg.seed = *opt.seed;
    }
    if (opt.repetitions) {
        if (*opt.repetitions < 1) {
            throw qstat::ConfigError("repetitions must be at least 1");
        }
        cfg.repetitions = *opt.repetitions;
    }
    if (!opt.out.empty()) {
        cfg.out = opt.out;
    }
    cfg.csv = cfg.csv || opt.csv;

    const qstat::RunResult r = qstat::run(cfg);
    const std::string line = qstat::to_json(r).dump();
    std::cout << line << '\n';
    if (!cfg.out.empty()) {
        const std::filesystem::path dir(cfg.out);
        std::filesystem::create_directories(dir);
        append_line(dir / (algorithm + ".jsonl"), line);
        if (cfg.csv) {
            const auto [head, row] = qstat::to_csv(r);
            const auto path = dir / (algorithm + ".csv");
            const bool fresh = !std::filesystem::exists(path);
            if (fresh) {
                append_line(path, head);
            }
            append_line(path, row);
        }
        if (algorithm == "scaling") {
            std::ofstream os(dir / "scaling_table.csv");
            os << "size,calls\n";
            for (const auto &row : r.estimates.at("table")) {
                os << row[0].dump() << ',' << row[1].dump() << '\n';
            }
        }
    }
    if (!r.passed) {
        std::cerr << "qstat: " << algorithm << " outside tolerance\n";
        return kExitTolerance;
    }
    return 0;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Statevector experiments for quantum algorithm primitives"};
    app.require_subcommand(1);
    app.set_version_flag("--version", qstat::version_stamp());

    Options opt;
    std::string chosen;
    for (const auto &name : qstat::algorithms()) {
        CLI::App *sub = app.add_subcommand(name, "run the " + name + " experiment");
        sub->add_option("--config", opt.config, "JSON config file")->check(CLI::ExistingFile);
        sub->add_option("--seed", opt.seed, "RNG seed (overrides the config)");
        sub->add_option("--repetitions", opt.repetitions, "seeded repetitions");
        sub->add_option("--out", opt.out, "output directory for <alg>.jsonl and CSV");
        sub->add_flag("--csv", opt.csv, "also append a CSV row");
        sub->callback([&chosen, name] { chosen = name; });
    }
    CLI::App *list = app.add_subcommand("list", "print the available subcommands");
    list->callback([&chosen] { chosen = "list"; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    if (chosen == "list") {
        for (const auto &name : qstat::algorithms()) {
            std::cout << name << '\n';
        }
        return 0;
    }
    try {
        return execute(chosen, opt);
    } catch (const qstat::ConfigError &e) {
        std::cerr << "qstat: config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception &e) {
        std::cerr << "qstat: " << chosen << " failed: " << e.what() << '\n';
        return 1;
    }
}
