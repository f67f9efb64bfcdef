// Copyright 2026 The qfk Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cstdint>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "qfk/errors.hpp"
#include "qfk/pipeline.hpp"

namespace {

// Every flag mirrors a config key; a flag given on the command line wins
// over the value from --config.
struct Overrides {
    std::string input, artifacts, kernel;
    double nu = 0.0, gamma = 0.0;
    int qubits = 0, reps = 0, threads = 0;
    std::uint64_t shots = 0, seed = 0, window = 0, features = 0;
};

int run(int argc, char** argv) {
    CLI::App app{
        "qfk: fidelity-kernel one-class anomaly detection for CPS "
        "telemetry"};
    app.require_subcommand(1);

    std::string config_path;
    Overrides o;
    app.add_option("--config", config_path, "JSON config file");
    auto* f_input = app.add_option("--input", o.input, "input CSV path");
    auto* f_artifacts =
        app.add_option("--artifacts", o.artifacts, "artifact directory");
    auto* f_nu = app.add_option("--nu", o.nu, "one-class SVM nu in (0, 1]");
    auto* f_qubits = app.add_option("--qubits", o.qubits, "simulated qubits");
    auto* f_reps =
        app.add_option("--reps", o.reps, "feature-map repetitions");
    auto* f_shots = app.add_option(
        "--shots", o.shots, "shots per kernel entry (0 = exact)");
    auto* f_seed = app.add_option("--seed", o.seed, "master seed");
    auto* f_kernel =
        app.add_option("--kernel", o.kernel, "kernel family: quantum|rbf");
    auto* f_gamma = app.add_option(
        "--gamma", o.gamma, "RBF width (0 = 1/features)");
    auto* f_window =
        app.add_option("--window", o.window, "moving-average window");
    auto* f_features = app.add_option(
        "--features", o.features, "features kept after ranking");
    auto* f_threads =
        app.add_option("--threads", o.threads, "kernel worker threads");

    for (const char* name : {"preprocess", "kernel", "train", "evaluate",
                             "synth"}) {
        app.add_subcommand(name)->fallthrough();
    }
    app.get_subcommand("preprocess")
        ->description("split the input stream and fit/apply the encoders");
    app.get_subcommand("kernel")->description(
        "compute train and eval kernel matrices");
    app.get_subcommand("train")->description(
        "fit the one-class SVM on the train kernel");
    app.get_subcommand("evaluate")->description(
        "score the eval rows and report metrics");
    app.get_subcommand("synth")->description(
        "generate a labeled synthetic telemetry CSV");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    qfk::RunConfig config;
    if (!config_path.empty()) config = qfk::load_config_file(config_path);
    if (*f_input) config.input = o.input;
    if (*f_artifacts) config.artifacts = o.artifacts;
    if (*f_nu) config.nu = o.nu;
    if (*f_qubits) config.qubits = o.qubits;
    if (*f_reps) config.repetitions = o.reps;
    if (*f_shots) config.shots = o.shots;
    if (*f_seed) config.seed = o.seed;
    if (*f_kernel) config.kernel = o.kernel;
    if (*f_gamma) config.gamma = o.gamma;
    if (*f_window) config.window = o.window;
    if (*f_features) config.features = o.features;
    if (*f_threads) config.threads = o.threads;

    if (app.got_subcommand("preprocess")) {
        qfk::cmd_preprocess(config);
    } else if (app.got_subcommand("kernel")) {
        qfk::cmd_kernel(config);
    } else if (app.got_subcommand("train")) {
        qfk::cmd_train(config);
    } else if (app.got_subcommand("evaluate")) {
        qfk::cmd_evaluate(config);
    } else {
        qfk::cmd_synth(config);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const qfk::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const qfk::DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 3;
    } catch (const qfk::SolverError& e) {
        std::cerr << "solver error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
