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

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "qfk/dataset.hpp"
#include "qfk/gini.hpp"
#include "qfk/metrics.hpp"
#include "qfk/preprocess.hpp"

namespace qfk {

/// One run's worth of settings. Loadable from a flat JSON file whose keys
/// match the field names below; command-line flags override file values.
struct RunConfig {
    std::string input;                   // dataset CSV path
    std::string artifacts = "artifacts"; // directory for all outputs
    std::string time_column = "time";
    std::string label_column = "attack";

    std::size_t window = 60;       // moving-average length
    std::size_t features = 16;     // selected feature count k
    int qubits = 8;
    int repetitions = 3;
    int max_depth = 8;             // ranking-tree depth

    std::string kernel = "quantum";  // "quantum" | "rbf"
    std::uint64_t shots = 0;         // 0 = exact fidelities
    std::uint64_t seed = 0;
    double gamma = 0.0;              // 0 = 1/features default
    int threads = 1;
    double nu = 0.04;

    double train_fraction = 0.7;
    bool train_normal_only = true;
    std::size_t eval_normal = 1000;
    std::size_t eval_anomaly = 500;
    bool eval_use_all = false;  // evaluate every row left after carving
    std::size_t rank_normal = 200;   // labeled slice feeding the ranking
    std::size_t rank_anomaly = 100;

    std::size_t synth_normal = 2000;  // `synth` subcommand inputs
    std::size_t synth_anomaly = 200;
    int synth_features = 24;
    double synth_shift = 3.0;
};

/// Reads a flat JSON config; unknown keys are rejected so typos fail
/// loudly. Missing keys keep their defaults.
RunConfig load_config_file(const std::filesystem::path& path);

/// Cross-field checks (quantum needs features = 2*qubits, counts positive,
/// and so on). Throws ConfigError.
void validate_config(const RunConfig& config);

/// Fitted preprocessing parameters: everything needed to map a raw
/// dataset to the angle-scaled feature matrix bit-identically.
struct PipelineModel {
    std::size_t window = 60;
    std::vector<std::string> column_names;  // expected input columns
    std::vector<ColumnKind> column_kinds;
    EncoderSet encoders;
    ScalerParams scaler;
    FeatureRanking ranking;
    std::size_t selected = 16;
    std::vector<std::string> selected_names;
    AngleBounds bounds;  // over the selected columns
};

/// Fits the chain on the training rows, ranking features on the labeled
/// `rank` slice: smooth -> encode -> standardize -> rank -> select ->
/// angle bounds.
PipelineModel fit_pipeline(const RawDataset& train, const RawDataset& rank,
                           std::size_t window, std::size_t k, int max_depth);

/// Applies a fitted chain to any dataset with the recorded column layout.
FeatureMatrix apply_pipeline(const PipelineModel& model, const RawDataset& ds);

/// JSON round trip; reloading and re-applying reproduces matrices
/// bit-identically.
void save_pipeline(const PipelineModel& model,
                   const std::filesystem::path& path);
PipelineModel load_pipeline(const std::filesystem::path& path);

/// Seeded three-way carve of a labeled stream: class-balanced eval blocks
/// (normals then anomalies), a labeled ranking slice, and a training
/// share of the leftover rows (normal-only when configured) — pairwise
/// disjoint, each split in time order. With eval_use_all, eval instead
/// collects every row not used for training or ranking.
struct SplitThreeWay {
    RawDataset train;
    RawDataset rank;
    RawDataset eval;
};
SplitThreeWay carve_splits(const RawDataset& ds, const RunConfig& config);

// Subcommand bodies. Artifact handoff between them is purely via files in
// config.artifacts: angle matrices and eval labels from `preprocess`,
// kernel files and evaluation-counter stats from `kernel`, the model JSON
// from `train`, and the metrics report plus cross-kernel heat map from
// `evaluate`.
void cmd_synth(const RunConfig& config);
void cmd_preprocess(const RunConfig& config);
void cmd_kernel(const RunConfig& config);
void cmd_train(const RunConfig& config);
MetricsReport cmd_evaluate(const RunConfig& config);

}  // namespace qfk
