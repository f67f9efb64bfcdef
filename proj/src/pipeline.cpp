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

#include "qfk/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>

#include "json.hpp"
#include "qfk/errors.hpp"
#include "qfk/kernel.hpp"
#include "qfk/ocsvm.hpp"
#include "qfk/rng.hpp"
#include "textio.hpp"

namespace qfk {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr const char* kPipelineFile = "pipeline.json";
constexpr const char* kTrainMatrixFile = "train_angles.csv";
constexpr const char* kEvalMatrixFile = "eval_angles.csv";
constexpr const char* kEvalLabelsFile = "eval_labels.csv";
constexpr const char* kTrainKernelFile = "train_kernel.txt";
constexpr const char* kEvalKernelFile = "eval_kernel.txt";
constexpr const char* kKernelStatsFile = "kernel_stats.json";
constexpr const char* kModelFile = "model.json";
constexpr const char* kMetricsFile = "metrics.json";
constexpr const char* kHeatmapFile = "heatmap.csv";

fs::path art(const RunConfig& config, const char* name) {
    return fs::path(config.artifacts) / name;
}

[[noreturn]] void bad_key(const std::string& key, const char* expected) {
    throw ConfigError("config key '" + key + "' must be " + expected);
}

double get_number(const json& v, const std::string& key) {
    if (!v.is_number()) bad_key(key, "a number");
    return v.get<double>();
}

std::uint64_t get_unsigned(const json& v, const std::string& key) {
    if (!v.is_number_integer() || (v.is_number_integer() &&
                                   v.get<std::int64_t>() < 0)) {
        bad_key(key, "a nonnegative integer");
    }
    return v.get<std::uint64_t>();
}

int get_positive_int(const json& v, const std::string& key) {
    if (!v.is_number_integer() || v.get<std::int64_t>() < 1) {
        bad_key(key, "a positive integer");
    }
    return v.get<int>();
}

std::string get_string(const json& v, const std::string& key) {
    if (!v.is_string()) bad_key(key, "a string");
    return v.get<std::string>();
}

bool get_bool(const json& v, const std::string& key) {
    if (!v.is_boolean()) bad_key(key, "a boolean");
    return v.get<bool>();
}

json rate_json(const Rate& rate) {
    return rate.defined ? json(rate.value) : json(nullptr);
}

void save_labels(const std::vector<int>& labels, const fs::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write file: " + path.string());
    out << "label\n";
    for (int label : labels) out << label << '\n';
    if (!out) throw DataError("write failed: " + path.string());
}

std::vector<int> load_labels(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open file: " + path.string());
    std::string line;
    if (!std::getline(in, line) || (line != "label" && line != "label\r")) {
        throw DataError("label file has no 'label' header: " + path.string());
    }
    std::vector<int> labels;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line == "0") {
            labels.push_back(0);
        } else if (line == "1") {
            labels.push_back(1);
        } else {
            throw DataError("label file entry must be 0 or 1, got '" + line +
                            "'");
        }
    }
    return labels;
}

std::vector<std::size_t> sorted_slice(const std::vector<std::size_t>& pool,
                                      std::size_t begin, std::size_t count) {
    std::vector<std::size_t> out(pool.begin() + static_cast<std::ptrdiff_t>(begin),
                                 pool.begin() + static_cast<std::ptrdiff_t>(begin + count));
    std::sort(out.begin(), out.end());
    return out;
}

RawDataset resequenced(RawDataset ds) {
    for (std::size_t r = 0; r < ds.n_rows(); ++r) {
        ds.timestamps[r] = static_cast<double>(r);
    }
    return ds;
}

json load_json_file(const fs::path& path, const char* what) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError(std::string("cannot open ") + what + ": " +
                             path.string());
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw DataError(std::string(what) + " is not valid JSON: " + e.what());
    }
    return doc;
}

void write_json_file(const json& doc, const fs::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write file: " + path.string());
    out << doc.dump(2) << '\n';
    if (!out) throw DataError("write failed: " + path.string());
}

}  // namespace

RunConfig load_config_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file: " + path.string());
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw ConfigError("config file is not valid JSON: " +
                          std::string(e.what()));
    }
    if (!doc.is_object()) throw ConfigError("config must be a JSON object");

    RunConfig c;
    for (const auto& [key, v] : doc.items()) {
        if (key == "input") {
            c.input = get_string(v, key);
        } else if (key == "artifacts") {
            c.artifacts = get_string(v, key);
        } else if (key == "time_column") {
            c.time_column = get_string(v, key);
        } else if (key == "label_column") {
            c.label_column = get_string(v, key);
        } else if (key == "window") {
            c.window = get_unsigned(v, key);
        } else if (key == "features") {
            c.features = get_unsigned(v, key);
        } else if (key == "qubits") {
            c.qubits = get_positive_int(v, key);
        } else if (key == "repetitions") {
            c.repetitions = get_positive_int(v, key);
        } else if (key == "max_depth") {
            c.max_depth = get_positive_int(v, key);
        } else if (key == "kernel") {
            c.kernel = get_string(v, key);
        } else if (key == "shots") {
            c.shots = get_unsigned(v, key);
        } else if (key == "seed") {
            c.seed = get_unsigned(v, key);
        } else if (key == "gamma") {
            c.gamma = get_number(v, key);
        } else if (key == "threads") {
            c.threads = static_cast<int>(get_unsigned(v, key));
        } else if (key == "nu") {
            c.nu = get_number(v, key);
        } else if (key == "train_fraction") {
            c.train_fraction = get_number(v, key);
        } else if (key == "train_normal_only") {
            c.train_normal_only = get_bool(v, key);
        } else if (key == "eval_normal") {
            c.eval_normal = get_unsigned(v, key);
        } else if (key == "eval_anomaly") {
            c.eval_anomaly = get_unsigned(v, key);
        } else if (key == "eval_use_all") {
            c.eval_use_all = get_bool(v, key);
        } else if (key == "rank_normal") {
            c.rank_normal = get_unsigned(v, key);
        } else if (key == "rank_anomaly") {
            c.rank_anomaly = get_unsigned(v, key);
        } else if (key == "synth_normal") {
            c.synth_normal = get_unsigned(v, key);
        } else if (key == "synth_anomaly") {
            c.synth_anomaly = get_unsigned(v, key);
        } else if (key == "synth_features") {
            c.synth_features = get_positive_int(v, key);
        } else if (key == "synth_shift") {
            c.synth_shift = get_number(v, key);
        } else {
            throw ConfigError("unknown config key '" + key + "'");
        }
    }
    return c;
}

void validate_config(const RunConfig& c) {
    if (c.kernel != "quantum" && c.kernel != "rbf") {
        throw ConfigError("kernel must be 'quantum' or 'rbf', got '" +
                          c.kernel + "'");
    }
    if (c.qubits < 1 || c.qubits > 20) {
        throw ConfigError("qubits must lie in [1, 20]");
    }
    if (c.features < 1) throw ConfigError("features must be positive");
    if (c.kernel == "quantum" &&
        c.features != 2 * static_cast<std::size_t>(c.qubits)) {
        throw ConfigError(
            "quantum kernel encodes 2 features per qubit: features must be " +
            std::to_string(2 * c.qubits) + " for " + std::to_string(c.qubits) +
            " qubits, got " + std::to_string(c.features));
    }
    if (c.repetitions < 1) throw ConfigError("repetitions must be positive");
    if (c.window < 1) throw ConfigError("window must be >= 1");
    if (!(c.nu > 0.0) || c.nu > 1.0) throw ConfigError("nu must lie in (0, 1]");
    if (!(c.train_fraction > 0.0) || !(c.train_fraction < 1.0)) {
        throw ConfigError("train_fraction must lie in (0, 1)");
    }
    if (c.gamma < 0.0) throw ConfigError("gamma must be nonnegative");
    if (c.threads < 0) throw ConfigError("threads must be nonnegative");
    if (c.max_depth < 1) throw ConfigError("max_depth must be positive");
    if (c.rank_normal < 1 || c.rank_anomaly < 1) {
        throw ConfigError(
            "ranking needs both classes: rank_normal and rank_anomaly must "
            "be positive");
    }
}

PipelineModel fit_pipeline(const RawDataset& train, const RawDataset& rank,
                           std::size_t window, std::size_t k, int max_depth) {
    if (!rank.labels) {
        throw DataError("ranking slice has no labels");
    }
    PipelineModel model;
    model.window = window;
    for (const Column& col : train.columns) {
        model.column_names.push_back(col.name);
        model.column_kinds.push_back(col.kind);
    }

    const RawDataset train_smooth = smooth_numeric_columns(train, window);
    const RawDataset rank_smooth = smooth_numeric_columns(rank, window);
    model.encoders = fit_encoders(train_smooth);
    const FeatureMatrix train_full =
        to_matrix(apply_encoders(train_smooth, model.encoders));
    const FeatureMatrix rank_full =
        to_matrix(apply_encoders(rank_smooth, model.encoders));
    if (k > static_cast<std::size_t>(train_full.cols())) {
        throw ConfigError("cannot select " + std::to_string(k) +
                          " features from " + std::to_string(train_full.cols()));
    }

    model.scaler = fit_scaler(train_full);
    const FeatureMatrix train_scaled = apply_scaler(train_full, model.scaler);
    const FeatureMatrix rank_scaled = apply_scaler(rank_full, model.scaler);

    const GiniTree tree = fit_gini_tree(rank_scaled, *rank.labels, max_depth);
    model.ranking = rank_features(tree);
    model.selected = k;

    const FeatureMatrix train_selected =
        select_features(train_scaled, model.ranking, k);
    model.selected_names = train_selected.feature_names;
    model.bounds = fit_angle_bounds(train_selected);
    return model;
}

FeatureMatrix apply_pipeline(const PipelineModel& model,
                             const RawDataset& ds) {
    if (ds.n_columns() != model.column_names.size()) {
        throw DataError("dataset has " + std::to_string(ds.n_columns()) +
                        " feature columns, pipeline expects " +
                        std::to_string(model.column_names.size()));
    }
    for (std::size_t c = 0; c < ds.n_columns(); ++c) {
        if (ds.columns[c].name != model.column_names[c]) {
            throw DataError("column " + std::to_string(c) + " is '" +
                            ds.columns[c].name + "', pipeline expects '" +
                            model.column_names[c] + "'");
        }
        if (ds.columns[c].kind != model.column_kinds[c]) {
            throw DataError("column '" + ds.columns[c].name +
                            "' kind differs from the fitted pipeline");
        }
    }
    const RawDataset smooth = smooth_numeric_columns(ds, model.window);
    const FeatureMatrix full =
        to_matrix(apply_encoders(smooth, model.encoders));
    const FeatureMatrix scaled = apply_scaler(full, model.scaler);
    const FeatureMatrix selected =
        select_features(scaled, model.ranking, model.selected);
    return scale_to_angles(selected, model.bounds);
}

void save_pipeline(const PipelineModel& model, const fs::path& path) {
    json columns = json::array();
    for (std::size_t c = 0; c < model.column_names.size(); ++c) {
        columns.push_back(
            {{"name", model.column_names[c]},
             {"kind", model.column_kinds[c] == ColumnKind::Numeric
                          ? "numeric"
                          : "categorical"}});
    }
    json encoders = json::object();
    for (const auto& [column, table] : model.encoders.by_column) {
        encoders[column] = table;
    }
    const auto vec = [](const Eigen::VectorXd& v) {
        return std::vector<double>(v.data(), v.data() + v.size());
    };
    const json doc = {
        {"version", 1},
        {"window", model.window},
        {"columns", columns},
        {"encoders", encoders},
        {"scaler", {{"mu", vec(model.scaler.mu)},
                    {"sigma", vec(model.scaler.sigma)}}},
        {"ranking", {{"order", model.ranking.order},
                     {"importance", model.ranking.importance}}},
        {"selected", model.selected},
        {"selected_names", model.selected_names},
        {"angle_bounds",
         {{"min", vec(model.bounds.min)}, {"max", vec(model.bounds.max)}}},
    };
    write_json_file(doc, path);
}

PipelineModel load_pipeline(const fs::path& path) {
    const json doc = load_json_file(path, "pipeline file");
    PipelineModel model;
    try {
        if (doc.at("version").get<int>() != 1) {
            throw DataError("pipeline file has an unsupported version");
        }
        model.window = doc.at("window").get<std::size_t>();
        for (const auto& col : doc.at("columns")) {
            model.column_names.push_back(col.at("name").get<std::string>());
            const auto kind = col.at("kind").get<std::string>();
            if (kind != "numeric" && kind != "categorical") {
                throw DataError("pipeline file: unknown column kind '" +
                                kind + "'");
            }
            model.column_kinds.push_back(kind == "numeric"
                                             ? ColumnKind::Numeric
                                             : ColumnKind::Categorical);
        }
        for (const auto& [column, table] : doc.at("encoders").items()) {
            model.encoders.by_column[column] =
                table.get<std::map<std::string, double>>();
        }
        const auto vec = [](const json& v) {
            const auto values = v.get<std::vector<double>>();
            return Eigen::VectorXd::Map(values.data(),
                                        static_cast<Eigen::Index>(values.size()))
                .eval();
        };
        model.scaler.mu = vec(doc.at("scaler").at("mu"));
        model.scaler.sigma = vec(doc.at("scaler").at("sigma"));
        model.ranking.order =
            doc.at("ranking").at("order").get<std::vector<std::size_t>>();
        model.ranking.importance =
            doc.at("ranking").at("importance").get<std::vector<double>>();
        model.selected = doc.at("selected").get<std::size_t>();
        model.selected_names =
            doc.at("selected_names").get<std::vector<std::string>>();
        model.bounds.min = vec(doc.at("angle_bounds").at("min"));
        model.bounds.max = vec(doc.at("angle_bounds").at("max"));
    } catch (const json::exception& e) {
        throw DataError("pipeline file is missing fields: " +
                        std::string(e.what()));
    }
    return model;
}

SplitThreeWay carve_splits(const RawDataset& ds, const RunConfig& config) {
    if (!ds.labels) {
        throw DataError("the pipeline needs labels for ranking and eval");
    }
    std::vector<std::size_t> normals, anomalies;
    for (std::size_t r = 0; r < ds.n_rows(); ++r) {
        ((*ds.labels)[r] == 1 ? anomalies : normals).push_back(r);
    }
    const std::size_t eval_n = config.eval_use_all ? 0 : config.eval_normal;
    const std::size_t eval_a = config.eval_use_all ? 0 : config.eval_anomaly;
    if (eval_n + config.rank_normal > normals.size()) {
        throw DataError("need " + std::to_string(eval_n + config.rank_normal) +
                        " normal rows for eval+ranking but only " +
                        std::to_string(normals.size()) + " available");
    }
    if (eval_a + config.rank_anomaly > anomalies.size()) {
        throw DataError("need " +
                        std::to_string(eval_a + config.rank_anomaly) +
                        " anomalous rows for eval+ranking but only " +
                        std::to_string(anomalies.size()) + " available");
    }

    Rng rng(config.seed);
    std::vector<std::size_t> norm_pool = normals;
    rng.shuffle(norm_pool);
    std::vector<std::size_t> anom_pool = anomalies;
    rng.shuffle(anom_pool);

    const auto eval_normal_idx = sorted_slice(norm_pool, 0, eval_n);
    const auto rank_normal_idx = sorted_slice(norm_pool, eval_n,
                                              config.rank_normal);
    const auto eval_anomaly_idx = sorted_slice(anom_pool, 0, eval_a);
    const auto rank_anomaly_idx = sorted_slice(anom_pool, eval_a,
                                               config.rank_anomaly);

    enum : unsigned char { kFree = 0, kEval = 1, kRank = 2, kTrain = 3 };
    std::vector<unsigned char> role(ds.n_rows(), kFree);
    for (std::size_t i : eval_normal_idx) role[i] = kEval;
    for (std::size_t i : eval_anomaly_idx) role[i] = kEval;
    for (std::size_t i : rank_normal_idx) role[i] = kRank;
    for (std::size_t i : rank_anomaly_idx) role[i] = kRank;

    std::vector<std::size_t> eligible;
    for (std::size_t r = 0; r < ds.n_rows(); ++r) {
        if (role[r] != kFree) continue;
        if (config.train_normal_only && (*ds.labels)[r] == 1) continue;
        eligible.push_back(r);
    }
    const auto train_count = static_cast<std::size_t>(
        config.train_fraction * static_cast<double>(eligible.size()));
    if (train_count == 0) {
        throw DataError("training split is empty; lower eval/rank counts or "
                        "raise train_fraction");
    }
    eligible.resize(train_count);
    for (std::size_t i : eligible) role[i] = kTrain;

    std::vector<std::size_t> eval_idx;
    if (config.eval_use_all) {
        for (std::size_t r = 0; r < ds.n_rows(); ++r) {
            if (role[r] == kFree || role[r] == kEval) eval_idx.push_back(r);
        }
    } else {
        eval_idx = eval_normal_idx;
        eval_idx.insert(eval_idx.end(), eval_anomaly_idx.begin(),
                        eval_anomaly_idx.end());
    }
    if (eval_idx.empty()) {
        throw DataError("evaluation split is empty");
    }

    std::vector<std::size_t> rank_idx = rank_normal_idx;
    rank_idx.insert(rank_idx.end(), rank_anomaly_idx.begin(),
                    rank_anomaly_idx.end());

    SplitThreeWay out;
    out.train = select_rows(ds, eligible);
    out.rank = resequenced(select_rows(ds, rank_idx));
    out.eval = resequenced(select_rows(ds, eval_idx));
    return out;
}

void cmd_synth(const RunConfig& config) {
    validate_config(config);
    if (config.input.empty()) {
        throw ConfigError("synth needs 'input' as the output CSV path");
    }
    const RawDataset ds =
        generate_synthetic(config.synth_normal, config.synth_anomaly,
                           config.synth_features, config.synth_shift,
                           config.seed);
    const fs::path path(config.input);
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    write_csv(ds, path, {config.time_column, config.label_column});
    std::cout << "wrote " << ds.n_rows() << " rows ("
              << ds.count_label(1) << " anomalous) to " << config.input
              << "\n";
}

void cmd_preprocess(const RunConfig& config) {
    validate_config(config);
    if (config.input.empty()) {
        throw ConfigError("preprocess needs 'input' pointing at a CSV");
    }
    const RawDataset ds =
        load_csv(config.input, {config.time_column, config.label_column});
    const SplitThreeWay splits = carve_splits(ds, config);

    const PipelineModel model =
        fit_pipeline(splits.train, splits.rank, config.window,
                     config.features, config.max_depth);
    const FeatureMatrix train_angles = apply_pipeline(model, splits.train);
    const FeatureMatrix eval_angles = apply_pipeline(model, splits.eval);

    fs::create_directories(config.artifacts);
    save_pipeline(model, art(config, kPipelineFile));
    save_matrix_csv(train_angles, art(config, kTrainMatrixFile));
    save_matrix_csv(eval_angles, art(config, kEvalMatrixFile));
    save_labels(*splits.eval.labels, art(config, kEvalLabelsFile));

    std::cout << "preprocessed " << ds.n_rows() << " rows -> train "
              << train_angles.rows() << "x" << train_angles.cols()
              << ", eval " << eval_angles.rows() << "x" << eval_angles.cols()
              << " (ranking slice " << splits.rank.n_rows() << " rows)\n";
}

void cmd_kernel(const RunConfig& config) {
    validate_config(config);
    const FeatureMatrix train = load_matrix_csv(art(config, kTrainMatrixFile));
    const FeatureMatrix eval = load_matrix_csv(art(config, kEvalMatrixFile));

    json stats;
    KernelMatrix k_train, k_eval;
    if (config.kernel == "quantum") {
        const FeatureMapSpec spec{config.qubits, config.repetitions};
        if (train.cols() != spec.feature_count()) {
            throw DataError("train matrix has " + std::to_string(train.cols()) +
                            " columns; the feature map expects " +
                            std::to_string(spec.feature_count()));
        }
        const KernelMode mode =
            config.shots == 0 ? KernelMode::exact()
                              : KernelMode::with_shots(config.shots,
                                                       config.seed);
        EvalCounter counter;
        k_train = exponentiate(
            train_kernel(train, spec, mode, &counter, config.threads));
        k_eval = exponentiate(
            cross_kernel(eval, train, spec, mode, &counter, config.threads));
        stats = {{"family", "quantum"},
                 {"mode", config.shots == 0 ? "exact" : "shots"},
                 {"shots_per_entry", config.shots},
                 {"circuit_evaluations", counter.circuits},
                 {"total_shots", counter.shots}};
    } else {
        const double gamma = config.gamma > 0.0
                                 ? config.gamma
                                 : 1.0 / static_cast<double>(train.cols());
        k_train = rbf_kernel(train, train, gamma);
        k_eval = rbf_kernel(eval, train, gamma);
        stats = {{"family", "rbf"}, {"gamma", gamma}};
    }
    stats["train_rows"] = train.rows();
    stats["eval_rows"] = eval.rows();

    save_kernel(k_train, art(config, kTrainKernelFile));
    save_kernel(k_eval, art(config, kEvalKernelFile));
    write_json_file(stats, art(config, kKernelStatsFile));

    std::cout << "kernels: train " << k_train.rows() << "x" << k_train.cols()
              << ", eval " << k_eval.rows() << "x" << k_eval.cols();
    if (stats.contains("circuit_evaluations")) {
        std::cout << " (" << stats["circuit_evaluations"]
                  << " circuit evaluations)";
    }
    std::cout << "\n";
}

void cmd_train(const RunConfig& config) {
    validate_config(config);
    const KernelMatrix k = load_kernel(art(config, kTrainKernelFile));
    const OcsvmModel model = train_ocsvm(k, config.nu);
    save_model(model, art(config, kModelFile));
    std::cout << "trained nu=" << config.nu << " model: "
              << model.support_indices.size() << "/" << model.n_train
              << " support vectors, rho=" << model.rho << "\n";
}

MetricsReport cmd_evaluate(const RunConfig& config) {
    const auto start = std::chrono::steady_clock::now();
    validate_config(config);
    const OcsvmModel model = load_model(art(config, kModelFile));
    const KernelMatrix k_eval = load_kernel(art(config, kEvalKernelFile));
    const std::vector<int> labels = load_labels(art(config, kEvalLabelsFile));
    if (labels.size() != static_cast<std::size_t>(k_eval.rows())) {
        throw DataError("eval kernel has " + std::to_string(k_eval.rows()) +
                        " rows but " + std::to_string(labels.size()) +
                        " labels");
    }

    const std::vector<Prediction> preds = predict(model, k_eval);
    std::vector<int> predicted(preds.size());
    for (std::size_t i = 0; i < preds.size(); ++i) {
        predicted[i] = preds[i].label == Verdict::Anomaly ? 1 : 0;
    }
    const MetricsReport report = compute_metrics(labels, predicted);

    double normal_sum = 0.0, anomaly_sum = 0.0;
    std::size_t normal_count = 0, anomaly_count = 0;
    for (std::size_t i = 0; i < preds.size(); ++i) {
        if (labels[i] == 1) {
            anomaly_sum += preds[i].decision_value;
            ++anomaly_count;
        } else {
            normal_sum += preds[i].decision_value;
            ++normal_count;
        }
    }

    json doc = {
        {"confusion", {{"tp", report.tp},
                       {"fp", report.fp},
                       {"tn", report.tn},
                       {"fn", report.fn}}},
        {"accuracy", report.accuracy},
        {"anomaly", {{"precision", rate_json(report.anomaly.precision)},
                     {"recall", rate_json(report.anomaly.recall)},
                     {"f1", rate_json(report.anomaly.f1)}}},
        {"normal", {{"precision", rate_json(report.normal.precision)},
                    {"recall", rate_json(report.normal.recall)},
                    {"f1", rate_json(report.normal.f1)}}},
        {"macro", {{"precision", rate_json(report.macro_precision)},
                   {"recall", rate_json(report.macro_recall)},
                   {"f1", rate_json(report.macro_f1)}}},
        {"warnings", report.warnings},
        {"eval_rows", labels.size()},
        {"decision_mean",
         {{"normal", normal_count > 0 ? json(normal_sum /
                                             static_cast<double>(normal_count))
                                      : json(nullptr)},
          {"anomaly", anomaly_count > 0
                          ? json(anomaly_sum /
                                 static_cast<double>(anomaly_count))
                          : json(nullptr)}}},
    };
    if (fs::exists(art(config, kKernelStatsFile))) {
        doc["kernel_stats"] =
            load_json_file(art(config, kKernelStatsFile), "kernel stats");
    }
    // Wall-clock time; excluded from determinism comparisons by design.
    doc["runtime_seconds"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    write_json_file(doc, art(config, kMetricsFile));

    // The eval-by-train kernel doubles as the heat-map matrix: with the
    // block eval layout, normal rows sit above anomalous rows.
    std::ofstream heat(art(config, kHeatmapFile), std::ios::binary);
    if (!heat) {
        throw DataError("cannot write file: " +
                        art(config, kHeatmapFile).string());
    }
    for (Eigen::Index r = 0; r < k_eval.rows(); ++r) {
        for (Eigen::Index c = 0; c < k_eval.cols(); ++c) {
            if (c > 0) heat << ',';
            heat << detail::format_double(k_eval.values(r, c));
        }
        heat << '\n';
    }

    std::cout << format_metrics(report);
    return report;
}

}  // namespace qfk
