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

#include "qfk/ocsvm.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <string>

#include "json.hpp"
#include "qfk/errors.hpp"
#include "qfk/rng.hpp"

namespace qfk {
namespace {

constexpr double kKktTolerance = 1e-6;
constexpr double kSupportTolerance = 1e-12;
constexpr std::uint64_t kMaxIterations = 1000000;

std::string stage_name(KernelStage stage) {
    return stage == KernelStage::Raw ? "raw" : "exp";
}

KernelStage stage_from_name(const std::string& name) {
    if (name == "raw") return KernelStage::Raw;
    if (name == "exp") return KernelStage::Exponentiated;
    throw DataError("model file: unknown kernel stage '" + name + "'");
}

void check_cross(const OcsvmModel& model, const KernelMatrix& K_cross) {
    if (static_cast<std::size_t>(K_cross.cols()) != model.n_train) {
        throw DataError("cross kernel has " + std::to_string(K_cross.cols()) +
                        " columns but the model was trained on " +
                        std::to_string(model.n_train) + " rows");
    }
    if (K_cross.stage != model.kernel_stage) {
        throw DataError(
            "cross kernel stage does not match the training kernel stage");
    }
}

}  // namespace

OcsvmModel train_ocsvm(const KernelMatrix& K, double nu,
                       std::vector<double>* objective_trace) {
    if (!(nu > 0.0) || nu > 1.0) {
        throw ConfigError("nu must lie in (0, 1]");
    }
    if (K.rows() != K.cols() || K.rows() == 0) {
        throw DataError("training kernel must be square and nonempty");
    }
    const Eigen::Index n = K.rows();
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i + 1; j < n; ++j) {
            if (std::abs(K.values(i, j) - K.values(j, i)) > 1e-9) {
                throw DataError("training kernel is not symmetric");
            }
        }
    }

    const double bound = 1.0 / (nu * static_cast<double>(n));
    Eigen::VectorXd alpha = Eigen::VectorXd::Zero(n);
    // Feasible start: fill the first floor(nu*n) coordinates to the box
    // bound and park the leftover mass on the next one.
    const auto full = std::min<Eigen::Index>(
        n, static_cast<Eigen::Index>(nu * static_cast<double>(n)));
    for (Eigen::Index i = 0; i < full; ++i) alpha(i) = bound;
    const double leftover = 1.0 - static_cast<double>(full) * bound;
    if (leftover > 0.0 && full < n) alpha(full) = leftover;

    Eigen::VectorXd grad = K.values * alpha;
    if (objective_trace) {
        objective_trace->clear();
        objective_trace->push_back(0.5 * alpha.dot(grad));
    }

    double violation = std::numeric_limits<double>::infinity();
    bool converged = false;
    for (std::uint64_t iter = 0; iter < kMaxIterations; ++iter) {
        // Most violating pair: raisable coordinate with the smallest
        // gradient, lowerable coordinate with the largest. Strict
        // comparisons on an ascending scan pin ties to the lowest index.
        Eigen::Index up = -1, down = -1;
        for (Eigen::Index i = 0; i < n; ++i) {
            if (alpha(i) < bound && (up < 0 || grad(i) < grad(up))) up = i;
            if (alpha(i) > 0.0 && (down < 0 || grad(i) > grad(down))) down = i;
        }
        if (up < 0) {  // every coordinate at the bound (nu = 1)
            violation = 0.0;
            converged = true;
            break;
        }
        violation = grad(down) - grad(up);
        if (violation < kKktTolerance) {
            converged = true;
            break;
        }

        const double room = std::min(bound - alpha(up), alpha(down));
        const double curvature = K.values(up, up) + K.values(down, down) -
                                 2.0 * K.values(up, down);
        double step = room;
        if (curvature > 0.0) step = std::min(room, violation / curvature);
        alpha(up) += step;
        alpha(down) -= step;
        grad += step * (K.values.col(up) - K.values.col(down));
        if (objective_trace) {
            objective_trace->push_back(0.5 * alpha.dot(grad));
        }
    }
    if (!converged) {
        throw SolverError("dual solver did not converge: KKT violation " +
                          std::to_string(violation) + " after " +
                          std::to_string(kMaxIterations) + " iterations");
    }

    OcsvmModel model;
    model.nu = nu;
    model.n_train = static_cast<std::size_t>(n);
    model.alpha.assign(alpha.data(), alpha.data() + n);
    model.kernel_stage = K.stage;
    model.kernel_mode = K.mode;
    model.kernel_spec_hash = K.spec_hash;
    for (Eigen::Index i = 0; i < n; ++i) {
        if (alpha(i) > kSupportTolerance) {
            model.support_indices.push_back(static_cast<std::size_t>(i));
        }
    }

    // rho from the margin: interior support vectors sit on the boundary,
    // so their (K alpha)_i all equal rho up to the solver tolerance. The
    // smallest of them is used so no margin vector ends up a hair below
    // zero and miscounts as a training outlier.
    std::vector<double> interior;
    for (Eigen::Index i = 0; i < n; ++i) {
        if (alpha(i) > kSupportTolerance &&
            alpha(i) < bound - kSupportTolerance) {
            interior.push_back(grad(i));
        }
    }
    if (!interior.empty()) {
        model.rho = *std::min_element(interior.begin(), interior.end());
    } else {
        double sum = 0.0;
        for (std::size_t i : model.support_indices) {
            sum += grad(static_cast<Eigen::Index>(i));
        }
        model.rho = sum / static_cast<double>(model.support_indices.size());
    }
    return model;
}

std::vector<double> decision_values(const OcsvmModel& model,
                                    const KernelMatrix& K_cross) {
    check_cross(model, K_cross);
    std::vector<double> values(static_cast<std::size_t>(K_cross.rows()));
    for (Eigen::Index t = 0; t < K_cross.rows(); ++t) {
        double sum = 0.0;
        for (Eigen::Index j = 0; j < K_cross.cols(); ++j) {
            sum += model.alpha[static_cast<std::size_t>(j)] *
                   K_cross.values(t, j);
        }
        values[static_cast<std::size_t>(t)] = sum - model.rho;
    }
    return values;
}

std::vector<Prediction> predict(const OcsvmModel& model,
                                const KernelMatrix& K_cross) {
    const std::vector<double> values = decision_values(model, K_cross);
    std::vector<Prediction> out(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        out[i].decision_value = values[i];
        out[i].label = values[i] < 0.0 ? Verdict::Anomaly : Verdict::Normal;
    }
    return out;
}

KernelMatrix rbf_kernel(const FeatureMatrix& X, const FeatureMatrix& Y,
                        double gamma) {
    if (!(gamma > 0.0)) throw ConfigError("gamma must be positive");
    if (X.cols() != Y.cols()) {
        throw DataError("rbf kernel inputs have different feature counts");
    }
    KernelMatrix k;
    k.stage = KernelStage::Exponentiated;
    k.mode = KernelMode::exact();
    k.spec_hash = mix64(0x7266626b65726e6cULL ^
                        std::bit_cast<std::uint64_t>(gamma));
    k.values.resize(X.rows(), Y.rows());
    for (Eigen::Index i = 0; i < X.rows(); ++i) {
        for (Eigen::Index j = 0; j < Y.rows(); ++j) {
            const double sq = (X.data.row(i) - Y.data.row(j)).squaredNorm();
            k.values(i, j) = std::exp(-gamma * sq);
        }
    }
    return k;
}

void save_model(const OcsvmModel& model, const std::filesystem::path& path) {
    nlohmann::json doc;
    doc["nu"] = model.nu;
    doc["rho"] = model.rho;
    doc["alpha"] = model.alpha;
    doc["support_indices"] = model.support_indices;
    doc["n_train"] = model.n_train;
    char hash_buf[17];
    std::snprintf(hash_buf, sizeof(hash_buf), "%016llx",
                  static_cast<unsigned long long>(model.kernel_spec_hash));
    doc["kernel_meta"] = {
        {"stage", stage_name(model.kernel_stage)},
        {"mode", model.kernel_mode.is_exact()
                     ? "exact"
                     : "shots:" + std::to_string(model.kernel_mode.shots) +
                           ":" + std::to_string(model.kernel_mode.seed)},
        {"spec", hash_buf},
    };
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write file: " + path.string());
    out << doc.dump(2) << '\n';
    if (!out) throw DataError("write failed: " + path.string());
}

OcsvmModel load_model(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open file: " + path.string());
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw DataError("model file is not valid JSON: " +
                        std::string(e.what()));
    }
    OcsvmModel model;
    try {
        model.nu = doc.at("nu").get<double>();
        model.rho = doc.at("rho").get<double>();
        model.alpha = doc.at("alpha").get<std::vector<double>>();
        model.support_indices =
            doc.at("support_indices").get<std::vector<std::size_t>>();
        model.n_train = doc.at("n_train").get<std::size_t>();
        const auto& meta = doc.at("kernel_meta");
        model.kernel_stage =
            stage_from_name(meta.at("stage").get<std::string>());
        const auto mode = meta.at("mode").get<std::string>();
        if (mode == "exact") {
            model.kernel_mode = KernelMode::exact();
        } else if (mode.rfind("shots:", 0) == 0) {
            const auto rest = mode.substr(6);
            const auto colon = rest.find(':');
            if (colon == std::string::npos) {
                throw DataError("model file: bad kernel mode '" + mode + "'");
            }
            model.kernel_mode = KernelMode::with_shots(
                std::stoull(rest.substr(0, colon)),
                std::stoull(rest.substr(colon + 1)));
        } else {
            throw DataError("model file: unknown kernel mode '" + mode + "'");
        }
        model.kernel_spec_hash = std::stoull(
            meta.at("spec").get<std::string>(), nullptr, 16);
    } catch (const nlohmann::json::exception& e) {
        throw DataError("model file is missing fields: " +
                        std::string(e.what()));
    }
    if (model.alpha.size() != model.n_train) {
        throw DataError("model file: alpha length does not match n_train");
    }
    return model;
}

}  // namespace qfk
