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
#include <vector>

#include "qfk/feature_matrix.hpp"
#include "qfk/kernel.hpp"

namespace qfk {

/// Trained nu-one-class SVM over a precomputed kernel. Invariants:
/// 0 <= alpha_i <= 1/(nu*n_train), sum(alpha) = 1, and support_indices
/// are exactly the entries with alpha_i > 1e-12. The kernel_* fields
/// remember which kernel family produced the training matrix so
/// prediction can reject mismatched cross kernels.
struct OcsvmModel {
    double nu = 0.0;
    double rho = 0.0;
    std::vector<double> alpha;
    std::vector<std::size_t> support_indices;
    std::size_t n_train = 0;
    KernelStage kernel_stage = KernelStage::Raw;
    KernelMode kernel_mode;
    std::uint64_t kernel_spec_hash = 0;
};

enum class Verdict { Normal, Anomaly };

/// Signed margin and its sign decision; decision_value >= 0 reads normal.
struct Prediction {
    double decision_value = 0.0;
    Verdict label = Verdict::Normal;
};

/// Solves min_alpha (1/2) alpha^T K alpha subject to
/// 0 <= alpha_i <= 1/(nu*n) and sum(alpha) = 1 with deterministic
/// pairwise coordinate descent: each step moves mass between the largest
/// and smallest gradient entries eligible under the box (ties to the
/// lowest index), stopping when the worst KKT violation drops below 1e-6.
/// rho is the smallest (K alpha)_i over strictly interior support
/// vectors (they agree up to the solver tolerance, and taking the
/// smallest keeps margin vectors on the normal side of the boundary), or
/// the mean over all support vectors when none is interior.
/// When given, `objective_trace` records the dual objective after every
/// iteration (it is non-increasing).
///
/// Throws ConfigError for nu outside (0,1], DataError for a non-square or
/// asymmetric kernel, SolverError when 10^6 iterations do not converge.
OcsvmModel train_ocsvm(const KernelMatrix& K, double nu,
                       std::vector<double>* objective_trace = nullptr);

/// value_t = sum_j alpha_j * K_cross(t, j) - rho. The cross kernel must
/// have n_train columns and the training kernel's stage.
std::vector<double> decision_values(const OcsvmModel& model,
                                    const KernelMatrix& K_cross);

/// Labels each row by the sign of its decision value; exactly 0 is
/// normal.
std::vector<Prediction> predict(const OcsvmModel& model,
                                const KernelMatrix& K_cross);

/// Classical baseline kernel, entry (i,j) = exp(-gamma * |x_i - y_j|^2).
/// Marked Exponentiated since its entries are already exponentials (a
/// further exponentiation stage is meaningless and therefore rejected).
KernelMatrix rbf_kernel(const FeatureMatrix& X, const FeatureMatrix& Y,
                        double gamma);

/// JSON round trip preserving decision values to 1e-15.
void save_model(const OcsvmModel& model, const std::filesystem::path& path);
OcsvmModel load_model(const std::filesystem::path& path);

}  // namespace qfk
