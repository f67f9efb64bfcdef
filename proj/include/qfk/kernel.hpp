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

#include <Eigen/Dense>
#include <cstdint>
#include <filesystem>
#include <string>

#include "qfk/feature_map.hpp"
#include "qfk/feature_matrix.hpp"

namespace qfk {

/// Raw entries are state overlaps in [0, 1]; exponentiated entries are
/// e^raw in [1, e]. A kernel can be exponentiated at most once.
enum class KernelStage { Raw, Exponentiated };

/// How fidelities were estimated: exact zero-state probability, or a
/// seeded shot count.
struct KernelMode {
    enum class Kind { Exact, Shots };

    Kind kind = Kind::Exact;
    std::uint64_t shots = 0;
    std::uint64_t seed = 0;

    static KernelMode exact() { return KernelMode{}; }
    static KernelMode with_shots(std::uint64_t shots, std::uint64_t seed) {
        return KernelMode{Kind::Shots, shots, seed};
    }

    bool is_exact() const { return kind == Kind::Exact; }
    bool operator==(const KernelMode&) const = default;
};

/// Running totals of simulator work, for the pipeline reports.
struct EvalCounter {
    std::uint64_t circuits = 0;
    std::uint64_t shots = 0;
};

struct KernelMatrix {
    Eigen::MatrixXd values;
    KernelStage stage = KernelStage::Raw;
    KernelMode mode;
    std::uint64_t spec_hash = 0;

    Eigen::Index rows() const { return values.rows(); }
    Eigen::Index cols() const { return values.cols(); }
};

/// Overlap of the two feature-mapped states: |<phi(x)|phi(y)>|^2, computed
/// by running the map of x and then the inverted map of y on |0...0> and
/// taking the zero-state probability (exact) or shot frequency.
double fidelity(const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                const FeatureMapSpec& spec, const KernelMode& mode,
                EvalCounter* counter = nullptr);

/// Self kernel of the training rows. Only the upper triangle is evaluated
/// and then mirrored; the diagonal is pinned to 1 in exact mode (the map
/// composed with its inverse is the identity) and evaluated in shots mode.
/// Shot entries use per-pair seeds derived from (mode.seed, i, j), so the
/// result is identical no matter how the work is scheduled across
/// `n_threads` (0 = number of hardware threads).
KernelMatrix train_kernel(const FeatureMatrix& X, const FeatureMapSpec& spec,
                          const KernelMode& mode,
                          EvalCounter* counter = nullptr, int n_threads = 1);

/// Rectangular kernel between test rows and training rows; entry (i, j) is
/// fidelity(test_i, train_j).
KernelMatrix cross_kernel(const FeatureMatrix& X_test,
                          const FeatureMatrix& X_train,
                          const FeatureMapSpec& spec, const KernelMode& mode,
                          EvalCounter* counter = nullptr, int n_threads = 1);

/// Elementwise e^v. Throws DataError if the kernel is not in the raw stage.
KernelMatrix exponentiate(const KernelMatrix& k);

/// Text format: one header line
///   qfk-kernel v1 rows=<r> cols=<c> stage=<raw|exp> mode=<exact|shots:K:SEED> spec=<hash>
/// followed by one comma-separated row per line, 17 significant digits
/// (bit-exact round trip).
void save_kernel(const KernelMatrix& k, const std::filesystem::path& path);
KernelMatrix load_kernel(const std::filesystem::path& path);

}  // namespace qfk
