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

#include "qfk/feature_map.hpp"

#include <numbers>
#include <stdexcept>

#include "qfk/rng.hpp"

namespace qfk {

std::uint64_t FeatureMapSpec::hash() const {
    // Version tag first so a future layout change invalidates old files.
    std::uint64_t h = mix64(0x71666b2d666d6131ULL);  // "qfk-fm1"
    h = mix64(h ^ static_cast<std::uint64_t>(n_qubits));
    h = mix64(h ^ static_cast<std::uint64_t>(repetitions));
    h = mix64(h ^ static_cast<std::uint64_t>(features_per_qubit));
    h = mix64(h ^ 1ULL);  // linear nearest-neighbor entanglement
    return h;
}

Circuit build_feature_map(const Eigen::VectorXd& x,
                          const FeatureMapSpec& spec) {
    if (spec.repetitions < 1) {
        throw std::invalid_argument("feature map needs >= 1 repetition");
    }
    if (x.size() != spec.feature_count()) {
        throw std::invalid_argument(
            "feature vector length must equal 2 * n_qubits");
    }
    // Out-of-range angles are rejected, not wrapped; the comparison also
    // catches NaN.
    constexpr double limit = std::numbers::pi * (1.0 + 1e-12);
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        if (!(x(i) >= -limit && x(i) <= limit)) {
            throw std::invalid_argument(
                "encoded feature outside [-pi, pi]");
        }
    }

    const int n = spec.n_qubits;
    Circuit c(n);
    for (int rep = 0; rep < spec.repetitions; ++rep) {
        for (int q = 0; q < n; ++q) {
            c.ry(q, x(2 * q));
            c.rz(q, x(2 * q + 1));
        }
        for (int q = 0; q + 1 < n; ++q) {
            c.cnot(q, q + 1);
        }
        for (int q = 0; q < n; ++q) {
            c.ry(q, x(2 * q));
        }
    }
    return c;
}

}  // namespace qfk
