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

#include "qfk/statevector.hpp"

namespace qfk {

/// Shape of the encoding circuit. Two features ride on each qubit (RY for
/// the first, RZ for the second), qubits are entangled by an open CNOT
/// chain, and a second RY of the first feature closes each repetition.
struct FeatureMapSpec {
    int n_qubits = 8;
    int repetitions = 3;

    static constexpr int features_per_qubit = 2;

    int feature_count() const { return features_per_qubit * n_qubits; }

    /// Gates per full circuit: repetitions * (3n + (n - 1)).
    int gate_count() const {
        return repetitions * (3 * n_qubits + (n_qubits - 1));
    }

    /// Stable identity hash of the circuit family, stored in kernel files
    /// so a cross kernel can be checked against its training kernel.
    std::uint64_t hash() const;
};

/// Encoding circuit for one angle vector of length 2 * n_qubits.
/// Per repetition: RY(x_{2i}) RZ(x_{2i+1}) on each qubit i, CNOT(i -> i+1)
/// for i = 0..n-2, then RY(x_{2i}) on each qubit again.
///
/// Throws std::invalid_argument on a length mismatch or any angle outside
/// [-pi, pi]; angles are never wrapped.
Circuit build_feature_map(const Eigen::VectorXd& x, const FeatureMapSpec& spec);

}  // namespace qfk
