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
#include <filesystem>
#include <string>
#include <vector>

namespace qfk {

/// Dense numeric sample matrix: rows are samples, columns are named
/// features.
struct FeatureMatrix {
    Eigen::MatrixXd data;
    std::vector<std::string> feature_names;

    Eigen::Index rows() const { return data.rows(); }
    Eigen::Index cols() const { return data.cols(); }
};

/// CSV with a feature-name header and 17-significant-digit values, so a
/// save/load round trip reproduces every double exactly.
void save_matrix_csv(const FeatureMatrix& m,
                     const std::filesystem::path& path);
FeatureMatrix load_matrix_csv(const std::filesystem::path& path);

}  // namespace qfk
