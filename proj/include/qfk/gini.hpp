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

#include <array>
#include <cstddef>
#include <vector>

#include "qfk/feature_matrix.hpp"

namespace qfk {

/// Node of a binary CART tree. Internal nodes route rows with
/// value <= threshold to the left child; `decrease` is the node-local
/// Gini impurity drop (parent impurity minus the weighted child
/// impurities).
struct GiniNode {
    int feature = -1;  // -1 marks a leaf
    double threshold = 0.0;
    double decrease = 0.0;
    std::size_t n_samples = 0;
    std::array<std::size_t, 2> class_counts{0, 0};
    int left = -1;
    int right = -1;

    bool is_leaf() const { return feature < 0; }
};

/// Greedy binary-label CART tree grown on Gini impurity. Fully
/// deterministic: candidate thresholds are midpoints between sorted
/// distinct values, and split ties go to the lowest feature index, then
/// the lowest threshold.
struct GiniTree {
    std::vector<GiniNode> nodes;  // nodes[0] is the root
    int max_depth = 8;
    std::size_t n_features = 0;

    std::size_t n_samples() const {
        return nodes.empty() ? 0 : nodes.front().n_samples;
    }
};

/// Feature order (most important first) plus the nonnegative importance
/// weights behind it, normalized to sum 1.
struct FeatureRanking {
    std::vector<std::size_t> order;
    std::vector<double> importance;
};

/// Grows the tree until max_depth, a pure node, or a best impurity
/// decrease below 1e-12. Labels must be 0/1 with both classes present
/// (DataError otherwise).
GiniTree fit_gini_tree(const FeatureMatrix& m, const std::vector<int>& labels,
                       int max_depth = 8);

/// Importance per feature = sum over internal nodes splitting on it of
/// (node sample share) x (impurity decrease), normalized to sum 1. A tree
/// with no informative split yields uniform importance in natural index
/// order. Ties in the ordering break toward the lower index.
FeatureRanking rank_features(const GiniTree& t);

/// Keeps the k top-ranked columns, reordered most-important-first.
FeatureMatrix select_features(const FeatureMatrix& m, const FeatureRanking& r,
                              std::size_t k);

}  // namespace qfk
