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

#include "qfk/gini.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "qfk/errors.hpp"

namespace qfk {
namespace {

constexpr double kMinDecrease = 1e-12;

double gini_impurity(std::size_t c0, std::size_t c1) {
    const std::size_t n = c0 + c1;
    if (n == 0) return 0.0;
    const double p0 = static_cast<double>(c0) / static_cast<double>(n);
    const double p1 = static_cast<double>(c1) / static_cast<double>(n);
    return 1.0 - p0 * p0 - p1 * p1;
}

struct TreeBuilder {
    const FeatureMatrix& m;
    const std::vector<int>& labels;
    int max_depth;
    std::vector<GiniNode> nodes;

    int build(const std::vector<std::size_t>& rows, int depth) {
        GiniNode node;
        node.n_samples = rows.size();
        for (std::size_t r : rows) {
            ++node.class_counts[static_cast<std::size_t>(labels[r])];
        }
        const double impurity =
            gini_impurity(node.class_counts[0], node.class_counts[1]);
        const int index = static_cast<int>(nodes.size());
        nodes.push_back(node);
        if (depth >= max_depth || impurity == 0.0) return index;

        // Best split: features ascending, candidate thresholds ascending,
        // strictly-greater comparison, so ties resolve to the lowest
        // feature index and then the lowest threshold.
        int best_feature = -1;
        double best_threshold = 0.0;
        double best_decrease = 0.0;
        const double n = static_cast<double>(rows.size());
        std::vector<std::pair<double, int>> ordered(rows.size());
        for (Eigen::Index f = 0; f < m.cols(); ++f) {
            for (std::size_t i = 0; i < rows.size(); ++i) {
                ordered[i] = {m.data(static_cast<Eigen::Index>(rows[i]), f),
                              labels[rows[i]]};
            }
            std::sort(ordered.begin(), ordered.end());
            std::size_t left[2] = {0, 0};
            for (std::size_t i = 0; i + 1 < ordered.size(); ++i) {
                ++left[static_cast<std::size_t>(ordered[i].second)];
                const double a = ordered[i].first;
                const double b = ordered[i + 1].first;
                if (a == b) continue;
                double threshold = a + (b - a) / 2.0;
                if (threshold >= b) threshold = a;  // midpoint rounded up
                const std::size_t nl = i + 1;
                const std::size_t nr = ordered.size() - nl;
                const double decrease =
                    impurity -
                    (static_cast<double>(nl) / n) *
                        gini_impurity(left[0], left[1]) -
                    (static_cast<double>(nr) / n) *
                        gini_impurity(node.class_counts[0] - left[0],
                                      node.class_counts[1] - left[1]);
                if (decrease > best_decrease) {
                    best_decrease = decrease;
                    best_feature = static_cast<int>(f);
                    best_threshold = threshold;
                }
            }
        }
        if (best_feature < 0 || best_decrease < kMinDecrease) return index;

        std::vector<std::size_t> left_rows, right_rows;
        for (std::size_t r : rows) {
            const double v =
                m.data(static_cast<Eigen::Index>(r), best_feature);
            (v <= best_threshold ? left_rows : right_rows).push_back(r);
        }
        const int left = build(left_rows, depth + 1);
        const int right = build(right_rows, depth + 1);
        nodes[static_cast<std::size_t>(index)].feature = best_feature;
        nodes[static_cast<std::size_t>(index)].threshold = best_threshold;
        nodes[static_cast<std::size_t>(index)].decrease = best_decrease;
        nodes[static_cast<std::size_t>(index)].left = left;
        nodes[static_cast<std::size_t>(index)].right = right;
        return index;
    }
};

}  // namespace

GiniTree fit_gini_tree(const FeatureMatrix& m, const std::vector<int>& labels,
                       int max_depth) {
    if (max_depth < 1) throw std::invalid_argument("max_depth must be >= 1");
    if (static_cast<std::size_t>(m.rows()) != labels.size()) {
        throw std::invalid_argument("row/label count mismatch");
    }
    if (labels.empty()) throw std::invalid_argument("need at least one row");
    std::size_t counts[2] = {0, 0};
    for (int label : labels) {
        if (label != 0 && label != 1) {
            throw DataError("labels must be 0 or 1");
        }
        ++counts[static_cast<std::size_t>(label)];
    }
    if (counts[0] == 0 || counts[1] == 0) {
        throw DataError("feature ranking needs both classes present");
    }

    TreeBuilder builder{m, labels, max_depth, {}};
    std::vector<std::size_t> rows(labels.size());
    std::iota(rows.begin(), rows.end(), 0);
    builder.build(rows, 0);

    GiniTree tree;
    tree.nodes = std::move(builder.nodes);
    tree.max_depth = max_depth;
    tree.n_features = static_cast<std::size_t>(m.cols());
    return tree;
}

FeatureRanking rank_features(const GiniTree& t) {
    if (t.nodes.empty()) throw std::invalid_argument("tree has no nodes");
    FeatureRanking r;
    r.importance.assign(t.n_features, 0.0);
    const double total = static_cast<double>(t.n_samples());
    for (const GiniNode& node : t.nodes) {
        if (node.is_leaf()) continue;
        r.importance[static_cast<std::size_t>(node.feature)] +=
            (static_cast<double>(node.n_samples) / total) * node.decrease;
    }
    double sum = 0.0;
    for (double v : r.importance) sum += v;
    if (sum <= 0.0) {
        // No informative split: fall back to uniform weight.
        r.importance.assign(t.n_features, 1.0 / static_cast<double>(t.n_features));
    } else {
        for (double& v : r.importance) v /= sum;
    }
    r.order.resize(t.n_features);
    std::iota(r.order.begin(), r.order.end(), 0);
    std::sort(r.order.begin(), r.order.end(),
              [&](std::size_t a, std::size_t b) {
                  if (r.importance[a] != r.importance[b]) {
                      return r.importance[a] > r.importance[b];
                  }
                  return a < b;
              });
    return r;
}

FeatureMatrix select_features(const FeatureMatrix& m, const FeatureRanking& r,
                              std::size_t k) {
    if (r.order.size() != static_cast<std::size_t>(m.cols())) {
        throw std::invalid_argument("ranking/matrix column count mismatch");
    }
    if (k < 1 || k > r.order.size()) {
        throw std::invalid_argument("selected feature count out of range");
    }
    FeatureMatrix out;
    out.data.resize(m.rows(), static_cast<Eigen::Index>(k));
    out.feature_names.reserve(k);
    for (std::size_t j = 0; j < k; ++j) {
        const auto src = static_cast<Eigen::Index>(r.order[j]);
        out.data.col(static_cast<Eigen::Index>(j)) = m.data.col(src);
        out.feature_names.push_back(m.feature_names[r.order[j]]);
    }
    return out;
}

}  // namespace qfk
