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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <filesystem>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "qfk/dataset.hpp"
#include "qfk/errors.hpp"
#include "qfk/gini.hpp"
#include "qfk/preprocess.hpp"
#include "qfk/rng.hpp"

using namespace qfk;
using doctest::Approx;

namespace {

constexpr double kPi = std::numbers::pi;

FeatureMatrix matrix_from(const std::vector<std::vector<double>>& columns) {
    FeatureMatrix m;
    m.data.resize(static_cast<Eigen::Index>(columns.front().size()),
                  static_cast<Eigen::Index>(columns.size()));
    for (std::size_t c = 0; c < columns.size(); ++c) {
        m.feature_names.push_back("f" + std::to_string(c));
        for (std::size_t r = 0; r < columns[c].size(); ++r) {
            m.data(static_cast<Eigen::Index>(r),
                   static_cast<Eigen::Index>(c)) = columns[c][r];
        }
    }
    return m;
}

}  // namespace

TEST_CASE("moving_average matches the windowed-mean definition") {
    const std::vector<double> xs{1, 2, 3, 4};
    CHECK(moving_average(xs, 1) == xs);  // identity window, bitwise
    CHECK(moving_average(xs, 2) == std::vector<double>{1.0, 1.5, 2.5, 3.5});
    // Truncated warm-up: every window before t = w-1 averages what exists.
    CHECK(moving_average({1, 2, 3}, 10) == std::vector<double>{1.0, 1.5, 2.0});
}

TEST_CASE("moving_average fixes constant series") {
    const std::vector<double> xs(4, 2.5);
    CHECK(moving_average(xs, 3) == xs);
    // Arbitrary constants survive within rounding.
    Rng rng(3);
    const double c = 10.0 * rng.next_double() - 5.0;
    for (double v : moving_average(std::vector<double>(20, c), 7)) {
        CHECK(v == Approx(c).epsilon(1e-12));
    }
}

TEST_CASE("moving_average commutes with adding a constant") {
    Rng rng(17);
    std::vector<double> xs(50), shifted(50);
    for (std::size_t i = 0; i < xs.size(); ++i) {
        xs[i] = rng.next_gaussian();
        shifted[i] = xs[i] + 3.25;
    }
    const auto a = moving_average(xs, 5);
    const auto b = moving_average(shifted, 5);
    for (std::size_t i = 0; i < xs.size(); ++i) {
        CHECK(b[i] - a[i] == Approx(3.25).epsilon(1e-9));
    }
}

TEST_CASE("moving_average rejects bad arguments") {
    CHECK_THROWS_AS(moving_average({1.0}, 0), std::invalid_argument);
    CHECK_THROWS_AS(moving_average({}, 3), std::invalid_argument);
}

TEST_CASE("smooth_numeric_columns touches only numeric columns") {
    RawDataset ds;
    ds.timestamps = {0, 1, 2};
    Column num;
    num.name = "sensor";
    num.kind = ColumnKind::Numeric;
    num.numeric = {1, 2, 3};
    Column cat;
    cat.name = "valve";
    cat.kind = ColumnKind::Categorical;
    cat.categories = {"on", "off", "on"};
    ds.columns = {num, cat};
    ds.labels = std::vector<int>{0, 0, 1};

    const RawDataset out = smooth_numeric_columns(ds, 2);
    CHECK(out.columns[0].numeric == std::vector<double>{1.0, 1.5, 2.5});
    CHECK(out.columns[1].categories == cat.categories);
    CHECK(*out.labels == *ds.labels);
    CHECK(out.timestamps == ds.timestamps);
}

TEST_CASE("categorical cells encode to their relative frequency") {
    RawDataset ds;
    ds.timestamps = {0, 1, 2};
    Column col;
    col.name = "valve";
    col.kind = ColumnKind::Categorical;
    col.categories = {"on", "off", "on"};
    ds.columns.push_back(col);

    const RawDataset out = encode_categoricals(ds);
    CHECK(out.columns[0].kind == ColumnKind::Numeric);
    CHECK(out.columns[0].numeric ==
          std::vector<double>{2.0 / 3.0, 1.0 / 3.0, 2.0 / 3.0});
}

TEST_CASE("single-category and numeric columns encode trivially") {
    RawDataset ds;
    ds.timestamps = {0, 1};
    Column cat;
    cat.name = "mode";
    cat.kind = ColumnKind::Categorical;
    cat.categories = {"a", "a"};
    Column num;
    num.name = "flow";
    num.kind = ColumnKind::Numeric;
    num.numeric = {0.25, 0.75};
    ds.columns = {cat, num};

    const RawDataset out = encode_categoricals(ds);
    CHECK(out.columns[0].numeric == std::vector<double>{1.0, 1.0});
    CHECK(out.columns[1].numeric == num.numeric);  // untouched
}

TEST_CASE("fitted encoders map unseen categories to zero") {
    RawDataset train;
    train.timestamps = {0, 1, 2, 3};
    Column col;
    col.name = "valve";
    col.kind = ColumnKind::Categorical;
    col.categories = {"on", "on", "on", "off"};
    train.columns.push_back(col);
    const EncoderSet encoders = fit_encoders(train);

    RawDataset test = train;
    test.columns[0].categories = {"off", "broken", "on", "on"};
    const RawDataset out = apply_encoders(test, encoders);
    CHECK(out.columns[0].numeric ==
          std::vector<double>{0.25, 0.0, 0.75, 0.75});

    RawDataset stranger = train;
    stranger.columns[0].name = "other";
    CHECK_THROWS_AS(apply_encoders(stranger, encoders), DataError);
}

TEST_CASE("to_matrix requires fully numeric input") {
    RawDataset ds;
    ds.timestamps = {0, 1};
    Column num;
    num.name = "a";
    num.kind = ColumnKind::Numeric;
    num.numeric = {1.0, 2.0};
    ds.columns.push_back(num);
    const FeatureMatrix m = to_matrix(ds);
    CHECK(m.rows() == 2);
    CHECK(m.cols() == 1);
    CHECK(m.data(1, 0) == 2.0);
    CHECK(m.feature_names == std::vector<std::string>{"a"});

    Column cat;
    cat.name = "b";
    cat.kind = ColumnKind::Categorical;
    cat.categories = {"x", "y"};
    ds.columns.push_back(cat);
    CHECK_THROWS_AS(to_matrix(ds), DataError);
}

TEST_CASE("fit_scaler computes mean and population deviation") {
    const FeatureMatrix m = matrix_from({{1, 2, 3}});
    const ScalerParams p = fit_scaler(m);
    CHECK(p.mu(0) == 2.0);
    // Population sigma of [1,2,3]: sqrt(((1)^2 + 0 + (1)^2) / 3).
    CHECK(p.sigma(0) == std::sqrt(2.0 / 3.0));
    CHECK(p.sigma(0) == Approx(0.816496580927726).epsilon(1e-15));
}

TEST_CASE("fit_scaler flags constant columns with sigma zero") {
    const ScalerParams p = fit_scaler(matrix_from({{5, 5}, {1, 3}}));
    CHECK(p.mu(0) == 5.0);
    CHECK(p.sigma(0) == 0.0);
    const ScalerParams single = fit_scaler(matrix_from({{4.5}}));
    CHECK(single.mu(0) == 4.5);
    CHECK(single.sigma(0) == 0.0);
}

TEST_CASE("apply_scaler standardizes and centers constant columns") {
    const FeatureMatrix m = matrix_from({{1, 2, 3}, {5, 5, 5}});
    const ScalerParams p = fit_scaler(m);
    const FeatureMatrix out = apply_scaler(m, p);
    CHECK(std::abs(out.data.col(0).mean()) < 1e-12);
    double sq = 0.0;
    for (Eigen::Index r = 0; r < out.rows(); ++r) {
        sq += out.data(r, 0) * out.data(r, 0);
    }
    CHECK(std::sqrt(sq / 3.0) == Approx(1.0).epsilon(1e-12));
    CHECK(out.data.col(1).isZero(0.0));  // sigma=0 divides by 1

    ScalerParams wrong = p;
    wrong.mu.resize(3);
    CHECK_THROWS_AS(apply_scaler(m, wrong), std::invalid_argument);
}

TEST_CASE("standardized random matrices have unit statistics") {
    Rng rng(41);
    FeatureMatrix m;
    m.data.resize(40, 5);
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            m.data(r, c) = 3.0 * rng.next_gaussian() + static_cast<double>(c);
        }
    }
    m.feature_names = {"a", "b", "c", "d", "e"};
    const FeatureMatrix out = apply_scaler(m, fit_scaler(m));
    for (Eigen::Index c = 0; c < out.cols(); ++c) {
        CHECK(std::abs(out.data.col(c).mean()) < 1e-9);
        double sq = 0.0;
        for (Eigen::Index r = 0; r < out.rows(); ++r) {
            sq += out.data(r, c) * out.data(r, c);
        }
        CHECK(std::sqrt(sq / static_cast<double>(out.rows())) ==
              Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("scale_to_angles maps the fitted range onto [-pi, pi]") {
    const FeatureMatrix m = matrix_from({{0.0, 0.5, 1.0}});
    const FeatureMatrix out = scale_to_angles(m, fit_angle_bounds(m));
    CHECK(out.data(0, 0) == -kPi);
    CHECK(out.data(1, 0) == 0.0);
    CHECK(out.data(2, 0) == kPi);
}

TEST_CASE("scale_to_angles clips out-of-range values and constants") {
    const FeatureMatrix train = matrix_from({{0.0, 1.0}, {7.0, 7.0}});
    const AngleBounds bounds = fit_angle_bounds(train);
    const FeatureMatrix test = matrix_from({{-3.0, 2.0}, {6.0, 9.0}});
    const FeatureMatrix out = scale_to_angles(test, bounds);
    CHECK(out.data(0, 0) == -kPi);  // below train min
    CHECK(out.data(1, 0) == kPi);   // beyond train max
    CHECK(out.data(0, 1) == 0.0);   // constant feature
    CHECK(out.data(1, 1) == 0.0);

    AngleBounds inverted = bounds;
    inverted.min(0) = 2.0;
    CHECK_THROWS_AS(scale_to_angles(test, inverted), std::invalid_argument);
    AngleBounds narrow;
    narrow.min.resize(1);
    narrow.max.resize(1);
    CHECK_THROWS_AS(scale_to_angles(test, narrow), std::invalid_argument);
}

TEST_CASE("scaled angles always stay inside the closed interval") {
    Rng rng(7);
    FeatureMatrix train, test;
    train.data.resize(30, 4);
    test.data.resize(30, 4);
    for (Eigen::Index r = 0; r < 30; ++r) {
        for (Eigen::Index c = 0; c < 4; ++c) {
            train.data(r, c) = rng.next_gaussian();
            test.data(r, c) = 2.0 * rng.next_gaussian();
        }
    }
    train.feature_names = test.feature_names = {"a", "b", "c", "d"};
    const FeatureMatrix out = scale_to_angles(test, fit_angle_bounds(train));
    for (Eigen::Index r = 0; r < out.rows(); ++r) {
        for (Eigen::Index c = 0; c < out.cols(); ++c) {
            CHECK(out.data(r, c) >= -kPi);
            CHECK(out.data(r, c) <= kPi);
        }
    }
}

TEST_CASE("matrix CSV round trip is bit-exact") {
    Rng rng(23);
    FeatureMatrix m;
    m.data.resize(12, 3);
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            m.data(r, c) = rng.next_gaussian() * 1e3;
        }
    }
    m.feature_names = {"plain", "with,comma", "with\"quote"};
    const auto path =
        std::filesystem::temp_directory_path() / "preprocess_matrix.csv";
    save_matrix_csv(m, path);
    const FeatureMatrix back = load_matrix_csv(path);
    CHECK(back.feature_names == m.feature_names);
    REQUIRE(back.rows() == m.rows());
    REQUIRE(back.cols() == m.cols());
    CHECK((back.data.array() == m.data.array()).all());
}

TEST_CASE("a perfect separator yields a depth-1 pure tree") {
    const FeatureMatrix m = matrix_from({{0, 1, 2, 3}, {5, 5, 5, 5}});
    const GiniTree t = fit_gini_tree(m, {0, 0, 1, 1});
    REQUIRE(t.nodes.size() == 3);
    const GiniNode& root = t.nodes[0];
    CHECK(root.feature == 0);
    CHECK(root.threshold == 1.5);
    // The 50/50 root has Gini 0.5 and the split recovers all of it.
    CHECK(root.decrease == 0.5);
    CHECK(root.n_samples == 4);
    CHECK(t.nodes[1].is_leaf());
    CHECK(t.nodes[1].class_counts == std::array<std::size_t, 2>{2, 0});
    CHECK(t.nodes[2].is_leaf());
    CHECK(t.nodes[2].class_counts == std::array<std::size_t, 2>{0, 2});

    const FeatureRanking r = rank_features(t);
    CHECK(r.importance == std::vector<double>{1.0, 0.0});
    CHECK(r.order == std::vector<std::size_t>{0, 1});
}

TEST_CASE("equally good split candidates go to the lower feature index") {
    // Both features separate the classes perfectly.
    const FeatureMatrix m = matrix_from({{0, 0, 1, 1}, {2, 2, 9, 9}});
    const GiniTree t = fit_gini_tree(m, {0, 0, 1, 1});
    CHECK(t.nodes[0].feature == 0);
}

TEST_CASE("a two-split tree matches the hand-enumerated node sums") {
    // Rows (0,0),(0,1),(1,0),(1,1) with labels 0,1,1,1. Root impurity is
    // 0.375; thresholds at 0.5 on either feature give decrease 0.125, so
    // the tie-break picks feature 0. The left child {(0,0),(0,1)} then
    // splits on feature 1 with decrease 0.5. Importance sums:
    //   feature 0: (4/4)*0.125 = 0.125, feature 1: (2/4)*0.5 = 0.25,
    // normalizing to [1/3, 2/3].
    const FeatureMatrix m = matrix_from({{0, 0, 1, 1}, {0, 1, 0, 1}});
    const GiniTree t = fit_gini_tree(m, {0, 1, 1, 1});
    REQUIRE(t.nodes.size() == 5);
    const GiniNode& root = t.nodes[0];
    CHECK(root.feature == 0);
    CHECK(root.threshold == 0.5);
    CHECK(root.decrease == Approx(0.125).epsilon(1e-15));
    const GiniNode& left = t.nodes[static_cast<std::size_t>(root.left)];
    CHECK(left.feature == 1);
    CHECK(left.decrease == Approx(0.5).epsilon(1e-15));
    CHECK(t.nodes[static_cast<std::size_t>(root.right)].is_leaf());

    const FeatureRanking r = rank_features(t);
    CHECK(r.importance[0] == Approx(1.0 / 3.0).epsilon(1e-12));
    CHECK(r.importance[1] == Approx(2.0 / 3.0).epsilon(1e-12));
    CHECK(r.order == std::vector<std::size_t>{1, 0});
}

TEST_CASE("trees without informative splits rank features uniformly") {
    const FeatureMatrix m = matrix_from({{1, 1, 1, 1}, {2, 2, 2, 2}});
    const GiniTree t = fit_gini_tree(m, {0, 0, 1, 1});
    REQUIRE(t.nodes.size() == 1);
    CHECK(t.nodes[0].is_leaf());
    const FeatureRanking r = rank_features(t);
    CHECK(r.importance == std::vector<double>{0.5, 0.5});
    CHECK(r.order == std::vector<std::size_t>{0, 1});
}

TEST_CASE("max_depth truncates growth") {
    // Classes need two splits (interval in the middle); depth 1 stops at
    // one split with impure children.
    const FeatureMatrix m = matrix_from({{0, 1, 2, 3}});
    const GiniTree t = fit_gini_tree(m, {0, 1, 1, 0}, 1);
    REQUIRE(t.nodes.size() == 3);
    CHECK(t.nodes[1].is_leaf());
    CHECK(t.nodes[2].is_leaf());
}

TEST_CASE("fit_gini_tree validates inputs") {
    const FeatureMatrix m = matrix_from({{0, 1, 2, 3}});
    CHECK_THROWS_AS(fit_gini_tree(m, {0, 0, 0, 0}), DataError);
    CHECK_THROWS_AS(fit_gini_tree(m, {0, 0, 2, 1}), DataError);
    CHECK_THROWS_AS(fit_gini_tree(m, {0, 1}), std::invalid_argument);
    CHECK_THROWS_AS(fit_gini_tree(m, {0, 1, 0, 1}, 0), std::invalid_argument);
}

TEST_CASE("identical inputs grow identical trees") {
    Rng rng(77);
    FeatureMatrix m;
    m.data.resize(60, 6);
    std::vector<int> labels(60);
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            m.data(r, c) = rng.next_gaussian();
        }
        labels[static_cast<std::size_t>(r)] = rng.next_below(2) ? 1 : 0;
    }
    m.feature_names = {"a", "b", "c", "d", "e", "f"};
    const GiniTree t1 = fit_gini_tree(m, labels, 5);
    const GiniTree t2 = fit_gini_tree(m, labels, 5);
    REQUIRE(t1.nodes.size() == t2.nodes.size());
    for (std::size_t i = 0; i < t1.nodes.size(); ++i) {
        CHECK(t1.nodes[i].feature == t2.nodes[i].feature);
        CHECK(t1.nodes[i].threshold == t2.nodes[i].threshold);
        CHECK(t1.nodes[i].decrease == t2.nodes[i].decrease);
        CHECK(t1.nodes[i].left == t2.nodes[i].left);
        CHECK(t1.nodes[i].right == t2.nodes[i].right);
    }
}

TEST_CASE("rank_features importance always sums to one") {
    Rng rng(5);
    FeatureMatrix m;
    m.data.resize(50, 8);
    std::vector<int> labels(50);
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            m.data(r, c) = rng.next_gaussian();
        }
        labels[static_cast<std::size_t>(r)] =
            m.data(r, 3) > 0.2 ? 1 : (rng.next_below(4) == 0 ? 1 : 0);
    }
    for (int i = 0; i < 8; ++i) m.feature_names.push_back("f");
    const FeatureRanking r = rank_features(fit_gini_tree(m, labels));
    double sum = 0.0;
    for (double v : r.importance) {
        CHECK(v >= 0.0);
        sum += v;
    }
    CHECK(sum == Approx(1.0).epsilon(1e-9));
    // The informative feature should rank first.
    CHECK(r.order[0] == 3);
}

TEST_CASE("select_features keeps the top-k columns in rank order") {
    const FeatureMatrix m =
        matrix_from({{1, 2}, {3, 4}, {5, 6}});
    FeatureRanking r;
    r.order = {2, 0, 1};
    r.importance = {0.3, 0.1, 0.6};

    const FeatureMatrix one = select_features(m, r, 1);
    CHECK(one.cols() == 1);
    CHECK(one.feature_names == std::vector<std::string>{"f2"});
    CHECK(one.data(0, 0) == 5.0);

    const FeatureMatrix all = select_features(m, r, 3);
    CHECK(all.feature_names ==
          std::vector<std::string>{"f2", "f0", "f1"});
    CHECK(all.data(1, 2) == 4.0);  // column preserved through reorder

    CHECK_THROWS_AS(select_features(m, r, 0), std::invalid_argument);
    CHECK_THROWS_AS(select_features(m, r, 4), std::invalid_argument);
}
