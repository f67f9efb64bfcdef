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
#include <map>
#include <string>
#include <vector>

#include "qfk/dataset.hpp"
#include "qfk/feature_matrix.hpp"

namespace qfk {

/// Trailing moving average with truncated warm-up: out[t] is the mean of
/// the last `w` samples, or of all samples seen so far while t < w-1, so
/// the output has the input's length. w = 1 returns the input unchanged.
std::vector<double> moving_average(const std::vector<double>& xs,
                                   std::size_t w);

/// Smooths every numeric column of a dataset with moving_average;
/// categorical columns, timestamps and labels pass through.
RawDataset smooth_numeric_columns(const RawDataset& ds, std::size_t w);

/// Category -> relative frequency tables, one per categorical column,
/// keyed by column name. Fitted on training data and reused at test time;
/// categories never seen during fitting encode to 0.
struct EncoderSet {
    std::map<std::string, std::map<std::string, double>> by_column;
};

EncoderSet fit_encoders(const RawDataset& ds);
RawDataset apply_encoders(const RawDataset& ds, const EncoderSet& encoders);

/// Fit-and-apply on the same data: each categorical cell becomes the
/// relative frequency of its category within its own column.
RawDataset encode_categoricals(const RawDataset& ds);

/// Converts an all-numeric dataset to a dense matrix (timestamps and
/// labels are dropped). Throws DataError when a categorical column is
/// still present.
FeatureMatrix to_matrix(const RawDataset& ds);

/// Per-feature standardization parameters: mean and population standard
/// deviation (divisor n).
struct ScalerParams {
    Eigen::VectorXd mu;
    Eigen::VectorXd sigma;
};

ScalerParams fit_scaler(const FeatureMatrix& m);

/// (x - mu) / sigma per column; constant columns (sigma = 0) divide by 1
/// so they center without blowing up.
FeatureMatrix apply_scaler(const FeatureMatrix& m, const ScalerParams& p);

/// Per-feature [min, max] interval used for the angle map.
struct AngleBounds {
    Eigen::VectorXd min;
    Eigen::VectorXd max;
};

AngleBounds fit_angle_bounds(const FeatureMatrix& m);

/// Affine map per feature sending min -> -pi and max -> +pi; values
/// beyond the bounds clip to the interval ends, and degenerate features
/// (min = max) map to 0. Output entries always lie in [-pi, pi].
FeatureMatrix scale_to_angles(const FeatureMatrix& m,
                              const AngleBounds& bounds);

}  // namespace qfk
