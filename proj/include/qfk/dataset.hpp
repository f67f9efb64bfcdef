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
#include <optional>
#include <string>
#include <vector>

namespace qfk {

enum class ColumnKind { Numeric, Categorical };

/// One feature column. Numeric columns hold parsed doubles; categorical
/// columns keep the raw cell strings.
struct Column {
    std::string name;
    ColumnKind kind = ColumnKind::Numeric;
    std::vector<double> numeric;
    std::vector<std::string> categories;

    std::size_t size() const {
        return kind == ColumnKind::Numeric ? numeric.size()
                                           : categories.size();
    }
};

/// Timestamped feature table with optional binary anomaly labels
/// (1 = anomaly, 0 = normal). All columns, the timestamps and the label
/// vector have the same length.
struct RawDataset {
    std::vector<double> timestamps;
    std::vector<Column> columns;
    std::optional<std::vector<int>> labels;

    std::size_t n_rows() const { return timestamps.size(); }
    std::size_t n_columns() const { return columns.size(); }

    std::size_t count_label(int value) const;
};

/// Column-name configuration for CSV files. The timestamp column is
/// mandatory on load and never becomes a feature; the label column is
/// used when present and skipped when absent (an empty name disables
/// label extraction entirely).
struct CsvOptions {
    std::string time_column = "time";
    std::string label_column = "attack";
};

/// Loads a header-first, RFC-4180-quoted CSV. Timestamps may be plain
/// seconds or "YYYY-MM-DD hh:mm:ss" wall-clock stamps (converted to epoch
/// seconds). A column is numeric when every cell parses as a number,
/// otherwise categorical. Throws DataError on a missing file, ragged or
/// empty table, missing cells, a missing timestamp column, labels outside
/// {0,1}, or decreasing timestamps.
RawDataset load_csv(const std::filesystem::path& path,
                    const CsvOptions& options = {});

/// Inverse of load_csv up to float formatting (17 significant digits, so
/// values survive a round trip exactly).
void write_csv(const RawDataset& ds, const std::filesystem::path& path,
               const CsvOptions& options = {});

/// Desk-scale stand-in for plant telemetry: a handful of slow sinusoidal
/// set-points mixed through a fixed random matrix plus Gaussian sensor
/// noise, so features are cross-correlated. Anomalous rows get at least a
/// quarter of the features mean-shifted by `shift_sigmas` per-feature
/// standard deviations. Bit-identical for identical arguments.
RawDataset generate_synthetic(std::size_t n_normal, std::size_t n_anomaly,
                              int n_features, double shift_sigmas,
                              std::uint64_t seed);

/// Train/eval split policy. The evaluation set is a class-balanced
/// subsample laid out as a block of normals followed by a block of
/// anomalies; the training set is the leading `train_fraction` share of
/// the rows left over (restricted to normals when `train_normal_only`).
struct SplitSpec {
    double train_fraction = 0.7;
    bool train_normal_only = true;
    std::size_t eval_normal_count = 0;
    std::size_t eval_anomaly_count = 0;
    std::uint64_t seed = 0;
};

struct SplitResult {
    RawDataset train;
    RawDataset eval;
};

/// Row subset in the given order. Labels and timestamps follow;
/// out-of-range indices throw.
RawDataset select_rows(const RawDataset& ds,
                       const std::vector<std::size_t>& indices);

/// Samples the eval blocks without replacement (seeded, then time-ordered
/// within each block, and the eval timestamps are resequenced to
/// 0,1,2,... so the block layout stays a valid time series), then takes
/// the training share from the remaining rows in time order. Train and
/// eval are always disjoint. Throws DataError when a requested class has
/// too few rows or labels are required but absent.
SplitResult split(const RawDataset& ds, const SplitSpec& spec);

}  // namespace qfk
