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

#include "qfk/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <stdexcept>

#include "qfk/errors.hpp"
#include "textio.hpp"

namespace qfk {

std::vector<double> moving_average(const std::vector<double>& xs,
                                   std::size_t w) {
    if (w == 0) throw std::invalid_argument("window length must be >= 1");
    if (xs.empty()) throw std::invalid_argument("series must be nonempty");
    if (w == 1) return xs;

    std::vector<double> prefix(xs.size() + 1, 0.0);
    for (std::size_t i = 0; i < xs.size(); ++i) {
        prefix[i + 1] = prefix[i] + xs[i];
    }
    std::vector<double> out(xs.size());
    for (std::size_t t = 0; t < xs.size(); ++t) {
        const std::size_t lo = t + 1 >= w ? t + 1 - w : 0;
        out[t] = (prefix[t + 1] - prefix[lo]) /
                 static_cast<double>(t + 1 - lo);
    }
    return out;
}

RawDataset smooth_numeric_columns(const RawDataset& ds, std::size_t w) {
    RawDataset out = ds;
    if (out.n_rows() == 0) return out;
    for (Column& col : out.columns) {
        if (col.kind == ColumnKind::Numeric) {
            col.numeric = moving_average(col.numeric, w);
        }
    }
    return out;
}

EncoderSet fit_encoders(const RawDataset& ds) {
    EncoderSet encoders;
    for (const Column& col : ds.columns) {
        if (col.kind != ColumnKind::Categorical) continue;
        std::map<std::string, double> freq;
        for (const std::string& cell : col.categories) freq[cell] += 1.0;
        const auto n = static_cast<double>(col.categories.size());
        for (auto& [category, count] : freq) count /= n;
        encoders.by_column[col.name] = std::move(freq);
    }
    return encoders;
}

RawDataset apply_encoders(const RawDataset& ds, const EncoderSet& encoders) {
    RawDataset out = ds;
    for (Column& col : out.columns) {
        if (col.kind != ColumnKind::Categorical) continue;
        const auto table = encoders.by_column.find(col.name);
        if (table == encoders.by_column.end()) {
            throw DataError("no encoder fitted for categorical column '" +
                            col.name + "'");
        }
        std::vector<double> numeric;
        numeric.reserve(col.categories.size());
        for (const std::string& cell : col.categories) {
            const auto hit = table->second.find(cell);
            numeric.push_back(hit == table->second.end() ? 0.0 : hit->second);
        }
        col.kind = ColumnKind::Numeric;
        col.numeric = std::move(numeric);
        col.categories.clear();
    }
    return out;
}

RawDataset encode_categoricals(const RawDataset& ds) {
    return apply_encoders(ds, fit_encoders(ds));
}

FeatureMatrix to_matrix(const RawDataset& ds) {
    FeatureMatrix m;
    m.data.resize(static_cast<Eigen::Index>(ds.n_rows()),
                  static_cast<Eigen::Index>(ds.n_columns()));
    m.feature_names.reserve(ds.n_columns());
    for (std::size_t c = 0; c < ds.n_columns(); ++c) {
        const Column& col = ds.columns[c];
        if (col.kind != ColumnKind::Numeric) {
            throw DataError("categorical column '" + col.name +
                            "' must be encoded before matrix conversion");
        }
        for (std::size_t r = 0; r < col.numeric.size(); ++r) {
            m.data(static_cast<Eigen::Index>(r),
                   static_cast<Eigen::Index>(c)) = col.numeric[r];
        }
        m.feature_names.push_back(col.name);
    }
    return m;
}

ScalerParams fit_scaler(const FeatureMatrix& m) {
    if (m.rows() < 1) throw std::invalid_argument("need at least one row");
    ScalerParams p;
    p.mu.resize(m.cols());
    p.sigma.resize(m.cols());
    const double n = static_cast<double>(m.rows());
    // Sequential left-to-right sums keep results independent of any
    // column-level parallelism.
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
        double sum = 0.0;
        for (Eigen::Index r = 0; r < m.rows(); ++r) sum += m.data(r, c);
        const double mu = sum / n;
        double sq = 0.0;
        for (Eigen::Index r = 0; r < m.rows(); ++r) {
            const double d = m.data(r, c) - mu;
            sq += d * d;
        }
        p.mu(c) = mu;
        p.sigma(c) = std::sqrt(sq / n);
    }
    return p;
}

FeatureMatrix apply_scaler(const FeatureMatrix& m, const ScalerParams& p) {
    if (p.mu.size() != m.cols() || p.sigma.size() != m.cols()) {
        throw std::invalid_argument("scaler/matrix column count mismatch");
    }
    FeatureMatrix out = m;
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
        const double divisor = p.sigma(c) > 0.0 ? p.sigma(c) : 1.0;
        for (Eigen::Index r = 0; r < m.rows(); ++r) {
            out.data(r, c) = (m.data(r, c) - p.mu(c)) / divisor;
        }
    }
    return out;
}

AngleBounds fit_angle_bounds(const FeatureMatrix& m) {
    if (m.rows() < 1) throw std::invalid_argument("need at least one row");
    AngleBounds b;
    b.min = m.data.colwise().minCoeff();
    b.max = m.data.colwise().maxCoeff();
    return b;
}

FeatureMatrix scale_to_angles(const FeatureMatrix& m,
                              const AngleBounds& bounds) {
    if (bounds.min.size() != m.cols() || bounds.max.size() != m.cols()) {
        throw std::invalid_argument("bounds/matrix column count mismatch");
    }
    constexpr double kPi = std::numbers::pi;
    FeatureMatrix out = m;
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
        const double lo = bounds.min(c);
        const double hi = bounds.max(c);
        if (!(lo <= hi)) {
            throw std::invalid_argument("angle bounds must satisfy min <= max");
        }
        for (Eigen::Index r = 0; r < m.rows(); ++r) {
            double v;
            if (lo == hi) {
                v = 0.0;
            } else {
                const double x = std::clamp(m.data(r, c), lo, hi);
                v = -kPi + 2.0 * kPi * (x - lo) / (hi - lo);
                v = std::clamp(v, -kPi, kPi);
            }
            out.data(r, c) = v;
        }
    }
    return out;
}

void save_matrix_csv(const FeatureMatrix& m,
                     const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write file: " + path.string());
    for (std::size_t c = 0; c < m.feature_names.size(); ++c) {
        if (c > 0) out << ',';
        out << detail::csv_escape(m.feature_names[c]);
    }
    out << '\n';
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            if (c > 0) out << ',';
            out << detail::format_double(m.data(r, c));
        }
        out << '\n';
    }
    if (!out) throw DataError("write failed: " + path.string());
}

FeatureMatrix load_matrix_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open file: " + path.string());
    detail::CsvReader reader(in);
    std::vector<std::string> header;
    if (!reader.next_record(header) || header.empty()) {
        throw DataError("empty file: " + path.string());
    }

    std::vector<double> cells;
    std::vector<std::string> record;
    std::size_t n_rows = 0;
    while (reader.next_record(record)) {
        if (record.size() == 1 && record[0].empty()) continue;
        if (record.size() != header.size()) {
            throw DataError("row " + std::to_string(n_rows + 1) + ": expected " +
                            std::to_string(header.size()) + " cells, got " +
                            std::to_string(record.size()));
        }
        for (const std::string& cell : record) {
            double v = 0.0;
            if (!detail::parse_double(cell, v)) {
                throw DataError("row " + std::to_string(n_rows + 1) +
                                ": unparseable value '" + cell + "'");
            }
            cells.push_back(v);
        }
        ++n_rows;
    }

    FeatureMatrix m;
    m.feature_names = std::move(header);
    m.data.resize(static_cast<Eigen::Index>(n_rows),
                  static_cast<Eigen::Index>(m.feature_names.size()));
    for (std::size_t r = 0; r < n_rows; ++r) {
        for (std::size_t c = 0; c < m.feature_names.size(); ++c) {
            m.data(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                cells[r * m.feature_names.size() + c];
        }
    }
    return m;
}

}  // namespace qfk
