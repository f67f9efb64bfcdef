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

#include "qfk/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "qfk/errors.hpp"
#include "qfk/rng.hpp"
#include "textio.hpp"

namespace qfk {

using detail::CsvReader;
using detail::csv_escape;
using detail::format_double;
using detail::parse_double;

namespace {

bool all_digits(std::string_view s) {
    return !s.empty() &&
           std::all_of(s.begin(), s.end(), [](unsigned char c) {
               return std::isdigit(c) != 0;
           });
}

// Days since 1970-01-01 for a proleptic Gregorian date (Hinnant's
// days-from-civil; exact over the whole int range).
long days_from_civil(int y, int m, int d) {
    y -= m <= 2;
    const long era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy =
        (153u * static_cast<unsigned>(m + (m > 2 ? -3 : 9)) + 2u) / 5u +
        static_cast<unsigned>(d) - 1u;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<long>(doe) - 719468;
}

unsigned days_in_month(int y, int m) {
    static constexpr unsigned kDays[] = {31, 28, 31, 30, 31, 30,
                                         31, 31, 30, 31, 30, 31};
    const bool leap = (y % 4 == 0 && y % 100 != 0) || y % 400 == 0;
    return (m == 2 && leap) ? 29 : kDays[m - 1];
}

// "YYYY-MM-DD hh:mm:ss" -> epoch seconds. Returns false when the cell
// does not have that shape or encodes an impossible date/time.
bool parse_datetime(const std::string& cell, double* out) {
    if (cell.size() != 19 || cell[4] != '-' || cell[7] != '-' ||
        cell[10] != ' ' || cell[13] != ':' || cell[16] != ':') {
        return false;
    }
    const std::string_view v(cell);
    const std::string_view parts[6] = {v.substr(0, 4),  v.substr(5, 2),
                                       v.substr(8, 2),  v.substr(11, 2),
                                       v.substr(14, 2), v.substr(17, 2)};
    for (const auto& p : parts) {
        if (!all_digits(p)) return false;
    }
    auto num = [](std::string_view s) {
        int value = 0;
        for (char c : s) value = value * 10 + (c - '0');
        return value;
    };
    const int year = num(parts[0]), month = num(parts[1]), day = num(parts[2]);
    const int hour = num(parts[3]), minute = num(parts[4]), sec = num(parts[5]);
    if (month < 1 || month > 12 || day < 1 ||
        day > static_cast<int>(days_in_month(year, month)) || hour > 23 ||
        minute > 59 || sec > 59) {
        return false;
    }
    *out = static_cast<double>(days_from_civil(year, month, day)) * 86400.0 +
           hour * 3600.0 + minute * 60.0 + sec;
    return true;
}

[[noreturn]] void bad_row(std::size_t row, const std::string& what) {
    throw DataError("row " + std::to_string(row + 1) + ": " + what);
}

}  // namespace

std::size_t RawDataset::count_label(int value) const {
    if (!labels) return 0;
    return static_cast<std::size_t>(
        std::count(labels->begin(), labels->end(), value));
}

RawDataset load_csv(const std::filesystem::path& path,
                    const CsvOptions& options) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open file: " + path.string());
    CsvReader reader(in);

    std::vector<std::string> header;
    if (!reader.next_record(header) || header.empty()) {
        throw DataError("empty file: " + path.string());
    }
    std::size_t time_col = header.size();
    std::size_t label_col = header.size();
    for (std::size_t c = 0; c < header.size(); ++c) {
        if (header[c] == options.time_column) time_col = c;
        if (!options.label_column.empty() && header[c] == options.label_column)
            label_col = c;
    }
    if (time_col == header.size()) {
        throw DataError("missing timestamp column '" + options.time_column +
                        "' in " + path.string());
    }

    std::vector<std::vector<std::string>> cells(header.size());
    std::vector<std::string> record;
    std::size_t n_rows = 0;
    while (reader.next_record(record)) {
        if (record.size() == 1 && record[0].empty()) continue;  // blank line
        if (record.size() != header.size()) {
            bad_row(n_rows, "expected " + std::to_string(header.size()) +
                                " cells, got " + std::to_string(record.size()));
        }
        for (std::size_t c = 0; c < record.size(); ++c) {
            if (record[c].empty()) bad_row(n_rows, "missing cell in column '" +
                                                       header[c] + "'");
            cells[c].push_back(std::move(record[c]));
        }
        ++n_rows;
    }
    if (n_rows == 0) throw DataError("no data rows in " + path.string());

    RawDataset ds;
    ds.timestamps.reserve(n_rows);
    for (std::size_t r = 0; r < n_rows; ++r) {
        const std::string& cell = cells[time_col][r];
        double t = 0.0;
        if (!parse_double(cell, t) && !parse_datetime(cell, &t)) {
            bad_row(r, "unparseable timestamp '" + cell + "'");
        }
        if (r > 0 && t < ds.timestamps.back()) {
            bad_row(r, "timestamps must be nondecreasing");
        }
        ds.timestamps.push_back(t);
    }

    if (label_col != header.size()) {
        std::vector<int> labels;
        labels.reserve(n_rows);
        for (std::size_t r = 0; r < n_rows; ++r) {
            const std::string& cell = cells[label_col][r];
            double v = 0.0;
            if (!parse_double(cell, v) || (v != 0.0 && v != 1.0)) {
                bad_row(r, "label column '" + header[label_col] +
                               "' must contain 0 or 1, got '" + cell + "'");
            }
            labels.push_back(v == 1.0 ? 1 : 0);
        }
        ds.labels = std::move(labels);
    }

    for (std::size_t c = 0; c < header.size(); ++c) {
        if (c == time_col || c == label_col) continue;
        Column col;
        col.name = header[c];
        std::vector<double> numeric;
        numeric.reserve(n_rows);
        bool all_numeric = true;
        for (const std::string& cell : cells[c]) {
            double v = 0.0;
            if (!parse_double(cell, v)) {
                all_numeric = false;
                break;
            }
            numeric.push_back(v);
        }
        if (all_numeric) {
            col.kind = ColumnKind::Numeric;
            col.numeric = std::move(numeric);
        } else {
            col.kind = ColumnKind::Categorical;
            col.categories = std::move(cells[c]);
        }
        ds.columns.push_back(std::move(col));
    }
    return ds;
}

void write_csv(const RawDataset& ds, const std::filesystem::path& path,
               const CsvOptions& options) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write file: " + path.string());

    out << csv_escape(options.time_column);
    for (const Column& col : ds.columns) out << ',' << csv_escape(col.name);
    if (ds.labels) out << ',' << csv_escape(options.label_column);
    out << '\n';

    for (std::size_t r = 0; r < ds.n_rows(); ++r) {
        out << format_double(ds.timestamps[r]);
        for (const Column& col : ds.columns) {
            out << ',';
            if (col.kind == ColumnKind::Numeric) {
                out << format_double(col.numeric[r]);
            } else {
                out << csv_escape(col.categories[r]);
            }
        }
        if (ds.labels) out << ',' << (*ds.labels)[r];
        out << '\n';
    }
    if (!out) throw DataError("write failed: " + path.string());
}

RawDataset generate_synthetic(std::size_t n_normal, std::size_t n_anomaly,
                              int n_features, double shift_sigmas,
                              std::uint64_t seed) {
    const std::size_t total = n_normal + n_anomaly;
    if (total == 0) throw DataError("synthetic dataset needs at least one row");
    if (n_features < 1) {
        throw std::invalid_argument("n_features must be positive");
    }
    if (!(shift_sigmas >= 0.0)) {
        throw std::invalid_argument("shift_sigmas must be nonnegative");
    }

    Rng rng(seed);
    const int n_latent = std::max(2, n_features / 4);

    // Slow shared set-point waves; periods well above the sampling rate.
    std::vector<double> period(n_latent), phase(n_latent), amplitude(n_latent);
    for (int l = 0; l < n_latent; ++l) {
        period[l] = 120.0 + 480.0 * rng.next_double();
        phase[l] = 2.0 * std::numbers::pi * rng.next_double();
        amplitude[l] = 0.5 + rng.next_double();
    }
    std::vector<double> mixing(static_cast<std::size_t>(n_features) *
                               static_cast<std::size_t>(n_latent));
    for (double& w : mixing) {
        w = rng.next_gaussian() / std::sqrt(static_cast<double>(n_latent));
    }

    constexpr double kNoiseSigma = 0.25;
    std::vector<std::vector<double>> values(
        static_cast<std::size_t>(n_features));
    for (auto& v : values) v.resize(total);
    for (std::size_t t = 0; t < total; ++t) {
        for (int f = 0; f < n_features; ++f) {
            double x = 0.0;
            for (int l = 0; l < n_latent; ++l) {
                x += mixing[static_cast<std::size_t>(f) * n_latent + l] *
                     amplitude[l] *
                     std::sin(2.0 * std::numbers::pi *
                                  static_cast<double>(t) / period[l] +
                              phase[l]);
            }
            values[f][t] = x + kNoiseSigma * rng.next_gaussian();
        }
    }

    // The attacked-feature subset is drawn even when there are no anomalous
    // rows, so the generated stream depends only on (total, n_features, seed).
    std::vector<int> order(static_cast<std::size_t>(n_features));
    for (int f = 0; f < n_features; ++f) order[static_cast<std::size_t>(f)] = f;
    rng.shuffle(order);
    const std::size_t n_shift =
        std::max<std::size_t>(1, (static_cast<std::size_t>(n_features) + 3) / 4);

    if (n_anomaly > 0 && shift_sigmas > 0.0) {
        for (std::size_t s = 0; s < n_shift; ++s) {
            auto& col = values[static_cast<std::size_t>(order[s])];
            double mean = 0.0;
            for (double v : col) mean += v;
            mean /= static_cast<double>(total);
            double var = 0.0;
            for (double v : col) var += (v - mean) * (v - mean);
            const double sd = std::sqrt(var / static_cast<double>(total));
            for (std::size_t t = n_normal; t < total; ++t) {
                col[t] += shift_sigmas * sd;
            }
        }
    }

    RawDataset ds;
    ds.timestamps.resize(total);
    for (std::size_t t = 0; t < total; ++t) {
        ds.timestamps[t] = static_cast<double>(t);
    }
    for (int f = 0; f < n_features; ++f) {
        Column col;
        char name[16];
        std::snprintf(name, sizeof(name), "f%02d", f + 1);
        col.name = name;
        col.kind = ColumnKind::Numeric;
        col.numeric = std::move(values[static_cast<std::size_t>(f)]);
        ds.columns.push_back(std::move(col));
    }
    std::vector<int> labels(total, 0);
    std::fill(labels.begin() + static_cast<std::ptrdiff_t>(n_normal),
              labels.end(), 1);
    ds.labels = std::move(labels);
    return ds;
}

RawDataset select_rows(const RawDataset& ds,
                       const std::vector<std::size_t>& indices) {
    for (std::size_t i : indices) {
        if (i >= ds.n_rows()) {
            throw std::invalid_argument("row index out of range");
        }
    }
    RawDataset out;
    out.timestamps.reserve(indices.size());
    for (std::size_t i : indices) out.timestamps.push_back(ds.timestamps[i]);
    for (const Column& col : ds.columns) {
        Column sub;
        sub.name = col.name;
        sub.kind = col.kind;
        if (col.kind == ColumnKind::Numeric) {
            sub.numeric.reserve(indices.size());
            for (std::size_t i : indices) sub.numeric.push_back(col.numeric[i]);
        } else {
            sub.categories.reserve(indices.size());
            for (std::size_t i : indices) {
                sub.categories.push_back(col.categories[i]);
            }
        }
        out.columns.push_back(std::move(sub));
    }
    if (ds.labels) {
        std::vector<int> labels;
        labels.reserve(indices.size());
        for (std::size_t i : indices) labels.push_back((*ds.labels)[i]);
        out.labels = std::move(labels);
    }
    return out;
}

SplitResult split(const RawDataset& ds, const SplitSpec& spec) {
    if (!(spec.train_fraction > 0.0) || !(spec.train_fraction < 1.0)) {
        throw std::invalid_argument("train_fraction must be in (0,1)");
    }
    const bool needs_labels = spec.train_normal_only ||
                              spec.eval_normal_count > 0 ||
                              spec.eval_anomaly_count > 0;
    if (needs_labels && !ds.labels) {
        throw DataError("split policy needs labels but the dataset has none");
    }

    std::vector<std::size_t> normals, anomalies;
    for (std::size_t r = 0; r < ds.n_rows(); ++r) {
        if (ds.labels && (*ds.labels)[r] == 1) {
            anomalies.push_back(r);
        } else {
            normals.push_back(r);
        }
    }
    if (spec.eval_normal_count > normals.size()) {
        throw DataError("requested " + std::to_string(spec.eval_normal_count) +
                        " normal eval rows but only " +
                        std::to_string(normals.size()) + " available");
    }
    if (spec.eval_anomaly_count > anomalies.size()) {
        throw DataError("requested " + std::to_string(spec.eval_anomaly_count) +
                        " anomalous eval rows but only " +
                        std::to_string(anomalies.size()) + " available");
    }

    // Sample each eval block without replacement, then restore time order
    // inside the block.
    Rng rng(spec.seed);
    std::vector<std::size_t> pool = normals;
    rng.shuffle(pool);
    std::vector<std::size_t> eval_normal(
        pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(
                                         spec.eval_normal_count));
    std::sort(eval_normal.begin(), eval_normal.end());
    pool = anomalies;
    rng.shuffle(pool);
    std::vector<std::size_t> eval_anomaly(
        pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(
                                         spec.eval_anomaly_count));
    std::sort(eval_anomaly.begin(), eval_anomaly.end());

    std::vector<std::size_t> eval_indices = eval_normal;
    eval_indices.insert(eval_indices.end(), eval_anomaly.begin(),
                        eval_anomaly.end());

    std::vector<bool> in_eval(ds.n_rows(), false);
    for (std::size_t i : eval_indices) in_eval[i] = true;
    std::vector<std::size_t> eligible;
    for (std::size_t r = 0; r < ds.n_rows(); ++r) {
        if (in_eval[r]) continue;
        if (spec.train_normal_only && ds.labels && (*ds.labels)[r] == 1)
            continue;
        eligible.push_back(r);
    }
    const auto train_count = static_cast<std::size_t>(
        spec.train_fraction * static_cast<double>(eligible.size()));
    eligible.resize(train_count);

    SplitResult result;
    result.train = select_rows(ds, eligible);
    result.eval = select_rows(ds, eval_indices);
    // The eval blocks splice two time-ordered subsequences, so the raw
    // stamps may jump backwards at the block boundary; resequence them.
    for (std::size_t r = 0; r < result.eval.n_rows(); ++r) {
        result.eval.timestamps[r] = static_cast<double>(r);
    }
    return result;
}

}  // namespace qfk
