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

#include <cstddef>
#include <string>
#include <vector>

namespace qfk {

/// A ratio that may be undefined when its denominator class is empty
/// (e.g. precision with no positive predictions).
struct Rate {
    double value = 0.0;
    bool defined = false;
};

struct ClassMetrics {
    Rate precision;
    Rate recall;
    Rate f1;
};

/// Confusion counts and derived rates with anomaly (label 1) as the
/// positive class. Macro averages run over the classes where the rate is
/// defined; every undefined cell adds a human-readable warning.
struct MetricsReport {
    std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
    double accuracy = 0.0;
    ClassMetrics anomaly;
    ClassMetrics normal;
    Rate macro_precision;
    Rate macro_recall;
    Rate macro_f1;
    std::vector<std::string> warnings;

    std::size_t total() const { return tp + fp + tn + fn; }
};

/// labels and predictions are 0 (normal) / 1 (anomaly), equal length >= 1.
MetricsReport compute_metrics(const std::vector<int>& labels,
                              const std::vector<int>& predictions);

/// Multi-line human-readable rendering of a report.
std::string format_metrics(const MetricsReport& report);

}  // namespace qfk
