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

#include "qfk/metrics.hpp"

#include <cstdio>
#include <stdexcept>

namespace qfk {
namespace {

Rate ratio(std::size_t numerator, std::size_t denominator,
           const std::string& what, std::vector<std::string>* warnings) {
    if (denominator == 0) {
        warnings->push_back(what + " undefined (empty denominator class)");
        return {};
    }
    return {static_cast<double>(numerator) / static_cast<double>(denominator),
            true};
}

Rate harmonic(const Rate& p, const Rate& r, const std::string& what,
              std::vector<std::string>* warnings) {
    if (!p.defined || !r.defined) {
        warnings->push_back(what + " undefined (needs precision and recall)");
        return {};
    }
    if (p.value + r.value == 0.0) return {0.0, true};
    return {2.0 * p.value * r.value / (p.value + r.value), true};
}

Rate macro(const Rate& a, const Rate& b) {
    if (a.defined && b.defined) return {0.5 * (a.value + b.value), true};
    if (a.defined) return a;
    if (b.defined) return b;
    return {};
}

void append_rate(std::string* out, const char* name, const Rate& rate) {
    char buf[64];
    if (rate.defined) {
        std::snprintf(buf, sizeof(buf), "  %-18s %.4f\n", name, rate.value);
    } else {
        std::snprintf(buf, sizeof(buf), "  %-18s undefined\n", name);
    }
    *out += buf;
}

}  // namespace

MetricsReport compute_metrics(const std::vector<int>& labels,
                              const std::vector<int>& predictions) {
    if (labels.size() != predictions.size()) {
        throw std::invalid_argument("label/prediction length mismatch");
    }
    if (labels.empty()) throw std::invalid_argument("need at least one row");

    MetricsReport rep;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        const int label = labels[i];
        const int pred = predictions[i];
        if ((label != 0 && label != 1) || (pred != 0 && pred != 1)) {
            throw std::invalid_argument("labels and predictions must be 0/1");
        }
        if (label == 1) {
            ++(pred == 1 ? rep.tp : rep.fn);
        } else {
            ++(pred == 1 ? rep.fp : rep.tn);
        }
    }
    rep.accuracy = static_cast<double>(rep.tp + rep.tn) /
                   static_cast<double>(rep.total());

    rep.anomaly.precision =
        ratio(rep.tp, rep.tp + rep.fp, "anomaly precision", &rep.warnings);
    rep.anomaly.recall =
        ratio(rep.tp, rep.tp + rep.fn, "anomaly recall", &rep.warnings);
    rep.anomaly.f1 = harmonic(rep.anomaly.precision, rep.anomaly.recall,
                              "anomaly f1", &rep.warnings);
    rep.normal.precision =
        ratio(rep.tn, rep.tn + rep.fn, "normal precision", &rep.warnings);
    rep.normal.recall =
        ratio(rep.tn, rep.tn + rep.fp, "normal recall", &rep.warnings);
    rep.normal.f1 = harmonic(rep.normal.precision, rep.normal.recall,
                             "normal f1", &rep.warnings);

    rep.macro_precision = macro(rep.anomaly.precision, rep.normal.precision);
    rep.macro_recall = macro(rep.anomaly.recall, rep.normal.recall);
    rep.macro_f1 = macro(rep.anomaly.f1, rep.normal.f1);
    return rep;
}

std::string format_metrics(const MetricsReport& report) {
    std::string out;
    char buf[128];
    std::snprintf(buf, sizeof(buf),
                  "confusion (anomaly = positive): TP=%zu FP=%zu TN=%zu "
                  "FN=%zu\n",
                  report.tp, report.fp, report.tn, report.fn);
    out += buf;
    std::snprintf(buf, sizeof(buf), "  %-18s %.4f\n", "accuracy",
                  report.accuracy);
    out += buf;
    append_rate(&out, "anomaly precision", report.anomaly.precision);
    append_rate(&out, "anomaly recall", report.anomaly.recall);
    append_rate(&out, "anomaly f1", report.anomaly.f1);
    append_rate(&out, "normal precision", report.normal.precision);
    append_rate(&out, "normal recall", report.normal.recall);
    append_rate(&out, "normal f1", report.normal.f1);
    append_rate(&out, "macro precision", report.macro_precision);
    append_rate(&out, "macro recall", report.macro_recall);
    append_rate(&out, "macro f1", report.macro_f1);
    for (const std::string& warning : report.warnings) {
        out += "  warning: " + warning + "\n";
    }
    return out;
}

}  // namespace qfk
