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

#include "qfk/kernel.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <thread>
#include <vector>

#include "qfk/errors.hpp"
#include "qfk/rng.hpp"
#include "textio.hpp"

namespace qfk {

namespace {

int resolve_threads(int n_threads) {
    if (n_threads > 0) {
        return n_threads;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

/// Work item: fill one kernel entry.
struct PairJob {
    Eigen::Index i;
    Eigen::Index j;
};

/// Evaluates jobs [begin, end) with one reusable register. Entries are
/// independent, so any partition across threads produces the same bits.
void eval_jobs(const std::vector<PairJob>& jobs, std::size_t begin,
               std::size_t end, const std::vector<Circuit>& forward_a,
               const std::vector<Circuit>& inverse_b,
               const FeatureMapSpec& spec, const KernelMode& mode,
               Eigen::MatrixXd& out, EvalCounter& counter) {
    StateVector sv = StateVector::zero_state(spec.n_qubits);
    for (std::size_t k = begin; k < end; ++k) {
        const auto [i, j] = jobs[k];
        sv.reset_zero();
        sv.run(forward_a[static_cast<std::size_t>(i)]);
        sv.run(inverse_b[static_cast<std::size_t>(j)]);
        ++counter.circuits;
        if (mode.is_exact()) {
            out(i, j) = sv.prob_zero();
        } else {
            const std::uint64_t pair_seed = derive_pair_seed(
                mode.seed, static_cast<std::uint64_t>(i),
                static_cast<std::uint64_t>(j));
            out(i, j) = sv.sample_zero_frequency(mode.shots, pair_seed);
            counter.shots += mode.shots;
        }
    }
}

void run_parallel(const std::vector<PairJob>& jobs,
                  const std::vector<Circuit>& forward_a,
                  const std::vector<Circuit>& inverse_b,
                  const FeatureMapSpec& spec, const KernelMode& mode,
                  Eigen::MatrixXd& out, EvalCounter* counter,
                  int n_threads) {
    n_threads = resolve_threads(n_threads);
    EvalCounter total;
    if (n_threads == 1 || jobs.size() < 2) {
        eval_jobs(jobs, 0, jobs.size(), forward_a, inverse_b, spec, mode,
                  out, total);
    } else {
        const std::size_t n = jobs.size();
        const std::size_t workers =
            std::min<std::size_t>(static_cast<std::size_t>(n_threads), n);
        std::vector<EvalCounter> counters(workers);
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) {
            const std::size_t begin = n * w / workers;
            const std::size_t end = n * (w + 1) / workers;
            pool.emplace_back([&, w, begin, end] {
                eval_jobs(jobs, begin, end, forward_a, inverse_b, spec, mode,
                          out, counters[w]);
            });
        }
        for (auto& t : pool) {
            t.join();
        }
        for (const auto& c : counters) {
            total.circuits += c.circuits;
            total.shots += c.shots;
        }
    }
    if (counter != nullptr) {
        counter->circuits += total.circuits;
        counter->shots += total.shots;
    }
}

std::vector<Circuit> build_row_circuits(const FeatureMatrix& X,
                                        const FeatureMapSpec& spec,
                                        bool inverted) {
    std::vector<Circuit> circuits;
    circuits.reserve(static_cast<std::size_t>(X.rows()));
    for (Eigen::Index r = 0; r < X.rows(); ++r) {
        const Circuit c = build_feature_map(X.data.row(r).transpose(), spec);
        circuits.push_back(inverted ? inverse(c) : c);
    }
    return circuits;
}

void check_feature_count(const FeatureMatrix& X, const FeatureMapSpec& spec,
                         const char* which) {
    if (X.cols() != spec.feature_count()) {
        std::ostringstream msg;
        msg << which << " has " << X.cols() << " features but the "
            << spec.n_qubits << "-qubit map encodes " << spec.feature_count();
        throw DataError(msg.str());
    }
}

}  // namespace

double fidelity(const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                const FeatureMapSpec& spec, const KernelMode& mode,
                EvalCounter* counter) {
    if (x.size() != y.size()) {
        throw std::invalid_argument("fidelity inputs differ in length");
    }
    StateVector sv = StateVector::zero_state(spec.n_qubits);
    sv.run(build_feature_map(x, spec));
    sv.run(inverse(build_feature_map(y, spec)));
    if (counter != nullptr) {
        ++counter->circuits;
        if (!mode.is_exact()) {
            counter->shots += mode.shots;
        }
    }
    return mode.is_exact() ? sv.prob_zero()
                           : sv.sample_zero_frequency(mode.shots, mode.seed);
}

KernelMatrix train_kernel(const FeatureMatrix& X, const FeatureMapSpec& spec,
                          const KernelMode& mode, EvalCounter* counter,
                          int n_threads) {
    check_feature_count(X, spec, "training matrix");
    const Eigen::Index m = X.rows();

    KernelMatrix k;
    k.values = Eigen::MatrixXd::Zero(m, m);
    k.stage = KernelStage::Raw;
    k.mode = mode;
    k.spec_hash = spec.hash();

    const auto forward = build_row_circuits(X, spec, false);
    const auto inverted = build_row_circuits(X, spec, true);

    std::vector<PairJob> jobs;
    jobs.reserve(static_cast<std::size_t>(m) *
                 static_cast<std::size_t>(m + 1) / 2);
    for (Eigen::Index i = 0; i < m; ++i) {
        for (Eigen::Index j = i + 1; j < m; ++j) {
            jobs.push_back({i, j});
        }
    }
    if (!mode.is_exact()) {
        for (Eigen::Index i = 0; i < m; ++i) {
            jobs.push_back({i, i});
        }
    }
    run_parallel(jobs, forward, inverted, spec, mode, k.values, counter,
                 n_threads);

    // Mirror the evaluated triangle; in exact mode the diagonal is the
    // identity overlap.
    for (Eigen::Index i = 0; i < m; ++i) {
        if (mode.is_exact()) {
            k.values(i, i) = 1.0;
        }
        for (Eigen::Index j = i + 1; j < m; ++j) {
            k.values(j, i) = k.values(i, j);
        }
    }
    return k;
}

KernelMatrix cross_kernel(const FeatureMatrix& X_test,
                          const FeatureMatrix& X_train,
                          const FeatureMapSpec& spec, const KernelMode& mode,
                          EvalCounter* counter, int n_threads) {
    check_feature_count(X_test, spec, "test matrix");
    check_feature_count(X_train, spec, "training matrix");

    KernelMatrix k;
    k.values = Eigen::MatrixXd::Zero(X_test.rows(), X_train.rows());
    k.stage = KernelStage::Raw;
    k.mode = mode;
    k.spec_hash = spec.hash();

    const auto forward = build_row_circuits(X_test, spec, false);
    const auto inverted = build_row_circuits(X_train, spec, true);

    std::vector<PairJob> jobs;
    jobs.reserve(static_cast<std::size_t>(X_test.rows()) *
                 static_cast<std::size_t>(X_train.rows()));
    for (Eigen::Index i = 0; i < X_test.rows(); ++i) {
        for (Eigen::Index j = 0; j < X_train.rows(); ++j) {
            jobs.push_back({i, j});
        }
    }
    run_parallel(jobs, forward, inverted, spec, mode, k.values, counter,
                 n_threads);
    return k;
}

KernelMatrix exponentiate(const KernelMatrix& k) {
    if (k.stage != KernelStage::Raw) {
        throw DataError("kernel is already exponentiated");
    }
    KernelMatrix out = k;
    out.values = k.values.array().exp();
    out.stage = KernelStage::Exponentiated;
    return out;
}

void save_kernel(const KernelMatrix& k, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) {
        throw DataError("cannot open kernel file for writing: " +
                        path.string());
    }
    out << "qfk-kernel v1 rows=" << k.rows() << " cols=" << k.cols()
        << " stage=" << (k.stage == KernelStage::Raw ? "raw" : "exp")
        << " mode=";
    if (k.mode.is_exact()) {
        out << "exact";
    } else {
        out << "shots:" << k.mode.shots << ':' << k.mode.seed;
    }
    char hash_buf[17];
    std::snprintf(hash_buf, sizeof(hash_buf), "%016llx",
                  static_cast<unsigned long long>(k.spec_hash));
    out << " spec=" << hash_buf << '\n';

    for (Eigen::Index i = 0; i < k.rows(); ++i) {
        for (Eigen::Index j = 0; j < k.cols(); ++j) {
            if (j > 0) {
                out << ',';
            }
            out << detail::format_double(k.values(i, j));
        }
        out << '\n';
    }
    if (!out) {
        throw DataError("failed writing kernel file: " + path.string());
    }
}

namespace {

std::uint64_t parse_u64(std::string_view s, const char* what) {
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
        throw DataError(std::string("corrupt kernel header: bad ") + what);
    }
    return v;
}

std::string_view expect_key(std::string_view token, std::string_view key) {
    if (!token.starts_with(key)) {
        throw DataError("corrupt kernel header: expected " +
                        std::string(key));
    }
    token.remove_prefix(key.size());
    return token;
}

}  // namespace

KernelMatrix load_kernel(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw DataError("cannot open kernel file: " + path.string());
    }
    std::string header;
    if (!std::getline(in, header)) {
        throw DataError("corrupt kernel header: empty file");
    }
    std::istringstream hs(header);
    std::vector<std::string> tokens;
    for (std::string t; hs >> t;) {
        tokens.push_back(t);
    }
    if (tokens.size() != 7 || tokens[0] != "qfk-kernel" || tokens[1] != "v1") {
        throw DataError("corrupt kernel header: " + header);
    }

    KernelMatrix k;
    const auto rows = parse_u64(expect_key(tokens[2], "rows="), "rows");
    const auto cols = parse_u64(expect_key(tokens[3], "cols="), "cols");
    const auto stage = expect_key(tokens[4], "stage=");
    if (stage == "raw") {
        k.stage = KernelStage::Raw;
    } else if (stage == "exp") {
        k.stage = KernelStage::Exponentiated;
    } else {
        throw DataError("corrupt kernel header: unknown stage");
    }
    const auto mode = expect_key(tokens[5], "mode=");
    if (mode == "exact") {
        k.mode = KernelMode::exact();
    } else if (mode.starts_with("shots:")) {
        const auto rest = mode.substr(6);
        const auto colon = rest.find(':');
        if (colon == std::string_view::npos) {
            throw DataError("corrupt kernel header: bad shots mode");
        }
        k.mode = KernelMode::with_shots(
            parse_u64(rest.substr(0, colon), "shot count"),
            parse_u64(rest.substr(colon + 1), "shot seed"));
    } else {
        throw DataError("corrupt kernel header: unknown mode");
    }
    const auto spec_hex = expect_key(tokens[6], "spec=");
    std::uint64_t hash = 0;
    auto [hp, hec] = std::from_chars(spec_hex.data(),
                                     spec_hex.data() + spec_hex.size(), hash,
                                     16);
    if (hec != std::errc() || hp != spec_hex.data() + spec_hex.size()) {
        throw DataError("corrupt kernel header: bad spec hash");
    }
    k.spec_hash = hash;

    k.values.resize(static_cast<Eigen::Index>(rows),
                    static_cast<Eigen::Index>(cols));
    std::string line;
    std::vector<std::string_view> fields;
    for (std::uint64_t i = 0; i < rows; ++i) {
        if (!std::getline(in, line)) {
            throw DataError("kernel file ends before the declared row count");
        }
        fields.clear();
        std::size_t start = 0;
        while (true) {
            const std::size_t comma = line.find(',', start);
            fields.push_back(std::string_view(line).substr(
                start, comma == std::string::npos ? std::string::npos
                                                  : comma - start));
            if (comma == std::string::npos) {
                break;
            }
            start = comma + 1;
        }
        if (fields.size() != cols) {
            throw DataError("kernel row width contradicts header");
        }
        for (std::uint64_t j = 0; j < cols; ++j) {
            double v = 0.0;
            if (!detail::parse_double(fields[j], v)) {
                throw DataError("unparseable kernel value");
            }
            k.values(static_cast<Eigen::Index>(i),
                     static_cast<Eigen::Index>(j)) = v;
        }
    }
    while (std::getline(in, line)) {
        if (!line.empty() && line != "\r") {
            throw DataError("kernel file has more rows than the header");
        }
    }
    return k;
}

}  // namespace qfk
