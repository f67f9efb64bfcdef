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

// Independent reference implementations used by the tests. Everything here
// recomputes results along a different route than the library (dense
// matrix-chain products, projected-gradient QP), so the two sides can
// cross-check each other.

#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "qfk/rng.hpp"
#include "qfk/statevector.hpp"

namespace qfk::testutil {

/// Full 2^n x 2^n unitary of one gate, built basis-state by basis-state.
inline Eigen::MatrixXcd dense_gate_matrix(const Gate& g, int n_qubits) {
    const Eigen::Index dim = Eigen::Index{1} << n_qubits;
    Eigen::MatrixXcd full = Eigen::MatrixXcd::Zero(dim, dim);
    const std::size_t t_mask = std::size_t{1} << g.target;

    if (g.kind == GateKind::Cnot) {
        const std::size_t c_mask = std::size_t{1} << g.control;
        for (Eigen::Index j = 0; j < dim; ++j) {
            const std::size_t in = static_cast<std::size_t>(j);
            const std::size_t out = (in & c_mask) ? (in ^ t_mask) : in;
            full(static_cast<Eigen::Index>(out), j) = 1.0;
        }
        return full;
    }

    Eigen::Matrix2cd m;
    const double half = 0.5 * g.angle;
    if (g.kind == GateKind::Ry) {
        m << std::cos(half), -std::sin(half), std::sin(half), std::cos(half);
    } else {
        m << std::complex<double>(std::cos(half), -std::sin(half)), 0.0, 0.0,
            std::complex<double>(std::cos(half), std::sin(half));
    }
    for (Eigen::Index j = 0; j < dim; ++j) {
        const std::size_t in = static_cast<std::size_t>(j);
        const int b_in = (in & t_mask) ? 1 : 0;
        for (int b_out = 0; b_out < 2; ++b_out) {
            const std::size_t out =
                b_out ? (in | t_mask) : (in & ~t_mask);
            full(static_cast<Eigen::Index>(out), j) += m(b_out, b_in);
        }
    }
    return full;
}

/// Applies a circuit to |0...0> as an explicit matrix-chain product.
inline Eigen::VectorXcd dense_run(const Circuit& c) {
    const Eigen::Index dim = Eigen::Index{1} << c.n_qubits();
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(dim);
    v(0) = 1.0;
    for (const Gate& g : c.gates()) {
        v = dense_gate_matrix(g, c.n_qubits()) * v;
    }
    return v;
}

inline double max_amp_diff(const StateVector& sv, const Eigen::VectorXcd& v) {
    double worst = 0.0;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        worst = std::max(
            worst, std::abs(sv.amplitudes()[static_cast<std::size_t>(i)] -
                            v(i)));
    }
    return worst;
}

/// Random RY/RZ/CNOT circuit; CNOTs only appear on registers with >= 2
/// qubits.
inline Circuit random_circuit(int n_qubits, int n_gates, Rng& rng) {
    Circuit c(n_qubits);
    for (int g = 0; g < n_gates; ++g) {
        const std::uint64_t kinds = n_qubits >= 2 ? 3 : 2;
        const std::uint64_t kind = rng.next_below(kinds);
        const int target = static_cast<int>(
            rng.next_below(static_cast<std::uint64_t>(n_qubits)));
        const double angle =
            (2.0 * rng.next_double() - 1.0) * 3.141592653589793;
        if (kind == 0) {
            c.ry(target, angle);
        } else if (kind == 1) {
            c.rz(target, angle);
        } else {
            int control = static_cast<int>(
                rng.next_below(static_cast<std::uint64_t>(n_qubits)));
            if (control == target) {
                control = (control + 1) % n_qubits;
            }
            c.cnot(control, target);
        }
    }
    return c;
}

/// Uniform angles in [-pi, pi], the domain of the encoding circuit.
inline Eigen::MatrixXd random_angle_matrix(Eigen::Index rows,
                                           Eigen::Index cols, Rng& rng) {
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        for (Eigen::Index j = 0; j < cols; ++j) {
            m(i, j) = (2.0 * rng.next_double() - 1.0) * 3.141592653589793;
        }
    }
    return m;
}

/// Projection of v onto {0 <= a_i <= cap, sum a_i = 1} by bisection on the
/// shift multiplier.
inline Eigen::VectorXd project_capped_simplex(const Eigen::VectorXd& v,
                                              double cap) {
    const Eigen::Index n = v.size();
    if (cap * static_cast<double>(n) < 1.0 - 1e-12) {
        throw std::invalid_argument("capped simplex is empty");
    }
    auto mass = [&](double lambda) {
        double total = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            total += std::clamp(v(i) - lambda, 0.0, cap);
        }
        return total;
    };
    double lo = v.minCoeff() - cap - 1.0;
    double hi = v.maxCoeff() + 1.0;
    for (int iter = 0; iter < 200; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (mass(mid) > 1.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    const double lambda = 0.5 * (lo + hi);
    Eigen::VectorXd out(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        out(i) = std::clamp(v(i) - lambda, 0.0, cap);
    }
    return out;
}

/// Reference solver for min 0.5 a'Ka s.t. 0 <= a_i <= 1/(nu n), sum a = 1,
/// by projected gradient descent with a fixed 1/L step. Slow but simple;
/// shares no code with the production solver.
inline Eigen::VectorXd reference_ocsvm_alpha(const Eigen::MatrixXd& K,
                                             double nu, int iters = 200000) {
    const Eigen::Index n = K.rows();
    const double cap = 1.0 / (nu * static_cast<double>(n));
    Eigen::VectorXd alpha =
        project_capped_simplex(Eigen::VectorXd::Zero(n), cap);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(K);
    const double lipschitz = std::max(es.eigenvalues().maxCoeff(), 1e-12);
    const double step = 1.0 / lipschitz;
    for (int it = 0; it < iters; ++it) {
        const Eigen::VectorXd grad = K * alpha;
        const Eigen::VectorXd next =
            project_capped_simplex(alpha - step * grad, cap);
        if ((next - alpha).lpNorm<Eigen::Infinity>() < 1e-14) {
            alpha = next;
            break;
        }
        alpha = next;
    }
    return alpha;
}

inline double qp_objective(const Eigen::MatrixXd& K,
                           const Eigen::VectorXd& alpha) {
    return 0.5 * alpha.dot(K * alpha);
}

}  // namespace qfk::testutil
