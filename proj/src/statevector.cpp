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

#include "qfk/statevector.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qfk/rng.hpp"

namespace qfk {

namespace {

constexpr int kMaxQubits = 20;

void check_qubit(int q, int n_qubits, const char* what) {
    if (q < 0 || q >= n_qubits) {
        throw std::invalid_argument(std::string(what) +
                                    " qubit index out of range");
    }
}

}  // namespace

Circuit::Circuit(int n_qubits) : n_qubits_(n_qubits) {
    if (n_qubits < 1 || n_qubits > kMaxQubits) {
        throw std::invalid_argument("circuit qubit count must be in 1..20");
    }
}

Circuit& Circuit::ry(int qubit, double angle) {
    return append(Gate::ry(qubit, angle));
}

Circuit& Circuit::rz(int qubit, double angle) {
    return append(Gate::rz(qubit, angle));
}

Circuit& Circuit::cnot(int control, int target) {
    return append(Gate::cnot(control, target));
}

Circuit& Circuit::append(const Gate& g) {
    check_qubit(g.target, n_qubits_, "target");
    if (g.kind == GateKind::Cnot) {
        check_qubit(g.control, n_qubits_, "control");
        if (g.control == g.target) {
            throw std::invalid_argument("CNOT control equals target");
        }
    }
    gates_.push_back(g);
    return *this;
}

Circuit inverse(const Circuit& c) {
    Circuit inv(c.n_qubits());
    const auto& gates = c.gates();
    for (auto it = gates.rbegin(); it != gates.rend(); ++it) {
        Gate g = *it;
        if (g.kind == GateKind::Ry || g.kind == GateKind::Rz) {
            g.angle = -g.angle;
        }
        inv.append(g);
    }
    return inv;
}

StateVector::StateVector(int n_qubits, std::size_t dim)
    : n_qubits_(n_qubits), amps_(dim) {}

StateVector StateVector::zero_state(int n_qubits) {
    if (n_qubits < 1 || n_qubits > kMaxQubits) {
        throw std::invalid_argument("qubit count must be in 1..20");
    }
    StateVector sv(n_qubits, std::size_t{1} << n_qubits);
    sv.amps_[0] = 1.0;
    return sv;
}

void StateVector::reset_zero() {
    std::fill(amps_.begin(), amps_.end(), std::complex<double>{});
    amps_[0] = 1.0;
}

void StateVector::apply_gate(const Gate& g) {
    check_qubit(g.target, n_qubits_, "target");
    const std::size_t dim = amps_.size();
    const std::size_t t_mask = std::size_t{1} << g.target;

    switch (g.kind) {
        case GateKind::Ry: {
            const double c = std::cos(0.5 * g.angle);
            const double s = std::sin(0.5 * g.angle);
            const std::size_t lo_mask = t_mask - 1;
            const std::size_t hi_mask = ~lo_mask;
            for (std::size_t k = 0; k < dim / 2; ++k) {
                const std::size_t i0 = ((k & hi_mask) << 1) | (k & lo_mask);
                const std::size_t i1 = i0 | t_mask;
                const std::complex<double> a0 = amps_[i0];
                const std::complex<double> a1 = amps_[i1];
                amps_[i0] = c * a0 - s * a1;
                amps_[i1] = s * a0 + c * a1;
            }
            break;
        }
        case GateKind::Rz: {
            const std::complex<double> e0{std::cos(0.5 * g.angle),
                                          -std::sin(0.5 * g.angle)};
            const std::complex<double> e1 = std::conj(e0);
            for (std::size_t i = 0; i < dim; ++i) {
                amps_[i] *= (i & t_mask) ? e1 : e0;
            }
            break;
        }
        case GateKind::Cnot: {
            check_qubit(g.control, n_qubits_, "control");
            if (g.control == g.target) {
                throw std::invalid_argument("CNOT control equals target");
            }
            const std::size_t c_mask = std::size_t{1} << g.control;
            for (std::size_t i = 0; i < dim; ++i) {
                if ((i & c_mask) && !(i & t_mask)) {
                    std::swap(amps_[i], amps_[i | t_mask]);
                }
            }
            break;
        }
    }
}

void StateVector::run(const Circuit& c) {
    if (c.n_qubits() != n_qubits_) {
        throw std::invalid_argument("circuit and state qubit counts differ");
    }
    for (const Gate& g : c.gates()) {
        apply_gate(g);
    }
}

double StateVector::prob_zero() const { return std::norm(amps_[0]); }

double StateVector::norm_sq() const {
    double total = 0.0;
    for (const auto& a : amps_) {
        total += std::norm(a);
    }
    return total;
}

double StateVector::sample_zero_frequency(std::uint64_t shots,
                                          std::uint64_t seed) const {
    if (shots == 0) {
        throw std::invalid_argument("shots must be >= 1");
    }
    std::vector<double> cumulative(amps_.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < amps_.size(); ++i) {
        acc += std::norm(amps_[i]);
        cumulative[i] = acc;
    }

    Rng rng(seed);
    std::uint64_t zeros = 0;
    for (std::uint64_t s = 0; s < shots; ++s) {
        // Scale by the accumulated norm so rounding in `acc` cannot push
        // draws past the last bucket.
        const double u = rng.next_double() * acc;
        const auto it =
            std::upper_bound(cumulative.begin(), cumulative.end(), u);
        const std::size_t outcome =
            it == cumulative.end()
                ? amps_.size() - 1
                : static_cast<std::size_t>(it - cumulative.begin());
        if (outcome == 0) {
            ++zeros;
        }
    }
    return static_cast<double>(zeros) / static_cast<double>(shots);
}

void StateVector::dump_amplitudes(std::ostream& out) const {
    for (std::size_t i = 0; i < amps_.size(); ++i) {
        out << i << ',' << amps_[i].real() << ',' << amps_[i].imag() << '\n';
    }
}

}  // namespace qfk
