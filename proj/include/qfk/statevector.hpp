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

#include <complex>
#include <cstdint>
#include <ostream>
#include <vector>

namespace qfk {

/// Gate set of the simulator. Matrices, in the {|0>, |1>} basis:
///
///   RY(t) = [[cos t/2, -sin t/2], [sin t/2, cos t/2]]
///   RZ(t) = diag(e^{-it/2}, e^{+it/2})
///   CNOT  = flips the target amplitude pair where the control bit is 1
enum class GateKind { Ry, Rz, Cnot };

struct Gate {
    GateKind kind;
    int target = 0;
    int control = -1;   // CNOT only
    double angle = 0.0; // rotations only

    static Gate ry(int qubit, double angle) {
        return Gate{GateKind::Ry, qubit, -1, angle};
    }
    static Gate rz(int qubit, double angle) {
        return Gate{GateKind::Rz, qubit, -1, angle};
    }
    static Gate cnot(int control, int target) {
        return Gate{GateKind::Cnot, target, control, 0.0};
    }
};

/// Ordered gate list on a fixed register width. Gate indices are validated
/// when gates are appended.
class Circuit {
  public:
    explicit Circuit(int n_qubits);

    int n_qubits() const { return n_qubits_; }
    const std::vector<Gate>& gates() const { return gates_; }
    std::size_t size() const { return gates_.size(); }

    Circuit& ry(int qubit, double angle);
    Circuit& rz(int qubit, double angle);
    Circuit& cnot(int control, int target);
    Circuit& append(const Gate& g);

  private:
    int n_qubits_;
    std::vector<Gate> gates_;
};

/// Reversed circuit with every rotation negated; CNOT is self-inverse.
Circuit inverse(const Circuit& c);

/// Dense amplitude vector of an n-qubit register, 1 <= n <= 20.
///
/// Basis-state convention: qubit 0 is the least significant bit of the
/// amplitude index, so |q_{n-1} ... q_1 q_0> lives at index
/// sum_k q_k * 2^k. Value semantics: copying the object copies the
/// amplitudes; member operations mutate only this instance.
class StateVector {
  public:
    /// |0...0> on n qubits. Throws std::invalid_argument outside 1..20.
    static StateVector zero_state(int n_qubits);

    int n_qubits() const { return n_qubits_; }
    std::size_t size() const { return amps_.size(); }

    /// Back to |0...0> without reallocating; lets a worker reuse one
    /// register across many circuit runs.
    void reset_zero();
    const std::vector<std::complex<double>>& amplitudes() const {
        return amps_;
    }

    void apply_gate(const Gate& g);

    /// Applies all gates in order. Throws on register-width mismatch.
    void run(const Circuit& c);

    /// |amplitude of the all-zeros state|^2.
    double prob_zero() const;

    /// Sum of |amp|^2 over the register (should be 1 up to rounding).
    double norm_sq() const;

    /// Draws `shots` full-register measurements by inverse-CDF sampling
    /// over the cumulative |amp|^2 distribution (uniforms from Rng(seed))
    /// and returns the fraction of all-zeros outcomes. Deterministic in
    /// (state, shots, seed). Throws std::invalid_argument for shots = 0.
    double sample_zero_frequency(std::uint64_t shots,
                                 std::uint64_t seed) const;

    /// Debug dump, one `index,re,im` line per amplitude.
    void dump_amplitudes(std::ostream& out) const;

  private:
    StateVector(int n_qubits, std::size_t dim);

    int n_qubits_;
    std::vector<std::complex<double>> amps_;
};

}  // namespace qfk
