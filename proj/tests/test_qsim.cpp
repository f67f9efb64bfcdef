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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "qfk/statevector.hpp"
#include "test_util.hpp"

using namespace qfk;
using doctest::Approx;

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kInvSqrt2 = 0.7071067811865476;
}  // namespace

TEST_CASE("zero_state places the unit amplitude at index 0") {
    auto sv1 = StateVector::zero_state(1);
    REQUIRE(sv1.size() == 2);
    CHECK(sv1.amplitudes()[0] == std::complex<double>(1.0, 0.0));
    CHECK(sv1.amplitudes()[1] == std::complex<double>(0.0, 0.0));

    auto sv3 = StateVector::zero_state(3);
    REQUIRE(sv3.size() == 8);
    CHECK(sv3.amplitudes()[0] == std::complex<double>(1.0, 0.0));
    CHECK(sv3.prob_zero() == 1.0);
}

TEST_CASE("zero_state rejects out-of-range register widths") {
    CHECK_THROWS_AS(StateVector::zero_state(0), std::invalid_argument);
    CHECK_THROWS_AS(StateVector::zero_state(-2), std::invalid_argument);
    CHECK_THROWS_AS(StateVector::zero_state(21), std::invalid_argument);
}

TEST_CASE("RY half-turn maps |0> to |1>") {
    auto sv = StateVector::zero_state(1);
    sv.apply_gate(Gate::ry(0, kPi));
    CHECK(std::abs(sv.amplitudes()[0]) < 1e-12);
    CHECK(std::abs(sv.amplitudes()[1] - 1.0) < 1e-12);
    CHECK(sv.prob_zero() < 1e-24);
}

TEST_CASE("RY quarter-turn gives equal superposition") {
    auto sv = StateVector::zero_state(1);
    sv.apply_gate(Gate::ry(0, kPi / 2));
    CHECK(sv.amplitudes()[0].real() == Approx(kInvSqrt2).epsilon(1e-12));
    CHECK(sv.amplitudes()[1].real() == Approx(kInvSqrt2).epsilon(1e-12));
    CHECK(sv.prob_zero() == Approx(0.5).epsilon(1e-12));
}

TEST_CASE("RZ applies opposite half-angle phases") {
    auto sv = StateVector::zero_state(1);
    sv.apply_gate(Gate::ry(0, kPi / 2));
    sv.apply_gate(Gate::rz(0, 0.8));
    const std::complex<double> e0{std::cos(0.4), -std::sin(0.4)};
    CHECK(std::abs(sv.amplitudes()[0] - kInvSqrt2 * e0) < 1e-12);
    CHECK(std::abs(sv.amplitudes()[1] - kInvSqrt2 * std::conj(e0)) < 1e-12);
}

TEST_CASE("CNOT flips the target where the control bit is set") {
    // Prepare qubit 0 = 1 (basis index 1), then CNOT(0 -> 1): index 1 -> 3.
    auto sv = StateVector::zero_state(2);
    sv.apply_gate(Gate::ry(0, kPi));
    sv.apply_gate(Gate::cnot(0, 1));
    CHECK(std::abs(sv.amplitudes()[3] - 1.0) < 1e-12);
    CHECK(std::abs(sv.amplitudes()[1]) < 1e-12);

    // Control clear: nothing happens.
    auto sv2 = StateVector::zero_state(2);
    sv2.apply_gate(Gate::cnot(0, 1));
    CHECK(sv2.prob_zero() == 1.0);
}

TEST_CASE("gate validation rejects bad indices") {
    auto sv = StateVector::zero_state(2);
    CHECK_THROWS_AS(sv.apply_gate(Gate::ry(2, 0.1)), std::invalid_argument);
    CHECK_THROWS_AS(sv.apply_gate(Gate::cnot(1, 1)), std::invalid_argument);
    Circuit c(2);
    CHECK_THROWS_AS(c.ry(5, 0.1), std::invalid_argument);
    CHECK_THROWS_AS(c.cnot(0, 0), std::invalid_argument);
    CHECK_THROWS_AS(c.cnot(0, 2), std::invalid_argument);
}

TEST_CASE("empty circuit is the identity") {
    auto sv = StateVector::zero_state(3);
    sv.run(Circuit(3));
    CHECK(sv.prob_zero() == 1.0);
}

TEST_CASE("run rejects register-width mismatch") {
    auto sv = StateVector::zero_state(2);
    CHECK_THROWS_AS(sv.run(Circuit(3)), std::invalid_argument);
}

TEST_CASE("inverse negates rotations and reverses order") {
    Circuit c(2);
    c.ry(0, 0.3).rz(1, -0.7).cnot(0, 1);
    const Circuit inv = inverse(c);
    REQUIRE(inv.size() == 3);
    CHECK(inv.gates()[0].kind == GateKind::Cnot);
    CHECK(inv.gates()[1].kind == GateKind::Rz);
    CHECK(inv.gates()[1].angle == Approx(0.7));
    CHECK(inv.gates()[2].kind == GateKind::Ry);
    CHECK(inv.gates()[2].angle == Approx(-0.3));

    // Involution.
    const Circuit twice = inverse(inv);
    REQUIRE(twice.size() == c.size());
    for (std::size_t i = 0; i < c.size(); ++i) {
        CHECK(twice.gates()[i].kind == c.gates()[i].kind);
        CHECK(twice.gates()[i].angle == Approx(c.gates()[i].angle));
    }
}

TEST_CASE("circuit followed by its inverse restores the state") {
    Rng rng(2024);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 1 + static_cast<int>(rng.next_below(3));
        const Circuit c = testutil::random_circuit(n, 12, rng);
        auto sv = StateVector::zero_state(n);
        sv.run(c);
        sv.run(inverse(c));
        CHECK(std::abs(sv.amplitudes()[0] - 1.0) < 1e-10);
        for (std::size_t i = 1; i < sv.size(); ++i) {
            CHECK(std::abs(sv.amplitudes()[i]) < 1e-10);
        }
    }
}

TEST_CASE("simulator matches the dense matrix-chain oracle") {
    Rng rng(77);
    for (int trial = 0; trial < 30; ++trial) {
        const int n = 1 + static_cast<int>(rng.next_below(3));
        const Circuit c = testutil::random_circuit(n, 16, rng);
        auto sv = StateVector::zero_state(n);
        sv.run(c);
        const Eigen::VectorXcd ref = testutil::dense_run(c);
        CHECK(testutil::max_amp_diff(sv, ref) < 1e-10);
    }
}

TEST_CASE("norm is preserved through long random circuits") {
    Rng rng(9);
    for (int trial = 0; trial < 10; ++trial) {
        const int n = 2 + static_cast<int>(rng.next_below(4));
        const Circuit c = testutil::random_circuit(n, 80, rng);
        auto sv = StateVector::zero_state(n);
        sv.run(c);
        CHECK(sv.norm_sq() == Approx(1.0).epsilon(1e-10));
    }
}

TEST_CASE("sampling a basis state is a point mass") {
    auto sv = StateVector::zero_state(2);
    CHECK(sv.sample_zero_frequency(17, 1) == 1.0);
    sv.apply_gate(Gate::ry(0, kPi));
    CHECK(sv.sample_zero_frequency(1000, 5) == 0.0);
}

TEST_CASE("sampling rejects zero shots") {
    auto sv = StateVector::zero_state(1);
    CHECK_THROWS_AS(sv.sample_zero_frequency(0, 1), std::invalid_argument);
}

TEST_CASE("shot frequency on a balanced state is near one half") {
    auto sv = StateVector::zero_state(1);
    sv.apply_gate(Gate::ry(0, kPi / 2));
    const double f = sv.sample_zero_frequency(100000, 424242);
    CHECK(std::abs(f - 0.5) < 0.01);
    // Same seed, same value, bit for bit.
    CHECK(sv.sample_zero_frequency(100000, 424242) == f);
}

TEST_CASE("shot estimator is unbiased across seeds") {
    auto sv = StateVector::zero_state(2);
    sv.apply_gate(Gate::ry(0, 1.1));
    sv.apply_gate(Gate::ry(1, -0.4));
    sv.apply_gate(Gate::cnot(0, 1));
    const double p = sv.prob_zero();
    const std::uint64_t shots = 4096;
    const int n_seeds = 50;
    double mean = 0.0;
    for (int s = 0; s < n_seeds; ++s) {
        mean += sv.sample_zero_frequency(
            shots, static_cast<std::uint64_t>(1000 + s));
    }
    mean /= n_seeds;
    const double bound =
        3.0 * std::sqrt(p * (1.0 - p) /
                        (static_cast<double>(shots) * n_seeds));
    CHECK(std::abs(mean - p) < bound);
}

TEST_CASE("amplitude dump emits one line per basis state") {
    auto sv = StateVector::zero_state(1);
    std::ostringstream out;
    sv.dump_amplitudes(out);
    CHECK(out.str() == "0,1,0\n1,0,0\n");
}
