// Copyright 2026 The adiabopt Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "adiabopt/dynamics.hpp"
#include "adiabopt/error.hpp"
#include "adiabopt/model.hpp"
#include "test_helpers.hpp"

using namespace adiabopt;
using adiabopt::testing::max_abs;
using namespace std::complex_literals;

namespace {

ComplexVector ket(std::initializer_list<Complex> amplitudes) {
  ComplexVector v(static_cast<Eigen::Index>(amplitudes.size()));
  Eigen::Index i = 0;
  for (Complex a : amplitudes) v[i++] = a;
  return v;
}

}  // namespace

TEST_CASE("Pauli operators", "[model]") {
  ComplexMatrix z = ComplexMatrix::Zero(2, 2);
  z.diagonal() << 1.0, -1.0;
  CHECK(max_abs(pauli(Pauli::Z) - z) == 0.0);

  // sigma_minus = |1><0|
  const ComplexVector out = pauli(Pauli::Minus) * ket({1.0, 0.0});
  CHECK((out - ket({0.0, 1.0})).norm() == 0.0);
  CHECK(max_abs(pauli(Pauli::Minus) - 0.5 * (pauli(Pauli::X) - 1i * pauli(Pauli::Y))) == 0.0);
}

TEST_CASE("embed places single-qubit operators", "[model]") {
  const ComplexMatrix id2 = ComplexMatrix::Identity(2, 2);
  CHECK(max_abs(embed(pauli(Pauli::Z), 1, 2) - kron(pauli(Pauli::Z), id2)) == 0.0);
  CHECK(max_abs(embed(pauli(Pauli::Z), 2, 2) - kron(id2, pauli(Pauli::Z))) == 0.0);
  CHECK(max_abs(embed(pauli(Pauli::Minus), 1, 3) - kron(kron(pauli(Pauli::Minus), id2), id2)) == 0.0);
  for (int n = 1; n <= 3; ++n) {
    for (int k = 1; k <= n; ++k) {
      const Eigen::Index dim = Eigen::Index{1} << n;
      CHECK(max_abs(embed(id2, k, n) - ComplexMatrix::Identity(dim, dim)) == 0.0);
    }
  }
  try {
    embed(pauli(Pauli::X), 3, 2);
    FAIL("expected IndexOutOfRange");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::IndexOutOfRange);
  }
  CHECK_THROWS_AS(embed(pauli(Pauli::X), 0, 2), Error);
}

TEST_CASE("entanglement protocol bundle", "[model]") {
  const ProtocolSpec aep = build_aep();
  REQUIRE(aep.n_qubits == 2);
  REQUIRE(aep.n_controls() == 2);
  for (const ComplexMatrix& h : aep.hamiltonians) CHECK(hermiticity_residual(h) == 0.0);

  // H1 is diagonal; its minimum -2 sits on |11>.
  const ComplexMatrix& h1 = aep.hamiltonians[0];
  CHECK(h1(3, 3).real() == -2.0);
  CHECK(h1.diagonal().real().minCoeff() == -2.0);

  const ComplexVector chi0 = bell_state().amplitudes();
  const ComplexMatrix& h2 = aep.hamiltonians[1];
  CHECK((h2 * chi0 + 2.0 * chi0).norm() < 1e-15);
  const double energy = (chi0.adjoint() * h2 * chi0)(0, 0).real();
  CHECK(std::abs(energy - hermitian_eig(h2).eigenvalues[0]) < 1e-12);

  CHECK(aep.initial(3, 3).real() == 1.0);
  CHECK(std::abs(aep.target.trace() - 1.0) < 1e-15);
  CHECK(std::abs(aep.target(0, 3) - 0.5) < 1e-15);
}

TEST_CASE("teleportation protocol bundle", "[model]") {
  const ProtocolSpec atp = build_atp();
  REQUIRE(atp.n_qubits == 3);
  REQUIRE(atp.n_controls() == 2);
  for (const ComplexMatrix& h : atp.hamiltonians) CHECK(hermiticity_residual(h) == 0.0);

  const ComplexVector phi = bell_state().amplitudes();
  const ComplexVector v1 = kron(ket({1.0, 0.0}), phi);
  const ComplexVector v2 = kron(ket({0.0, 1.0}), phi);
  const ComplexMatrix& h1 = atp.hamiltonians[0];
  CHECK((h1 * v1 + 2.0 * v1).norm() < 1e-12);
  CHECK((h1 * v2 + 2.0 * v2).norm() < 1e-12);
  CHECK(std::abs(v1.dot(v2)) < 1e-12);
  CHECK(std::abs(v1.norm() - 1.0) < 1e-12);

  const EigenDecomposition eig = hermitian_eig(h1);
  CHECK(eig.eigenvalues[0] == Catch::Approx(-2.0));
  CHECK(eig.eigenvalues[1] == Catch::Approx(-2.0));
  CHECK(eig.eigenvalues[2] > -2.0 + 1e-6);

  // Problem Hamiltonian: ground space spanned by |Phi>|0>, |Phi>|1>.
  const ComplexMatrix& h2 = atp.hamiltonians[1];
  const ComplexVector w1 = kron(phi, ket({1.0, 0.0}));
  const ComplexVector w2 = kron(phi, ket({0.0, 1.0}));
  CHECK((h2 * w1 + 2.0 * w1).norm() < 1e-12);
  CHECK((h2 * w2 + 2.0 * w2).norm() < 1e-12);

  // 1/2 (|0> + |1>)(|00> + |11>) has amplitude 1/2 on 000, 011, 100, 111.
  for (const char* label : {"000", "011", "100", "111"}) {
    const Eigen::Index b = basis_index(label, 3);
    CHECK(std::abs(atp.initial(b, b) - 0.25) < 1e-15);
  }
  // 1/2 (|00> + |11>)(|0> + |1>) on 000, 001, 110, 111.
  for (const char* label : {"000", "001", "110", "111"}) {
    const Eigen::Index b = basis_index(label, 3);
    CHECK(std::abs(atp.target(b, b) - 0.25) < 1e-15);
  }
}

TEST_CASE("local field adds a third control", "[model]") {
  for (const LocalField& field : all_local_fields()) {
    const ProtocolSpec atp = build_atp(field);
    REQUIRE(atp.n_controls() == 3);
    CHECK(max_abs(atp.hamiltonians[2] - embed(pauli(field.direction), field.qubit, 3)) == 0.0);
    CHECK(atp.label == "atp3-" + field.label());
  }
  CHECK(all_local_fields().size() == 9);
  CHECK(parse_local_field("z3") == LocalField{Pauli::Z, 3});
  CHECK(parse_local_field("Y1") == LocalField{Pauli::Y, 1});
  CHECK_THROWS_AS(parse_local_field("z4"), Error);
  CHECK_THROWS_AS(parse_local_field("w1"), Error);

  try {
    build_atp(LocalField{Pauli::Z, 4});
    FAIL("expected IndexOutOfRange");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::IndexOutOfRange);
  }
}

TEST_CASE("noise channels", "[model]") {
  const ComplexMatrix id2 = ComplexMatrix::Identity(2, 2);

  const NoiseChannel deph = build_channel(NoiseKind::Dephasing, 2, 0.1);
  REQUIRE(deph.lindblad_ops.size() == 2);
  CHECK(max_abs(deph.lindblad_ops[0] - kron(pauli(Pauli::Z), id2)) == 0.0);
  CHECK(max_abs(deph.lindblad_ops[1] - kron(id2, pauli(Pauli::Z))) == 0.0);
  CHECK(deph.rates == std::vector<double>{0.1, 0.1});

  const NoiseChannel quiet = build_channel(NoiseKind::AmplitudeDamping, 3, 0.0);
  CHECK(quiet.lindblad_ops.size() == 3);
  CHECK(quiet.rates == std::vector<double>{0.0, 0.0, 0.0});
  CHECK(quiet.is_silent());
  CHECK(max_abs(dissipator(quiet, 8)) == 0.0);

  const NoiseChannel damp = build_channel(NoiseKind::AmplitudeDamping, 2, 0.05);
  CHECK(max_abs(damp.lindblad_ops[0] - kron(pauli(Pauli::Minus), id2)) == 0.0);
  CHECK(max_abs(damp.lindblad_ops[1] - kron(id2, pauli(Pauli::Minus))) == 0.0);
  CHECK_FALSE(damp.is_silent());
  CHECK(damp.silenced().is_silent());

  try {
    build_channel(NoiseKind::Dephasing, 2, -0.1);
    FAIL("expected NegativeRate");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NegativeRate);
  }

  CHECK(parse_noise_kind("amplitude_damping") == NoiseKind::AmplitudeDamping);
  CHECK(parse_noise_kind("dephasing") == NoiseKind::Dephasing);
  CHECK_THROWS_AS(parse_noise_kind("bitflip"), Error);
}
