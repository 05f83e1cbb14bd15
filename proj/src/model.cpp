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

#include "adiabopt/model.hpp"

#include <cmath>

#include "adiabopt/error.hpp"

namespace adiabopt {

namespace {

using namespace std::complex_literals;

ComplexMatrix identity(Eigen::Index dim) { return ComplexMatrix::Identity(dim, dim); }

ComplexMatrix two_body(Pauli a, int qa, Pauli b, int qb, int n) {
  return embed(pauli(a), qa, n) * embed(pauli(b), qb, n);
}

char direction_char(Pauli p) {
  switch (p) {
    case Pauli::X: return 'x';
    case Pauli::Y: return 'y';
    case Pauli::Z: return 'z';
    case Pauli::Minus: return 'm';
  }
  return '?';
}

}  // namespace

ComplexMatrix pauli(Pauli direction) {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  switch (direction) {
    case Pauli::X:
      m(0, 1) = 1.0;
      m(1, 0) = 1.0;
      break;
    case Pauli::Y:
      m(0, 1) = -1i;
      m(1, 0) = 1i;
      break;
    case Pauli::Z:
      m(0, 0) = 1.0;
      m(1, 1) = -1.0;
      break;
    case Pauli::Minus:
      m(1, 0) = 1.0;
      break;
  }
  return m;
}

ComplexMatrix embed(const ComplexMatrix& op, int qubit, int n_qubits) {
  if (op.rows() != 2 || op.cols() != 2) {
    throw Error(ErrorKind::DimensionMismatch, "embed expects a single-qubit operator");
  }
  if (n_qubits < 1 || qubit < 1 || qubit > n_qubits) {
    throw Error(ErrorKind::IndexOutOfRange,
                "qubit " + std::to_string(qubit) + " outside 1.." + std::to_string(n_qubits));
  }
  const Eigen::Index left = Eigen::Index{1} << (qubit - 1);
  const Eigen::Index right = Eigen::Index{1} << (n_qubits - qubit);
  return kron(kron(identity(left), op), identity(right));
}

std::string LocalField::label() const {
  return std::string(1, direction_char(direction)) + std::to_string(qubit);
}

LocalField parse_local_field(std::string_view text) {
  if (text.size() != 2) {
    throw Error(ErrorKind::ConfigError, "local field must look like z3, got '" + std::string(text) + "'");
  }
  LocalField field;
  switch (text[0]) {
    case 'x': case 'X': field.direction = Pauli::X; break;
    case 'y': case 'Y': field.direction = Pauli::Y; break;
    case 'z': case 'Z': field.direction = Pauli::Z; break;
    default:
      throw Error(ErrorKind::ConfigError, "unknown local field direction in '" + std::string(text) + "'");
  }
  if (text[1] < '1' || text[1] > '3') {
    throw Error(ErrorKind::ConfigError, "local field qubit must be 1, 2 or 3");
  }
  field.qubit = text[1] - '0';
  return field;
}

std::vector<LocalField> all_local_fields() {
  std::vector<LocalField> out;
  for (Pauli p : {Pauli::X, Pauli::Y, Pauli::Z}) {
    for (int q = 1; q <= 3; ++q) out.push_back({p, q});
  }
  return out;
}

std::string_view to_string(NoiseKind kind) {
  return kind == NoiseKind::Dephasing ? "dephasing" : "amplitude_damping";
}

NoiseKind parse_noise_kind(std::string_view text) {
  if (text == "dephasing") return NoiseKind::Dephasing;
  if (text == "amplitude_damping" || text == "amplitude-damping") return NoiseKind::AmplitudeDamping;
  throw Error(ErrorKind::ConfigError, "unknown noise kind '" + std::string(text) + "'");
}

bool NoiseChannel::is_silent() const {
  for (double r : rates) {
    if (r != 0.0) return false;
  }
  return true;
}

NoiseChannel NoiseChannel::silenced() const {
  NoiseChannel out = *this;
  std::fill(out.rates.begin(), out.rates.end(), 0.0);
  return out;
}

StateVector bell_state() {
  ComplexVector v = ComplexVector::Zero(4);
  v[0] = 1.0;
  v[3] = 1.0;
  return StateVector(v);
}

ProtocolSpec build_aep() {
  constexpr int n = 2;
  ProtocolSpec spec;
  spec.n_qubits = n;
  spec.label = "aep";
  spec.hamiltonians.push_back(embed(pauli(Pauli::Z), 1, n) + embed(pauli(Pauli::Z), 2, n));
  spec.hamiltonians.push_back(two_body(Pauli::Y, 1, Pauli::Y, 2, n) -
                              two_body(Pauli::Z, 1, Pauli::Z, 2, n));
  spec.initial = DensityMatrix::pure(StateVector::basis(4, 3));
  spec.target = DensityMatrix::pure(bell_state());
  return spec;
}

ProtocolSpec build_atp(std::optional<LocalField> local_field) {
  constexpr int n = 3;
  ProtocolSpec spec;
  spec.n_qubits = n;
  spec.hamiltonians.push_back(
      -(two_body(Pauli::X, 2, Pauli::X, 3, n) + two_body(Pauli::Z, 2, Pauli::Z, 3, n)));
  spec.hamiltonians.push_back(
      -(two_body(Pauli::X, 1, Pauli::X, 2, n) + two_body(Pauli::Z, 1, Pauli::Z, 2, n)));
  if (local_field) {
    if (local_field->direction == Pauli::Minus) {
      throw Error(ErrorKind::ConfigError, "local field direction must be x, y or z");
    }
    spec.hamiltonians.push_back(embed(pauli(local_field->direction), local_field->qubit, n));
    spec.label = "atp3-" + local_field->label();
  } else {
    spec.label = "atp2";
  }

  ComplexVector plus(2);
  plus << 1.0, 1.0;
  const ComplexVector bell = bell_state().amplitudes();
  spec.initial = DensityMatrix::pure(StateVector(kron(plus, bell)));
  spec.target = DensityMatrix::pure(StateVector(kron(bell, plus)));
  return spec;
}

NoiseChannel build_channel(NoiseKind kind, int n_qubits, double gamma) {
  if (!(gamma >= 0.0)) {
    throw Error(ErrorKind::NegativeRate, "decay rate must be non-negative");
  }
  const ComplexMatrix s = pauli(kind == NoiseKind::Dephasing ? Pauli::Z : Pauli::Minus);
  NoiseChannel channel;
  channel.kind = kind;
  for (int q = 1; q <= n_qubits; ++q) {
    channel.lindblad_ops.push_back(embed(s, q, n_qubits));
    channel.rates.push_back(gamma);
  }
  return channel;
}

}  // namespace adiabopt
