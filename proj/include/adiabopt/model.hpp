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

#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "adiabopt/density_matrix.hpp"
#include "adiabopt/linalg.hpp"

namespace adiabopt {

// Energies are in units of hbar*omega0 and times in units of 1/omega0.

enum class Pauli { X, Y, Z, Minus };

/// Single-qubit operators in the basis (|0>, |1>) with sigma_z|0> = +|0>.
/// Minus is |1><0| = (sigma_x - i sigma_y) / 2.
ComplexMatrix pauli(Pauli direction);

/// `op` acting on `qubit` (1-based, qubit 1 is the most significant bit)
/// tensored with identities on the other qubits.
ComplexMatrix embed(const ComplexMatrix& op, int qubit, int n_qubits);

struct LocalField {
  Pauli direction = Pauli::Z;  // X, Y or Z
  int qubit = 1;

  std::string label() const;  // e.g. "z3"
  friend bool operator==(const LocalField&, const LocalField&) = default;
};

/// Parses "x1".."z3" style labels. Throws ConfigError.
LocalField parse_local_field(std::string_view text);

/// All nine single-qubit fields, x1 x2 x3 y1 ... z3.
std::vector<LocalField> all_local_fields();

struct ProtocolSpec {
  int n_qubits = 0;
  std::vector<ComplexMatrix> hamiltonians;  // H(t) = sum_k eps_k(t) H_k
  DensityMatrix initial = DensityMatrix::maximally_mixed(1);
  DensityMatrix target = DensityMatrix::maximally_mixed(1);
  std::string label;

  Eigen::Index dim() const { return Eigen::Index{1} << n_qubits; }
  int n_controls() const { return static_cast<int>(hamiltonians.size()); }
};

enum class NoiseKind { Dephasing, AmplitudeDamping };

std::string_view to_string(NoiseKind kind);
NoiseKind parse_noise_kind(std::string_view text);

struct NoiseChannel {
  NoiseKind kind = NoiseKind::Dephasing;
  std::vector<ComplexMatrix> lindblad_ops;
  std::vector<double> rates;

  bool is_silent() const;
  /// Same operators with every rate set to zero.
  NoiseChannel silenced() const;
};

/// Two-qubit entanglement protocol: |11> to (|00> + |11>)/sqrt(2) with
/// H1 = Z1 + Z2 and H2 = Y1 Y2 - Z1 Z2.
ProtocolSpec build_aep();

/// Three-qubit teleportation protocol with H1 = -(X2 X3 + Z2 Z3),
/// H2 = -(X1 X2 + Z1 Z2) and, when given, H3 = sigma_j acting on qubit k.
ProtocolSpec build_atp(std::optional<LocalField> local_field = std::nullopt);

/// One Lindblad operator per qubit (sigma_z or sigma_minus), all at rate gamma.
NoiseChannel build_channel(NoiseKind kind, int n_qubits, double gamma);

/// (|00> + |11>)/sqrt(2).
StateVector bell_state();

}  // namespace adiabopt
