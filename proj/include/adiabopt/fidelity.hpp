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

#include <cstdint>
#include <random>

#include "adiabopt/density_matrix.hpp"
#include "adiabopt/dynamics.hpp"
#include "adiabopt/linalg.hpp"
#include "adiabopt/model.hpp"

namespace adiabopt {

/// Uhlmann fidelity (Tr sqrt(sqrt(chi) rho sqrt(chi)))^2.
double uhlmann_fidelity(const DensityMatrix& rho, const DensityMatrix& chi);

/// Tr(chi rho). Equals the Uhlmann fidelity whenever chi is pure.
double overlap_fidelity(const DensityMatrix& rho, const DensityMatrix& chi);

struct RandomQubitState {
  Complex alpha;
  Complex beta;

  /// alpha|0> + beta|1>.
  StateVector ket() const;
};

/// Haar-uniform single-qubit states: four independent standard normals as the
/// real and imaginary parts of (alpha, beta), then normalized.
class QubitStateSampler {
 public:
  explicit QubitStateSampler(std::uint64_t seed) : engine_(seed) {}

  RandomQubitState draw();

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

/// Permutation matrix exchanging the labels of qubits q_a and q_b (1-based).
ComplexMatrix swap_operator(int q_a, int q_b, int n_qubits);

/// Teleportation input (alpha|0> + beta|1>) kron (|00> + |11>)/sqrt(2).
StateVector teleport_input(const RandomQubitState& state);

/// <O psi| rho(T) |O psi> for one input, where psi = teleport_input(state),
/// rho(T) = map applied to |psi><psi| and O swaps qubits 1 and 3.
double teleport_fidelity(const ComplexMatrix& map, const RandomQubitState& state);

/// Average over n_samples random inputs of <O psi_i| rho_i(T) |O psi_i>,
/// where O swaps qubits 1 and 3 and every rho_i(T) is evolved from
/// |psi_i><psi_i| with the same controls.
double mean_teleport_fidelity(const ProtocolSpec& spec, const ControlSet& controls, const TimeGrid& grid,
                              const NoiseChannel& channel, int n_samples, std::uint64_t seed);

/// Same average given a precomputed dynamical map over [0, T].
double mean_teleport_fidelity(const ComplexMatrix& map, int n_samples, std::uint64_t seed);

}  // namespace adiabopt
