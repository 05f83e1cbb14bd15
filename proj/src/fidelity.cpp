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

#include "adiabopt/fidelity.hpp"

#include <cmath>

#include "adiabopt/error.hpp"

namespace adiabopt {

double uhlmann_fidelity(const DensityMatrix& rho, const DensityMatrix& chi) {
  if (rho.dim() != chi.dim()) {
    throw Error(ErrorKind::DimensionMismatch, "fidelity between states of different dimension");
  }
  const ComplexMatrix root_chi = hermitian_sqrt(chi.matrix());
  ComplexMatrix inner = root_chi * rho.matrix() * root_chi;
  inner = 0.5 * (inner + inner.adjoint()).eval();
  const double tr = hermitian_sqrt(inner).trace().real();
  return tr * tr;
}

double overlap_fidelity(const DensityMatrix& rho, const DensityMatrix& chi) {
  if (rho.dim() != chi.dim()) {
    throw Error(ErrorKind::DimensionMismatch, "fidelity between states of different dimension");
  }
  return (chi.matrix() * rho.matrix()).trace().real();
}

StateVector RandomQubitState::ket() const {
  ComplexVector v(2);
  v << alpha, beta;
  return StateVector(std::move(v));
}

RandomQubitState QubitStateSampler::draw() {
  for (;;) {
    const Complex a(normal_(engine_), normal_(engine_));
    const Complex b(normal_(engine_), normal_(engine_));
    const double norm = std::sqrt(std::norm(a) + std::norm(b));
    if (norm < 1e-12) continue;  // DegenerateDraw: redraw
    return {a / norm, b / norm};
  }
}

ComplexMatrix swap_operator(int q_a, int q_b, int n_qubits) {
  if (n_qubits < 1 || n_qubits > 5 || q_a < 1 || q_b < 1 || q_a > n_qubits || q_b > n_qubits ||
      q_a == q_b) {
    throw Error(ErrorKind::IndexOutOfRange, "swap needs two distinct qubits inside the register");
  }
  const Eigen::Index dim = Eigen::Index{1} << n_qubits;
  const int shift_a = n_qubits - q_a;
  const int shift_b = n_qubits - q_b;
  ComplexMatrix p = ComplexMatrix::Zero(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    const Eigen::Index bit_a = (i >> shift_a) & 1;
    const Eigen::Index bit_b = (i >> shift_b) & 1;
    Eigen::Index j = i;
    if (bit_a != bit_b) j ^= (Eigen::Index{1} << shift_a) | (Eigen::Index{1} << shift_b);
    p(j, i) = 1.0;
  }
  return p;
}

StateVector teleport_input(const RandomQubitState& state) {
  return StateVector(kron(state.ket().amplitudes(), bell_state().amplitudes()));
}

namespace {

void require_three_qubit_map(const ComplexMatrix& map) {
  if (map.rows() != 64 || map.cols() != 64) {
    throw Error(ErrorKind::DimensionMismatch, "teleport fidelity needs a three-qubit map");
  }
}

double teleport_fidelity_unchecked(const ComplexMatrix& map, const ComplexMatrix& swap,
                                   const RandomQubitState& state) {
  const ComplexVector psi = teleport_input(state).amplitudes();
  const ComplexMatrix rho0 = psi * psi.adjoint();
  const ComplexMatrix rho_t = unvec(map * vec(rho0));
  const ComplexVector target = swap * psi;
  return (target.adjoint() * rho_t * target)(0, 0).real();
}

}  // namespace

double teleport_fidelity(const ComplexMatrix& map, const RandomQubitState& state) {
  require_three_qubit_map(map);
  return teleport_fidelity_unchecked(map, swap_operator(1, 3, 3), state);
}

double mean_teleport_fidelity(const ComplexMatrix& map, int n_samples, std::uint64_t seed) {
  if (n_samples < 1) {
    throw Error(ErrorKind::ConfigError, "mean fidelity needs at least one sample");
  }
  require_three_qubit_map(map);
  const ComplexMatrix swap = swap_operator(1, 3, 3);
  QubitStateSampler sampler(seed);
  double sum = 0.0;
  for (int i = 0; i < n_samples; ++i) sum += teleport_fidelity_unchecked(map, swap, sampler.draw());
  return sum / n_samples;
}

double mean_teleport_fidelity(const ProtocolSpec& spec, const ControlSet& controls, const TimeGrid& grid,
                              const NoiseChannel& channel, int n_samples, std::uint64_t seed) {
  if (spec.n_qubits != 3) {
    throw Error(ErrorKind::DimensionMismatch, "mean teleport fidelity is defined for three qubits");
  }
  return mean_teleport_fidelity(dynamical_map(spec, controls, grid, channel), n_samples, seed);
}

}  // namespace adiabopt
