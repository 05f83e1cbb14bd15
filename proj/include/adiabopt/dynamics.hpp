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

#include <span>
#include <string>
#include <vector>

#include "adiabopt/density_matrix.hpp"
#include "adiabopt/linalg.hpp"
#include "adiabopt/model.hpp"

namespace adiabopt {

/// Uniform grid on [0, horizon]; controls are constant on each interval.
class TimeGrid {
 public:
  TimeGrid(double horizon, int n_steps);

  double horizon() const { return horizon_; }
  int n_steps() const { return n_steps_; }
  double dt() const { return horizon_ / n_steps_; }
  double time(int n) const { return horizon_ * n / n_steps_; }

 private:
  double horizon_;
  int n_steps_;
};

/// One real sample per control per interval (left endpoint convention).
struct ControlSet {
  std::vector<std::vector<double>> fields;

  ControlSet() = default;
  ControlSet(int n_controls, int n_steps, double value = 0.0)
      : fields(n_controls, std::vector<double>(n_steps, value)) {}

  int n_controls() const { return static_cast<int>(fields.size()); }
  int n_steps() const { return fields.empty() ? 0 : static_cast<int>(fields.front().size()); }
  double operator()(int k, int n) const { return fields[k][n]; }
  double& operator()(int k, int n) { return fields[k][n]; }

  /// The samples of all controls on interval n.
  std::vector<double> at(int n) const;
  double max_abs() const;
};

struct Trajectory {
  std::vector<DensityMatrix> states;  // grid points t_0 .. t_N

  const DensityMatrix& final_state() const { return states.back(); }
  /// Row i holds the diagonal of states[i].
  Eigen::MatrixXd populations() const;
};

// Density matrices are vectorized by stacking columns, matching Eigen's
// column-major storage: vec(A rho B) = (B^T kron A) vec(rho).
ComplexVector vec(const ComplexMatrix& rho);
ComplexMatrix unvec(const ComplexVector& v);

/// -i (1 kron H - H^T kron 1).
ComplexMatrix hamiltonian_superoperator(const ComplexMatrix& h);

/// 1/2 sum_j gamma_j (2 conj(L) kron L - 1 kron L^dag L - (L^dag L)^T kron 1).
ComplexMatrix dissipator(const NoiseChannel& channel, Eigen::Index dim);

/// Generator of the master equation acting on vec(rho).
ComplexMatrix liouvillian(const ComplexMatrix& h, const NoiseChannel& channel);

/// Right-hand side of the master equation evaluated on the matrix itself.
ComplexMatrix master_equation_rhs(const ComplexMatrix& h, const NoiseChannel& channel,
                                  const ComplexMatrix& rho);

/// Precomputed pieces of the Liouvillian for a protocol: the dissipator plus
/// one superoperator per control Hamiltonian.
class LiouvilleModel {
 public:
  LiouvilleModel(const ProtocolSpec& spec, const NoiseChannel& channel);

  Eigen::Index dim() const { return dim_; }
  int n_controls() const { return static_cast<int>(control_terms_.size()); }
  const ComplexMatrix& drift() const { return drift_; }
  const ComplexMatrix& control_term(int k) const { return control_terms_[k]; }

  /// out = drift + sum_k eps_k * control_term(k).
  void assemble(std::span<const double> eps, ComplexMatrix& out) const;
  ComplexMatrix generator(std::span<const double> eps) const;

  /// Sparse form of assemble(). All generators of one model share a single
  /// sparsity pattern, so `out` is reused across calls without reallocating.
  void assemble_sparse(std::span<const double> eps, SparseComplexMatrix& out) const;
  /// The adjoint generator, stored in its own row-major pattern so that
  /// backward propagation runs at the same speed as forward propagation.
  void assemble_sparse_adjoint(std::span<const double> eps, SparseComplexMatrix& out) const;
  const SparseComplexMatrix& sparse_control_term(int k) const { return sparse_terms_[k]; }

  /// One interval forward: exp(L dt) v.
  ComplexVector step(const ComplexVector& v, std::span<const double> eps, double dt) const;
  /// One interval backward under the adjoint generator: exp(L dt)^dagger v.
  ComplexVector step_adjoint(const ComplexVector& v, std::span<const double> eps, double dt) const;

 private:
  Eigen::Index dim_;
  ComplexMatrix drift_;
  std::vector<ComplexMatrix> control_terms_;

  SparseComplexMatrix pattern_;
  std::vector<Complex> drift_values_;
  std::vector<std::vector<Complex>> term_values_;
  SparseComplexMatrix adjoint_pattern_;
  std::vector<Complex> adjoint_drift_values_;
  std::vector<std::vector<Complex>> adjoint_term_values_;
  std::vector<SparseComplexMatrix> sparse_terms_;
};

/// Evolves rho0 through every interval of the grid. Throws DimensionMismatch
/// for inconsistent inputs and InvariantViolation when the trace drifts by
/// more than 1e-6 or the final state is not a valid density matrix.
Trajectory propagate(const DensityMatrix& rho0, const ProtocolSpec& spec, const ControlSet& controls,
                     const TimeGrid& grid, const NoiseChannel& channel);

/// Same dynamics as propagate() keeping only the final state.
DensityMatrix evolve(const DensityMatrix& rho0, const ProtocolSpec& spec, const ControlSet& controls,
                     const TimeGrid& grid, const NoiseChannel& channel);

/// The full dynamical map over [0, T] as a dim^2 x dim^2 superoperator.
ComplexMatrix dynamical_map(const ProtocolSpec& spec, const ControlSet& controls, const TimeGrid& grid,
                            const NoiseChannel& channel);

/// Index of a bit-string basis label such as "011" (qubit 1 leftmost).
Eigen::Index basis_index(std::string_view label, int n_qubits);
std::string basis_label(Eigen::Index index, int n_qubits);

/// <b|rho(t)|b> for each label over the whole trajectory; result[i][n].
std::vector<std::vector<double>> populations(const Trajectory& trajectory,
                                             const std::vector<std::string>& labels);

/// Throws DimensionMismatch unless controls and grid fit the protocol.
void check_compatible(const ProtocolSpec& spec, const ControlSet& controls, const TimeGrid& grid,
                      const NoiseChannel& channel);

}  // namespace adiabopt
