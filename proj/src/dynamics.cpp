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

#include "adiabopt/dynamics.hpp"

#include <algorithm>
#include <cmath>

#include "adiabopt/error.hpp"

namespace adiabopt {

namespace {

using namespace std::complex_literals;

constexpr double kTraceDriftLimit = 1e-6;

double vec_trace(const ComplexVector& v, Eigen::Index dim) {
  Complex tr = 0.0;
  for (Eigen::Index i = 0; i < dim; ++i) tr += v[i + i * dim];
  return tr.real();
}

void check_trace(const ComplexVector& v, Eigen::Index dim, int step) {
  const double drift = std::abs(vec_trace(v, dim) - 1.0);
  if (!(drift <= kTraceDriftLimit)) {
    throw Error(ErrorKind::InvariantViolation,
                "trace drifted by " + std::to_string(drift) + " at step " + std::to_string(step));
  }
}

void check_final(const ComplexMatrix& rho) {
  const StateDiagnostics d = DensityMatrix::unchecked(rho).diagnostics();
  if (d.hermiticity > 1e-9 || d.min_eigenvalue < DensityMatrix::kMinEigenvalue) {
    throw Error(ErrorKind::InvariantViolation, "final state is not a valid density matrix");
  }
}

}  // namespace

TimeGrid::TimeGrid(double horizon, int n_steps) : horizon_(horizon), n_steps_(n_steps) {
  if (!(horizon > 0.0) || !std::isfinite(horizon)) {
    throw Error(ErrorKind::ConfigError, "time horizon must be positive");
  }
  if (n_steps < 2) {
    throw Error(ErrorKind::ConfigError, "time grid needs at least two steps");
  }
}

std::vector<double> ControlSet::at(int n) const {
  std::vector<double> out(fields.size());
  for (std::size_t k = 0; k < fields.size(); ++k) out[k] = fields[k][n];
  return out;
}

double ControlSet::max_abs() const {
  double m = 0.0;
  for (const auto& f : fields) {
    for (double x : f) m = std::max(m, std::abs(x));
  }
  return m;
}

Eigen::MatrixXd Trajectory::populations() const {
  if (states.empty()) return {};
  Eigen::MatrixXd out(states.size(), states.front().dim());
  for (std::size_t i = 0; i < states.size(); ++i) {
    out.row(i) = states[i].matrix().diagonal().real().transpose();
  }
  return out;
}

ComplexVector vec(const ComplexMatrix& rho) {
  return Eigen::Map<const ComplexVector>(rho.data(), rho.size());
}

ComplexMatrix unvec(const ComplexVector& v) {
  const auto dim = static_cast<Eigen::Index>(std::llround(std::sqrt(static_cast<double>(v.size()))));
  if (dim * dim != v.size()) {
    throw Error(ErrorKind::DimensionMismatch, "vector length is not a perfect square");
  }
  return Eigen::Map<const ComplexMatrix>(v.data(), dim, dim);
}

ComplexMatrix hamiltonian_superoperator(const ComplexMatrix& h) {
  const ComplexMatrix id = ComplexMatrix::Identity(h.rows(), h.cols());
  return -1i * (kron(id, h) - kron(h.transpose(), id));
}

ComplexMatrix dissipator(const NoiseChannel& channel, Eigen::Index dim) {
  if (channel.lindblad_ops.size() != channel.rates.size()) {
    throw Error(ErrorKind::DimensionMismatch, "one rate per Lindblad operator expected");
  }
  const ComplexMatrix id = ComplexMatrix::Identity(dim, dim);
  ComplexMatrix out = ComplexMatrix::Zero(dim * dim, dim * dim);
  for (std::size_t j = 0; j < channel.lindblad_ops.size(); ++j) {
    const ComplexMatrix& l = channel.lindblad_ops[j];
    if (l.rows() != dim || l.cols() != dim) {
      throw Error(ErrorKind::DimensionMismatch, "Lindblad operator dimension mismatch");
    }
    const double gamma = channel.rates[j];
    if (gamma == 0.0) continue;
    const ComplexMatrix ldl = l.adjoint() * l;
    out += 0.5 * gamma * (2.0 * kron(l.conjugate(), l) - kron(id, ldl) - kron(ldl.transpose(), id));
  }
  return out;
}

ComplexMatrix liouvillian(const ComplexMatrix& h, const NoiseChannel& channel) {
  if (h.rows() != h.cols()) {
    throw Error(ErrorKind::DimensionMismatch, "Hamiltonian must be square");
  }
  return hamiltonian_superoperator(h) + dissipator(channel, h.rows());
}

ComplexMatrix master_equation_rhs(const ComplexMatrix& h, const NoiseChannel& channel,
                                  const ComplexMatrix& rho) {
  ComplexMatrix out = -1i * (h * rho - rho * h);
  for (std::size_t j = 0; j < channel.lindblad_ops.size(); ++j) {
    const ComplexMatrix& l = channel.lindblad_ops[j];
    const ComplexMatrix ldl = l.adjoint() * l;
    out += 0.5 * channel.rates[j] * (2.0 * l * rho * l.adjoint() - ldl * rho - rho * ldl);
  }
  return out;
}

LiouvilleModel::LiouvilleModel(const ProtocolSpec& spec, const NoiseChannel& channel)
    : dim_(spec.dim()), drift_(dissipator(channel, spec.dim())) {
  control_terms_.reserve(spec.hamiltonians.size());
  for (const ComplexMatrix& h : spec.hamiltonians) {
    if (h.rows() != dim_ || h.cols() != dim_) {
      throw Error(ErrorKind::DimensionMismatch, "control Hamiltonian dimension mismatch");
    }
    control_terms_.push_back(hamiltonian_superoperator(h));
  }

  const Eigen::Index d2 = dim_ * dim_;
  std::vector<Eigen::Triplet<Complex>> entries;
  for (Eigen::Index r = 0; r < d2; ++r) {
    for (Eigen::Index c = 0; c < d2; ++c) {
      bool used = drift_(r, c) != Complex{};
      for (const ComplexMatrix& t : control_terms_) used = used || t(r, c) != Complex{};
      if (used) entries.emplace_back(r, c, Complex{1.0});
    }
  }
  pattern_.resize(d2, d2);
  pattern_.setFromTriplets(entries.begin(), entries.end());
  pattern_.makeCompressed();
  adjoint_pattern_ = SparseComplexMatrix(pattern_.adjoint());
  adjoint_pattern_.makeCompressed();

  auto gather = [](const SparseComplexMatrix& pattern, const ComplexMatrix& dense) {
    std::vector<Complex> values;
    values.reserve(pattern.nonZeros());
    for (Eigen::Index r = 0; r < pattern.outerSize(); ++r) {
      for (SparseComplexMatrix::InnerIterator it(pattern, r); it; ++it) {
        values.push_back(dense(it.row(), it.col()));
      }
    }
    return values;
  };
  drift_values_ = gather(pattern_, drift_);
  adjoint_drift_values_ = gather(adjoint_pattern_, drift_.adjoint());
  for (const ComplexMatrix& t : control_terms_) {
    term_values_.push_back(gather(pattern_, t));
    adjoint_term_values_.push_back(gather(adjoint_pattern_, t.adjoint()));
    sparse_terms_.push_back(t.sparseView());
    sparse_terms_.back().makeCompressed();
  }
}

namespace {

void fill_pattern(std::span<const double> eps, const SparseComplexMatrix& pattern,
                  const std::vector<Complex>& drift, const std::vector<std::vector<Complex>>& terms,
                  SparseComplexMatrix& out) {
  if (eps.size() != terms.size()) {
    throw Error(ErrorKind::DimensionMismatch, "control count mismatch");
  }
  // Reuse the caller's storage only when it already carries this pattern.
  if (out.nonZeros() != pattern.nonZeros() || out.rows() != pattern.rows() ||
      out.innerIndexPtr() == nullptr ||
      !std::equal(pattern.innerIndexPtr(), pattern.innerIndexPtr() + pattern.nonZeros(), out.innerIndexPtr())) {
    out = pattern;
  }
  Complex* values = out.valuePtr();
  const std::size_t nnz = drift.size();
  for (std::size_t i = 0; i < nnz; ++i) values[i] = drift[i];
  for (std::size_t k = 0; k < eps.size(); ++k) {
    const double e = eps[k];
    if (e == 0.0) continue;
    const Complex* term = terms[k].data();
    for (std::size_t i = 0; i < nnz; ++i) values[i] += e * term[i];
  }
}

}  // namespace

void LiouvilleModel::assemble_sparse(std::span<const double> eps, SparseComplexMatrix& out) const {
  fill_pattern(eps, pattern_, drift_values_, term_values_, out);
}

void LiouvilleModel::assemble_sparse_adjoint(std::span<const double> eps, SparseComplexMatrix& out) const {
  fill_pattern(eps, adjoint_pattern_, adjoint_drift_values_, adjoint_term_values_, out);
}

void LiouvilleModel::assemble(std::span<const double> eps, ComplexMatrix& out) const {
  if (eps.size() != control_terms_.size()) {
    throw Error(ErrorKind::DimensionMismatch, "control count mismatch");
  }
  out = drift_;
  for (std::size_t k = 0; k < eps.size(); ++k) {
    if (eps[k] != 0.0) out += eps[k] * control_terms_[k];
  }
}

ComplexMatrix LiouvilleModel::generator(std::span<const double> eps) const {
  ComplexMatrix out;
  assemble(eps, out);
  return out;
}

ComplexVector LiouvilleModel::step(const ComplexVector& v, std::span<const double> eps, double dt) const {
  SparseComplexMatrix gen;
  assemble_sparse(eps, gen);
  return expm_multiply(gen, v, dt);
}

ComplexVector LiouvilleModel::step_adjoint(const ComplexVector& v, std::span<const double> eps,
                                           double dt) const {
  SparseComplexMatrix gen;
  assemble_sparse_adjoint(eps, gen);
  return expm_multiply(gen, v, dt);
}

void check_compatible(const ProtocolSpec& spec, const ControlSet& controls, const TimeGrid& grid,
                      const NoiseChannel& channel) {
  if (controls.n_controls() != spec.n_controls()) {
    throw Error(ErrorKind::DimensionMismatch, "number of controls differs from number of Hamiltonians");
  }
  if (controls.n_steps() != grid.n_steps()) {
    throw Error(ErrorKind::DimensionMismatch, "control samples do not match the time grid");
  }
  for (const auto& f : controls.fields) {
    if (static_cast<int>(f.size()) != grid.n_steps()) {
      throw Error(ErrorKind::DimensionMismatch, "ragged control set");
    }
    for (double x : f) {
      if (!std::isfinite(x)) throw Error(ErrorKind::InvariantViolation, "non-finite control sample");
    }
  }
  for (const auto& l : channel.lindblad_ops) {
    if (l.rows() != spec.dim()) {
      throw Error(ErrorKind::DimensionMismatch, "noise channel built for a different qubit count");
    }
  }
}

namespace {

template <typename Visit>
void run_steps(const DensityMatrix& rho0, const ProtocolSpec& spec, const ControlSet& controls,
               const TimeGrid& grid, const NoiseChannel& channel, Visit&& visit) {
  check_compatible(spec, controls, grid, channel);
  if (rho0.dim() != spec.dim()) {
    throw Error(ErrorKind::DimensionMismatch, "initial state dimension mismatch");
  }
  const LiouvilleModel model(spec, channel);
  const double dt = grid.dt();
  SparseComplexMatrix gen;
  std::vector<double> eps(controls.n_controls());
  ComplexVector v = vec(rho0.matrix());
  for (int n = 0; n < grid.n_steps(); ++n) {
    for (int k = 0; k < controls.n_controls(); ++k) eps[k] = controls(k, n);
    model.assemble_sparse(eps, gen);
    v = expm_multiply(gen, v, dt);
    check_trace(v, spec.dim(), n);
    visit(v);
  }
}

}  // namespace

Trajectory propagate(const DensityMatrix& rho0, const ProtocolSpec& spec, const ControlSet& controls,
                     const TimeGrid& grid, const NoiseChannel& channel) {
  Trajectory traj;
  traj.states.reserve(grid.n_steps() + 1);
  traj.states.push_back(rho0);
  run_steps(rho0, spec, controls, grid, channel,
            [&](const ComplexVector& v) { traj.states.push_back(DensityMatrix::unchecked(unvec(v))); });
  check_final(traj.states.back().matrix());
  return traj;
}

DensityMatrix evolve(const DensityMatrix& rho0, const ProtocolSpec& spec, const ControlSet& controls,
                     const TimeGrid& grid, const NoiseChannel& channel) {
  ComplexVector last;
  run_steps(rho0, spec, controls, grid, channel, [&](const ComplexVector& v) { last = v; });
  ComplexMatrix rho = unvec(last);
  check_final(rho);
  return DensityMatrix::unchecked(std::move(rho));
}

ComplexMatrix dynamical_map(const ProtocolSpec& spec, const ControlSet& controls, const TimeGrid& grid,
                            const NoiseChannel& channel) {
  check_compatible(spec, controls, grid, channel);
  const LiouvilleModel model(spec, channel);
  const Eigen::Index d2 = spec.dim() * spec.dim();
  ComplexMatrix total = ComplexMatrix::Identity(d2, d2);
  ComplexMatrix gen;
  std::vector<double> eps(controls.n_controls());
  for (int n = 0; n < grid.n_steps(); ++n) {
    for (int k = 0; k < controls.n_controls(); ++k) eps[k] = controls(k, n);
    model.assemble(eps, gen);
    total = (matrix_exp(gen * grid.dt()) * total).eval();
  }
  return total;
}

Eigen::Index basis_index(std::string_view label, int n_qubits) {
  if (static_cast<int>(label.size()) != n_qubits) {
    throw Error(ErrorKind::BadLabel, "label '" + std::string(label) + "' has the wrong length");
  }
  Eigen::Index index = 0;
  for (char c : label) {
    if (c != '0' && c != '1') {
      throw Error(ErrorKind::BadLabel, "label '" + std::string(label) + "' is not a bit string");
    }
    index = 2 * index + (c - '0');
  }
  return index;
}

std::string basis_label(Eigen::Index index, int n_qubits) {
  std::string out(n_qubits, '0');
  for (int q = n_qubits - 1; q >= 0; --q) {
    out[q] = static_cast<char>('0' + (index & 1));
    index >>= 1;
  }
  return out;
}

std::vector<std::vector<double>> populations(const Trajectory& trajectory,
                                             const std::vector<std::string>& labels) {
  if (trajectory.states.empty()) return std::vector<std::vector<double>>(labels.size());
  const auto dim = trajectory.states.front().dim();
  int n_qubits = 0;
  while ((Eigen::Index{1} << n_qubits) < dim) ++n_qubits;

  std::vector<std::vector<double>> out;
  out.reserve(labels.size());
  for (const std::string& label : labels) {
    const Eigen::Index b = basis_index(label, n_qubits);
    std::vector<double> series;
    series.reserve(trajectory.states.size());
    for (const DensityMatrix& rho : trajectory.states) series.push_back(rho(b, b).real());
    out.push_back(std::move(series));
  }
  return out;
}

}  // namespace adiabopt
