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

#include "adiabopt/density_matrix.hpp"

#include <cmath>

#include "adiabopt/error.hpp"

namespace adiabopt {

DensityMatrix::DensityMatrix(ComplexMatrix m) : m_(std::move(m)) {
  if (m_.rows() == 0 || m_.rows() != m_.cols()) {
    throw Error(ErrorKind::DimensionMismatch, "density matrix must be square and non-empty");
  }
  if (!m_.allFinite()) {
    throw Error(ErrorKind::InvariantViolation, "density matrix has non-finite entries");
  }
  if (hermiticity_residual(m_) > kHermitianTol) {
    throw Error(ErrorKind::NotHermitian, "density matrix is not Hermitian");
  }
  const StateDiagnostics d = diagnostics();
  if (d.trace_error > kTraceTol) {
    throw Error(ErrorKind::InvariantViolation, "density matrix trace differs from 1");
  }
  if (d.min_eigenvalue < kMinEigenvalue) {
    throw Error(ErrorKind::NotPositive, "density matrix has a negative eigenvalue");
  }
}

DensityMatrix DensityMatrix::unchecked(ComplexMatrix m) {
  return DensityMatrix(std::move(m), Unchecked{});
}

DensityMatrix DensityMatrix::pure(const StateVector& psi) {
  return DensityMatrix(psi.amplitudes() * psi.amplitudes().adjoint(), Unchecked{});
}

DensityMatrix DensityMatrix::maximally_mixed(Eigen::Index dim) {
  return DensityMatrix(ComplexMatrix::Identity(dim, dim) / static_cast<double>(dim), Unchecked{});
}

double DensityMatrix::purity() const { return (m_ * m_).trace().real(); }

StateDiagnostics DensityMatrix::diagnostics() const {
  StateDiagnostics d;
  d.trace_error = std::abs(m_.trace() - Complex(1.0, 0.0));
  d.hermiticity = hermiticity_residual(m_);
  const ComplexMatrix sym = 0.5 * (m_ + m_.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(sym, Eigen::EigenvaluesOnly);
  d.min_eigenvalue = solver.eigenvalues().minCoeff();
  return d;
}

}  // namespace adiabopt
