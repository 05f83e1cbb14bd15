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

#include <complex>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

namespace adiabopt {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using SparseComplexMatrix = Eigen::SparseMatrix<Complex, Eigen::RowMajor>;

/// A normalized ket. Construction rescales the amplitudes to unit norm.
class StateVector {
 public:
  explicit StateVector(ComplexVector amplitudes);

  Eigen::Index dim() const { return amplitudes_.size(); }
  const ComplexVector& amplitudes() const { return amplitudes_; }
  Complex operator[](Eigen::Index i) const { return amplitudes_[i]; }

  /// Computational basis state |index> of the given dimension.
  static StateVector basis(Eigen::Index dim, Eigen::Index index);

 private:
  ComplexVector amplitudes_;
};

struct EigenDecomposition {
  RealVector eigenvalues;     // ascending
  ComplexMatrix eigenvectors; // columns, unitary
};

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// Largest |m - m^dagger| entry; zero for exactly Hermitian input.
double hermiticity_residual(const ComplexMatrix& m);

bool all_finite(const ComplexMatrix& m);

/// Throws NotHermitian when m is not square or deviates from its adjoint by
/// more than 1e-10.
EigenDecomposition hermitian_eig(const ComplexMatrix& m);

/// exp(m) by scaling and squaring around a fixed degree-18 Taylor polynomial.
ComplexMatrix matrix_exp(const ComplexMatrix& m);

/// exp(t * a) * v without forming the exponential. The interval is split into
/// substeps with ||a * t / s||_1 <= 2 and each substep is a Taylor series
/// summed to round-off.
ComplexVector expm_multiply(const ComplexMatrix& a, const ComplexVector& v, double t);

/// Same as expm_multiply(a.adjoint(), v, t) without materializing the adjoint.
ComplexVector expm_adjoint_multiply(const ComplexMatrix& a, const ComplexVector& v, double t);

ComplexVector expm_multiply(const SparseComplexMatrix& a, const ComplexVector& v, double t);
ComplexVector expm_adjoint_multiply(const SparseComplexMatrix& a, const ComplexVector& v, double t);

/// Principal square root of a positive semidefinite Hermitian matrix.
/// Eigenvalues above -1e-6 are clamped to zero; anything lower is NotPositive.
ComplexMatrix hermitian_sqrt(const ComplexMatrix& m);

}  // namespace adiabopt
