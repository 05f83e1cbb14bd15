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

#include "adiabopt/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "adiabopt/error.hpp"

namespace adiabopt {

namespace {

constexpr double kHermitianTol = 1e-10;
constexpr double kSqrtClamp = -1e-6;
constexpr int kExpTaylorDegree = 18;
constexpr double kExpScaledNorm = 0.5;
constexpr double kActionScaledNorm = 2.0;

double norm1(const ComplexMatrix& m) { return m.cwiseAbs().colwise().sum().maxCoeff(); }

double norm_inf(const ComplexMatrix& m) { return m.cwiseAbs().rowwise().sum().maxCoeff(); }

// Returns {max column sum, max row sum} of |a|.
std::pair<double, double> sparse_norms(const SparseComplexMatrix& a) {
  RealVector cols = RealVector::Zero(a.cols());
  double row_max = 0.0;
  for (Eigen::Index r = 0; r < a.outerSize(); ++r) {
    double row = 0.0;
    for (SparseComplexMatrix::InnerIterator it(a, r); it; ++it) {
      const double v = std::sqrt(std::norm(it.value()));
      row += v;
      cols[it.col()] += v;
    }
    row_max = std::max(row_max, row);
  }
  return {a.cols() > 0 ? cols.maxCoeff() : 0.0, row_max};
}

// Shared Taylor-series stepper; `apply` computes a*x or a^dagger*x.
template <typename Apply>
ComplexVector taylor_action(Apply&& apply, double norm, const ComplexVector& v, double t) {
  const double scaled = norm * std::abs(t);
  const int substeps = std::max(1, static_cast<int>(std::ceil(scaled / kActionScaledNorm)));
  const double h = t / substeps;

  ComplexVector result = v;
  ComplexVector term(v.size());
  ComplexVector next(v.size());
  for (int s = 0; s < substeps; ++s) {
    term = result;
    for (int k = 1; k <= 60; ++k) {
      apply(next, term);
      term = next * (h / k);
      result += term;
      if (term.squaredNorm() <= 1e-34 * result.squaredNorm()) break;
    }
  }
  return result;
}

}  // namespace

StateVector::StateVector(ComplexVector amplitudes) : amplitudes_(std::move(amplitudes)) {
  const double n = amplitudes_.norm();
  if (amplitudes_.size() == 0 || !(n > 0.0) || !std::isfinite(n)) {
    throw Error(ErrorKind::InvariantViolation, "state vector must have a finite nonzero norm");
  }
  amplitudes_ /= n;
}

StateVector StateVector::basis(Eigen::Index dim, Eigen::Index index) {
  if (index < 0 || index >= dim) {
    throw Error(ErrorKind::IndexOutOfRange, "basis index outside the Hilbert space");
  }
  ComplexVector v = ComplexVector::Zero(dim);
  v[index] = 1.0;
  return StateVector(std::move(v));
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

double hermiticity_residual(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) return std::numeric_limits<double>::infinity();
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

bool all_finite(const ComplexMatrix& m) { return m.allFinite(); }

EigenDecomposition hermitian_eig(const ComplexMatrix& m) {
  if (m.rows() != m.cols() || hermiticity_residual(m) > kHermitianTol) {
    throw Error(ErrorKind::NotHermitian, "hermitian_eig requires a square Hermitian matrix");
  }
  const ComplexMatrix sym = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(sym);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorKind::NotHermitian, "eigensolver did not converge");
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

ComplexMatrix matrix_exp(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) {
    throw Error(ErrorKind::DimensionMismatch, "matrix_exp requires a square matrix");
  }
  const double norm = norm1(m);
  int squarings = 0;
  if (norm > kExpScaledNorm) {
    squarings = static_cast<int>(std::ceil(std::log2(norm / kExpScaledNorm)));
  }
  const ComplexMatrix a = m / std::ldexp(1.0, squarings);
  const auto n = m.rows();

  // Horner evaluation of sum_{k<=18} a^k / k!.
  ComplexMatrix result = ComplexMatrix::Identity(n, n);
  for (int k = kExpTaylorDegree; k >= 1; --k) {
    ComplexMatrix scaled = (a * result) / static_cast<double>(k);
    scaled.diagonal().array() += 1.0;
    result = std::move(scaled);
  }
  for (int s = 0; s < squarings; ++s) {
    result = (result * result).eval();
  }
  return result;
}

ComplexVector expm_multiply(const ComplexMatrix& a, const ComplexVector& v, double t) {
  if (a.rows() != a.cols() || a.cols() != v.size()) {
    throw Error(ErrorKind::DimensionMismatch, "expm_multiply operand sizes disagree");
  }
  return taylor_action([&](ComplexVector& out, const ComplexVector& x) { out.noalias() = a * x; },
                       norm1(a), v, t);
}

ComplexVector expm_adjoint_multiply(const ComplexMatrix& a, const ComplexVector& v, double t) {
  if (a.rows() != a.cols() || a.rows() != v.size()) {
    throw Error(ErrorKind::DimensionMismatch, "expm_adjoint_multiply operand sizes disagree");
  }
  return taylor_action(
      [&](ComplexVector& out, const ComplexVector& x) { out.noalias() = a.adjoint() * x; },
      norm_inf(a), v, t);
}

ComplexVector expm_multiply(const SparseComplexMatrix& a, const ComplexVector& v, double t) {
  if (a.rows() != a.cols() || a.cols() != v.size()) {
    throw Error(ErrorKind::DimensionMismatch, "expm_multiply operand sizes disagree");
  }
  return taylor_action([&](ComplexVector& out, const ComplexVector& x) { out.noalias() = a * x; },
                       sparse_norms(a).first, v, t);
}

ComplexVector expm_adjoint_multiply(const SparseComplexMatrix& a, const ComplexVector& v, double t) {
  if (a.rows() != a.cols() || a.rows() != v.size()) {
    throw Error(ErrorKind::DimensionMismatch, "expm_adjoint_multiply operand sizes disagree");
  }
  return taylor_action(
      [&](ComplexVector& out, const ComplexVector& x) { out.noalias() = a.adjoint() * x; },
      sparse_norms(a).second, v, t);
}

ComplexMatrix hermitian_sqrt(const ComplexMatrix& m) {
  const EigenDecomposition eig = hermitian_eig(m);
  RealVector roots(eig.eigenvalues.size());
  // Eigenvalues at the round-off level of the decomposition count as zero;
  // their square roots would otherwise be amplified to ~1e-8.
  const double noise_floor = static_cast<double>(roots.size()) * std::numeric_limits<double>::epsilon() *
                             eig.eigenvalues.cwiseAbs().maxCoeff();
  for (Eigen::Index i = 0; i < roots.size(); ++i) {
    const double lambda = eig.eigenvalues[i];
    if (lambda < kSqrtClamp) {
      throw Error(ErrorKind::NotPositive, "matrix has a negative eigenvalue");
    }
    roots[i] = lambda <= noise_floor ? 0.0 : std::sqrt(lambda);
  }
  return eig.eigenvectors * roots.asDiagonal() * eig.eigenvectors.adjoint();
}

}  // namespace adiabopt
