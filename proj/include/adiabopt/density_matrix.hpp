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

#include "adiabopt/linalg.hpp"

namespace adiabopt {

struct StateDiagnostics {
  double trace_error = 0.0;       // |Tr rho - 1|
  double hermiticity = 0.0;       // max |rho - rho^dagger|
  double min_eigenvalue = 0.0;
};

/// A Hermitian, unit-trace, positive semidefinite operator.
///
/// The checked constructor enforces Hermiticity and unit trace to 1e-10 and
/// a smallest eigenvalue of at least -1e-8. Integrators build intermediate
/// states through unchecked() and apply their own drift policy.
class DensityMatrix {
 public:
  static constexpr double kHermitianTol = 1e-10;
  static constexpr double kTraceTol = 1e-10;
  static constexpr double kMinEigenvalue = -1e-8;

  explicit DensityMatrix(ComplexMatrix m);

  static DensityMatrix unchecked(ComplexMatrix m);
  static DensityMatrix pure(const StateVector& psi);
  static DensityMatrix maximally_mixed(Eigen::Index dim);

  Eigen::Index dim() const { return m_.rows(); }
  const ComplexMatrix& matrix() const { return m_; }
  Complex operator()(Eigen::Index i, Eigen::Index j) const { return m_(i, j); }

  double trace() const { return m_.trace().real(); }
  double purity() const;
  StateDiagnostics diagnostics() const;

 private:
  struct Unchecked {};
  DensityMatrix(ComplexMatrix m, Unchecked) : m_(std::move(m)) {}

  ComplexMatrix m_;
};

}  // namespace adiabopt
