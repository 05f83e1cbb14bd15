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

#include "adiabopt/krotov.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "adiabopt/error.hpp"
#include "adiabopt/fidelity.hpp"

namespace adiabopt {

namespace {

double vec_objective(const ComplexVector& target, const ComplexVector& state) {
  return target.dot(state).real();
}

VecTrajectory forward_states(const LiouvilleModel& model, const DensityMatrix& rho0,
                             const ControlSet& controls, const TimeGrid& grid) {
  VecTrajectory states;
  states.reserve(grid.n_steps() + 1);
  states.push_back(vec(rho0.matrix()));
  SparseComplexMatrix gen;
  std::vector<double> eps(controls.n_controls());
  for (int n = 0; n < grid.n_steps(); ++n) {
    for (int k = 0; k < controls.n_controls(); ++k) eps[k] = controls(k, n);
    model.assemble_sparse(eps, gen);
    states.push_back(expm_multiply(gen, states.back(), grid.dt()));
  }
  return states;
}

VecTrajectory backward_states(const LiouvilleModel& model, const DensityMatrix& target,
                              const ControlSet& controls, const TimeGrid& grid) {
  VecTrajectory costate(grid.n_steps() + 1);
  costate.back() = vec(target.matrix());
  SparseComplexMatrix gen;
  std::vector<double> eps(controls.n_controls());
  for (int n = grid.n_steps() - 1; n >= 0; --n) {
    for (int k = 0; k < controls.n_controls(); ++k) eps[k] = controls(k, n);
    model.assemble_sparse_adjoint(eps, gen);
    costate[n] = expm_multiply(gen, costate[n + 1], grid.dt());
  }
  return costate;
}

// Generator acting on the stacked vector (x_1, .., x_K, rho). The leading
// blocks of exp(A t) (0, .., 0, rho) hold the derivatives of exp(G t) rho
// along each control term L_k.
void assemble_stacked(const LiouvilleModel& model, const SparseComplexMatrix& gen,
                      std::vector<Eigen::Triplet<Complex>>& triplets, SparseComplexMatrix& out) {
  const Eigen::Index d = gen.rows();
  const int n_controls = model.n_controls();
  triplets.clear();
  for (int block = 0; block <= n_controls; ++block) {
    const Eigen::Index offset = block * d;
    for (Eigen::Index r = 0; r < gen.outerSize(); ++r) {
      for (SparseComplexMatrix::InnerIterator it(gen, r); it; ++it) {
        triplets.emplace_back(offset + it.row(), offset + it.col(), it.value());
      }
    }
  }
  for (int k = 0; k < n_controls; ++k) {
    const SparseComplexMatrix& term = model.sparse_control_term(k);
    for (Eigen::Index r = 0; r < term.outerSize(); ++r) {
      for (SparseComplexMatrix::InnerIterator it(term, r); it; ++it) {
        triplets.emplace_back(k * d + it.row(), n_controls * d + it.col(), it.value());
      }
    }
  }
  out.resize((n_controls + 1) * d, (n_controls + 1) * d);
  out.setFromTriplets(triplets.begin(), triplets.end());
}

// Overwrites the generator blocks of a stacked matrix built from a generator
// with the same sparsity pattern. In each stacked row the generator entries
// precede the control-term entries.
void refresh_stacked(const SparseComplexMatrix& gen, int n_controls, SparseComplexMatrix& stacked) {
  const Eigen::Index d = gen.rows();
  const Complex* values = gen.valuePtr();
  const auto* gen_outer = gen.outerIndexPtr();
  const auto* outer = stacked.outerIndexPtr();
  Complex* dest = stacked.valuePtr();
  for (int block = 0; block <= n_controls; ++block) {
    for (Eigen::Index r = 0; r < d; ++r) {
      std::copy(values + gen_outer[r], values + gen_outer[r + 1], dest + outer[block * d + r]);
    }
  }
}

KrotovSweep sweep(const LiouvilleModel& model, const DensityMatrix& rho0, const DensityMatrix& target,
                  const VecTrajectory& costate, const ControlSet& controls, const TimeGrid& grid,
                  const KrotovOptions& options) {
  if (static_cast<int>(costate.size()) != grid.n_steps() + 1) {
    throw Error(ErrorKind::DimensionMismatch, "co-state trajectory does not match the time grid");
  }
  const Eigen::Index dim = model.dim();
  KrotovSweep out;
  out.controls = controls;
  out.states.reserve(grid.n_steps() + 1);
  out.states.push_back(vec(rho0.matrix()));

  const Eigen::Index d = dim * dim;
  const int n_controls = controls.n_controls();
  SparseComplexMatrix gen;
  SparseComplexMatrix stacked;
  std::vector<Eigen::Triplet<Complex>> triplets;
  Eigen::Index gen_nonzeros = 0;
  ComplexVector seed = ComplexVector::Zero((n_controls + 1) * d);
  ComplexVector derivatives;
  std::vector<double> eps(n_controls);
  for (int n = 0; n < grid.n_steps(); ++n) {
    const ComplexVector& rho = out.states.back();
    const double s = options.shape_value(grid.time(n), grid.horizon());
    if (s > 0.0) {
      // Exact derivative of the interval propagator at the current controls,
      // paired with the co-state at the end of the interval.
      for (int k = 0; k < n_controls; ++k) eps[k] = controls(k, n);
      model.assemble_sparse(eps, gen);
      if (stacked.rows() == 0 || gen.nonZeros() != gen_nonzeros) {
        assemble_stacked(model, gen, triplets, stacked);
        gen_nonzeros = gen.nonZeros();
      } else {
        refresh_stacked(gen, n_controls, stacked);
      }
      seed.tail(d) = rho;
      derivatives = expm_multiply(stacked, seed, grid.dt());
    }
    for (int k = 0; k < n_controls; ++k) {
      double value = controls(k, n);
      if (s > 0.0) {
        // Scaled by 1/dt so that it tends to Re <Lambda(t), L_k rho(t)>.
        const double gradient = costate[n + 1].dot(derivatives.segment(k * d, d)).real() / grid.dt();
        const double delta = (s / options.lambda) * gradient;
        if (!std::isfinite(delta)) {
          throw Error(ErrorKind::NonFiniteUpdate,
                      "update for control " + std::to_string(k + 1) + " at step " + std::to_string(n));
        }
        value += delta;
        if (options.amplitude_bound) {
          value = std::clamp(value, -*options.amplitude_bound, *options.amplitude_bound);
        }
        out.max_update = std::max(out.max_update, std::abs(value - controls(k, n)));
      }
      out.controls(k, n) = value;
      eps[k] = value;
    }
    model.assemble_sparse(eps, gen);
    out.states.push_back(expm_multiply(gen, rho, grid.dt()));
  }
  const ComplexVector& last = out.states.back();
  Complex tr = 0.0;
  for (Eigen::Index i = 0; i < dim; ++i) tr += last[i + i * dim];
  if (!(std::abs(tr.real() - 1.0) <= 1e-6)) {
    throw Error(ErrorKind::InvariantViolation, "trace drifted during a Krotov sweep");
  }
  out.objective = vec_objective(vec(target.matrix()), last);
  return out;
}

void check_pure_target(const DensityMatrix& target) {
  if (std::abs(target.purity() - 1.0) > 1e-9) {
    throw Error(ErrorKind::InvariantViolation, "Krotov objective requires a pure target state");
  }
}

}  // namespace

std::string_view to_string(UpdateShape shape) {
  switch (shape) {
    case UpdateShape::Flat:
      return "flat";
    case UpdateShape::SinSquared:
      return "sin2";
    case UpdateShape::Custom:
      break;
  }
  return "custom";
}

std::string_view to_string(OptimizationMode mode) {
  return mode == OptimizationMode::Unitary ? "unitary" : "non_unitary";
}

UpdateShape parse_update_shape(std::string_view text) {
  if (text == "flat") return UpdateShape::Flat;
  if (text == "sin2" || text == "sin_squared") return UpdateShape::SinSquared;
  throw Error(ErrorKind::ConfigError, "unknown update shape '" + std::string(text) + "'");
}

double KrotovOptions::shape_value(double t, double horizon) const {
  if (shape == UpdateShape::Flat) return 1.0;
  if (shape == UpdateShape::Custom) {
    const double s = custom_shape(t, horizon);
    if (!(s >= 0.0 && s <= 1.0)) {
      throw Error(ErrorKind::ConfigError, "update shape must stay inside [0, 1]");
    }
    return s;
  }
  const double s = std::sin(std::numbers::pi * t / horizon);
  return s * s;
}

void KrotovOptions::validate() const {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw Error(ErrorKind::ConfigError, "Krotov lambda must be positive");
  }
  if (max_iters < 0) throw Error(ErrorKind::ConfigError, "max_iters must be non-negative");
  if (!(objective_tol >= 0.0)) throw Error(ErrorKind::ConfigError, "objective_tol must be non-negative");
  if (amplitude_bound && !(*amplitude_bound > 0.0)) {
    throw Error(ErrorKind::ConfigError, "amplitude bound must be positive");
  }
  if (shape == UpdateShape::Custom && !custom_shape) {
    throw Error(ErrorKind::ConfigError, "custom update shape without a function");
  }
}

ControlSet initial_guess(const TimeGrid& grid, int n_controls) {
  if (n_controls < 2 || n_controls > 3) {
    throw Error(ErrorKind::ConfigError, "the adiabatic guess covers two or three controls");
  }
  ControlSet guess(n_controls, grid.n_steps());
  for (int n = 0; n < grid.n_steps(); ++n) {
    const double s = grid.time(n) / grid.horizon();
    guess(0, n) = 1.0 - s;
    guess(1, n) = s;
  }
  return guess;
}

VecTrajectory backward_costate(const ProtocolSpec& spec, const ControlSet& controls,
                               const NoiseChannel& channel, const TimeGrid& grid,
                               const DensityMatrix& target) {
  check_compatible(spec, controls, grid, channel);
  check_pure_target(target);
  return backward_states(LiouvilleModel(spec, channel), target, controls, grid);
}

KrotovSweep krotov_sweep(const DensityMatrix& rho0, const VecTrajectory& costate, const ProtocolSpec& spec,
                         const ControlSet& controls, const NoiseChannel& channel, const TimeGrid& grid,
                         const KrotovOptions& options) {
  options.validate();
  check_compatible(spec, controls, grid, channel);
  const NoiseChannel effective =
      options.mode == OptimizationMode::Unitary ? channel.silenced() : channel;
  return sweep(LiouvilleModel(spec, effective), rho0, spec.target, costate, controls, grid, options);
}

ControlSet krotov_update(const DensityMatrix& rho0, const VecTrajectory& costate, const ProtocolSpec& spec,
                         const ControlSet& controls, const NoiseChannel& channel, const TimeGrid& grid,
                         const KrotovOptions& options) {
  return krotov_sweep(rho0, costate, spec, controls, channel, grid, options).controls;
}

double objective(const ProtocolSpec& spec, const ControlSet& controls, const NoiseChannel& channel,
                 const TimeGrid& grid) {
  return overlap_fidelity(evolve(spec.initial, spec, controls, grid, channel), spec.target);
}

OptimizationResult optimize(const ProtocolSpec& spec, const NoiseChannel& channel, const TimeGrid& grid,
                            const KrotovOptions& options) {
  return optimize(spec, channel, grid, options, initial_guess(grid, spec.n_controls()));
}

OptimizationResult optimize(const ProtocolSpec& spec, const NoiseChannel& channel, const TimeGrid& grid,
                            const KrotovOptions& options, ControlSet guess) {
  options.validate();
  check_compatible(spec, guess, grid, channel);
  check_pure_target(spec.target);

  const NoiseChannel effective =
      options.mode == OptimizationMode::Unitary ? channel.silenced() : channel;
  const LiouvilleModel model(spec, effective);

  OptimizationResult result;
  result.controls = std::move(guess);
  VecTrajectory states = forward_states(model, spec.initial, result.controls, grid);
  const ComplexVector target = vec(spec.target.matrix());
  double j = vec_objective(target, states.back());
  result.objective_trace.push_back(j);

  for (int it = 0; it < options.max_iters; ++it) {
    const VecTrajectory costate = backward_states(model, spec.target, result.controls, grid);
    KrotovSweep next = sweep(model, spec.initial, spec.target, costate, result.controls, grid, options);
    result.controls = std::move(next.controls);
    states = std::move(next.states);
    result.objective_trace.push_back(next.objective);
    result.iterations_used = it + 1;
    const double change = std::abs(next.objective - j);
    j = next.objective;
    if (change < options.objective_tol) {
      result.converged = true;
      break;
    }
  }

  const DensityMatrix final_state = evolve(spec.initial, spec, result.controls, grid, channel);
  result.final_fidelity = uhlmann_fidelity(final_state, spec.target);
  return result;
}

}  // namespace adiabopt
