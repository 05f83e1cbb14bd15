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

#include <functional>
#include <optional>
#include <string_view>
#include <vector>

#include "adiabopt/density_matrix.hpp"
#include "adiabopt/dynamics.hpp"
#include "adiabopt/model.hpp"

namespace adiabopt {

/// Flat is S = 1, SinSquared is sin^2(pi t / T) and Custom calls
/// KrotovOptions::custom_shape.
enum class UpdateShape { Flat, SinSquared, Custom };
enum class OptimizationMode { Unitary, NonUnitary };

std::string_view to_string(UpdateShape shape);
std::string_view to_string(OptimizationMode mode);
UpdateShape parse_update_shape(std::string_view text);

struct KrotovOptions {
  double lambda = 1.0;
  UpdateShape shape = UpdateShape::SinSquared;
  int max_iters = 500;
  double objective_tol = 1e-6;
  std::optional<double> amplitude_bound;
  OptimizationMode mode = OptimizationMode::NonUnitary;
  std::function<double(double t, double horizon)> custom_shape;

  /// S(t) in [0, 1]. A custom shape leaving that range is a ConfigError.
  double shape_value(double t, double horizon) const;
  /// Throws ConfigError on a non-positive lambda or similar.
  void validate() const;
};

struct OptimizationResult {
  ControlSet controls;
  std::vector<double> objective_trace;  // entry 0 is the guess, then one per iteration
  double final_fidelity = 0.0;          // Uhlmann fidelity under the caller's channel
  int iterations_used = 0;
  bool converged = false;
};

/// eps_1 = 1 - t/T, eps_2 = t/T, any further control zero.
ControlSet initial_guess(const TimeGrid& grid, int n_controls);

/// Vectorized states on every grid point, t_0 .. t_N.
using VecTrajectory = std::vector<ComplexVector>;

/// Co-state Lambda(t) from Lambda(T) = target under the adjoint generator.
/// In unitary mode pass a silenced channel.
VecTrajectory backward_costate(const ProtocolSpec& spec, const ControlSet& controls,
                               const NoiseChannel& channel, const TimeGrid& grid,
                               const DensityMatrix& target);

/// Result of one sequential sweep: updated controls and the forward
/// trajectory they produce.
struct KrotovSweep {
  ControlSet controls;
  VecTrajectory states;
  double objective = 0.0;  // Tr(chi rho(T)) for the new controls
  double max_update = 0.0;
};

/// First-order Krotov sweep. Interval by interval, each control moves by
/// (S(t_n)/lambda) Im Tr(Lambda_n^dag [H_k, rho_n]) where rho_n is already
/// evolved under the updated earlier intervals.
KrotovSweep krotov_sweep(const DensityMatrix& rho0, const VecTrajectory& costate, const ProtocolSpec& spec,
                         const ControlSet& controls, const NoiseChannel& channel, const TimeGrid& grid,
                         const KrotovOptions& options);

/// krotov_sweep() returning only the new controls.
ControlSet krotov_update(const DensityMatrix& rho0, const VecTrajectory& costate, const ProtocolSpec& spec,
                         const ControlSet& controls, const NoiseChannel& channel, const TimeGrid& grid,
                         const KrotovOptions& options);

/// Tr(target rho(T)) for the given controls.
double objective(const ProtocolSpec& spec, const ControlSet& controls, const NoiseChannel& channel,
                 const TimeGrid& grid);

/// Full optimization from initial_guess(). In unitary mode the channel rates
/// are ignored while optimizing; final_fidelity always uses `channel`.
OptimizationResult optimize(const ProtocolSpec& spec, const NoiseChannel& channel, const TimeGrid& grid,
                            const KrotovOptions& options);

/// As above, starting from the given controls.
OptimizationResult optimize(const ProtocolSpec& spec, const NoiseChannel& channel, const TimeGrid& grid,
                            const KrotovOptions& options, ControlSet guess);

}  // namespace adiabopt
