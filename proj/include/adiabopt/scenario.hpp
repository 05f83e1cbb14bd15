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
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "adiabopt/dynamics.hpp"
#include "adiabopt/krotov.hpp"
#include "adiabopt/model.hpp"

namespace adiabopt {

enum class ProtocolKind { Aep, Atp2, Atp3 };

std::string_view to_string(ProtocolKind kind);
ProtocolKind parse_protocol(std::string_view text);

/// Everything a run needs, after config file and command-line overrides.
struct ScenarioConfig {
  ProtocolKind protocol = ProtocolKind::Aep;
  std::optional<LocalField> local_field;
  NoiseKind noise = NoiseKind::Dephasing;
  std::vector<double> gamma_values;

  double horizon = 1.0;
  int n_steps = 100;

  double lambda = 1.0;
  UpdateShape shape = UpdateShape::SinSquared;
  int max_iters = 500;
  double objective_tol = 1e-6;
  std::optional<double> amplitude_bound;
  /// Constant starting value of eps_3 for three-control protocols.
  double extra_field_guess = 0.0;

  std::uint64_t seed = 0;
  int samples = 2000;
  bool unitary_only = false;
  std::string output_dir = ".";

  /// Throws ConfigError when a value is out of range or inconsistent.
  void validate() const;

  ProtocolSpec protocol_spec() const;
  TimeGrid grid() const;
  NoiseChannel channel(double gamma) const;
  KrotovOptions krotov_options(OptimizationMode mode) const;
  /// Adiabatic ramp plus the constant extra-field start.
  ControlSet initial_controls() const;

  /// Canonical "key = value" listing of every field; the config hash is
  /// taken over this text.
  std::string canonical() const;
  std::uint64_t hash() const;
  /// e.g. "atp3-z3_dephasing".
  std::string tag() const;
};

/// Tuned defaults for one protocol. Eleven gamma points from 0 to 0.1.
ScenarioConfig default_config(ProtocolKind protocol);

/// Reads an INI-style file with [scenario], [grid], [krotov] and
/// [monte_carlo] sections. Keys that are absent keep the protocol defaults;
/// unknown keys are a ConfigError.
ScenarioConfig parse_config(std::istream& in);
ScenarioConfig load_config(const std::filesystem::path& path);

/// Every key accepted by parse_config() with a one-line description.
std::vector<std::pair<std::string, std::string>> config_keys();

/// "0, 0.05, 0.1" or "start:stop:count" (inclusive, evenly spaced).
std::vector<double> parse_gamma_list(std::string_view text);

// ---------------------------------------------------------------------------
// Runs

struct SweepRecord {
  double gamma = 0.0;
  double fidelity_unitary_opt = 0.0;
  std::optional<double> fidelity_nonunitary_opt;
  int iterations_unitary = 0;
  std::optional<int> iterations_nonunitary;
  bool converged = true;
  double wall_time = 0.0;  // seconds; reported on the console only
};

struct SweepResult {
  std::vector<SweepRecord> records;
  OptimizationResult unitary;  // the single gamma-independent optimization
};

/// For each gamma: the unitary-mode fields re-evaluated under noise, and a
/// non-unitary optimization at that gamma (skipped when unitary_only).
SweepResult run_sweep(const ScenarioConfig& config);

struct LocalFieldRecord {
  LocalField field;
  double fidelity = 0.0;
  int iterations = 0;
  bool converged = true;
};

/// Optimizes atp3 for all nine local fields at one gamma. Sorted by
/// fidelity, best first.
std::vector<LocalFieldRecord> run_local_field_scan(const ScenarioConfig& config, double gamma);

struct PopulationRecord {
  double gamma = 0.0;
  OptimizationMode mode = OptimizationMode::NonUnitary;
  std::vector<double> t_over_t;
  std::vector<std::string> labels;            // basis states above the threshold
  std::vector<std::vector<double>> series;    // series[label][time]
  ControlSet controls;
  OptimizationResult optimization;
};

/// Optimizes (unitary mode when unitary_only) and records populations of
/// every basis state whose population exceeds 0.01 at some grid point.
PopulationRecord run_populations(const ScenarioConfig& config, double gamma);

struct MeanFidelityRecord {
  double gamma = 0.0;
  double mean_fidelity = 0.0;
  std::optional<double> baseline_mean;  // atp2 with the same settings, atp3 runs only
  std::optional<double> relative_gain;  // (mean - baseline) / baseline
  bool converged = true;
};

/// Controls are optimized for the canonical input at each gamma, then the
/// teleportation fidelity is averaged over n_samples random inputs.
std::vector<MeanFidelityRecord> run_mean_fidelity(const ScenarioConfig& config, int n_samples);

// ---------------------------------------------------------------------------
// Output

/// "%.17g"; always round-trips a double.
std::string format_double(double value);

/// Comment lines ("# key = value") describing the run.
std::string metadata_header(const ScenarioConfig& config, std::string_view kind);

std::string sweep_csv(const ScenarioConfig& config, const std::vector<SweepRecord>& records);
std::string local_field_csv(const ScenarioConfig& config, double gamma,
                            const std::vector<LocalFieldRecord>& records);
std::string populations_csv(const ScenarioConfig& config, const PopulationRecord& record);
std::string controls_csv(const ScenarioConfig& config, const ControlSet& controls);
std::string mean_fidelity_csv(const ScenarioConfig& config, int n_samples,
                              const std::vector<MeanFidelityRecord>& records);

/// "<kind>_<tag>[_g<gamma>].csv", e.g. "populations_aep_dephasing_g0.1.csv".
std::string output_filename(std::string_view kind, const ScenarioConfig& config,
                            std::optional<double> gamma = std::nullopt);

/// Writes `content` to output_dir/name, creating the directory.
std::filesystem::path write_output(const ScenarioConfig& config, const std::string& name,
                                   const std::string& content);

/// Runs tasks 0..n-1 on up to `workers` threads (0 picks the hardware
/// concurrency). Results land in task order. The first exception thrown by
/// any task is rethrown after all workers stop.
void run_tasks(int n_tasks, const std::function<void(int)>& task, unsigned workers = 0);

}  // namespace adiabopt
