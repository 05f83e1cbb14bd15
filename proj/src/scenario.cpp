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

#include "adiabopt/scenario.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "adiabopt/error.hpp"
#include "adiabopt/fidelity.hpp"

namespace adiabopt {

namespace {

constexpr double kPopulationThreshold = 0.01;

[[noreturn]] void config_error(const std::string& what) { throw Error(ErrorKind::ConfigError, what); }

std::string trim(std::string_view text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = text.find_last_not_of(" \t\r\n");
  return std::string(text.substr(first, last - first + 1));
}

double parse_double(std::string_view key, std::string_view raw) {
  const std::string text = trim(raw);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    config_error("'" + std::string(key) + "' expects a number, got '" + text + "'");
  }
  return value;
}

template <typename Int>
Int parse_integer(std::string_view key, std::string_view raw) {
  const std::string text = trim(raw);
  Int value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    config_error("'" + std::string(key) + "' expects an integer, got '" + text + "'");
  }
  return value;
}

bool parse_bool(std::string_view key, std::string_view raw) {
  const std::string text = trim(raw);
  if (text == "true" || text == "yes" || text == "1") return true;
  if (text == "false" || text == "no" || text == "0") return false;
  config_error("'" + std::string(key) + "' expects true or false, got '" + text + "'");
}

std::string short_double(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", value);
  return buf;
}

std::string bool_text(bool value) { return value ? "true" : "false"; }

std::uint64_t fnv1a(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

OptimizationResult optimize_scenario(const ScenarioConfig& config, OptimizationMode mode, double gamma) {
  return optimize(config.protocol_spec(), config.channel(gamma), config.grid(), config.krotov_options(mode),
                  config.initial_controls());
}

OptimizationMode run_mode(const ScenarioConfig& config) {
  return config.unitary_only ? OptimizationMode::Unitary : OptimizationMode::NonUnitary;
}

}  // namespace

std::string_view to_string(ProtocolKind kind) {
  switch (kind) {
    case ProtocolKind::Aep:
      return "aep";
    case ProtocolKind::Atp2:
      return "atp2";
    case ProtocolKind::Atp3:
      break;
  }
  return "atp3";
}

ProtocolKind parse_protocol(std::string_view text) {
  if (text == "aep") return ProtocolKind::Aep;
  if (text == "atp2") return ProtocolKind::Atp2;
  if (text == "atp3") return ProtocolKind::Atp3;
  config_error("unknown protocol '" + std::string(text) + "' (expected aep, atp2 or atp3)");
}

ScenarioConfig default_config(ProtocolKind protocol) {
  ScenarioConfig c;
  c.protocol = protocol;
  for (int i = 0; i <= 10; ++i) c.gamma_values.push_back(0.01 * i);
  c.shape = UpdateShape::SinSquared;
  c.seed = 2024;
  c.samples = 2000;
  if (protocol == ProtocolKind::Aep) {
    c.horizon = 5.0;
    c.n_steps = 500;
    c.lambda = 0.1;
    c.max_iters = 500;
    c.objective_tol = 1e-7;
  } else {
    c.horizon = 1.0;
    c.n_steps = 100;
    c.lambda = 0.05;
    c.max_iters = 10000;
    c.objective_tol = 1e-9;
  }
  if (protocol == ProtocolKind::Atp3) {
    c.local_field = LocalField{Pauli::Z, 3};
    c.extra_field_guess = 1.0;
  }
  return c;
}

void ScenarioConfig::validate() const {
  if (protocol == ProtocolKind::Atp3 && !local_field) config_error("atp3 requires a local_field");
  if (protocol != ProtocolKind::Atp3 && local_field) {
    config_error("local_field is only meaningful for atp3");
  }
  if (gamma_values.empty()) config_error("gamma list is empty");
  for (double g : gamma_values) {
    if (!(g >= 0.0) || !std::isfinite(g)) config_error("gamma values must be finite and non-negative");
  }
  if (!(horizon > 0.0) || !std::isfinite(horizon)) config_error("grid horizon must be positive");
  if (n_steps < 2) config_error("grid needs at least two steps");
  if (samples < 1) config_error("samples must be at least 1");
  if (!std::isfinite(extra_field_guess)) config_error("extra_field_guess must be finite");
  krotov_options(OptimizationMode::NonUnitary).validate();
}

ProtocolSpec ScenarioConfig::protocol_spec() const {
  switch (protocol) {
    case ProtocolKind::Aep:
      return build_aep();
    case ProtocolKind::Atp2:
      return build_atp();
    case ProtocolKind::Atp3:
      break;
  }
  if (!local_field) config_error("atp3 requires a local_field");
  return build_atp(*local_field);
}

TimeGrid ScenarioConfig::grid() const { return TimeGrid(horizon, n_steps); }

NoiseChannel ScenarioConfig::channel(double gamma) const {
  return build_channel(noise, protocol == ProtocolKind::Aep ? 2 : 3, gamma);
}

KrotovOptions ScenarioConfig::krotov_options(OptimizationMode mode) const {
  KrotovOptions o;
  o.lambda = lambda;
  o.shape = shape;
  o.max_iters = max_iters;
  o.objective_tol = objective_tol;
  o.amplitude_bound = amplitude_bound;
  o.mode = mode;
  return o;
}

ControlSet ScenarioConfig::initial_controls() const {
  const int n_controls = protocol == ProtocolKind::Atp3 ? 3 : 2;
  ControlSet guess = initial_guess(grid(), n_controls);
  if (n_controls == 3) {
    for (int n = 0; n < n_steps; ++n) guess(2, n) = extra_field_guess;
  }
  return guess;
}

std::string ScenarioConfig::canonical() const {
  std::ostringstream out;
  out << "protocol = " << to_string(protocol) << '\n';
  out << "local_field = " << (local_field ? local_field->label() : "none") << '\n';
  out << "noise = " << to_string(noise) << '\n';
  out << "gamma =";
  for (std::size_t i = 0; i < gamma_values.size(); ++i) {
    out << (i == 0 ? " " : ", ") << format_double(gamma_values[i]);
  }
  out << '\n';
  out << "horizon = " << format_double(horizon) << '\n';
  out << "steps = " << n_steps << '\n';
  out << "lambda = " << format_double(lambda) << '\n';
  out << "shape = " << to_string(shape) << '\n';
  out << "max_iters = " << max_iters << '\n';
  out << "objective_tol = " << format_double(objective_tol) << '\n';
  out << "amplitude_bound = " << (amplitude_bound ? format_double(*amplitude_bound) : "none") << '\n';
  out << "extra_field_guess = " << format_double(extra_field_guess) << '\n';
  out << "seed = " << seed << '\n';
  out << "samples = " << samples << '\n';
  out << "unitary_only = " << bool_text(unitary_only) << '\n';
  return out.str();
}

std::uint64_t ScenarioConfig::hash() const { return fnv1a(canonical()); }

std::string ScenarioConfig::tag() const {
  std::string t(to_string(protocol));
  if (protocol == ProtocolKind::Atp3 && local_field) t += "-" + local_field->label();
  t += "_";
  t += to_string(noise);
  return t;
}

std::vector<double> parse_gamma_list(std::string_view text) {
  const std::string body = trim(text);
  if (body.empty()) config_error("empty gamma list");
  std::vector<double> out;
  if (body.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(body);
    for (std::string part; std::getline(ss, part, ':');) parts.push_back(part);
    if (parts.size() != 3) config_error("gamma range must read start:stop:count");
    const double start = parse_double("gamma", parts[0]);
    const double stop = parse_double("gamma", parts[1]);
    const int count = parse_integer<int>("gamma", parts[2]);
    if (count < 1) config_error("gamma range needs a positive count");
    if (count == 1) return {start};
    for (int i = 0; i < count; ++i) out.push_back(start + (stop - start) * i / (count - 1));
    return out;
  }
  std::stringstream ss(body);
  for (std::string part; std::getline(ss, part, ',');) out.push_back(parse_double("gamma", part));
  return out;
}

std::vector<std::pair<std::string, std::string>> config_keys() {
  return {
      {"scenario.protocol", "aep | atp2 | atp3"},
      {"scenario.local_field", "atp3 only: x1 .. z3 (direction then qubit)"},
      {"scenario.noise", "dephasing | amplitude_damping"},
      {"scenario.gamma", "comma list or start:stop:count of decay rates"},
      {"scenario.seed", "random seed for the Monte-Carlo input states"},
      {"scenario.output_dir", "directory receiving the CSV files"},
      {"scenario.unitary_only", "true to optimize with the noise switched off"},
      {"grid.horizon", "final time T in units of 1/omega0"},
      {"grid.steps", "number of piecewise-constant intervals"},
      {"krotov.lambda", "step weight; smaller is more aggressive"},
      {"krotov.shape", "flat | sin2"},
      {"krotov.max_iters", "iteration budget"},
      {"krotov.objective_tol", "stop once |J(i+1) - J(i)| falls below this"},
      {"krotov.amplitude_bound", "clamp |eps_k| to this value, or none"},
      {"krotov.extra_field_guess", "constant starting value of eps_3"},
      {"monte_carlo.samples", "random inputs per mean-fidelity point"},
  };
}

ScenarioConfig parse_config(std::istream& in) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  try {
    pt::ini_parser::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    config_error(std::string("malformed config: ") + e.what());
  }

  const auto keys = config_keys();
  for (const auto& [section, entries] : tree) {
    if (entries.empty() && !entries.data().empty()) {
      config_error("key '" + section + "' must live inside a section");
    }
    for (const auto& [key, value] : entries) {
      const std::string full = section + "." + key;
      const bool known = std::any_of(keys.begin(), keys.end(), [&](const auto& k) { return k.first == full; });
      if (!known) config_error("unknown config key '" + full + "'");
    }
  }

  auto get = [&](const std::string& path) -> std::optional<std::string> {
    if (auto v = tree.get_optional<std::string>(pt::ptree::path_type(path, '.'))) return trim(*v);
    return std::nullopt;
  };

  const auto protocol_text = get("scenario.protocol");
  ScenarioConfig c = default_config(protocol_text ? parse_protocol(*protocol_text) : ProtocolKind::Aep);
  if (auto v = get("scenario.local_field")) {
    if (*v == "none") {
      c.local_field.reset();
    } else {
      c.local_field = parse_local_field(*v);
    }
  }
  if (auto v = get("scenario.noise")) {
    try {
      c.noise = parse_noise_kind(*v);
    } catch (const Error& e) {
      config_error(e.what());
    }
  }
  if (auto v = get("scenario.gamma")) c.gamma_values = parse_gamma_list(*v);
  if (auto v = get("scenario.seed")) c.seed = parse_integer<std::uint64_t>("scenario.seed", *v);
  if (auto v = get("scenario.output_dir")) c.output_dir = *v;
  if (auto v = get("scenario.unitary_only")) c.unitary_only = parse_bool("scenario.unitary_only", *v);
  if (auto v = get("grid.horizon")) c.horizon = parse_double("grid.horizon", *v);
  if (auto v = get("grid.steps")) c.n_steps = parse_integer<int>("grid.steps", *v);
  if (auto v = get("krotov.lambda")) c.lambda = parse_double("krotov.lambda", *v);
  if (auto v = get("krotov.shape")) c.shape = parse_update_shape(*v);
  if (auto v = get("krotov.max_iters")) c.max_iters = parse_integer<int>("krotov.max_iters", *v);
  if (auto v = get("krotov.objective_tol")) c.objective_tol = parse_double("krotov.objective_tol", *v);
  if (auto v = get("krotov.amplitude_bound")) {
    if (*v == "none") {
      c.amplitude_bound.reset();
    } else {
      c.amplitude_bound = parse_double("krotov.amplitude_bound", *v);
    }
  }
  if (auto v = get("krotov.extra_field_guess")) {
    c.extra_field_guess = parse_double("krotov.extra_field_guess", *v);
  }
  if (auto v = get("monte_carlo.samples")) c.samples = parse_integer<int>("monte_carlo.samples", *v);
  c.validate();
  return c;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) config_error("cannot open config file '" + path.string() + "'");
  return parse_config(in);
}

// ---------------------------------------------------------------------------

void run_tasks(int n_tasks, const std::function<void(int)>& task, unsigned workers) {
  if (n_tasks <= 0) return;
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<unsigned>(workers, static_cast<unsigned>(n_tasks));

  std::atomic<int> next{0};
  std::mutex guard;
  int failed_index = n_tasks;
  std::exception_ptr failure;
  auto worker = [&] {
    for (int i = next++; i < n_tasks; i = next++) {
      try {
        task(i);
      } catch (...) {
        const std::lock_guard<std::mutex> lock(guard);
        // Report the lowest failing task so the outcome does not depend on
        // thread scheduling.
        if (i < failed_index) {
          failed_index = i;
          failure = std::current_exception();
        }
      }
    }
  };
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
}

SweepResult run_sweep(const ScenarioConfig& config) {
  config.validate();
  const ProtocolSpec spec = config.protocol_spec();
  const TimeGrid grid = config.grid();
  const auto n = static_cast<int>(config.gamma_values.size());

  SweepResult result;
  result.unitary = optimize_scenario(config, OptimizationMode::Unitary, 0.0);
  result.records.resize(n);
  run_tasks(n, [&](int i) {
    const auto start = std::chrono::steady_clock::now();
    const double gamma = config.gamma_values[i];
    SweepRecord& rec = result.records[i];
    rec.gamma = gamma;
    const NoiseChannel channel = config.channel(gamma);
    rec.fidelity_unitary_opt =
        uhlmann_fidelity(evolve(spec.initial, spec, result.unitary.controls, grid, channel), spec.target);
    rec.iterations_unitary = result.unitary.iterations_used;
    rec.converged = result.unitary.converged;
    if (!config.unitary_only) {
      const OptimizationResult opt = optimize_scenario(config, OptimizationMode::NonUnitary, gamma);
      rec.fidelity_nonunitary_opt = opt.final_fidelity;
      rec.iterations_nonunitary = opt.iterations_used;
      rec.converged = rec.converged && opt.converged;
    }
    rec.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  });
  return result;
}

std::vector<LocalFieldRecord> run_local_field_scan(const ScenarioConfig& config, double gamma) {
  if (!(gamma >= 0.0)) config_error("gamma must be non-negative");
  const std::vector<LocalField> fields = all_local_fields();
  std::vector<LocalFieldRecord> records(fields.size());
  run_tasks(static_cast<int>(fields.size()), [&](int i) {
    ScenarioConfig c = config;
    c.protocol = ProtocolKind::Atp3;
    c.local_field = fields[i];
    c.validate();
    const OptimizationResult opt = optimize_scenario(c, run_mode(c), gamma);
    records[i] = {fields[i], opt.final_fidelity, opt.iterations_used, opt.converged};
  });
  std::stable_sort(records.begin(), records.end(),
                   [](const LocalFieldRecord& a, const LocalFieldRecord& b) { return a.fidelity > b.fidelity; });
  return records;
}

PopulationRecord run_populations(const ScenarioConfig& config, double gamma) {
  config.validate();
  if (!(gamma >= 0.0)) config_error("gamma must be non-negative");
  const ProtocolSpec spec = config.protocol_spec();
  const TimeGrid grid = config.grid();

  PopulationRecord rec;
  rec.gamma = gamma;
  rec.mode = run_mode(config);
  rec.optimization = optimize_scenario(config, rec.mode, gamma);
  rec.controls = rec.optimization.controls;

  const Trajectory traj = propagate(spec.initial, spec, rec.controls, grid, config.channel(gamma));
  const Eigen::MatrixXd pops = traj.populations();
  for (int n = 0; n <= grid.n_steps(); ++n) rec.t_over_t.push_back(grid.time(n) / grid.horizon());
  for (Eigen::Index b = 0; b < pops.cols(); ++b) {
    if (pops.col(b).maxCoeff() > kPopulationThreshold) {
      rec.labels.push_back(basis_label(b, spec.n_qubits));
      rec.series.emplace_back(pops.col(b).data(), pops.col(b).data() + pops.rows());
    }
  }
  return rec;
}

std::vector<MeanFidelityRecord> run_mean_fidelity(const ScenarioConfig& config, int n_samples) {
  config.validate();
  if (config.protocol == ProtocolKind::Aep) config_error("mean fidelity is defined for atp2 and atp3");
  if (n_samples < 1) config_error("samples must be at least 1");

  ScenarioConfig baseline = config;
  baseline.protocol = ProtocolKind::Atp2;
  baseline.local_field.reset();
  const bool with_baseline = config.protocol == ProtocolKind::Atp3;

  const auto n_gamma = static_cast<int>(config.gamma_values.size());
  const int per_gamma = with_baseline ? 2 : 1;
  std::vector<double> means(static_cast<std::size_t>(n_gamma * per_gamma));
  std::vector<char> converged(means.size(), 1);
  run_tasks(n_gamma * per_gamma, [&](int task) {
    const int i = task / per_gamma;
    const ScenarioConfig& c = task % per_gamma == 0 ? config : baseline;
    const double gamma = c.gamma_values[i];
    const OptimizationResult opt = optimize_scenario(c, run_mode(c), gamma);
    means[task] = mean_teleport_fidelity(c.protocol_spec(), opt.controls, c.grid(), c.channel(gamma), n_samples,
                                         c.seed);
    converged[task] = opt.converged ? 1 : 0;
  });

  std::vector<MeanFidelityRecord> out(n_gamma);
  for (int i = 0; i < n_gamma; ++i) {
    MeanFidelityRecord& rec = out[i];
    rec.gamma = config.gamma_values[i];
    rec.mean_fidelity = means[i * per_gamma];
    rec.converged = converged[i * per_gamma] != 0;
    if (with_baseline) {
      rec.baseline_mean = means[i * per_gamma + 1];
      rec.relative_gain = (rec.mean_fidelity - *rec.baseline_mean) / *rec.baseline_mean;
      rec.converged = rec.converged && converged[i * per_gamma + 1] != 0;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

std::string format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

std::string metadata_header(const ScenarioConfig& config, std::string_view kind) {
  char hash[24];
  std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(config.hash()));
  std::ostringstream out;
  out << "# adiabopt " << kind << '\n';
  out << "# config_hash = " << hash << '\n';
  out << "# seed = " << config.seed << '\n';
  out << "# protocol = " << to_string(config.protocol) << '\n';
  out << "# local_field = " << (config.local_field ? config.local_field->label() : "none") << '\n';
  out << "# noise = " << to_string(config.noise) << '\n';
  out << "# grid = horizon " << format_double(config.horizon) << ", steps " << config.n_steps << '\n';
  out << "# lambda = " << format_double(config.lambda) << '\n';
  out << "# shape = " << to_string(config.shape) << '\n';
  out << "# max_iters = " << config.max_iters << '\n';
  out << "# objective_tol = " << format_double(config.objective_tol) << '\n';
  out << "# amplitude_bound = "
      << (config.amplitude_bound ? format_double(*config.amplitude_bound) : std::string("none")) << '\n';
  out << "# extra_field_guess = " << format_double(config.extra_field_guess) << '\n';
  out << "# unitary_only = " << bool_text(config.unitary_only) << '\n';
  return out.str();
}

std::string sweep_csv(const ScenarioConfig& config, const std::vector<SweepRecord>& records) {
  std::ostringstream out;
  out << metadata_header(config, "sweep");
  out << "gamma,fidelity_unitary_opt,fidelity_nonunitary_opt,iterations_unitary,iterations_nonunitary,"
         "converged\r\n";
  for (const SweepRecord& r : records) {
    out << format_double(r.gamma) << ',' << format_double(r.fidelity_unitary_opt) << ','
        << (r.fidelity_nonunitary_opt ? format_double(*r.fidelity_nonunitary_opt) : "") << ','
        << r.iterations_unitary << ','
        << (r.iterations_nonunitary ? std::to_string(*r.iterations_nonunitary) : "") << ','
        << bool_text(r.converged) << "\r\n";
  }
  return out.str();
}

std::string local_field_csv(const ScenarioConfig& config, double gamma,
                            const std::vector<LocalFieldRecord>& records) {
  std::ostringstream out;
  out << metadata_header(config, "scan-local-field");
  out << "rank,local_field,direction,qubit,gamma,fidelity,iterations,converged\r\n";
  int rank = 1;
  for (const LocalFieldRecord& r : records) {
    const std::string label = r.field.label();
    out << rank++ << ',' << label << ',' << label.front() << ',' << r.field.qubit << ',' << format_double(gamma)
        << ',' << format_double(r.fidelity) << ',' << r.iterations << ',' << bool_text(r.converged) << "\r\n";
  }
  return out.str();
}

std::string populations_csv(const ScenarioConfig& config, const PopulationRecord& record) {
  std::ostringstream out;
  out << metadata_header(config, "populations");
  out << "# gamma = " << format_double(record.gamma) << '\n';
  out << "# mode = " << to_string(record.mode) << '\n';
  out << "t_over_T";
  for (const std::string& label : record.labels) out << ",p_" << label;
  out << "\r\n";
  for (std::size_t n = 0; n < record.t_over_t.size(); ++n) {
    out << format_double(record.t_over_t[n]);
    for (const auto& series : record.series) out << ',' << format_double(series[n]);
    out << "\r\n";
  }
  return out.str();
}

std::string controls_csv(const ScenarioConfig& config, const ControlSet& controls) {
  std::ostringstream out;
  out << metadata_header(config, "controls");
  out << "t_over_T";
  for (int k = 0; k < controls.n_controls(); ++k) out << ",eps_" << k + 1;
  out << "\r\n";
  const TimeGrid grid = config.grid();
  for (int n = 0; n < controls.n_steps(); ++n) {
    out << format_double(grid.time(n) / grid.horizon());
    for (int k = 0; k < controls.n_controls(); ++k) out << ',' << format_double(controls(k, n));
    out << "\r\n";
  }
  return out.str();
}

std::string mean_fidelity_csv(const ScenarioConfig& config, int n_samples,
                              const std::vector<MeanFidelityRecord>& records) {
  const bool with_baseline = !records.empty() && records.front().baseline_mean.has_value();
  std::ostringstream out;
  out << metadata_header(config, "mean-fidelity");
  out << "# samples = " << n_samples << '\n';
  out << "gamma,mean_fidelity";
  if (with_baseline) out << ",baseline_mean_fidelity,relative_gain";
  out << ",converged\r\n";
  for (const MeanFidelityRecord& r : records) {
    out << format_double(r.gamma) << ',' << format_double(r.mean_fidelity);
    if (with_baseline) out << ',' << format_double(*r.baseline_mean) << ',' << format_double(*r.relative_gain);
    out << ',' << bool_text(r.converged) << "\r\n";
  }
  return out.str();
}

std::string output_filename(std::string_view kind, const ScenarioConfig& config, std::optional<double> gamma) {
  std::string name(kind);
  name += "_" + config.tag();
  if (gamma) name += "_g" + short_double(*gamma);
  return name + ".csv";
}

std::filesystem::path write_output(const ScenarioConfig& config, const std::string& name,
                                   const std::string& content) {
  const std::filesystem::path dir(config.output_dir);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) config_error("cannot create output directory '" + dir.string() + "': " + ec.message());
  const std::filesystem::path path = dir / name;
  std::ofstream out(path, std::ios::binary);
  if (!out) config_error("cannot write '" + path.string() + "'");
  out << content;
  return path;
}

}  // namespace adiabopt
