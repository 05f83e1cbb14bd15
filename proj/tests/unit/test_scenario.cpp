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

#include <catch2/catch_amalgamated.hpp>

#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "adiabopt/error.hpp"
#include "adiabopt/scenario.hpp"

using namespace adiabopt;

namespace {

ScenarioConfig parse(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in);
}

ErrorKind kind_of_parse(const std::string& text) {
  try {
    parse(text);
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected a config error for:\n" << text);
  return ErrorKind::InvariantViolation;
}

ScenarioConfig small_aep() {
  ScenarioConfig c = default_config(ProtocolKind::Aep);
  c.horizon = 2.0;
  c.n_steps = 40;
  c.max_iters = 4;
  c.objective_tol = 0.0;
  c.lambda = 0.5;
  c.gamma_values = {0.0, 0.05, 0.1};
  return c;
}

std::vector<std::string> data_rows(const std::string& csv) {
  std::vector<std::string> rows;
  std::istringstream in(csv);
  for (std::string line; std::getline(in, line);) {
    if (!line.empty() && line.front() != '#') rows.push_back(line);
  }
  return rows;
}

}  // namespace

TEST_CASE("protocol defaults", "[scenario][config]") {
  const ScenarioConfig aep = default_config(ProtocolKind::Aep);
  CHECK(aep.gamma_values.size() == 11);
  CHECK(aep.gamma_values.front() == 0.0);
  CHECK(aep.gamma_values.back() == Catch::Approx(0.1));
  CHECK(aep.shape == UpdateShape::SinSquared);
  CHECK_FALSE(aep.local_field);
  const ScenarioConfig atp3 = default_config(ProtocolKind::Atp3);
  REQUIRE(atp3.local_field);
  CHECK(atp3.protocol_spec().n_controls() == 3);
  CHECK(atp3.initial_controls()(2, 0) == atp3.extra_field_guess);
  for (ProtocolKind p : {ProtocolKind::Aep, ProtocolKind::Atp2, ProtocolKind::Atp3}) {
    CHECK_NOTHROW(default_config(p).validate());
  }
}

TEST_CASE("config file parsing", "[scenario][config]") {
  const ScenarioConfig c = parse(R"(
; teleportation with a z field
[scenario]
protocol = atp3
local_field = y2
noise = amplitude_damping
gamma = 0, 0.05, 0.1
seed = 77
output_dir = results
unitary_only = true

[grid]
horizon = 1.5
steps = 60

[krotov]
lambda = 0.25
shape = flat
max_iters = 12
objective_tol = 1e-8
amplitude_bound = 30
extra_field_guess = 0.5

[monte_carlo]
samples = 300
)");
  CHECK(c.protocol == ProtocolKind::Atp3);
  CHECK(c.local_field == LocalField{Pauli::Y, 2});
  CHECK(c.noise == NoiseKind::AmplitudeDamping);
  CHECK(c.gamma_values == std::vector<double>{0.0, 0.05, 0.1});
  CHECK(c.seed == 77);
  CHECK(c.output_dir == "results");
  CHECK(c.unitary_only);
  CHECK(c.horizon == 1.5);
  CHECK(c.n_steps == 60);
  CHECK(c.lambda == 0.25);
  CHECK(c.shape == UpdateShape::Flat);
  CHECK(c.max_iters == 12);
  CHECK(c.objective_tol == 1e-8);
  REQUIRE(c.amplitude_bound);
  CHECK(*c.amplitude_bound == 30.0);
  CHECK(c.extra_field_guess == 0.5);
  CHECK(c.samples == 300);
  CHECK(c.tag() == "atp3-y2_amplitude_damping");

  // Missing keys fall back to the protocol defaults.
  const ScenarioConfig sparse = parse("[scenario]\nprotocol = atp2\n");
  const ScenarioConfig reference = default_config(ProtocolKind::Atp2);
  CHECK(sparse.canonical() == reference.canonical());
}

TEST_CASE("config errors", "[scenario][config][errors]") {
  CHECK(kind_of_parse("[scenario]\nprotocol = qft\n") == ErrorKind::ConfigError);
  CHECK(kind_of_parse("[scenario]\ncolour = blue\n") == ErrorKind::ConfigError);
  CHECK(kind_of_parse("[krotov]\nlambda = -1\n") == ErrorKind::ConfigError);
  CHECK(kind_of_parse("[krotov]\nlambda = fast\n") == ErrorKind::ConfigError);
  CHECK(kind_of_parse("[grid]\nsteps = 1\n") == ErrorKind::ConfigError);
  CHECK(kind_of_parse("[grid]\nsteps = 2.5\n") == ErrorKind::ConfigError);
  CHECK(kind_of_parse("[scenario]\ngamma = 0, -0.1\n") == ErrorKind::ConfigError);
  CHECK(kind_of_parse("[scenario]\nprotocol = atp3\nlocal_field = none\n") == ErrorKind::ConfigError);
  CHECK(kind_of_parse("[scenario]\nprotocol = aep\nlocal_field = z1\n") == ErrorKind::ConfigError);
  CHECK(kind_of_parse("[scenario]\nnoise = bitflip\n") == ErrorKind::ConfigError);
  CHECK(kind_of_parse("[scenario\nprotocol = aep\n") == ErrorKind::ConfigError);
  CHECK(kind_of_parse("protocol = aep\n") == ErrorKind::ConfigError);
  CHECK_THROWS_AS(load_config("/nonexistent/adiabopt.ini"), Error);
}

TEST_CASE("gamma lists", "[scenario][config]") {
  CHECK(parse_gamma_list("0.1") == std::vector<double>{0.1});
  CHECK(parse_gamma_list(" 0 , 0.02,0.04 ") == std::vector<double>{0.0, 0.02, 0.04});
  const std::vector<double> range = parse_gamma_list("0:0.1:11");
  REQUIRE(range.size() == 11);
  CHECK(range[5] == Catch::Approx(0.05));
  CHECK(range.back() == Catch::Approx(0.1));
  CHECK_THROWS_AS(parse_gamma_list("0:0.1"), Error);
  CHECK_THROWS_AS(parse_gamma_list("a,b"), Error);
  CHECK_THROWS_AS(parse_gamma_list(""), Error);
}

TEST_CASE("config hash tracks every field", "[scenario][config]") {
  const ScenarioConfig base = default_config(ProtocolKind::Atp3);
  CHECK(base.hash() == default_config(ProtocolKind::Atp3).hash());
  ScenarioConfig other = base;
  other.seed += 1;
  CHECK(other.hash() != base.hash());
  other = base;
  other.lambda *= 2.0;
  CHECK(other.hash() != base.hash());
  other = base;
  other.local_field = LocalField{Pauli::X, 1};
  CHECK(other.hash() != base.hash());
  // Where the files go does not change what is computed.
  other = base;
  other.output_dir = "/elsewhere";
  CHECK(other.hash() == base.hash());
}

TEST_CASE("number formatting round-trips", "[scenario][csv]") {
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(format_double(1.0) == "1");
  CHECK(format_double(0.0) == "0");
  for (double x : {0.1, 1.0 / 3.0, 0.98765432109876543, 1e-300, -2.5e10}) {
    CHECK(std::stod(format_double(x)) == x);
  }
}

TEST_CASE("CSV layout", "[scenario][csv]") {
  const ScenarioConfig c = small_aep();
  std::vector<SweepRecord> records(2);
  records[0].gamma = 0.0;
  records[0].fidelity_unitary_opt = 0.5;
  records[0].fidelity_nonunitary_opt = 0.75;
  records[0].iterations_unitary = 3;
  records[0].iterations_nonunitary = 4;
  records[1].gamma = 0.1;
  records[1].fidelity_unitary_opt = 0.25;
  records[1].converged = false;
  const std::string csv = sweep_csv(c, records);
  CHECK(csv.rfind("# adiabopt sweep\n", 0) == 0);
  CHECK(csv.find("# config_hash = ") != std::string::npos);
  CHECK(csv.find("# seed = 2024\n") != std::string::npos);
  CHECK(csv.find("# lambda = 0.5\n") != std::string::npos);
  CHECK(csv.find("# shape = sin2\n") != std::string::npos);
  const auto rows = data_rows(csv);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0] ==
        "gamma,fidelity_unitary_opt,fidelity_nonunitary_opt,iterations_unitary,iterations_nonunitary,converged\r");
  CHECK(rows[1] == "0,0.5,0.75,3,4,true\r");
  CHECK(rows[2] == "0.10000000000000001,0.25,,0,,false\r");
}

TEST_CASE("output file names", "[scenario][csv]") {
  ScenarioConfig c = default_config(ProtocolKind::Atp3);
  c.noise = NoiseKind::AmplitudeDamping;
  CHECK(output_filename("sweep", c) == "sweep_atp3-z3_amplitude_damping.csv");
  CHECK(output_filename("populations", c, 0.1) == "populations_atp3-z3_amplitude_damping_g0.1.csv");
}

TEST_CASE("task runner keeps task order and reports failures", "[scenario][tasks]") {
  std::vector<int> out(50, -1);
  run_tasks(50, [&](int i) { out[i] = i * i; }, 4);
  for (int i = 0; i < 50; ++i) CHECK(out[i] == i * i);

  std::atomic<int> ran{0};
  auto failing = [&](int i) {
    ++ran;
    if (i == 7 || i == 3) throw std::runtime_error("task " + std::to_string(i));
  };
  try {
    run_tasks(20, failing, 3);
    FAIL("expected an exception");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()) == "task 3");
  }
  CHECK(ran == 20);
  CHECK_NOTHROW(run_tasks(0, failing));
}

TEST_CASE("sweep runs one unitary optimization for all rates", "[scenario][sweep]") {
  const ScenarioConfig c = small_aep();
  const SweepResult r = run_sweep(c);
  REQUIRE(r.records.size() == 3);
  for (const SweepRecord& rec : r.records) {
    CHECK(rec.iterations_unitary == r.unitary.iterations_used);
    CHECK(rec.fidelity_unitary_opt >= 0.0);
    CHECK(rec.fidelity_unitary_opt <= 1.0 + 1e-9);
    REQUIRE(rec.fidelity_nonunitary_opt);
    CHECK(*rec.fidelity_nonunitary_opt <= 1.0 + 1e-9);
  }
  // At gamma = 0 both modes optimize the same problem.
  CHECK(r.records[0].fidelity_unitary_opt == Catch::Approx(*r.records[0].fidelity_nonunitary_opt).margin(1e-12));
  CHECK(r.records[2].fidelity_unitary_opt < r.records[1].fidelity_unitary_opt);

  ScenarioConfig only = c;
  only.unitary_only = true;
  const SweepResult u = run_sweep(only);
  CHECK_FALSE(u.records[1].fidelity_nonunitary_opt);
  CHECK(u.records[1].fidelity_unitary_opt == r.records[1].fidelity_unitary_opt);
}

TEST_CASE("population rows sum to one", "[scenario][populations]") {
  ScenarioConfig c = small_aep();
  const PopulationRecord rec = run_populations(c, 0.1);
  REQUIRE(rec.t_over_t.size() == 41);
  CHECK(rec.t_over_t.front() == 0.0);
  CHECK(rec.t_over_t.back() == 1.0);
  REQUIRE_FALSE(rec.labels.empty());
  CHECK(rec.labels.front() == "00");
  for (std::size_t n = 0; n < rec.t_over_t.size(); ++n) {
    double sum = 0.0;
    for (const auto& s : rec.series) sum += s[n];
    // Only states below the 0.01 threshold are omitted.
    CHECK(sum <= 1.0 + 1e-9);
    CHECK(sum >= 1.0 - 0.01 * (4 - static_cast<double>(rec.labels.size())) - 1e-9);
  }
  const std::string csv = populations_csv(c, rec);
  CHECK(data_rows(csv).size() == 42);
  CHECK(data_rows(csv).front().rfind("t_over_T,p_", 0) == 0);
}

TEST_CASE("mean fidelity rows carry the two-control baseline", "[scenario][mean]") {
  ScenarioConfig c = default_config(ProtocolKind::Atp3);
  c.n_steps = 20;
  c.max_iters = 2;
  c.objective_tol = 0.0;
  c.gamma_values = {0.1};
  const auto rows = run_mean_fidelity(c, 25);
  REQUIRE(rows.size() == 1);
  REQUIRE(rows[0].baseline_mean);
  CHECK(*rows[0].relative_gain == Catch::Approx((rows[0].mean_fidelity - *rows[0].baseline_mean) /
                                                *rows[0].baseline_mean));
  const auto header = data_rows(mean_fidelity_csv(c, 25, rows)).front();
  CHECK(header == "gamma,mean_fidelity,baseline_mean_fidelity,relative_gain,converged\r");

  c.protocol = ProtocolKind::Atp2;
  c.local_field.reset();
  CHECK_FALSE(run_mean_fidelity(c, 5)[0].baseline_mean);
  c.protocol = ProtocolKind::Aep;
  CHECK_THROWS_AS(run_mean_fidelity(c, 5), Error);
}

TEST_CASE("identical configs produce byte-identical files", "[scenario][determinism]") {
  ScenarioConfig c = small_aep();
  const auto dir = std::filesystem::temp_directory_path() / "adiabopt_determinism";
  std::filesystem::remove_all(dir);
  std::string first;
  for (int run = 0; run < 2; ++run) {
    c.output_dir = (dir / std::to_string(run)).string();
    const auto path = write_output(c, output_filename("sweep", c), sweep_csv(c, run_sweep(c).records));
    std::ifstream in(path, std::ios::binary);
    const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (run == 0) {
      first = bytes;
    } else {
      CHECK(bytes == first);
    }
  }
  std::filesystem::remove_all(dir);
}
