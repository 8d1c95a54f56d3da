#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "lindblad/run.hpp"

using namespace lindblad;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

nlohmann::json pauli_matrix_json(char which) {
  auto m = [&]() -> ComplexMatrix {
    switch (which) {
      case 'x': return pauli::x();
      case 'y': return pauli::y();
      case 'z': return pauli::z();
      case '+': return pauli::plus();
      default: return pauli::minus();
    }
  }();
  return matrix_to_json(m);
}

nlohmann::json zero_h() { return matrix_to_json(ComplexMatrix::Zero(2, 2)); }

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
  std::ifstream in(p);
  REQUIRE(in.good());
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    rows.push_back(std::move(cells));
  }
  return rows;
}

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("lindblad_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("config validation identifiers") {
  nlohmann::json doc;
  doc["scenario"] = "otto";
  doc["grid"] = {{"t_start", 2.0}, {"t_end", 1.0}, {"samples", 10}};
  doc["otto"] = {{"T_c", -1.0}, {"t3", 2.15}};
  const RunConfig config = parse_run_config(doc);
  const auto bad = validate(config);
  CHECK(std::find(bad.begin(), bad.end(), "grid.monotone") != bad.end());
  CHECK(std::find(bad.begin(), bad.end(), "otto.window_overlap") != bad.end());
  CHECK(std::find(bad.begin(), bad.end(), "otto.temperature_positive") != bad.end());
  CHECK(run(config) == 2);
}

TEST_CASE("otto config accepts the as-typed and snake_case key spellings") {
  nlohmann::json a = {{"N", 3}, {"J", 0.5}, {"T_h", 3.0}, {"T_c", 1.0}};
  nlohmann::json b = {{"n", 3}, {"j", 0.5}, {"t_h", 3.0}, {"t_c", 1.0}};
  nlohmann::json doc;
  doc["scenario"] = "otto";
  doc["grid"] = {{"t_end", 4.0}};
  for (const auto& o : {a, b}) {
    doc["otto"] = o;
    const RunConfig config = parse_run_config(doc);
    CHECK(config.otto_config->sites == 3);
    CHECK(config.otto_config->coupling == 0.5);
    CHECK(config.otto_config->temp_hot == 3.0);
    CHECK(config.otto_config->temp_cold == 1.0);
  }
}

TEST_CASE("commutant scenario writes the expected report") {
  const fs::path dir = fresh_dir("commutant");
  nlohmann::json doc;
  doc["scenario"] = "commutant";
  doc["grid"] = {{"t_end", 1.0}};
  doc["operators"] = {pauli_matrix_json('+'), pauli_matrix_json('-')};
  doc["out"] = dir.string();
  CHECK(run(parse_run_config(doc)) == 0);
  const nlohmann::json report = nlohmann::json::parse(slurp(dir / "report.json"));
  CHECK(report["commutant_dim"] == 1);
  CHECK(report["self_adjoint"] == true);

  nlohmann::json z_doc = doc;
  z_doc["operators"] = {pauli_matrix_json('z')};
  z_doc["out"] = (dir / "z").string();
  CHECK(run(parse_run_config(z_doc)) == 0);
  const nlohmann::json z_report = nlohmann::json::parse(slurp(dir / "z" / "report.json"));
  CHECK(z_report["commutant_dim"] == 2);
  CHECK(z_report.contains("witness"));
}

TEST_CASE("evolve scenario: single-state unital run lands on the maximally mixed state") {
  const fs::path dir = fresh_dir("evolve_unital");
  nlohmann::json doc;
  doc["scenario"] = "evolve";
  doc["grid"] = {{"t_start", 0.0}, {"t_end", 12.0}, {"samples", 25}};
  doc["ensemble"] = {{"count", 1}};
  doc["seed"] = 7;
  doc["generator"] = {
      {"hamiltonian", zero_h()},
      {"jumps",
       {{{"operator", pauli_matrix_json('x')}, {"rate", 1.0}},
        {{"operator", pauli_matrix_json('y')}, {"rate", 1.0}},
        {{"operator", pauli_matrix_json('z')}, {"rate", 1.0}}}}};
  doc["out"] = dir.string();
  CHECK(run(parse_run_config(doc)) == 0);

  const auto rows = read_csv(dir / "trajectories.csv");
  REQUIRE(rows.size() > 2);
  CHECK(rows[0][0] == "t");
  CHECK(rows[0][1] == "state_index");
  // Final sample of state 0: traceless coefficients below 1e-6, trace exact.
  std::vector<std::string> last_state0;
  for (const auto& row : rows)
    if (row.size() > 4 && row[1] == "0") last_state0 = row;
  REQUIRE(!last_state0.empty());
  for (std::size_t c = 4; c < last_state0.size(); ++c)
    CHECK(std::abs(std::stod(last_state0[c])) < 1e-6);
  for (const auto& row : rows)
    if (row.size() > 4 && row[0] != "t") CHECK(std::abs(std::stod(row[2])) < 1e-9);
}

TEST_CASE("evolve scenario: ensemble convergence file is monotone for a relaxing generator") {
  const fs::path dir = fresh_dir("evolve_ensemble");
  nlohmann::json doc;
  doc["scenario"] = "evolve";
  doc["grid"] = {{"t_start", 0.0}, {"t_end", 8.0}, {"samples", 33}};
  doc["ensemble"] = {{"count", 4}};
  doc["seed"] = 11;
  doc["generator"] = {
      {"hamiltonian", zero_h()},
      {"jumps",
       {{{"operator", pauli_matrix_json('x')}, {"rate", 0.7}},
        {{"operator", pauli_matrix_json('y')}, {"rate", 0.7}},
        {{"operator", pauli_matrix_json('z')}, {"rate", 0.7}}}},
      {"period", 1.0}};
  doc["out"] = dir.string();
  CHECK(run(parse_run_config(doc)) == 0);
  const auto rows = read_csv(dir / "convergence.csv");
  REQUIRE(rows.size() > 3);
  CHECK(rows[0] == std::vector<std::string>{"t", "max_pair_dist", "gronwall_envelope"});
  double prev = 1e300;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double d = std::stod(rows[i][1]);
    CHECK(d <= prev + 1e-7);
    prev = d;
  }
}

TEST_CASE("certify scenario emits the verdict fields") {
  const fs::path dir = fresh_dir("certify");
  nlohmann::json doc;
  doc["scenario"] = "certify";
  doc["grid"] = {{"t_end", 1.0}};
  doc["cert_samples"] = 51;
  doc["generator"] = {
      {"hamiltonian", zero_h()},
      {"jumps",
       {{{"operator", pauli_matrix_json('x')}, {"rate", 1.0}},
        {{"operator", pauli_matrix_json('y')}, {"rate", 1.0}},
        {{"operator", pauli_matrix_json('z')}, {"rate", 1.0}}}},
      {"period", 1.0}};
  doc["out"] = dir.string();
  CHECK(run(parse_run_config(doc)) == 0);
  const nlohmann::json report = nlohmann::json::parse(slurp(dir / "report.json"));
  CHECK(report["verdict"] == "certified-strongly-relaxing-unital");
  CHECK(report["C"].get<double>() < 0.0);
  CHECK(report["certified_measure_per_period"].get<double>() > 0.5);
  CHECK(report["lambda"].size() == 51);
}

TEST_CASE("otto scenario: schedule csv and deterministic outputs") {
  const fs::path dir1 = fresh_dir("otto_a");
  const fs::path dir2 = fresh_dir("otto_b");
  nlohmann::json doc;
  doc["scenario"] = "otto";
  // One cycle, sample exactly on the mid-isochore points.
  doc["grid"] = {{"t_start", 0.0}, {"t_end", 4.0}, {"samples", 41}};
  doc["ensemble"] = {{"count", 2}};
  doc["seed"] = 3;
  doc["cert_samples"] = 81;
  doc["otto"] = nlohmann::json::object();
  for (const auto& dir : {dir1, dir2}) {
    doc["out"] = dir.string();
    CHECK(run(parse_run_config(doc)) == 0);
  }
  CHECK(slurp(dir1 / "report.json") == slurp(dir2 / "report.json"));
  CHECK(slurp(dir1 / "trajectories.csv") == slurp(dir2 / "trajectories.csv"));
  CHECK(slurp(dir1 / "convergence.csv") == slurp(dir2 / "convergence.csv"));
  CHECK(slurp(dir1 / "schedule.csv") == slurp(dir2 / "schedule.csv"));

  const auto schedule = read_csv(dir1 / "schedule.csv");
  CHECK(schedule[0] == std::vector<std::string>{"t", "h", "lambda_h", "lambda_c"});
  bool found_mid_hot = false;
  for (const auto& row : schedule) {
    if (row[0] == "1.5") {
      CHECK(std::stod(row[1]) == doctest::Approx(3.0));
      CHECK(std::stod(row[2]) == doctest::Approx(1.0));
      CHECK(std::stod(row[3]) == doctest::Approx(0.0));
      found_mid_hot = true;
    }
  }
  CHECK(found_mid_hot);

  const nlohmann::json report = nlohmann::json::parse(slurp(dir1 / "report.json"));
  CHECK(report["verdict"] == "certified-weakly-relaxing");
  CHECK(report["scenario"] == "otto");
}

TEST_CASE("numerical failures surface as exit code 3") {
  const fs::path dir = fresh_dir("stiff");
  nlohmann::json doc;
  doc["scenario"] = "evolve";
  doc["grid"] = {{"t_start", 0.0}, {"t_end", 1.0}, {"samples", 5}};
  doc["ensemble"] = {{"count", 1}};
  doc["generator"] = {
      {"hamiltonian", zero_h()},
      {"jumps",
       {{{"operator", pauli_matrix_json('x')},
         {"rate", {{"t0", 0.0}, {"dt", 0.5}, {"values", {1.0, 1e300, 1e300}}}}}}}};
  doc["out"] = dir.string();
  CHECK(run(parse_run_config(doc)) == 3);
}

TEST_CASE("config file loading and parse errors") {
  const fs::path dir = fresh_dir("cfg");
  const fs::path good = dir / "good.json";
  std::ofstream(good) << R"({"scenario":"commutant","grid":{"t_end":1.0},)"
                      << R"("operators":[[[[0,0],[1,0]],[[0,0],[0,0]]]]})";
  const RunConfig config = load_run_config(good.string());
  CHECK(config.scenario == Scenario::commutant);
  REQUIRE(config.commutant_ops.size() == 1);
  CHECK((config.commutant_ops[0] - pauli::plus()).norm() < 1e-15);

  const fs::path bad = dir / "bad.json";
  std::ofstream(bad) << "{ not json";
  CHECK_THROWS_AS(load_run_config(bad.string()), validation_error);
  CHECK_THROWS_AS(load_run_config((dir / "missing.json").string()), validation_error);
}
