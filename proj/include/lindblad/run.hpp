#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "lindblad/certifier.hpp"
#include "lindblad/generator.hpp"
#include "lindblad/otto.hpp"
#include "lindblad/propagator.hpp"

namespace lindblad {

enum class Scenario { certify, evolve, otto, commutant };

Scenario scenario_from_string(const std::string& name);

struct GridSpec {
  double t_start = 0.0;
  double t_end = 1.0;
  int samples = 101;
  std::vector<double> points() const { return linspace(t_start, t_end, samples); }
};

/// Inline generator description: constant Hamiltonian matrix plus jump terms
/// with constant or tabulated rates.
struct GeneratorSpec {
  int dim = 0;
  ComplexMatrix hamiltonian;
  struct Jump {
    ComplexMatrix op;
    double constant_rate = 0.0;
    bool tabulated = false;
    double t0 = 0.0, dt = 0.0, table_period = 0.0;
    std::vector<double> values;
  };
  std::vector<Jump> jumps;
  double markovian_from = 0.0;
  std::optional<double> period;

  GKLSGenerator build() const;
};

struct RunConfig {
  Scenario scenario = Scenario::evolve;
  GridSpec grid;
  int ensemble_count = 1;
  std::uint64_t seed = 1;
  double integrator_tol = 1e-9;
  int cert_samples = 401;           // certification grid points over one period
  Tolerances tolerances;
  std::optional<otto::OttoCycleConfig> otto_config;
  std::optional<GeneratorSpec> generator;
  std::vector<ComplexMatrix> commutant_ops;  // commutant scenario, when inline
  bool commutant_otto_family = false;
  std::string out_dir = ".";
};

RunConfig parse_run_config(const nlohmann::json& doc);
RunConfig load_run_config(const std::string& path);

/// Violation identifiers; empty when the config is runnable.
std::vector<std::string> validate(const RunConfig& config);

/// Executes the scenario and writes report.json / trajectories.csv /
/// convergence.csv / schedule.csv into out_dir as applicable.
/// Returns 0 on success, 2 on validation failure, 3 on numerical failure.
int run(const RunConfig& config);

nlohmann::json report_to_json(const CertificationReport& report);

ComplexMatrix matrix_from_json(const nlohmann::json& j);
nlohmann::json matrix_to_json(const ComplexMatrix& m);

void write_trajectories_csv(const std::string& path, const std::vector<TrajectoryRecord>& records);
void write_convergence_csv(const std::string& path, const ConvergenceSummary& summary);
void write_schedule_csv(const std::string& path, const otto::OttoCycleConfig& config,
                        const std::vector<double>& t_grid);

}  // namespace lindblad
