#include "lindblad/run.hpp"

#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "lindblad/random_states.hpp"

namespace lindblad {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

Scenario scenario_from_string(const std::string& name) {
  if (name == "certify") return Scenario::certify;
  if (name == "evolve") return Scenario::evolve;
  if (name == "otto") return Scenario::otto;
  if (name == "commutant") return Scenario::commutant;
  throw validation_error("unknown scenario: " + name);
}

ComplexMatrix matrix_from_json(const nlohmann::json& j) {
  if (!j.is_array() || j.empty()) throw validation_error("matrix: expected array of rows");
  const auto rows = j.size();
  ComplexMatrix m(rows, rows);
  for (std::size_t r = 0; r < rows; ++r) {
    if (!j[r].is_array() || j[r].size() != rows)
      throw validation_error("matrix: expected square [[re,im],...] layout");
    for (std::size_t c = 0; c < rows; ++c) {
      const auto& cell = j[r][c];
      if (!cell.is_array() || cell.size() != 2)
        throw validation_error("matrix: each entry must be [re, im]");
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          Complex(cell[0].get<double>(), cell[1].get<double>());
    }
  }
  return m;
}

nlohmann::json matrix_to_json(const ComplexMatrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      row.push_back({m(r, c).real(), m(r, c).imag()});
    rows.push_back(row);
  }
  return rows;
}

GKLSGenerator GeneratorSpec::build() const {
  GKLSGenerator gen = make_static_generator(hamiltonian, {});
  for (const auto& jump : jumps) {
    if (jump.tabulated)
      gen.jumps.emplace_back(jump.op, tabulated_rate(jump.t0, jump.dt, jump.values, jump.table_period));
    else
      gen.jumps.emplace_back(jump.op, jump.constant_rate);
  }
  gen.markovian_from = markovian_from;
  gen.period = period;
  return gen;
}

namespace {

double pick(const nlohmann::json& j, std::initializer_list<const char*> keys, double fallback) {
  for (const char* key : keys)
    if (j.contains(key)) return j.at(key).get<double>();
  return fallback;
}

otto::OttoCycleConfig parse_otto(const nlohmann::json& j) {
  otto::OttoCycleConfig c;
  c.sites = static_cast<int>(pick(j, {"N", "n"}, c.sites));
  c.coupling = pick(j, {"J", "j"}, c.coupling);
  c.h_c = pick(j, {"h_c"}, c.h_c);
  c.h_h = pick(j, {"h_h"}, c.h_h);
  c.t1 = pick(j, {"t1"}, c.t1);
  c.t2 = pick(j, {"t2"}, c.t2);
  c.t3 = pick(j, {"t3"}, c.t3);
  c.t4 = pick(j, {"t4"}, c.t4);
  c.delta = pick(j, {"delta"}, c.delta);
  c.temp_hot = pick(j, {"T_h", "t_h"}, c.temp_hot);
  c.temp_cold = pick(j, {"T_c", "t_c"}, c.temp_cold);
  c.kappa_hot = pick(j, {"kappa_h"}, c.kappa_hot);
  c.kappa_cold = pick(j, {"kappa_c"}, c.kappa_cold);
  c.w_cut = pick(j, {"w_cut"}, c.w_cut);
  if (j.contains("ramp")) c.ramp = j.at("ramp").get<std::string>();
  if (j.contains("boundary") && j.at("boundary").get<std::string>() != "periodic")
    throw validation_error("otto.boundary: only periodic chains are supported");
  return c;
}

GeneratorSpec parse_generator(const nlohmann::json& j) {
  GeneratorSpec spec;
  spec.hamiltonian = matrix_from_json(j.at("hamiltonian"));
  spec.dim = static_cast<int>(spec.hamiltonian.rows());
  if (j.contains("dim") && j.at("dim").get<int>() != spec.dim)
    throw validation_error("generator: dim does not match hamiltonian");
  for (const auto& jj : j.value("jumps", nlohmann::json::array())) {
    GeneratorSpec::Jump jump;
    jump.op = matrix_from_json(jj.at("operator"));
    const auto& rate = jj.at("rate");
    if (rate.is_number()) {
      jump.constant_rate = rate.get<double>();
    } else {
      jump.tabulated = true;
      jump.t0 = rate.value("t0", 0.0);
      jump.dt = rate.at("dt").get<double>();
      jump.values = rate.at("values").get<std::vector<double>>();
      jump.table_period = rate.value("period", 0.0);
    }
    spec.jumps.push_back(std::move(jump));
  }
  spec.markovian_from = j.value("markovian_from", 0.0);
  if (j.contains("period") && !j.at("period").is_null())
    spec.period = j.at("period").get<double>();
  return spec;
}

void parse_tolerances(const nlohmann::json& j, Tolerances& tol) {
  tol.herm = j.value("herm", tol.herm);
  tol.orth = j.value("orth", tol.orth);
  tol.trace = j.value("trace", tol.trace);
  tol.psd = j.value("psd", tol.psd);
  tol.trace_preserve = j.value("trace_preserve", tol.trace_preserve);
  tol.adjoint_match = j.value("adjoint_match", tol.adjoint_match);
  tol.svd_cut = j.value("svd_cut", tol.svd_cut);
  tol.envelope = j.value("envelope", tol.envelope);
  tol.rate_floor = j.value("rate_floor", tol.rate_floor);
  tol.lambda_strict = j.value("lambda_strict", tol.lambda_strict);
  tol.first_law = j.value("first_law", tol.first_law);
}

}  // namespace

RunConfig parse_run_config(const nlohmann::json& doc) {
  RunConfig config;
  config.scenario = scenario_from_string(doc.at("scenario").get<std::string>());
  if (doc.contains("grid")) {
    const auto& g = doc.at("grid");
    config.grid.t_start = g.value("t_start", 0.0);
    config.grid.t_end = g.at("t_end").get<double>();
    config.grid.samples = g.value("samples", 101);
  }
  if (doc.contains("ensemble")) {
    config.ensemble_count = doc.at("ensemble").value("count", 1);
    if (doc.at("ensemble").contains("seed"))
      config.seed = doc.at("ensemble").at("seed").get<std::uint64_t>();
  }
  config.seed = doc.value("seed", config.seed);
  config.integrator_tol = doc.value("integrator_tol", config.integrator_tol);
  config.cert_samples = doc.value("cert_samples", config.cert_samples);
  if (doc.contains("tolerances")) parse_tolerances(doc.at("tolerances"), config.tolerances);
  if (doc.contains("otto")) config.otto_config = parse_otto(doc.at("otto"));
  if (doc.contains("generator")) config.generator = parse_generator(doc.at("generator"));
  if (doc.contains("operators"))
    for (const auto& op : doc.at("operators")) config.commutant_ops.push_back(matrix_from_json(op));
  config.commutant_otto_family = doc.value("otto_family", false);
  config.out_dir = doc.value("out", std::string("."));
  return config;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw validation_error("cannot open config: " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw validation_error(std::string("config parse error: ") + e.what());
  }
  try {
    return parse_run_config(doc);
  } catch (const nlohmann::json::exception& e) {
    throw validation_error(std::string("config field error: ") + e.what());
  }
}

std::vector<std::string> validate(const RunConfig& config) {
  std::vector<std::string> bad;
  if (config.grid.t_end <= config.grid.t_start) bad.push_back("grid.monotone");
  if (config.grid.samples < 2) bad.push_back("grid.samples");
  if (config.ensemble_count < 1) bad.push_back("ensemble.count");
  if (config.integrator_tol <= 0) bad.push_back("integrator.tol");
  if (config.otto_config) {
    const auto otto_bad = config.otto_config->validate();
    bad.insert(bad.end(), otto_bad.begin(), otto_bad.end());
  }
  switch (config.scenario) {
    case Scenario::otto:
      if (!config.otto_config) bad.push_back("otto.missing");
      break;
    case Scenario::certify:
    case Scenario::evolve:
      if (!config.generator && !config.otto_config) bad.push_back("generator.missing");
      break;
    case Scenario::commutant:
      if (config.commutant_ops.empty() && !(config.commutant_otto_family && config.otto_config))
        bad.push_back("commutant.operators_missing");
      break;
  }
  return bad;
}

nlohmann::json report_to_json(const CertificationReport& report) {
  nlohmann::json j;
  j["verdict"] = to_string(report.verdict);
  j["times"] = report.times;
  j["self_adjoint_ok"] = nlohmann::json::array();
  for (char v : report.self_adjoint_ok) j["self_adjoint_ok"].push_back(v != 0);
  j["commutant_dim"] = report.commutant_dim;
  j["lambda"] = report.lambda;
  j["certified"] = nlohmann::json::array();
  for (char v : report.certified) j["certified"].push_back(v != 0);
  j["windows"] = nlohmann::json::array();
  for (const auto& [lo, hi] : report.windows) j["windows"].push_back({lo, hi});
  j["C"] = report.C;
  j["certified_measure_per_period"] = report.certified_measure_per_period;
  j["gronwall_integral"] = report.gronwall_integral;
  j["gronwall_integral_per_period"] = report.gronwall_integral_per_period;
  j["max_b_norm"] = report.max_b_norm;
  j["periodic"] = report.periodic;
  j["period"] = report.period;
  return j;
}

void write_trajectories_csv(const std::string& path, const std::vector<TrajectoryRecord>& records) {
  std::ofstream out(path);
  if (!out) throw numerical_error("cannot write " + path);
  const Eigen::Index n_coeff = records.empty() ? 0 : records.front().tilde.cols();
  out << "t,state_index,trace_err,min_eig";
  for (Eigen::Index c = 0; c < n_coeff; ++c) out << ",c" << (c + 1);
  out << "\n";
  for (std::size_t s = 0; s < records.size(); ++s) {
    const TrajectoryRecord& rec = records[s];
    for (std::size_t i = 0; i < rec.times.size(); ++i) {
      out << fmt(rec.times[i]) << ',' << s << ',' << fmt(rec.trace_err[i]) << ','
          << fmt(rec.min_eig[i]);
      for (Eigen::Index c = 0; c < n_coeff; ++c)
        out << ',' << fmt(rec.tilde(static_cast<Eigen::Index>(i), c));
      out << "\n";
    }
  }
}

void write_convergence_csv(const std::string& path, const ConvergenceSummary& summary) {
  std::ofstream out(path);
  if (!out) throw numerical_error("cannot write " + path);
  out << "t,max_pair_dist,gronwall_envelope\n";
  for (std::size_t i = 0; i < summary.times.size(); ++i)
    out << fmt(summary.times[i]) << ',' << fmt(summary.max_pair_dist[i]) << ','
        << fmt(summary.gronwall_envelope[i]) << "\n";
}

void write_schedule_csv(const std::string& path, const otto::OttoCycleConfig& config,
                        const std::vector<double>& t_grid) {
  std::ofstream out(path);
  if (!out) throw numerical_error("cannot write " + path);
  out << "t,h,lambda_h,lambda_c\n";
  for (double t : t_grid) {
    const otto::SchedulePoint p = otto::schedule(config, t);
    out << fmt(t) << ',' << fmt(p.h) << ',' << fmt(p.lambda_h) << ',' << fmt(p.lambda_c) << "\n";
  }
}

namespace {

GKLSGenerator build_scenario_generator(const RunConfig& config) {
  if (config.otto_config && (config.scenario == Scenario::otto || !config.generator))
    return otto::build_generator(*config.otto_config);
  return config.generator->build();
}

std::vector<double> certification_grid(const RunConfig& config, const GKLSGenerator& gen) {
  if (gen.period)
    return linspace(gen.markovian_from, gen.markovian_from + *gen.period, config.cert_samples);
  return config.grid.points();
}

int run_impl(const RunConfig& config) {
  namespace fs = std::filesystem;
  fs::create_directories(config.out_dir);
  const auto path = [&](const char* name) { return (fs::path(config.out_dir) / name).string(); };
  nlohmann::json report;
  report["scenario"] = config.scenario == Scenario::certify   ? "certify"
                       : config.scenario == Scenario::evolve  ? "evolve"
                       : config.scenario == Scenario::otto    ? "otto"
                                                              : "commutant";

  if (config.scenario == Scenario::commutant) {
    std::vector<ComplexMatrix> ops = config.commutant_ops;
    if (config.commutant_otto_family) {
      const auto family = otto::jump_family(config.otto_config->sites);
      for (const auto& op : family.ops) {
        ops.push_back(op);
        ops.push_back(op.adjoint());
      }
    }
    const CommutantResult result = commutant_dimension(ops, config.tolerances.svd_cut);
    const AdjointPairing pairing = is_self_adjoint_set(ops, config.tolerances.adjoint_match);
    report["commutant_dim"] = result.dimension;
    report["self_adjoint"] = pairing.self_adjoint;
    if (result.witness) report["witness"] = matrix_to_json(*result.witness);
    std::ofstream(path("report.json")) << report.dump(2) << "\n";
    return 0;
  }

  const GKLSGenerator gen = build_scenario_generator(config);
  const std::vector<double> grid = config.grid.points();

  PropagatorOptions opt;
  opt.tol = config.integrator_tol;
  opt.tolerances = config.tolerances;

  CertificationReport cert;
  bool have_cert = false;
  if (config.scenario == Scenario::certify || config.scenario == Scenario::otto) {
    cert = certify(gen, gen.period, certification_grid(config, gen), config.tolerances);
    have_cert = true;
    report.update(report_to_json(cert));
  }

  if (config.scenario == Scenario::evolve || config.scenario == Scenario::otto) {
    Rng rng(config.seed);
    std::vector<DensityMatrix> states;
    states.reserve(static_cast<std::size_t>(config.ensemble_count));
    for (int i = 0; i < config.ensemble_count; ++i)
      states.push_back(random_density_hs(gen.dim, rng));

    std::vector<TrajectoryRecord> records;
    if (states.size() >= 2) {
      EnsembleResult ensemble = propagate_ensemble(gen, states, grid, opt);
      records = std::move(ensemble.records);
      write_convergence_csv(path("convergence.csv"), ensemble.summary);
      report["final_max_pair_dist"] = ensemble.summary.max_pair_dist.back();
      report["decay_rate"] = ensemble.summary.decay_rate;
    } else {
      records.push_back(integrate(gen, states.front(), grid, opt));
    }
    const bool certified_ok = have_cert && cert.verdict != Verdict::inconclusive;
    records.push_back(asymptotic_trajectory(gen, grid, opt, certified_ok));
    report["asymptotic_state_index"] = records.size() - 1;
    write_trajectories_csv(path("trajectories.csv"), records);
  }

  if (config.otto_config)
    write_schedule_csv(path("schedule.csv"), *config.otto_config, grid);

  std::ofstream(path("report.json")) << report.dump(2) << "\n";
  return 0;
}

}  // namespace

int run(const RunConfig& config) {
  const auto violations = validate(config);
  if (!violations.empty()) {
    for (const auto& v : violations) std::cerr << "config violation: " << v << "\n";
    return 2;
  }
  try {
    return run_impl(config);
  } catch (const validation_error& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 2;
  } catch (const numerical_error& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace lindblad
