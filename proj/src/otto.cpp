#include "lindblad/otto.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace lindblad::otto {

std::vector<std::string> OttoCycleConfig::validate() const {
  std::vector<std::string> bad;
  if (sites < 2) bad.push_back("otto.sites");
  if (h_h <= h_c) bad.push_back("otto.field_order");
  if (!(0 < t1 && t1 < t2 && t2 < t3 && t3 < t4)) bad.push_back("otto.stroke_order");
  if (delta <= 0) bad.push_back("otto.delta_positive");
  if (t1 - delta <= 0) bad.push_back("otto.delta_window");
  if (!(t2 + delta < t3 - delta && t4 + delta <= t1 + t4 - delta))
    bad.push_back("otto.window_overlap");
  if (temp_hot <= 0 || temp_cold <= 0) bad.push_back("otto.temperature_positive");
  if (kappa_hot < 0 || kappa_cold < 0) bad.push_back("otto.coupling_nonnegative");
  if (w_cut <= 0) bad.push_back("otto.cutoff_positive");
  if (ramp != "bump" && ramp != "linear") bad.push_back("otto.ramp");
  return bad;
}

double bump_phi(double t) { return t > 0 ? std::exp(-1.0 / t) : 0.0; }

double bump_g(double t) {
  if (t <= 0) return 0.0;
  if (t >= 1) return 1.0;
  const double a = bump_phi(t);
  const double b = bump_phi(1.0 - t);
  return a / (a + b);
}

double bump_g_derivative(double t) {
  if (t <= 0 || t >= 1) return 0.0;
  const double a = bump_phi(t);
  const double b = bump_phi(1.0 - t);
  const double da = a / (t * t);
  const double db = b / ((1.0 - t) * (1.0 - t));
  const double den = a + b;
  return (da * b + a * db) / (den * den);
}

namespace {

double ramp_g(const OttoCycleConfig& config, double x) {
  if (config.ramp == "linear") return std::clamp(x, 0.0, 1.0);
  return bump_g(x);
}

double ramp_g_derivative(const OttoCycleConfig& config, double x) {
  if (config.ramp == "linear") return (x > 0 && x < 1) ? 1.0 : 0.0;
  return bump_g_derivative(x);
}

double reduce_mod_period(const OttoCycleConfig& config, double t) {
  const double period = config.period();
  double s = std::fmod(t, period);
  if (s < 0) s += period;
  return s;
}

}  // namespace

SchedulePoint schedule(const OttoCycleConfig& config, double t) {
  const double s = reduce_mod_period(config, t);
  const double dh = config.h_h - config.h_c;
  SchedulePoint p;
  if (s <= config.t1)
    p.h = dh * ramp_g(config, s / config.t1) + config.h_c;
  else if (s <= config.t2)
    p.h = config.h_h;
  else if (s <= config.t3)
    p.h = dh * ramp_g(config, (config.t3 - s) / (config.t3 - config.t2)) + config.h_c;
  else
    p.h = config.h_c;
  const double d = config.delta;
  p.lambda_h = bump_g((s - config.t1 + d) / d) * bump_g((config.t2 + d - s) / d);
  // Support [t3-d, t4+d] spills past the period boundary; fold the tail back.
  p.lambda_c = bump_g((s - config.t3 + d) / d) * bump_g((config.t4 + d - s) / d) +
               bump_g((s + config.t4 - config.t3 + d) / d) *
                   bump_g((config.t4 + d - (s + config.t4)) / d);
  return p;
}

double field_derivative(const OttoCycleConfig& config, double t) {
  const double s = reduce_mod_period(config, t);
  const double dh = config.h_h - config.h_c;
  if (s <= config.t1) return dh * ramp_g_derivative(config, s / config.t1) / config.t1;
  if (s <= config.t2) return 0.0;
  if (s <= config.t3) {
    const double width = config.t3 - config.t2;
    return -dh * ramp_g_derivative(config, (config.t3 - s) / width) / width;
  }
  return 0.0;
}

ComplexMatrix field_operator(int sites) {
  const int dim = 1 << sites;
  ComplexMatrix out = ComplexMatrix::Zero(dim, dim);
  for (int j = 1; j <= sites; ++j) out += embed_site(pauli::z(), j, sites);
  return out;
}

ComplexMatrix bond_operator(int sites) {
  const int dim = 1 << sites;
  ComplexMatrix out = ComplexMatrix::Zero(dim, dim);
  for (int j = 1; j <= sites; ++j)
    out += embed_site(pauli::z(), j, sites) * embed_site(pauli::z(), j + 1, sites);
  return out;
}

ComplexMatrix ising_hamiltonian(int sites, double coupling, double h) {
  if (sites < 2) throw validation_error("ising_hamiltonian: need at least 2 sites");
  return -coupling * bond_operator(sites) - h * field_operator(sites);
}

std::array<double, 3> bohr_frequencies(double h, double coupling) {
  return {2 * h + 4 * coupling, 2 * h, 2 * h - 4 * coupling};
}

const ComplexMatrix& JumpFamily::op(int site, int channel) const {
  if (site < 1 || site > sites || channel < 1 || channel > 3)
    throw validation_error("JumpFamily: index out of range");
  return ops[static_cast<std::size_t>(3 * (site - 1) + (channel - 1))];
}

JumpFamily jump_family(int sites) {
  if (sites < 2) throw validation_error("jump_family: need at least 2 sites");
  JumpFamily family;
  family.sites = sites;
  family.ops.reserve(static_cast<std::size_t>(3 * sites));
  const ComplexMatrix up = pauli::projector(+1);
  const ComplexMatrix down = pauli::projector(-1);
  for (int j = 1; j <= sites; ++j) {
    const ComplexMatrix raise = embed_site(pauli::plus(), j, sites);
    const ComplexMatrix up_l = embed_site(up, j - 1, sites);
    const ComplexMatrix up_r = embed_site(up, j + 1, sites);
    const ComplexMatrix down_l = embed_site(down, j - 1, sites);
    const ComplexMatrix down_r = embed_site(down, j + 1, sites);
    family.ops.push_back(up_l * raise * up_r);
    family.ops.push_back(up_l * raise * down_r + down_l * raise * up_r);
    family.ops.push_back(down_l * raise * down_r);
  }
  return family;
}

double thermal_rate(double w, double temperature, double kappa, double w_cut) {
  if (temperature <= 0) throw validation_error("thermal_rate: temperature must be positive");
  constexpr double two_pi = 2.0 * std::numbers::pi;
  if (w == 0.0) return two_pi * kappa * temperature;
  const double aw = std::abs(w);
  const double spectral = kappa * aw * std::exp(-aw / w_cut);
  const double occupation = 1.0 / std::expm1(aw / temperature);
  return w > 0 ? two_pi * spectral * (1.0 + occupation) : two_pi * spectral * occupation;
}

GKLSGenerator build_generator(const OttoCycleConfig& config) {
  if (!config.validate().empty()) throw validation_error("build_generator: invalid otto config");
  GKLSGenerator gen;
  gen.dim = config.hilbert_dim();
  gen.period = config.period();

  gen.hamiltonian_terms.push_back(
      {[](double) { return 1.0; }, ComplexMatrix(-config.coupling * bond_operator(config.sites))});
  gen.hamiltonian_terms.push_back(
      {[config](double t) { return -schedule(config, t).h; }, field_operator(config.sites)});

  const JumpFamily family = jump_family(config.sites);
  struct Bath {
    bool hot;
    double temp, kappa;
  };
  const std::array<Bath, 2> baths = {Bath{true, config.temp_hot, config.kappa_hot},
                                     Bath{false, config.temp_cold, config.kappa_cold}};
  for (const Bath& bath : baths) {
    for (int j = 1; j <= config.sites; ++j) {
      for (int channel = 1; channel <= 3; ++channel) {
        const ComplexMatrix& l = family.op(j, channel);
        auto rate = [config, bath, channel](double t, double sign) {
          const SchedulePoint p = schedule(config, t);
          const double window = bath.hot ? p.lambda_h : p.lambda_c;
          if (window == 0.0) return 0.0;
          const double w = bohr_frequencies(p.h, config.coupling)[static_cast<std::size_t>(channel - 1)];
          return window * thermal_rate(sign * w, bath.temp, bath.kappa, config.w_cut);
        };
        gen.jumps.emplace_back(l, [rate](double t) { return rate(t, +1.0); });
        gen.jumps.emplace_back(ComplexMatrix(l.adjoint()), [rate](double t) { return rate(t, -1.0); });
      }
    }
  }
  return gen;
}

std::pair<double, double> heat_currents(const OttoCycleConfig& config, const JumpFamily& family,
                                        const ComplexMatrix& rho, double t) {
  const SchedulePoint p = schedule(config, t);
  const ComplexMatrix h = ising_hamiltonian(config.sites, config.coupling, p.h);
  const std::array<double, 3> w = bohr_frequencies(p.h, config.coupling);
  auto bath_current = [&](double window, double temp, double kappa) {
    if (window == 0.0) return 0.0;
    ComplexMatrix diss = ComplexMatrix::Zero(rho.rows(), rho.cols());
    for (int j = 1; j <= config.sites; ++j) {
      for (int channel = 1; channel <= 3; ++channel) {
        const ComplexMatrix& l = family.op(j, channel);
        const ComplexMatrix ld = l.adjoint();
        const double wj = w[static_cast<std::size_t>(channel - 1)];
        const double gp = window * thermal_rate(wj, temp, kappa, config.w_cut);
        const double gm = window * thermal_rate(-wj, temp, kappa, config.w_cut);
        const ComplexMatrix ldl = ld * l;
        const ComplexMatrix lld = l * ld;
        diss += gp * (l * rho * ld - 0.5 * (ldl * rho + rho * ldl));
        diss += gm * (ld * rho * l - 0.5 * (lld * rho + rho * lld));
      }
    }
    return (h * diss).trace().real();
  };
  return {bath_current(p.lambda_h, config.temp_hot, config.kappa_hot),
          bath_current(p.lambda_c, config.temp_cold, config.kappa_cold)};
}

double work_rate(const OttoCycleConfig& config, const ComplexMatrix& rho, double t) {
  const double dh = field_derivative(config, t);
  if (dh == 0.0) return 0.0;
  return -dh * (field_operator(config.sites) * rho).trace().real();
}

}  // namespace lindblad::otto
