#pragma once

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "lindblad/generator.hpp"
#include "lindblad/operator_core.hpp"

namespace lindblad::otto {

/// Driven Ising Otto cycle: longitudinal-field schedule with smooth bump
/// windows coupling the chain to a hot bath on [t1-delta, t2+delta] and a cold
/// bath on [t3-delta, t4+delta], period t4. Ohmic spectral density
/// kappa * w * exp(-w/w_cut) per bath, identical on every site.
struct OttoCycleConfig {
  int sites = 2;             // N
  double coupling = 1.0;     // J
  double h_c = 1.0;
  double h_h = 3.0;
  double t1 = 1.0;
  double t2 = 2.0;
  double t3 = 3.0;
  double t4 = 4.0;           // cycle period
  double delta = 0.1;
  double temp_hot = 4.0;     // T_h
  double temp_cold = 0.5;    // T_c
  double kappa_hot = 0.1;
  double kappa_cold = 0.1;
  double w_cut = 20.0;
  std::string ramp = "bump";  // "bump" or "linear" field ramps

  double period() const { return t4; }
  int hilbert_dim() const { return 1 << sites; }
  /// Violation identifiers ("otto.window_overlap", ...); empty when valid.
  std::vector<std::string> validate() const;
};

/// exp(-1/t) for t > 0, else 0. All derivatives vanish at 0.
double bump_phi(double t);
/// phi(t) / (phi(t) + phi(1-t)): smooth monotone 0 -> 1 transition on [0, 1].
double bump_g(double t);
double bump_g_derivative(double t);

struct SchedulePoint {
  double h = 0.0;
  double lambda_h = 0.0;
  double lambda_c = 0.0;
};

/// Field and bath windows at time t (reduced modulo the period). The cold
/// window tail [t4, t4+delta] wraps into the start of the next cycle.
SchedulePoint schedule(const OttoCycleConfig& config, double t);
/// dh/dt, analytic.
double field_derivative(const OttoCycleConfig& config, double t);

/// H = -J sum_j z_j z_{j+1} - h sum_j z_j with periodic wrap; diagonal in the
/// computational basis.
ComplexMatrix ising_hamiltonian(int sites, double coupling, double h);

ComplexMatrix field_operator(int sites);   // sum_j z_j
ComplexMatrix bond_operator(int sites);    // sum_j z_j z_{j+1}

/// Channel frequencies (2h+4J, 2h, 2h-4J).
std::array<double, 3> bohr_frequencies(double h, double coupling);

/// Projector-dressed raising operators L_{j,a}: channel 1 flips site j up when
/// both neighbours are up, channel 3 when both are down, channel 2 when they
/// disagree. Index layout: ops[3*(j-1) + (a-1)].
struct JumpFamily {
  int sites = 0;
  std::vector<ComplexMatrix> ops;
  const ComplexMatrix& op(int site, int channel) const;
};

JumpFamily jump_family(int sites);

/// Thermal rate for the Ohmic bath: 2 pi J(w)(1+n(w)) for w > 0, the
/// detailed-balance mirror for w < 0, and the two-sided limit 2 pi kappa T at
/// w = 0. Continuous in w; requires T > 0.
double thermal_rate(double w, double temperature, double kappa, double w_cut);

/// Full time-dependent generator of the continuous cycle: scheduled Ising
/// Hamiltonian plus, per bath/site/channel, jump terms (L, lambda_r gamma_r(w))
/// and (L^dag, lambda_r gamma_r(-w)). Periodic with period t4.
GKLSGenerator build_generator(const OttoCycleConfig& config);

/// Heat currents tr(H(t) D_r(rho)) per bath, with the full scheduled rates.
std::pair<double, double> heat_currents(const OttoCycleConfig& config, const JumpFamily& family,
                                        const ComplexMatrix& rho, double t);
/// Driving power tr(dH/dt rho).
double work_rate(const OttoCycleConfig& config, const ComplexMatrix& rho, double t);

}  // namespace lindblad::otto
