#pragma once

#include <optional>
#include <vector>

#include "lindblad/generator.hpp"
#include "lindblad/operator_core.hpp"

namespace lindblad {

/// Solution samples in the traceless coordinate system. c0 is pinned to
/// 1/sqrt(N) for the whole trajectory; matrices are reconstructed on demand.
struct TrajectoryRecord {
  std::vector<double> times;
  Eigen::MatrixXd tilde;             // one row per sample
  double c0 = 0.0;
  std::vector<double> trace_err;     // |tr(rho)-1| after reconstruction
  std::vector<double> min_eig;
  std::vector<double> tilde_norm;
  bool positivity_ok = true;         // min_eig >= -psd everywhere
  bool unique_asymptotic = false;

  Eigen::VectorXd tilde_at(std::size_t i) const { return tilde.row(static_cast<Eigen::Index>(i)); }
  ComplexMatrix state_at(std::size_t i, const HermitianBasis& basis) const;
};

struct PropagatorOptions {
  double tol = 1e-9;      // local error, absolute and relative
  Tolerances tolerances;
};

/// Integrates d/dt tilde = M0(t) tilde + b(t) from rho0, sampling onto t_grid
/// (monotone, t_grid.front() >= 0). Positivity dips below -psd are recorded,
/// not fatal.
TrajectoryRecord integrate(const GKLSGenerator& gen, const DensityMatrix& rho0,
                           const std::vector<double>& t_grid, const PropagatorOptions& opt = {});

struct ConvergenceSummary {
  std::vector<double> times;
  std::vector<double> max_pair_dist;       // max over ensemble pairs of trace distance
  std::vector<double> gronwall_envelope;   // exp of the running integral of lambda
  double decay_rate = 0.0;                 // log-linear fit on the tail half; NaN if not fit
};

struct EnsembleResult {
  std::vector<TrajectoryRecord> records;
  ConvergenceSummary summary;
};

EnsembleResult propagate_ensemble(const GKLSGenerator& gen,
                                  const std::vector<DensityMatrix>& initial_states,
                                  const std::vector<double>& t_grid,
                                  const PropagatorOptions& opt = {});

/// Trajectory seeded from the maximally mixed state, for which the homogeneous
/// component vanishes identically and the record traces the common asymptotic
/// trajectory whenever the certifier conditions hold.
TrajectoryRecord asymptotic_trajectory(const GKLSGenerator& gen, const std::vector<double>& t_grid,
                                       const PropagatorOptions& opt = {},
                                       bool conditions_certified = true);

struct FundamentalMatrix {
  Eigen::MatrixXd X;       // solves dX/dt = M0(t) X, X(0) = I
  double condition = 0.0;
};

FundamentalMatrix fundamental_matrix(const GKLSGenerator& gen, double t,
                                     const PropagatorOptions& opt = {});

/// Reconstructs tilde(t) = X0(t) (tilde0 + int_0^t X0(s)^{-1} b(s) ds) on the
/// grid, with the integral by quadrature over the sampled integrand. An
/// independent route to the same trajectory as integrate().
TrajectoryRecord variation_of_constants(const GKLSGenerator& gen, const std::vector<double>& t_grid,
                                        const Eigen::VectorXd& tilde0,
                                        const PropagatorOptions& opt = {});

/// Pairwise envelope check: ||dc(t)||^2 <= ||dc(0)||^2 exp(int lambda) + env
/// for every ensemble pair at every grid time.
bool gronwall_envelope_check(const std::vector<TrajectoryRecord>& records,
                             const ConvergenceSummary& summary, const GKLSGenerator& gen,
                             const Tolerances& tol = {});

double pairwise_trace_distance(const TrajectoryRecord& a, const TrajectoryRecord& b,
                               std::size_t sample, const HermitianBasis& basis);

}  // namespace lindblad
