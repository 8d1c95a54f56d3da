#include "lindblad/propagator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/LU>
#include <Eigen/SVD>

#include "lindblad/ode.hpp"
#include "lindblad/parallel.hpp"
#include "lindblad/quadrature.hpp"

namespace lindblad {

namespace {

void check_grid(const std::vector<double>& t_grid) {
  if (t_grid.size() < 2) throw validation_error("propagator: grid needs at least 2 samples");
  for (std::size_t i = 0; i + 1 < t_grid.size(); ++i)
    if (t_grid[i + 1] <= t_grid[i])
      throw validation_error("propagator: grid must be strictly increasing");
  if (t_grid.front() < 0) throw validation_error("propagator: grid starts before t = 0");
}

TrajectoryRecord make_record(const std::vector<double>& t_grid, int d_minus_1, double c0) {
  TrajectoryRecord rec;
  rec.times = t_grid;
  rec.tilde.setZero(static_cast<Eigen::Index>(t_grid.size()), d_minus_1);
  rec.c0 = c0;
  rec.trace_err.assign(t_grid.size(), 0.0);
  rec.min_eig.assign(t_grid.size(), 0.0);
  rec.tilde_norm.assign(t_grid.size(), 0.0);
  return rec;
}

void fill_diagnostics(TrajectoryRecord& rec, const HermitianBasis& basis, const Tolerances& tol) {
  CoefficientVector c;
  c.c0 = rec.c0;
  for (std::size_t i = 0; i < rec.times.size(); ++i) {
    c.tilde = rec.tilde_at(i);
    const ComplexMatrix rho = from_coefficients(c, basis);
    rec.trace_err[i] = std::abs(rho.trace().real() - 1.0);
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(rho, Eigen::EigenvaluesOnly);
    rec.min_eig[i] = es.eigenvalues().minCoeff();
    rec.tilde_norm[i] = c.tilde.norm();
    if (rec.min_eig[i] < -tol.psd) rec.positivity_ok = false;
  }
}

}  // namespace

ComplexMatrix TrajectoryRecord::state_at(std::size_t i, const HermitianBasis& basis) const {
  CoefficientVector c;
  c.c0 = c0;
  c.tilde = tilde_at(i);
  return from_coefficients(c, basis);
}

TrajectoryRecord integrate(const GKLSGenerator& gen, const DensityMatrix& rho0,
                           const std::vector<double>& t_grid, const PropagatorOptions& opt) {
  check_grid(t_grid);
  const HermitianBasis basis = build_basis(gen.dim);
  const SuperoperatorEvaluator eval(gen, basis, opt.tolerances);
  const CoefficientVector c0 = to_coefficients(rho0.matrix, basis, opt.tolerances.herm);

  TrajectoryRecord rec = make_record(t_grid, basis.dim() - 1, 1.0 / std::sqrt(double(gen.dim)));
  Eigen::MatrixXd m0;
  Eigen::VectorXd b;
  OdeRhs rhs = [&](double t, const Eigen::VectorXd& y, Eigen::VectorXd& dy) {
    eval.m0_at(t, m0);
    eval.b_at(t, b);
    dy.noalias() = m0 * y;
    dy += b;
  };
  integrate_dopri5(rhs, c0.tilde, t_grid.front(), t_grid.back(), opt.tol, t_grid,
                   [&rec](std::size_t i, double, const Eigen::VectorXd& y) {
                     rec.tilde.row(static_cast<Eigen::Index>(i)) = y;
                   });
  fill_diagnostics(rec, basis, opt.tolerances);
  return rec;
}

double pairwise_trace_distance(const TrajectoryRecord& a, const TrajectoryRecord& b,
                               std::size_t sample, const HermitianBasis& basis) {
  CoefficientVector diff;
  diff.c0 = 0.0;
  diff.tilde = a.tilde_at(sample) - b.tilde_at(sample);
  const ComplexMatrix delta = from_coefficients(diff, basis);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(delta, Eigen::EigenvaluesOnly);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

EnsembleResult propagate_ensemble(const GKLSGenerator& gen,
                                  const std::vector<DensityMatrix>& initial_states,
                                  const std::vector<double>& t_grid,
                                  const PropagatorOptions& opt) {
  if (initial_states.size() < 2)
    throw validation_error("propagate_ensemble: need at least 2 initial states");
  check_grid(t_grid);
  EnsembleResult result;
  result.records.resize(initial_states.size());
  parallel_for(initial_states.size(), [&](std::size_t i) {
    result.records[i] = integrate(gen, initial_states[i], t_grid, opt);
  });

  const HermitianBasis basis = build_basis(gen.dim);
  const SuperoperatorEvaluator eval(gen, basis, opt.tolerances);
  ConvergenceSummary& sum = result.summary;
  sum.times = t_grid;
  sum.max_pair_dist.assign(t_grid.size(), 0.0);
  parallel_for(t_grid.size(), [&](std::size_t k) {
    double worst = 0.0;
    for (std::size_t i = 0; i < result.records.size(); ++i)
      for (std::size_t j = i + 1; j < result.records.size(); ++j)
        worst = std::max(worst, pairwise_trace_distance(result.records[i], result.records[j], k, basis));
    sum.max_pair_dist[k] = worst;
  });

  std::vector<double> lambda(t_grid.size());
  parallel_for(t_grid.size(), [&](std::size_t k) { lambda[k] = eval.lambda_at(t_grid[k]); });
  const std::vector<double> cumulative = cumulative_integral(t_grid, lambda);
  sum.gronwall_envelope.resize(t_grid.size());
  for (std::size_t k = 0; k < t_grid.size(); ++k)
    sum.gronwall_envelope[k] = std::exp(cumulative[k]);

  // Log-linear decay fit over the tail half, skipping noise-floor values.
  const std::size_t half = t_grid.size() / 2;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t count = 0;
  for (std::size_t k = half; k < t_grid.size(); ++k) {
    if (sum.max_pair_dist[k] < 1e-12) continue;
    const double x = t_grid[k], y = std::log(sum.max_pair_dist[k]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++count;
  }
  if (count >= 2 && sxx * double(count) - sx * sx > 0)
    sum.decay_rate = -(sxy * double(count) - sx * sy) / (sxx * double(count) - sx * sx);
  else
    sum.decay_rate = std::numeric_limits<double>::quiet_NaN();
  return result;
}

TrajectoryRecord asymptotic_trajectory(const GKLSGenerator& gen, const std::vector<double>& t_grid,
                                       const PropagatorOptions& opt, bool conditions_certified) {
  const ComplexMatrix mixed = ComplexMatrix::Identity(gen.dim, gen.dim) / double(gen.dim);
  TrajectoryRecord rec = integrate(gen, DensityMatrix::validated(mixed, opt.tolerances), t_grid, opt);
  rec.unique_asymptotic = conditions_certified;
  return rec;
}

namespace {

// Columns of X flattened into one vector, column-major.
void flatten(const Eigen::MatrixXd& x, Eigen::VectorXd& v) {
  v = Eigen::Map<const Eigen::VectorXd>(x.data(), x.size());
}

void unflatten(const Eigen::VectorXd& v, Eigen::MatrixXd& x, Eigen::Index n) {
  x = Eigen::Map<const Eigen::MatrixXd>(v.data(), n, n);
}

}  // namespace

FundamentalMatrix fundamental_matrix(const GKLSGenerator& gen, double t,
                                     const PropagatorOptions& opt) {
  if (t < 0) throw validation_error("fundamental_matrix: t must be >= 0");
  const HermitianBasis basis = build_basis(gen.dim);
  const SuperoperatorEvaluator eval(gen, basis, opt.tolerances);
  const Eigen::Index n = basis.dim() - 1;
  Eigen::MatrixXd x0 = Eigen::MatrixXd::Identity(n, n);
  FundamentalMatrix out;
  if (t == 0) {
    out.X = x0;
    out.condition = 1.0;
    return out;
  }
  Eigen::VectorXd y0;
  flatten(x0, y0);
  Eigen::MatrixXd m0, xcur(n, n), dx(n, n);
  OdeRhs rhs = [&](double s, const Eigen::VectorXd& y, Eigen::VectorXd& dy) {
    eval.m0_at(s, m0);
    unflatten(y, xcur, n);
    dx.noalias() = m0 * xcur;
    flatten(dx, dy);
  };
  Eigen::VectorXd y_final = y0;
  integrate_dopri5(rhs, y0, 0.0, t, opt.tol, {t},
                   [&](std::size_t, double, const Eigen::VectorXd& y) { y_final = y; });
  unflatten(y_final, out.X, n);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(out.X);
  out.condition = svd.singularValues()(0) / svd.singularValues()(svd.singularValues().size() - 1);
  return out;
}

TrajectoryRecord variation_of_constants(const GKLSGenerator& gen, const std::vector<double>& t_grid,
                                        const Eigen::VectorXd& tilde0,
                                        const PropagatorOptions& opt) {
  check_grid(t_grid);
  if (t_grid.front() != 0.0)
    throw validation_error("variation_of_constants: grid must start at t = 0");
  const HermitianBasis basis = build_basis(gen.dim);
  const SuperoperatorEvaluator eval(gen, basis, opt.tolerances);
  const Eigen::Index n = basis.dim() - 1;
  if (tilde0.size() != n) throw validation_error("variation_of_constants: tilde0 size mismatch");

  // One pass for X0 on the whole grid.
  std::vector<Eigen::MatrixXd> x0(t_grid.size());
  {
    Eigen::MatrixXd ident = Eigen::MatrixXd::Identity(n, n);
    Eigen::VectorXd y0;
    flatten(ident, y0);
    Eigen::MatrixXd m0, xcur(n, n), dx(n, n);
    OdeRhs rhs = [&](double s, const Eigen::VectorXd& y, Eigen::VectorXd& dy) {
      eval.m0_at(s, m0);
      unflatten(y, xcur, n);
      dx.noalias() = m0 * xcur;
      flatten(dx, dy);
    };
    integrate_dopri5(rhs, y0, 0.0, t_grid.back(), opt.tol, t_grid,
                     [&](std::size_t i, double, const Eigen::VectorXd& y) { unflatten(y, x0[i], n); });
  }

  // Quadrature of X0^{-1}(s) b(s) on the grid, one component at a time.
  Eigen::MatrixXd integrand(static_cast<Eigen::Index>(t_grid.size()), n);
  Eigen::VectorXd b;
  for (std::size_t k = 0; k < t_grid.size(); ++k) {
    eval.b_at(t_grid[k], b);
    integrand.row(static_cast<Eigen::Index>(k)) =
        Eigen::PartialPivLU<Eigen::MatrixXd>(x0[k]).solve(b).transpose();
  }
  Eigen::MatrixXd cumulative(static_cast<Eigen::Index>(t_grid.size()), n);
  std::vector<double> column(t_grid.size());
  for (Eigen::Index j = 0; j < n; ++j) {
    for (std::size_t k = 0; k < t_grid.size(); ++k)
      column[k] = integrand(static_cast<Eigen::Index>(k), j);
    const std::vector<double> cum = cumulative_integral(t_grid, column);
    for (std::size_t k = 0; k < t_grid.size(); ++k)
      cumulative(static_cast<Eigen::Index>(k), j) = cum[k];
  }

  TrajectoryRecord rec = make_record(t_grid, static_cast<int>(n), 1.0 / std::sqrt(double(gen.dim)));
  for (std::size_t k = 0; k < t_grid.size(); ++k) {
    const Eigen::VectorXd inner = tilde0 + cumulative.row(static_cast<Eigen::Index>(k)).transpose();
    rec.tilde.row(static_cast<Eigen::Index>(k)) = (x0[k] * inner).transpose();
  }
  fill_diagnostics(rec, basis, opt.tolerances);
  return rec;
}

bool gronwall_envelope_check(const std::vector<TrajectoryRecord>& records,
                             const ConvergenceSummary& summary, const GKLSGenerator& gen,
                             const Tolerances& tol) {
  (void)gen;
  if (records.size() < 2) throw validation_error("gronwall_envelope_check: need >= 2 records");
  for (std::size_t i = 0; i < records.size(); ++i)
    for (std::size_t j = i + 1; j < records.size(); ++j) {
      const double d0 = (records[i].tilde_at(0) - records[j].tilde_at(0)).squaredNorm();
      for (std::size_t k = 0; k < summary.times.size(); ++k) {
        const double dk = (records[i].tilde_at(k) - records[j].tilde_at(k)).squaredNorm();
        if (dk > d0 * summary.gronwall_envelope[k] + tol.envelope) return false;
      }
    }
  return true;
}

}  // namespace lindblad
