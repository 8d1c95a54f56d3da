#include "lindblad/ode.hpp"

#include <algorithm>
#include <cmath>

#include "lindblad/operator_core.hpp"

namespace lindblad {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
// y5 - y4 error weights.
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
// Dense-output extra weights.
constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                 d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                 d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

struct DenseSegment {
  Eigen::VectorXd r1, r2, r3, r4, r5;
  double t = 0, h = 0;
  Eigen::VectorXd eval(double tq) const {
    const double theta = (tq - t) / h;
    const double omt = 1.0 - theta;
    return r1 + theta * (r2 + omt * (r3 + theta * (r4 + omt * r5)));
  }
};

}  // namespace

OdeStats integrate_dopri5(const OdeRhs& rhs, const Eigen::VectorXd& y0, double t0, double t1,
                          double tol, const std::vector<double>& sample_times,
                          const OdeObserver& observer, std::size_t max_steps) {
  if (tol <= 0) throw validation_error("integrate_dopri5: tol must be positive");
  if (t1 < t0) throw validation_error("integrate_dopri5: t1 < t0");
  for (std::size_t i = 0; i + 1 < sample_times.size(); ++i)
    if (sample_times[i + 1] < sample_times[i])
      throw validation_error("integrate_dopri5: sample times must be nondecreasing");

  OdeStats stats;
  const Eigen::Index n = y0.size();
  Eigen::VectorXd y = y0, y_next(n), err(n);
  Eigen::VectorXd k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), work(n);
  double t = t0;
  std::size_t sample_idx = 0;

  auto emit_upto = [&](const DenseSegment& seg, double t_hi) {
    while (sample_idx < sample_times.size() && sample_times[sample_idx] <= t_hi + 1e-14 * std::max(1.0, std::abs(t_hi))) {
      observer(sample_idx, sample_times[sample_idx], seg.eval(sample_times[sample_idx]));
      ++sample_idx;
    }
  };
  // Samples at (or numerically before) t0 get the initial state.
  while (sample_idx < sample_times.size() &&
         sample_times[sample_idx] <= t0 + 1e-14 * std::max(1.0, std::abs(t0))) {
    observer(sample_idx, sample_times[sample_idx], y);
    ++sample_idx;
  }
  if (t1 == t0) return stats;

  rhs(t, y, k1);
  ++stats.rhs_evals;
  double h = std::min((t1 - t0) / 100.0, 0.1);
  if (h <= 0) h = (t1 - t0) / 100.0;
  const double h_min_factor = 1e-14;
  double err_prev = 1.0;

  while (t < t1) {
    if (++stats.steps > max_steps) throw numerical_error("integrate_dopri5: step budget exhausted");
    h = std::min(h, t1 - t);
    if (h < h_min_factor * std::max(std::abs(t), 1.0))
      throw numerical_error("integrate_dopri5: step-size underflow (problem too stiff for tol)");

    work = y + h * (a21 * k1);
    rhs(t + c2 * h, work, k2);
    work = y + h * (a31 * k1 + a32 * k2);
    rhs(t + c3 * h, work, k3);
    work = y + h * (a41 * k1 + a42 * k2 + a43 * k3);
    rhs(t + c4 * h, work, k4);
    work = y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
    rhs(t + c5 * h, work, k5);
    work = y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
    rhs(t + h, work, k6);
    y_next = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    rhs(t + h, y_next, k7);
    stats.rhs_evals += 6;

    err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
    double err_norm = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double scale = tol + tol * std::max(std::abs(y[i]), std::abs(y_next[i]));
      const double r = err[i] / scale;
      err_norm += r * r;
    }
    err_norm = std::sqrt(err_norm / double(n));

    if (err_norm <= 1.0) {
      if (sample_idx < sample_times.size() && sample_times[sample_idx] <= t + h) {
        DenseSegment seg;
        seg.t = t;
        seg.h = h;
        seg.r1 = y;
        seg.r2 = y_next - y;
        seg.r3 = h * k1 - seg.r2;
        seg.r4 = seg.r2 - h * k7 - seg.r3;
        seg.r5 = h * (d1 * k1 + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6 + d7 * k7);
        emit_upto(seg, t + h);
      }
      t += h;
      y.swap(y_next);
      k1.swap(k7);  // FSAL
      // PI controller.
      const double fac = 0.9 * std::pow(err_norm > 0 ? err_norm : 1e-10, -0.7 / 5.0) *
                         std::pow(err_prev > 0 ? err_prev : 1e-10, 0.4 / 5.0);
      h *= std::clamp(fac, 0.2, 5.0);
      err_prev = err_norm;
    } else {
      ++stats.rejected;
      h *= std::max(0.2, 0.9 * std::pow(err_norm, -0.2));
    }
  }
  // Flush anything left at t1 (rounding guards above may leave the last one).
  while (sample_idx < sample_times.size()) {
    observer(sample_idx, sample_times[sample_idx], y);
    ++sample_idx;
  }
  return stats;
}

}  // namespace lindblad
