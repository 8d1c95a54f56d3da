#pragma once

#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace lindblad {

using OdeRhs = std::function<void(double, const Eigen::VectorXd&, Eigen::VectorXd&)>;
using OdeObserver = std::function<void(std::size_t, double, const Eigen::VectorXd&)>;

struct OdeStats {
  std::size_t steps = 0;
  std::size_t rejected = 0;
  std::size_t rhs_evals = 0;
};

/// Embedded Dormand-Prince 5(4) pair, adaptive PI step control, FSAL, and the
/// standard order-4 dense-output interpolant. `sample_times` must be
/// nondecreasing and lie in [t0, t1]; `observer` fires once per sample in
/// order. Throws numerical_error on step-size underflow.
OdeStats integrate_dopri5(const OdeRhs& rhs, const Eigen::VectorXd& y0, double t0, double t1,
                          double tol, const std::vector<double>& sample_times,
                          const OdeObserver& observer, std::size_t max_steps = 50'000'000);

}  // namespace lindblad
