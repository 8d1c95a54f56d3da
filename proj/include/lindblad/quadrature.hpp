#pragma once

#include <vector>

namespace lindblad {

/// Composite Simpson on uniform grids (trapezoid tail for an odd interval
/// count, plain trapezoid when the grid is non-uniform).
double integrate_samples(const std::vector<double>& t, const std::vector<double>& v);

/// Running integral on the same rule; out[0] = 0.
std::vector<double> cumulative_integral(const std::vector<double>& t, const std::vector<double>& v);

bool is_uniform_grid(const std::vector<double>& t, double rel_tol = 1e-9);

}  // namespace lindblad
