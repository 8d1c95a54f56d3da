#include "lindblad/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace lindblad {

bool is_uniform_grid(const std::vector<double>& t, double rel_tol) {
  if (t.size() < 3) return true;
  const double h = t[1] - t[0];
  const double span = std::abs(t.back() - t.front());
  for (std::size_t i = 1; i + 1 < t.size(); ++i)
    if (std::abs((t[i + 1] - t[i]) - h) > rel_tol * std::max(span, 1.0)) return false;
  return true;
}

static void check_grid(const std::vector<double>& t, const std::vector<double>& v) {
  if (t.size() != v.size()) throw std::invalid_argument("quadrature: grid/value size mismatch");
  if (t.size() < 2) throw std::invalid_argument("quadrature: need at least 2 samples");
  for (std::size_t i = 0; i + 1 < t.size(); ++i)
    if (t[i + 1] <= t[i]) throw std::invalid_argument("quadrature: grid must be strictly increasing");
}

std::vector<double> cumulative_integral(const std::vector<double>& t, const std::vector<double>& v) {
  check_grid(t, v);
  const std::size_t n = t.size();
  std::vector<double> out(n, 0.0);
  if (is_uniform_grid(t)) {
    const double h = (t.back() - t.front()) / double(n - 1);
    std::size_t i = 0;
    while (i + 2 < n) {
      // Simpson over the pair [i, i+2]; split so every grid point gets a value.
      const double whole = h / 3.0 * (v[i] + 4.0 * v[i + 1] + v[i + 2]);
      const double left = h / 12.0 * (5.0 * v[i] + 8.0 * v[i + 1] - v[i + 2]);
      out[i + 1] = out[i] + left;
      out[i + 2] = out[i] + whole;
      i += 2;
    }
    if (i + 1 < n) out[i + 1] = out[i] + 0.5 * h * (v[i] + v[i + 1]);
    return out;
  }
  for (std::size_t i = 0; i + 1 < n; ++i)
    out[i + 1] = out[i] + 0.5 * (t[i + 1] - t[i]) * (v[i] + v[i + 1]);
  return out;
}

double integrate_samples(const std::vector<double>& t, const std::vector<double>& v) {
  return cumulative_integral(t, v).back();
}

}  // namespace lindblad
