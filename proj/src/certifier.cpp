#include "lindblad/certifier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>

#include <Eigen/SVD>

#include "lindblad/parallel.hpp"
#include "lindblad/quadrature.hpp"

namespace lindblad {

AdjointPairing is_self_adjoint_set(const std::vector<ComplexMatrix>& ops, double tol) {
  if (ops.empty()) throw validation_error("is_self_adjoint_set: empty set");
  const int n = static_cast<int>(ops.size());
  AdjointPairing out;
  out.partner.assign(static_cast<std::size_t>(n), -1);
  std::vector<char> used(static_cast<std::size_t>(n), 0);
  for (int i = 0; i < n; ++i) {
    if (out.partner[static_cast<std::size_t>(i)] >= 0) continue;
    const ComplexMatrix adj = ops[static_cast<std::size_t>(i)].adjoint();
    const double scale = std::max(1.0, adj.norm());
    int match = -1;
    // Hermitian jumps pair with themselves; otherwise take the first free match.
    if ((ops[static_cast<std::size_t>(i)] - adj).norm() <= tol * scale) {
      match = i;
    } else {
      for (int j = 0; j < n; ++j) {
        if (used[static_cast<std::size_t>(j)] || j == i) continue;
        if (ops[static_cast<std::size_t>(j)].rows() != adj.rows()) continue;
        if ((ops[static_cast<std::size_t>(j)] - adj).norm() <= tol * scale) {
          match = j;
          break;
        }
      }
    }
    if (match < 0) {
      out.self_adjoint = false;
      return out;
    }
    out.partner[static_cast<std::size_t>(i)] = match;
    out.partner[static_cast<std::size_t>(match)] = i;
    used[static_cast<std::size_t>(i)] = used[static_cast<std::size_t>(match)] = 1;
    if (match == i)
      out.hermitian.push_back(i);
    else
      out.pairs.emplace_back(i, match);
  }
  out.self_adjoint = true;
  return out;
}

CommutantResult commutant_dimension(const std::vector<ComplexMatrix>& ops, double svd_cut) {
  if (ops.empty()) throw validation_error("commutant_dimension: empty set");
  const int n = static_cast<int>(ops.front().rows());
  for (const auto& op : ops) {
    require_square(op, "commutant_dimension");
    if (op.rows() != n) throw validation_error("commutant_dimension: dimension mismatch");
  }
  const int d = n * n;
  // Row-major vec: [X, A] = (I (x) A^T - A (x) I) vec(X).
  ComplexMatrix stack(static_cast<Eigen::Index>(ops.size()) * d, d);
  const ComplexMatrix id = ComplexMatrix::Identity(n, n);
  for (std::size_t k = 0; k < ops.size(); ++k) {
    stack.block(static_cast<Eigen::Index>(k) * d, 0, d, d) =
        tensor(id, ops[k].transpose()) - tensor(ops[k], id);
  }
  CommutantResult result;
  const double stack_scale = stack.cwiseAbs().maxCoeff();
  if (stack_scale == 0.0) {
    result.dimension = d;  // only zero operators: everything commutes
    return result;
  }
  Eigen::BDCSVD<ComplexMatrix> svd(stack, Eigen::ComputeThinV);
  const Eigen::VectorXd sv = svd.singularValues();
  const double cut = svd_cut * sv(0);
  int null_dim = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) <= cut) ++null_dim;
  result.dimension = null_dim;
  if (null_dim > 1) {
    // Pick the nullspace direction with the largest traceless component.
    double best = 0.0;
    for (Eigen::Index col = d - null_dim; col < d; ++col) {
      ComplexMatrix x(n, n);
      for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) x(r, c) = svd.matrixV()(r * n + c, col);
      x -= (x.trace() / double(n)) * ComplexMatrix::Identity(n, n);
      const double norm = x.norm();
      if (norm > best) {
        best = norm;
        result.witness = x / norm;
      }
    }
  }
  return result;
}

double spohn_bound_rhs(const GKLSGenerator& gen, double t, const ComplexMatrix& sigma,
                       const Tolerances& tol) {
  if (sigma.rows() != gen.dim || sigma.cols() != gen.dim)
    throw validation_error("spohn_bound_rhs: dimension mismatch");
  std::vector<ComplexMatrix> ops;
  std::vector<double> rates;
  ops.reserve(gen.jumps.size());
  for (const auto& jump : gen.jumps) {
    ops.push_back(jump.operator_at(t));
    rates.push_back(jump.rate_at(t));
  }
  const AdjointPairing pairing = is_self_adjoint_set(ops, tol.adjoint_match);
  if (!pairing.self_adjoint)
    throw validation_error("spohn_bound_rhs: jump set is not self-adjoint at t");
  double bound = 0.0;
  for (const auto& [i, j] : pairing.pairs) {
    // Orient each pair so the subtracted rate is the smaller one.
    const double rate = std::min(rates[static_cast<std::size_t>(i)],
                                 rates[static_cast<std::size_t>(j)]);
    const double c1 = commutator(ops[static_cast<std::size_t>(i)], sigma).squaredNorm();
    const double c2 = commutator(ops[static_cast<std::size_t>(j)], sigma).squaredNorm();
    bound -= rate * (c1 + c2);
  }
  for (int i : pairing.hermitian)
    bound -= rates[static_cast<std::size_t>(i)] *
             commutator(ops[static_cast<std::size_t>(i)], sigma).squaredNorm();
  return bound;
}

double lambda_max(const GKLSGenerator& gen, double t, const HermitianBasis& basis,
                  const Tolerances& tol) {
  const SuperoperatorBlocks blocks = assemble_superoperator(gen, t, basis, tol);
  const Eigen::MatrixXd sym = blocks.M0 + blocks.M0.transpose();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym, Eigen::EigenvaluesOnly);
  return es.eigenvalues().maxCoeff();
}

double gronwall_log_bound(const GKLSGenerator& gen, const std::vector<double>& t_grid,
                          const Tolerances& tol) {
  if (t_grid.size() < 2) throw validation_error("gronwall_log_bound: need at least 2 samples");
  for (std::size_t i = 0; i + 1 < t_grid.size(); ++i)
    if (t_grid[i + 1] <= t_grid[i])
      throw validation_error("gronwall_log_bound: grid must be strictly increasing");
  const SuperoperatorEvaluator eval(gen, build_basis(gen.dim), tol);
  std::vector<double> lambda(t_grid.size());
  parallel_for(t_grid.size(), [&](std::size_t i) { lambda[i] = eval.lambda_at(t_grid[i]); });
  return integrate_samples(t_grid, lambda);
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::certified_weakly_relaxing:
      return "certified-weakly-relaxing";
    case Verdict::certified_strongly_relaxing_unital:
      return "certified-strongly-relaxing-unital";
    default:
      return "inconclusive";
  }
}

CertificationReport certify(const GKLSGenerator& gen, std::optional<double> period,
                            const std::vector<double>& t_grid, const Tolerances& tol) {
  CertificationReport report;
  report.periodic = period.has_value();
  report.period = period.value_or(0.0);
  if (report.periodic && report.period <= 0)
    throw validation_error("certify: declared period must be positive");
  for (double t : t_grid)
    if (t >= gen.markovian_from) report.times.push_back(t);
  const std::size_t n = report.times.size();
  if (n < 2) {
    report.verdict = Verdict::inconclusive;
    return report;
  }
  if (report.periodic) {
    const double span = report.times.back() - report.times.front();
    const double cell = span / double(n - 1);
    if (span + cell < report.period)
      throw validation_error("certify: grid must cover at least one period");
  }

  const SuperoperatorEvaluator eval(gen, build_basis(gen.dim), tol);
  report.self_adjoint_ok.assign(n, 0);
  report.commutant_dim.assign(n, gen.dim * gen.dim);
  report.lambda.assign(n, 0.0);
  std::vector<double> b_norm(n, 0.0);

  const bool constant_jumps = std::all_of(gen.jumps.begin(), gen.jumps.end(),
                                          [](const JumpTerm& j) { return j.has_constant_operator(); });
  std::map<std::vector<char>, int> mask_cache;
  std::mutex cache_mutex;

  parallel_for(n, [&](std::size_t i) {
    const double t = report.times[i];
    report.lambda[i] = eval.lambda_at(t);
    Eigen::VectorXd b;
    eval.b_at(t, b);
    b_norm[i] = b.norm();

    std::vector<char> mask(gen.jumps.size(), 0);
    std::vector<ComplexMatrix> active;
    for (std::size_t k = 0; k < gen.jumps.size(); ++k) {
      if (gen.jumps[k].rate_at(t) > tol.rate_floor) {
        mask[k] = 1;
        active.push_back(gen.jumps[k].operator_at(t));
      }
    }
    if (active.empty()) {
      report.self_adjoint_ok[i] = 1;  // vacuously
      report.commutant_dim[i] = gen.dim * gen.dim;
      return;
    }
    report.self_adjoint_ok[i] = is_self_adjoint_set(active, tol.adjoint_match).self_adjoint ? 1 : 0;
    if (constant_jumps) {
      {
        std::lock_guard<std::mutex> lock(cache_mutex);
        auto it = mask_cache.find(mask);
        if (it != mask_cache.end()) {
          report.commutant_dim[i] = it->second;
          return;
        }
      }
      const int dim = commutant_dimension(active, tol.svd_cut).dimension;
      std::lock_guard<std::mutex> lock(cache_mutex);
      mask_cache[mask] = dim;
      report.commutant_dim[i] = dim;
    } else {
      report.commutant_dim[i] = commutant_dimension(active, tol.svd_cut).dimension;
    }
  });

  report.max_b_norm = *std::max_element(b_norm.begin(), b_norm.end());
  report.gronwall_integral = integrate_samples(report.times, report.lambda);
  const double span = report.times.back() - report.times.front();
  report.gronwall_integral_per_period =
      report.periodic ? report.gronwall_integral * report.period / span : report.gronwall_integral;

  // Per-sample condition, then shrink each run by one cell to stay clear of
  // the bump-function edges.
  std::vector<char> cond(n, 0);
  for (std::size_t i = 0; i < n; ++i)
    cond[i] = (report.self_adjoint_ok[i] && report.commutant_dim[i] == 1 &&
               report.lambda[i] < -tol.lambda_strict)
                  ? 1
                  : 0;
  report.certified.assign(n, 0);
  double measure = 0.0;
  double ceiling = -std::numeric_limits<double>::infinity();
  std::size_t i = 0;
  while (i < n) {
    if (!cond[i]) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j + 1 < n && cond[j + 1]) ++j;
    if (j - i >= 2) {
      const std::size_t lo = i + 1, hi = j - 1;
      for (std::size_t k = lo; k <= hi; ++k) {
        report.certified[k] = 1;
        ceiling = std::max(ceiling, report.lambda[k]);
      }
      if (hi > lo) measure += report.times[hi] - report.times[lo];
      report.windows.emplace_back(report.times[lo], report.times[hi]);
    }
    i = j + 1;
  }
  report.C = std::isfinite(ceiling) ? ceiling : std::numeric_limits<double>::quiet_NaN();
  report.certified_measure_per_period =
      report.periodic ? measure * report.period / span : measure;

  const bool certified = report.periodic && measure > 0.0 && std::isfinite(report.C) &&
                         report.C < 0.0 && report.gronwall_integral_per_period < 0.0;
  if (!certified) {
    report.verdict = Verdict::inconclusive;
    return report;
  }
  const bool unital = report.max_b_norm <= tol.trace_preserve;
  report.verdict = unital ? Verdict::certified_strongly_relaxing_unital
                          : Verdict::certified_weakly_relaxing;
  return report;
}

}  // namespace lindblad
