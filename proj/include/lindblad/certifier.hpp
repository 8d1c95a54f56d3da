#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lindblad/generator.hpp"
#include "lindblad/operator_core.hpp"

namespace lindblad {

/// Result of matching a jump set against its adjoints: partner[i] is the index
/// whose operator equals ops[i]^dag (i itself for Hermitian jumps), pairs are
/// the unordered non-Hermitian matches, hermitian the self-paired indices.
struct AdjointPairing {
  bool self_adjoint = false;
  std::vector<int> partner;
  std::vector<std::pair<int, int>> pairs;
  std::vector<int> hermitian;
};

AdjointPairing is_self_adjoint_set(const std::vector<ComplexMatrix>& ops,
                                   double tol = Tolerances{}.adjoint_match);

/// Complex dimension of {X : [X, A] = 0 for every A in ops}, computed as the
/// numerical nullspace of the stacked commutator maps. When the dimension
/// exceeds 1 a traceless witness (orthogonalized against the identity) is
/// returned.
struct CommutantResult {
  int dimension = 0;
  std::optional<ComplexMatrix> witness;
};

CommutantResult commutant_dimension(const std::vector<ComplexMatrix>& ops,
                                    double svd_cut = Tolerances{}.svd_cut);

/// Upper bound on 2 Re(sigma, L_t(sigma)) for self-adjoint jump sets:
///   -sum_pairs min(rate, rate') (||[L,s]||^2 + ||[L^dag,s]||^2)
///   -sum_hermitian rate ||[L,s]||^2.
/// Meaningful for traceless sigma; always <= 0. Throws when the jump set at t
/// is not self-adjoint.
double spohn_bound_rhs(const GKLSGenerator& gen, double t, const ComplexMatrix& sigma,
                       const Tolerances& tol = {});

/// Largest eigenvalue of M0(t) + M0(t)^T: the instantaneous growth rate of
/// the Euclidean norm on the traceless coefficient block.
double lambda_max(const GKLSGenerator& gen, double t, const HermitianBasis& basis,
                  const Tolerances& tol = {});

/// Quadrature estimate of int lambda(s) ds over the grid.
double gronwall_log_bound(const GKLSGenerator& gen, const std::vector<double>& t_grid,
                          const Tolerances& tol = {});

enum class Verdict { certified_weakly_relaxing, certified_strongly_relaxing_unital, inconclusive };

std::string to_string(Verdict v);

struct CertificationReport {
  std::vector<double> times;                 // inspected samples (t >= markovian_from)
  std::vector<char> self_adjoint_ok;
  std::vector<int> commutant_dim;
  std::vector<double> lambda;
  std::vector<char> certified;               // after shrinking run boundaries
  std::vector<std::pair<double, double>> windows;
  double C = 0.0;                            // sup of lambda on the certified set
  double certified_measure_per_period = 0.0;
  double gronwall_integral = 0.0;            // int lambda over the inspected grid
  double gronwall_integral_per_period = 0.0;
  double max_b_norm = 0.0;
  bool periodic = false;
  double period = 0.0;
  Verdict verdict = Verdict::inconclusive;
};

/// Evaluates the per-time conditions (set self-adjointness, trivial commutant,
/// strictly negative lambda) on the grid, restricted to t >= markovian_from.
/// Certified verdicts additionally require declared periodicity, a certified
/// subset of positive measure with C < 0, and a negative per-period Gronwall
/// integral so that the contraction envelope closes over full periods. The
/// unital verdict further needs b(t) = 0 at every sample. Inconclusive is a
/// valid outcome, never an error.
CertificationReport certify(const GKLSGenerator& gen, std::optional<double> period,
                            const std::vector<double>& t_grid, const Tolerances& tol = {});

}  // namespace lindblad
