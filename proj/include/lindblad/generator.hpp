#pragma once

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "lindblad/operator_core.hpp"

namespace lindblad {

/// One dissipation channel: jump operator (constant or time-dependent) plus
/// a rate schedule. Rates must be >= 0 on the Markovian window of the owning
/// generator; negative values are admitted before markovian_from.
class JumpTerm {
 public:
  JumpTerm(ComplexMatrix op, double rate);
  JumpTerm(ComplexMatrix op, std::function<double(double)> rate);
  JumpTerm(std::function<ComplexMatrix(double)> op, std::function<double(double)> rate);

  bool has_constant_operator() const { return constant_; }
  const ComplexMatrix& constant_operator() const;
  ComplexMatrix operator_at(double t) const;
  double rate_at(double t) const { return rate_(t); }

 private:
  bool constant_;
  ComplexMatrix op_;
  std::function<ComplexMatrix(double)> op_fn_;
  std::function<double(double)> rate_;
};

/// Hamiltonian contribution coeff(t) * op with constant Hermitian op.
struct HamiltonianTerm {
  std::function<double(double)> coeff;
  ComplexMatrix op;
};

/// Time-dependent generator
///   L_t(s) = -i[H(t), s] + sum_a rate_a(t) (L_a s L_a^dag - {L_a^dag L_a, s}/2).
/// H(t) is the sum of hamiltonian_terms plus the optional hamiltonian_fn part.
/// Values are immutable after construction and safe to share across threads.
struct GKLSGenerator {
  int dim = 0;
  std::vector<HamiltonianTerm> hamiltonian_terms;
  std::function<ComplexMatrix(double)> hamiltonian_fn;
  std::vector<JumpTerm> jumps;
  double markovian_from = 0.0;        // rates may be negative before this time
  std::optional<double> period;       // declared periodicity, if any

  ComplexMatrix hamiltonian(double t) const;
  /// True when H is a fixed-operator sum and all jump operators are constant,
  /// so the superoperator is a fixed linear combination of cached parts.
  bool separable() const;
};

GKLSGenerator make_static_generator(const ComplexMatrix& h,
                                    const std::vector<std::pair<ComplexMatrix, double>>& jumps);

/// Uniform-grid tabulated schedule, linear interpolation, constant
/// extrapolation (or periodic wrap when period > 0).
std::function<double(double)> tabulated_rate(double t0, double dt, std::vector<double> values,
                                             double period = 0.0);

ComplexMatrix apply_generator(const GKLSGenerator& gen, double t, const ComplexMatrix& sigma);
ComplexMatrix dissipator_only(const GKLSGenerator& gen, double t, const ComplexMatrix& sigma);

/// Real superoperator matrix M_nm = (F_n, L_t(F_m)) and its split into the
/// traceless block M0 with inhomogeneity b: d/dt tilde = M0 tilde + b, where
/// b_j = M_j0 / sqrt(N) is the contribution sourced by the pinned c0.
struct SuperoperatorBlocks {
  Eigen::MatrixXd M;
  Eigen::MatrixXd M0;
  Eigen::VectorXd b;
};

using SuperoperatorAction = std::function<ComplexMatrix(double, const ComplexMatrix&)>;

SuperoperatorBlocks assemble_superoperator(const GKLSGenerator& gen, double t,
                                           const HermitianBasis& basis,
                                           const Tolerances& tol = {});
SuperoperatorBlocks assemble_superoperator(const SuperoperatorAction& action, double t,
                                           const HermitianBasis& basis,
                                           const Tolerances& tol = {});

bool check_trace_preservation(const GKLSGenerator& gen, const std::vector<double>& t_samples,
                              const Tolerances& tol = {});
bool check_trace_preservation(const SuperoperatorAction& action, int dim,
                              const std::vector<double>& t_samples, const Tolerances& tol = {});

/// Sampled continuity heuristic: max over consecutive grid points of
/// ||M(t_{i+1}) - M(t_i)||_F. Continuous schedules shrink with the grid step;
/// a jump in any rate or Hamiltonian coefficient shows up as a step-size
/// independent gap. Heuristic only: no modulus of continuity is implied.
double continuity_gap(const GKLSGenerator& gen, const std::vector<double>& t_grid,
                      const Tolerances& tol = {});

/// Cached evaluator for M0(t), b(t). Separable generators pay one assembly per
/// part at construction and a scalar-weighted sum per query; everything else
/// falls back to per-time assembly. The generator must outlive the evaluator.
class SuperoperatorEvaluator {
 public:
  SuperoperatorEvaluator(const GKLSGenerator& gen, HermitianBasis basis, Tolerances tol = {});

  int hilbert_dim() const { return basis_.hilbert_dim; }
  int dim() const { return basis_.dim(); }
  const HermitianBasis& basis() const { return basis_; }

  void m0_at(double t, Eigen::MatrixXd& out) const;
  void b_at(double t, Eigen::VectorXd& out) const;
  SuperoperatorBlocks blocks_at(double t) const;
  /// max eig of M0(t) + M0(t)^T.
  double lambda_at(double t) const;

 private:
  const GKLSGenerator* gen_;
  HermitianBasis basis_;
  Tolerances tol_;
  bool separable_;
  struct Part {
    std::function<double(double)> coeff;
    Eigen::MatrixXd m0;
    Eigen::VectorXd b;
  };
  std::vector<Part> parts_;
};

}  // namespace lindblad
