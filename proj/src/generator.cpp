#include "lindblad/generator.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace lindblad {

JumpTerm::JumpTerm(ComplexMatrix op, double rate)
    : constant_(true), op_(std::move(op)), rate_([rate](double) { return rate; }) {
  require_square(op_, "JumpTerm");
}

JumpTerm::JumpTerm(ComplexMatrix op, std::function<double(double)> rate)
    : constant_(true), op_(std::move(op)), rate_(std::move(rate)) {
  require_square(op_, "JumpTerm");
}

JumpTerm::JumpTerm(std::function<ComplexMatrix(double)> op, std::function<double(double)> rate)
    : constant_(false), op_fn_(std::move(op)), rate_(std::move(rate)) {}

const ComplexMatrix& JumpTerm::constant_operator() const {
  if (!constant_) throw validation_error("JumpTerm: operator is time-dependent");
  return op_;
}

ComplexMatrix JumpTerm::operator_at(double t) const { return constant_ ? op_ : op_fn_(t); }

ComplexMatrix GKLSGenerator::hamiltonian(double t) const {
  ComplexMatrix h = ComplexMatrix::Zero(dim, dim);
  for (const auto& term : hamiltonian_terms) h += term.coeff(t) * term.op;
  if (hamiltonian_fn) h += hamiltonian_fn(t);
  return h;
}

bool GKLSGenerator::separable() const {
  if (hamiltonian_fn) return false;
  return std::all_of(jumps.begin(), jumps.end(),
                     [](const JumpTerm& j) { return j.has_constant_operator(); });
}

GKLSGenerator make_static_generator(const ComplexMatrix& h,
                                    const std::vector<std::pair<ComplexMatrix, double>>& jumps) {
  require_square(h, "make_static_generator");
  GKLSGenerator gen;
  gen.dim = static_cast<int>(h.rows());
  gen.hamiltonian_terms.push_back({[](double) { return 1.0; }, h});
  for (const auto& [op, rate] : jumps) {
    require_same_dim(op, h, "make_static_generator");
    gen.jumps.emplace_back(op, rate);
  }
  return gen;
}

std::function<double(double)> tabulated_rate(double t0, double dt, std::vector<double> values,
                                             double period) {
  if (values.size() < 2 || dt <= 0) throw validation_error("tabulated_rate: bad table");
  return [t0, dt, period, table = std::move(values)](double t) {
    if (period > 0) {
      t = std::fmod(t - t0, period);
      if (t < 0) t += period;
      t += t0;
    }
    double x = (t - t0) / dt;
    const double last = double(table.size() - 1);
    if (x <= 0) return table.front();
    if (x >= last) return table.back();
    const auto k = static_cast<std::size_t>(x);
    const double f = x - double(k);
    return table[k] * (1.0 - f) + table[k + 1] * f;
  };
}

static ComplexMatrix dissipator_term(const ComplexMatrix& l, double rate, const ComplexMatrix& s) {
  const ComplexMatrix ldl = l.adjoint() * l;
  return rate * (l * s * l.adjoint() - 0.5 * (ldl * s + s * ldl));
}

ComplexMatrix apply_generator(const GKLSGenerator& gen, double t, const ComplexMatrix& sigma) {
  if (sigma.rows() != gen.dim || sigma.cols() != gen.dim)
    throw validation_error("apply_generator: dimension mismatch");
  const ComplexMatrix h = gen.hamiltonian(t);
  ComplexMatrix out = Complex(0, -1) * (h * sigma - sigma * h);
  for (const auto& jump : gen.jumps) {
    const double rate = jump.rate_at(t);
    if (rate == 0.0) continue;
    out += dissipator_term(jump.operator_at(t), rate, sigma);
  }
  return out;
}

ComplexMatrix dissipator_only(const GKLSGenerator& gen, double t, const ComplexMatrix& sigma) {
  if (sigma.rows() != gen.dim || sigma.cols() != gen.dim)
    throw validation_error("dissipator_only: dimension mismatch");
  ComplexMatrix out = ComplexMatrix::Zero(gen.dim, gen.dim);
  for (const auto& jump : gen.jumps) {
    const double rate = jump.rate_at(t);
    if (rate == 0.0) continue;
    out += dissipator_term(jump.operator_at(t), rate, sigma);
  }
  return out;
}

static SuperoperatorBlocks split_blocks(Eigen::MatrixXd m, int hilbert_dim) {
  const int d = static_cast<int>(m.rows());
  SuperoperatorBlocks blocks;
  blocks.M0 = m.block(1, 1, d - 1, d - 1);
  blocks.b = m.block(1, 0, d - 1, 1) / std::sqrt(double(hilbert_dim));
  blocks.M = std::move(m);
  return blocks;
}

SuperoperatorBlocks assemble_superoperator(const SuperoperatorAction& action, double t,
                                           const HermitianBasis& basis, const Tolerances& tol) {
  const int d = basis.dim();
  Eigen::MatrixXd m(d, d);
  double max_abs = 0.0, max_imag = 0.0;
  for (int col = 0; col < d; ++col) {
    const ComplexMatrix image = action(t, basis.elements[static_cast<std::size_t>(col)]);
    for (int row = 0; row < d; ++row) {
      const Complex v = hs_inner(basis.elements[static_cast<std::size_t>(row)], image);
      max_abs = std::max(max_abs, std::abs(v.real()));
      max_imag = std::max(max_imag, std::abs(v.imag()));
      m(row, col) = v.real();
    }
  }
  // Imaginary residues signal a generator that does not preserve Hermiticity.
  if (max_imag > tol.herm * std::max(1.0, max_abs))
    throw numerical_error("assemble_superoperator: imaginary residue above tolerance");
  const double first_row = m.row(0).cwiseAbs().maxCoeff();
  if (first_row > tol.trace_preserve * std::max(1.0, max_abs))
    throw numerical_error("assemble_superoperator: generator is not trace preserving");
  m.row(0).setZero();
  return split_blocks(std::move(m), basis.hilbert_dim);
}

SuperoperatorBlocks assemble_superoperator(const GKLSGenerator& gen, double t,
                                           const HermitianBasis& basis, const Tolerances& tol) {
  if (basis.hilbert_dim != gen.dim)
    throw validation_error("assemble_superoperator: basis dimension mismatch");
  return assemble_superoperator(
      [&gen](double s, const ComplexMatrix& f) { return apply_generator(gen, s, f); }, t, basis,
      tol);
}

bool check_trace_preservation(const SuperoperatorAction& action, int dim,
                              const std::vector<double>& t_samples, const Tolerances& tol) {
  const HermitianBasis basis = build_basis(dim);
  for (double t : t_samples) {
    double max_abs = 0.0;
    std::vector<Complex> row(static_cast<std::size_t>(basis.dim()));
    for (int m = 0; m < basis.dim(); ++m) {
      const ComplexMatrix image = action(t, basis.elements[static_cast<std::size_t>(m)]);
      row[static_cast<std::size_t>(m)] = hs_inner(basis.elements[0], image);
      max_abs = std::max(max_abs, image.cwiseAbs().maxCoeff());
    }
    for (const Complex& v : row)
      if (std::abs(v) > tol.trace_preserve * std::max(1.0, max_abs)) return false;
  }
  return true;
}

bool check_trace_preservation(const GKLSGenerator& gen, const std::vector<double>& t_samples,
                              const Tolerances& tol) {
  return check_trace_preservation(
      [&gen](double s, const ComplexMatrix& f) { return apply_generator(gen, s, f); }, gen.dim,
      t_samples, tol);
}

double continuity_gap(const GKLSGenerator& gen, const std::vector<double>& t_grid,
                      const Tolerances& tol) {
  if (t_grid.size() < 2) throw validation_error("continuity_gap: need at least 2 samples");
  const SuperoperatorEvaluator eval(gen, build_basis(gen.dim), tol);
  double gap = 0.0;
  Eigen::MatrixXd prev, cur;
  Eigen::VectorXd bprev, bcur;
  eval.m0_at(t_grid.front(), prev);
  eval.b_at(t_grid.front(), bprev);
  for (std::size_t i = 1; i < t_grid.size(); ++i) {
    eval.m0_at(t_grid[i], cur);
    eval.b_at(t_grid[i], bcur);
    gap = std::max(gap, std::sqrt((cur - prev).squaredNorm() + (bcur - bprev).squaredNorm()));
    prev.swap(cur);
    bprev.swap(bcur);
  }
  return gap;
}

SuperoperatorEvaluator::SuperoperatorEvaluator(const GKLSGenerator& gen, HermitianBasis basis,
                                               Tolerances tol)
    : gen_(&gen), basis_(std::move(basis)), tol_(tol), separable_(gen.separable()) {
  if (basis_.hilbert_dim != gen.dim)
    throw validation_error("SuperoperatorEvaluator: basis dimension mismatch");
  if (!separable_) return;
  parts_.reserve(gen.hamiltonian_terms.size() + gen.jumps.size());
  auto add_part = [&](const SuperoperatorAction& action, std::function<double(double)> coeff) {
    // Unit-weight part; the Hermiticity/trace checks run once per part here.
    SuperoperatorBlocks blocks = assemble_superoperator(action, 0.0, basis_, tol_);
    parts_.push_back({std::move(coeff), std::move(blocks.M0), std::move(blocks.b)});
  };
  for (const auto& term : gen.hamiltonian_terms) {
    add_part(
        [&term](double, const ComplexMatrix& f) {
          return ComplexMatrix(Complex(0, -1) * (term.op * f - f * term.op));
        },
        term.coeff);
  }
  for (const auto& jump : gen.jumps) {
    const ComplexMatrix l = jump.constant_operator();
    add_part([l](double, const ComplexMatrix& f) { return dissipator_term(l, 1.0, f); },
             [&jump](double t) { return jump.rate_at(t); });
  }
}

void SuperoperatorEvaluator::m0_at(double t, Eigen::MatrixXd& out) const {
  const int n = basis_.dim() - 1;
  if (!separable_) {
    out = assemble_superoperator(*gen_, t, basis_, tol_).M0;
    return;
  }
  out.setZero(n, n);
  for (const auto& part : parts_) {
    const double w = part.coeff(t);
    if (w != 0.0) out.noalias() += w * part.m0;
  }
}

void SuperoperatorEvaluator::b_at(double t, Eigen::VectorXd& out) const {
  if (!separable_) {
    out = assemble_superoperator(*gen_, t, basis_, tol_).b;
    return;
  }
  out.setZero(basis_.dim() - 1);
  for (const auto& part : parts_) {
    const double w = part.coeff(t);
    if (w != 0.0) out.noalias() += w * part.b;
  }
}

SuperoperatorBlocks SuperoperatorEvaluator::blocks_at(double t) const {
  if (!separable_) return assemble_superoperator(*gen_, t, basis_, tol_);
  SuperoperatorBlocks blocks;
  m0_at(t, blocks.M0);
  b_at(t, blocks.b);
  const int d = basis_.dim();
  blocks.M.setZero(d, d);
  blocks.M.block(1, 1, d - 1, d - 1) = blocks.M0;
  blocks.M.block(1, 0, d - 1, 1) = blocks.b * std::sqrt(double(basis_.hilbert_dim));
  return blocks;
}

double SuperoperatorEvaluator::lambda_at(double t) const {
  Eigen::MatrixXd m0;
  m0_at(t, m0);
  const Eigen::MatrixXd sym = m0 + m0.transpose();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym, Eigen::EigenvaluesOnly);
  return es.eigenvalues().maxCoeff();
}

}  // namespace lindblad
