#include "lindblad/operator_core.hpp"

#include <algorithm>
#include <cmath>

namespace lindblad {

bool is_hermitian(const ComplexMatrix& a, double tol) {
  if (a.rows() != a.cols()) return false;
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  return (a - a.adjoint()).cwiseAbs().maxCoeff() <= tol * scale;
}

Complex hs_inner(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_dim(a, b, "hs_inner");
  return (a.adjoint() * b).trace();
}

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_dim(a, b, "commutator");
  return a * b - b * a;
}

ComplexMatrix anticommutator(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_dim(a, b, "anticommutator");
  return a * b + b * a;
}

ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

ComplexMatrix embed_site(const ComplexMatrix& op, int site, int n_sites) {
  require_square(op, "embed_site");
  if (n_sites < 1) throw validation_error("embed_site: n_sites must be >= 1");
  const int j = ((site - 1) % n_sites + n_sites) % n_sites + 1;
  ComplexMatrix out = ComplexMatrix::Identity(1, 1);
  for (int k = 1; k <= n_sites; ++k)
    out = tensor(out, k == j ? op : ComplexMatrix(ComplexMatrix::Identity(op.rows(), op.cols())));
  return out;
}

Eigen::VectorXd hermitian_eigenvalues(const ComplexMatrix& a, double tol) {
  require_square(a, "hermitian_eigenvalues");
  if (!is_hermitian(a, tol))
    throw validation_error("hermitian_eigenvalues: input is not Hermitian within tolerance");
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(a, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

double trace_distance(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_dim(a, b, "trace_distance");
  const Eigen::VectorXd ev = hermitian_eigenvalues(a - b);
  return 0.5 * ev.cwiseAbs().sum();
}

namespace pauli {
ComplexMatrix identity() { return ComplexMatrix::Identity(2, 2); }
ComplexMatrix x() {
  ComplexMatrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}
ComplexMatrix y() {
  ComplexMatrix m(2, 2);
  m << 0, Complex(0, -1), Complex(0, 1), 0;
  return m;
}
ComplexMatrix z() {
  ComplexMatrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}
ComplexMatrix plus() {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 1) = 1;
  return m;
}
ComplexMatrix minus() {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(1, 0) = 1;
  return m;
}
ComplexMatrix projector(int sign) {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(sign > 0 ? 0 : 1, sign > 0 ? 0 : 1) = 1;
  return m;
}
}  // namespace pauli

HermitianBasis build_basis(int hilbert_dim) {
  if (hilbert_dim < 2) throw validation_error("build_basis: Hilbert dimension must be >= 2");
  const int n = hilbert_dim;
  HermitianBasis basis;
  basis.hilbert_dim = n;
  basis.elements.reserve(static_cast<std::size_t>(n) * n);
  basis.elements.push_back(ComplexMatrix::Identity(n, n) / std::sqrt(double(n)));
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (int j = 0; j < n; ++j) {
    for (int k = j + 1; k < n; ++k) {
      ComplexMatrix sym = ComplexMatrix::Zero(n, n);
      sym(j, k) = inv_sqrt2;
      sym(k, j) = inv_sqrt2;
      basis.elements.push_back(sym);
      ComplexMatrix asym = ComplexMatrix::Zero(n, n);
      asym(j, k) = Complex(0, -inv_sqrt2);
      asym(k, j) = Complex(0, inv_sqrt2);
      basis.elements.push_back(asym);
    }
  }
  for (int l = 1; l < n; ++l) {
    ComplexMatrix diag = ComplexMatrix::Zero(n, n);
    const double norm = 1.0 / std::sqrt(double(l) * (l + 1));
    for (int j = 0; j < l; ++j) diag(j, j) = norm;
    diag(l, l) = -double(l) * norm;
    basis.elements.push_back(diag);
  }
  return basis;
}

double gram_residue(const HermitianBasis& basis) {
  double worst = 0.0;
  const int d = basis.dim();
  for (int n = 0; n < d; ++n)
    for (int m = n; m < d; ++m) {
      const Complex g = hs_inner(basis.elements[n], basis.elements[m]);
      const double target = (n == m) ? 1.0 : 0.0;
      worst = std::max(worst, std::abs(g - target));
    }
  return worst;
}

CoefficientVector to_coefficients(const ComplexMatrix& rho, const HermitianBasis& basis, double tol) {
  if (rho.rows() != basis.hilbert_dim || rho.cols() != basis.hilbert_dim)
    throw validation_error("to_coefficients: dimension mismatch with basis");
  const double scale = std::max(1.0, rho.cwiseAbs().maxCoeff());
  CoefficientVector c;
  c.tilde.resize(basis.dim() - 1);
  for (int n = 0; n < basis.dim(); ++n) {
    const Complex v = hs_inner(basis.elements[n], rho);
    if (std::abs(v.imag()) > tol * scale * basis.hilbert_dim)
      throw validation_error("to_coefficients: non-Hermitian input (imaginary coefficient)");
    if (n == 0)
      c.c0 = v.real();
    else
      c.tilde[n - 1] = v.real();
  }
  return c;
}

ComplexMatrix from_coefficients(const CoefficientVector& c, const HermitianBasis& basis) {
  if (c.tilde.size() != basis.dim() - 1)
    throw validation_error("from_coefficients: coefficient length mismatch");
  ComplexMatrix out = c.c0 * basis.elements[0];
  for (int j = 1; j < basis.dim(); ++j) out += c.tilde[j - 1] * basis.elements[j];
  return out;
}

DensityMatrix DensityMatrix::validated(const ComplexMatrix& m, const Tolerances& tol) {
  require_square(m, "DensityMatrix");
  if (!is_hermitian(m, tol.herm)) throw validation_error("DensityMatrix: not Hermitian");
  if (std::abs(m.trace().real() - 1.0) > tol.trace || std::abs(m.trace().imag()) > tol.trace)
    throw validation_error("DensityMatrix: trace is not 1");
  const Eigen::VectorXd ev = hermitian_eigenvalues(m, tol.herm);
  if (ev.minCoeff() < -tol.psd) throw validation_error("DensityMatrix: negative eigenvalue");
  return DensityMatrix{m};
}

std::vector<double> linspace(double a, double b, int n) {
  if (n < 2) throw validation_error("linspace: need at least 2 points");
  std::vector<double> out(static_cast<std::size_t>(n));
  const double dt = (b - a) / (n - 1);
  for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = a + dt * i;
  out.back() = b;
  return out;
}

}  // namespace lindblad
