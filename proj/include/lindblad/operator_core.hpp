#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace lindblad {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;

/// Raised when an input violates a documented precondition (bad dimensions,
/// non-Hermitian operator where a Hermitian one is required, malformed config).
struct validation_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Raised when a computation fails numerically (step-size underflow, residues
/// beyond tolerance).
struct numerical_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Shared tolerances. Defaults match desk-scale double precision; every field
/// can be overridden through the CLI config.
struct Tolerances {
  double herm = 1e-10;            // Hermiticity residue, relative
  double orth = 1e-10;            // basis orthonormality residue
  double trace = 1e-9;            // |tr(rho) - 1|
  double psd = 1e-8;              // admissible negative eigenvalue of states
  double trace_preserve = 1e-9;   // first superoperator row / b-vector zero test
  double adjoint_match = 1e-10;   // set self-adjointness pairing, relative
  double svd_cut = 1e-8;          // commutant nullspace cut, relative to sigma_max
  double envelope = 1e-8;         // Gronwall envelope slack, absolute
  double rate_floor = 1e-12;      // a jump counts as active when rate(t) exceeds this
  double lambda_strict = 1e-11;   // certified samples need lambda(t) < -lambda_strict
  double first_law = 1e-6;        // energy-balance residue, relative
};

inline void require_square(const ComplexMatrix& a, const char* who) {
  if (a.rows() != a.cols() || a.rows() < 1)
    throw validation_error(std::string(who) + ": square matrix required");
}

inline void require_same_dim(const ComplexMatrix& a, const ComplexMatrix& b, const char* who) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw validation_error(std::string(who) + ": dimension mismatch");
}

bool is_hermitian(const ComplexMatrix& a, double tol = Tolerances{}.herm);

/// Hilbert-Schmidt scalar product tr(A^dag B).
Complex hs_inner(const ComplexMatrix& a, const ComplexMatrix& b);

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix anticommutator(const ComplexMatrix& a, const ComplexMatrix& b);

/// Kronecker product, left factor on the slow index.
ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b);

/// Single-site operator embedded into an n_sites qubit chain. Site indices are
/// 1-based and wrap periodically, so site 0 means n_sites and n_sites+1 means 1.
ComplexMatrix embed_site(const ComplexMatrix& op, int site, int n_sites);

/// Ascending eigenvalues of a Hermitian matrix. Throws on non-Hermitian input.
Eigen::VectorXd hermitian_eigenvalues(const ComplexMatrix& a, double tol = Tolerances{}.herm);

/// (1/2) sum |eig(a-b)| for Hermitian a, b.
double trace_distance(const ComplexMatrix& a, const ComplexMatrix& b);

namespace pauli {
ComplexMatrix identity();
ComplexMatrix x();
ComplexMatrix y();
ComplexMatrix z();
ComplexMatrix plus();           // |+1><-1|, +1 eigenstate of z listed first
ComplexMatrix minus();
ComplexMatrix projector(int sign);  // |s><s| for s = +1 / -1
}  // namespace pauli

/// Orthonormal Hermitian operator basis {1/sqrt(N), F_1, ..., F_{N^2-1}} with
/// traceless F_j. Construction: generalized Gell-Mann family, identity first,
/// then symmetric/antisymmetric off-diagonal pairs in lexicographic order,
/// then the diagonal ladder. For N=2 this is {1, x, y, z}/sqrt(2).
struct HermitianBasis {
  int hilbert_dim = 0;
  std::vector<ComplexMatrix> elements;
  int dim() const { return static_cast<int>(elements.size()); }
};

HermitianBasis build_basis(int hilbert_dim);

/// Max |(F_n,F_m) - delta_nm| over all pairs; diagnostic for custom bases.
double gram_residue(const HermitianBasis& basis);

/// Real expansion coefficients of a Hermitian operator: c0 on the identity
/// direction, tilde on the traceless block.
struct CoefficientVector {
  double c0 = 0.0;
  Eigen::VectorXd tilde;
};

CoefficientVector to_coefficients(const ComplexMatrix& rho, const HermitianBasis& basis,
                                  double tol = Tolerances{}.herm);
ComplexMatrix from_coefficients(const CoefficientVector& c, const HermitianBasis& basis);

/// Validated quantum state: Hermitian, unit trace, eigenvalues >= -psd tol.
struct DensityMatrix {
  ComplexMatrix matrix;
  static DensityMatrix validated(const ComplexMatrix& m, const Tolerances& tol = {});
};

std::vector<double> linspace(double a, double b, int n);

}  // namespace lindblad
