#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "lindblad/certifier.hpp"
#include "lindblad/otto.hpp"
#include "lindblad/random_states.hpp"

using namespace lindblad;

namespace {

std::vector<ComplexMatrix> ladder_set(int sites) {
  std::vector<ComplexMatrix> ops;
  for (int j = 1; j <= sites; ++j) {
    ops.push_back(embed_site(pauli::plus(), j, sites));
    ops.push_back(embed_site(pauli::minus(), j, sites));
  }
  return ops;
}

std::vector<ComplexMatrix> otto_set(int sites) {
  const auto family = otto::jump_family(sites);
  std::vector<ComplexMatrix> ops;
  for (const auto& op : family.ops) {
    ops.push_back(op);
    ops.push_back(op.adjoint());
  }
  return ops;
}

// Orthonormal Hermitian basis from seeded Gram-Schmidt over random Hermitian
// directions, identity kept as the first element.
HermitianBasis randomized_basis(int dim, Rng& rng) {
  HermitianBasis basis;
  basis.hilbert_dim = dim;
  basis.elements.push_back(ComplexMatrix::Identity(dim, dim) / std::sqrt(double(dim)));
  while (static_cast<int>(basis.elements.size()) < dim * dim) {
    ComplexMatrix cand = random_hermitian(dim, rng);
    for (const auto& f : basis.elements) cand -= hs_inner(f, cand).real() * f;
    const double norm = cand.norm();
    if (norm < 1e-6) continue;
    basis.elements.push_back(cand / norm);
  }
  return basis;
}

}  // namespace

TEST_CASE("self-adjoint set detection and pairing") {
  const auto pm = is_self_adjoint_set({pauli::plus(), pauli::minus()});
  CHECK(pm.self_adjoint);
  REQUIRE(pm.pairs.size() == 1);
  CHECK(pm.pairs[0] == std::pair<int, int>{0, 1});
  CHECK(pm.hermitian.empty());

  CHECK_FALSE(is_self_adjoint_set({pauli::minus()}).self_adjoint);

  const auto z = is_self_adjoint_set({pauli::z()});
  CHECK(z.self_adjoint);
  REQUIRE(z.hermitian.size() == 1);
  CHECK(z.partner[0] == 0);
}

TEST_CASE("commutant golden set") {
  CHECK(commutant_dimension(ladder_set(1)).dimension == 1);
  CHECK(commutant_dimension(ladder_set(2)).dimension == 1);
  CHECK(commutant_dimension(ladder_set(3)).dimension == 1);

  const CommutantResult z = commutant_dimension({pauli::z()});
  CHECK(z.dimension == 2);
  REQUIRE(z.witness.has_value());
  CHECK(std::abs(z.witness->trace()) < 1e-10);
  CHECK(commutator(*z.witness, pauli::z()).norm() < 1e-8);
  // The traceless commutant of {z} is the z direction itself.
  CHECK(std::abs(hs_inner(*z.witness, pauli::z()).real()) / std::sqrt(2.0) ==
        doctest::Approx(1.0).epsilon(1e-8));

  CHECK(commutant_dimension({pauli::identity()}).dimension == 4);

  CHECK(commutant_dimension(otto_set(2)).dimension == 1);
  CHECK(commutant_dimension(otto_set(3)).dimension == 1);
}

TEST_CASE("commutant dimension is invariant under invertible recombination") {
  Rng rng(101);
  const auto base = ladder_set(2);
  const int n = static_cast<int>(base.size());
  for (int rep = 0; rep < 3; ++rep) {
    ComplexMatrix v = random_complex(n, rng);
    v += 3.0 * ComplexMatrix::Identity(n, n);  // keep it comfortably invertible
    std::vector<ComplexMatrix> mixed;
    for (int r = 0; r < n; ++r) {
      ComplexMatrix combo = ComplexMatrix::Zero(4, 4);
      for (int c = 0; c < n; ++c) combo += v(r, c) * base[static_cast<std::size_t>(c)];
      mixed.push_back(combo);
    }
    CHECK(commutant_dimension(mixed).dimension == 1);
  }
}

TEST_CASE("spohn bound: Hermitian jump golden and identity limit") {
  const double gamma = 0.7;
  const GKLSGenerator dephasing =
      make_static_generator(ComplexMatrix::Zero(2, 2), {{pauli::z(), gamma}});
  const ComplexMatrix sigma = pauli::x() / std::sqrt(2.0);
  const double rhs = spohn_bound_rhs(dephasing, 0.0, sigma);
  CHECK(rhs == doctest::Approx(-4.0 * gamma));
  const double lhs = 2.0 * hs_inner(sigma, apply_generator(dephasing, 0.0, sigma)).real();
  CHECK(rhs == doctest::Approx(lhs));

  CHECK(spohn_bound_rhs(dephasing, 0.0, ComplexMatrix::Identity(2, 2)) == doctest::Approx(0.0));

  const GKLSGenerator lonely =
      make_static_generator(ComplexMatrix::Zero(2, 2), {{pauli::minus(), 1.0}});
  CHECK_THROWS_AS(spohn_bound_rhs(lonely, 0.0, sigma), validation_error);
}

TEST_CASE("spohn bound dominates the quadratic form on random traceless directions") {
  Rng rng(71);
  int strict_checked = 0;
  for (int g = 0; g < 10; ++g) {
    const int dim = 2 + static_cast<int>(rng.raw() % 3);
    std::vector<std::pair<ComplexMatrix, double>> jumps;
    std::vector<ComplexMatrix> ops;
    const int n_pairs = 1 + static_cast<int>(rng.raw() % 2);
    for (int k = 0; k < n_pairs; ++k) {
      ComplexMatrix a = random_complex(dim, rng);
      a /= a.norm();
      const double r1 = 0.1 + rng.uniform(), r2 = 0.1 + rng.uniform();
      jumps.emplace_back(a, r1);
      jumps.emplace_back(a.adjoint(), r2);
      ops.push_back(a);
      ops.push_back(a.adjoint());
    }
    const GKLSGenerator gen = make_static_generator(random_hermitian(dim, rng), jumps);
    const bool irreducible = commutant_dimension(ops).dimension == 1;
    for (int s = 0; s < 20; ++s) {
      ComplexMatrix sigma = random_complex(dim, rng);
      sigma -= (sigma.trace() / double(dim)) * ComplexMatrix::Identity(dim, dim);
      const double lhs = 2.0 * hs_inner(sigma, apply_generator(gen, 0.0, sigma)).real();
      const double rhs = spohn_bound_rhs(gen, 0.0, sigma);
      CHECK(rhs <= 1e-12);
      CHECK(lhs <= rhs + 1e-9);
      if (irreducible) {
        CHECK(lhs < -1e-6 * sigma.squaredNorm());
        ++strict_checked;
      }
    }
  }
  CHECK(strict_checked > 100);
}

TEST_CASE("lambda_max goldens") {
  const HermitianBasis basis = build_basis(2);
  const double gamma = 0.9;
  ComplexMatrix lower = ComplexMatrix::Zero(2, 2);
  lower(0, 1) = 1.0;
  CHECK(lambda_max(make_static_generator(ComplexMatrix::Zero(2, 2), {{lower, gamma}}), 0.0, basis) ==
        doctest::Approx(-gamma));
  CHECK(lambda_max(make_static_generator(ComplexMatrix::Zero(2, 2), {{pauli::z(), gamma}}), 0.0,
                   basis) == doctest::Approx(0.0).epsilon(1e-12));
  const GKLSGenerator depol = make_static_generator(
      ComplexMatrix::Zero(2, 2), {{pauli::x(), gamma}, {pauli::y(), gamma}, {pauli::z(), gamma}});
  CHECK(lambda_max(depol, 0.0, basis) == doctest::Approx(-8.0 * gamma));
}

TEST_CASE("lambda_max is basis independent") {
  Rng rng(83);
  const GKLSGenerator gen = make_static_generator(
      random_hermitian(3, rng), {{random_complex(3, rng), 0.6}, {random_hermitian(3, rng), 0.4}});
  const double reference = lambda_max(gen, 0.0, build_basis(3));
  for (int rep = 0; rep < 3; ++rep) {
    const HermitianBasis alt = randomized_basis(3, rng);
    CHECK(gram_residue(alt) < 1e-10);
    CHECK(lambda_max(gen, 0.0, alt) == doctest::Approx(reference).epsilon(1e-8));
  }
}

TEST_CASE("gronwall log bound quadrature") {
  const double gamma = 0.5;
  ComplexMatrix lower = ComplexMatrix::Zero(2, 2);
  lower(0, 1) = 1.0;
  const GKLSGenerator damping = make_static_generator(ComplexMatrix::Zero(2, 2), {{lower, gamma}});
  const auto grid = linspace(0.0, 3.0, 61);
  CHECK(gronwall_log_bound(damping, grid) == doctest::Approx(-gamma * 3.0));

  const GKLSGenerator dephasing =
      make_static_generator(ComplexMatrix::Zero(2, 2), {{pauli::z(), gamma}});
  CHECK(gronwall_log_bound(dephasing, grid) == doctest::Approx(0.0).epsilon(1e-10));

  CHECK_THROWS_AS(gronwall_log_bound(damping, std::vector<double>{1.0, 0.5}), validation_error);
}

TEST_CASE("certify: static depolarizing is strongly relaxing and unital") {
  const GKLSGenerator depol = make_static_generator(
      ComplexMatrix::Zero(2, 2), {{pauli::x(), 1.0}, {pauli::y(), 1.0}, {pauli::z(), 1.0}});
  const CertificationReport report = certify(depol, 1.0, linspace(0.0, 1.0, 41));
  CHECK(report.verdict == Verdict::certified_strongly_relaxing_unital);
  CHECK(report.C < 0.0);
  CHECK(report.certified_measure_per_period > 0.5);
  CHECK(report.max_b_norm < 1e-12);
  CHECK(report.gronwall_integral_per_period == doctest::Approx(-8.0).epsilon(1e-9));
}

TEST_CASE("certify: static pure dephasing is inconclusive") {
  const GKLSGenerator dephasing =
      make_static_generator(ComplexMatrix::Zero(2, 2), {{pauli::z(), 1.0}});
  const CertificationReport report = certify(dephasing, 1.0, linspace(0.0, 1.0, 41));
  CHECK(report.verdict == Verdict::inconclusive);
  CHECK(report.commutant_dim.front() == 2);
  CHECK(std::abs(report.lambda.front()) < 1e-10);
  CHECK(report.certified_measure_per_period == doctest::Approx(0.0));
}

TEST_CASE("certify: non-unital detailed-balance qubit is weakly relaxing") {
  ComplexMatrix lower = ComplexMatrix::Zero(2, 2);
  lower(0, 1) = 1.0;
  const GKLSGenerator gen = make_static_generator(
      0.5 * pauli::z(), {{lower, 1.0}, {ComplexMatrix(lower.adjoint()), 0.25}});
  const CertificationReport report = certify(gen, 1.0, linspace(0.0, 1.0, 41));
  CHECK(report.verdict == Verdict::certified_weakly_relaxing);
  CHECK(report.max_b_norm > 1e-3);
}

TEST_CASE("certify: aperiodic generators stay inconclusive with finite measure") {
  const GKLSGenerator depol = make_static_generator(
      ComplexMatrix::Zero(2, 2), {{pauli::x(), 1.0}, {pauli::y(), 1.0}, {pauli::z(), 1.0}});
  const CertificationReport report = certify(depol, std::nullopt, linspace(0.0, 2.0, 41));
  CHECK(report.verdict == Verdict::inconclusive);
  CHECK(report.certified_measure_per_period > 1.0);  // finite measure still reported
}

TEST_CASE("certify: markovian_from restricts the inspected samples") {
  GKLSGenerator gen = make_static_generator(
      ComplexMatrix::Zero(2, 2), {{pauli::x(), 1.0}, {pauli::y(), 1.0}, {pauli::z(), 1.0}});
  gen.markovian_from = 1.0;
  const CertificationReport report = certify(gen, 1.0, linspace(0.0, 2.0, 81));
  CHECK(report.times.front() >= 1.0);
  CHECK(report.verdict == Verdict::certified_strongly_relaxing_unital);
}
