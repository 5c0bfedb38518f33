#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include "varosc/linalg.hpp"

using namespace varosc;

namespace {

constexpr double kPi = 3.14159265358979323846;

// Exhaustive singular values via the Jacobi eigensolver on A*A; independent
// of the power-iteration route used by operator_norm.
double max_singular_value_eig(const Operator& a) {
  const HermitianEigen eig = jacobi_hermitian(a.adjoint() * a);
  return std::sqrt(std::max(0.0, eig.values.back()));
}

}  // namespace

TEST_CASE("make_diagonal_unitary basic cases") {
  const Operator one = make_diagonal_unitary({0.0});
  REQUIRE(one.dim() == 1);
  REQUIRE(std::abs(one.at(0, 0) - cplx{1.0, 0.0}) < 1e-15);

  const Operator minus = make_diagonal_unitary({kPi});
  REQUIRE(std::abs(minus.at(0, 0) - cplx{-1.0, 0.0}) < 1e-15);

  const Operator d = make_diagonal_unitary({kPi / 2.0, kPi});
  REQUIRE(std::abs(d.at(0, 0) - cplx{0.0, 1.0}) < 1e-15);
  REQUIRE(std::abs(d.at(1, 1) - cplx{-1.0, 0.0}) < 1e-15);
  REQUIRE(is_unitary(d, 1e-12));

  REQUIRE_THROWS_AS(make_diagonal_unitary({}), invalid_argument);
}

TEST_CASE("random_unitary is unitary and deterministic") {
  const Operator u1 = random_unitary(1, 77);
  REQUIRE(std::abs(std::abs(u1.at(0, 0)) - 1.0) < 1e-12);

  const Operator u = random_unitary(4, 42);
  REQUIRE(max_abs(u.adjoint() * u - Operator::identity(4)) < 1e-12);

  const Operator v = random_unitary(4, 42);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) {
      REQUIRE(u.at(i, j).real() == v.at(i, j).real());
      REQUIRE(u.at(i, j).imag() == v.at(i, j).imag());
    }

  REQUIRE(is_unitary(random_unitary(6, 1), 1e-10));
  REQUIRE_THROWS_AS(random_unitary(0, 1), invalid_argument);
}

TEST_CASE("random_unitary preserves norms") {
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const std::size_t dim = 1 + seed % 5;
    const Operator u = random_unitary(dim, seed);
    const HVector v = random_unit_vector(dim, derive_seed(seed, 9));
    REQUIRE(std::abs(u.apply(v).norm() - v.norm()) <= 1e-10 * v.norm());
  }
}

TEST_CASE("random_contraction hits the requested norm") {
  const Operator c1 = random_contraction(1, 3, 0.5);
  REQUIRE(std::abs(std::abs(c1.at(0, 0)) - 0.5) < 1e-12);

  REQUIRE(std::abs(operator_norm(random_contraction(3, 7, 1.0)) - 1.0) < 1e-10);
  REQUIRE(std::abs(operator_norm(random_contraction(3, 7, 0.9)) - 0.9) < 1e-10);

  REQUIRE_THROWS_AS(random_contraction(3, 7, 0.0), invalid_argument);
  REQUIRE_THROWS_AS(random_contraction(3, 7, 1.5), invalid_argument);

  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const std::size_t dim = 2 + seed % 4;
    const double cap = 0.3 + 0.1 * static_cast<double>(seed);
    const Operator t = random_contraction(dim, seed, cap);
    const HVector v = random_unit_vector(dim, derive_seed(seed, 11));
    REQUIRE(t.apply(v).norm() <= cap * v.norm() * (1.0 + 1e-9));
  }
}

TEST_CASE("operator_norm on reference matrices") {
  REQUIRE(operator_norm(Operator::identity(5)) == Catch::Approx(1.0).margin(1e-13));
  REQUIRE(operator_norm(Operator::diagonal({cplx{0.3, 0.0}, cplx{0.0, -0.7}})) ==
          Catch::Approx(0.7).margin(1e-12));
  REQUIRE(operator_norm(Operator(3)) == 0.0);

  // start vector orthogonal to the top singular space: ones is killed by
  // [[1,-1],[-1,1]]/sqrt(2)-style symmetry, the ramp restart is not
  Operator a(2);
  a.at(0, 0) = 1.0;
  a.at(0, 1) = -1.0;
  REQUIRE(operator_norm(a) == Catch::Approx(std::sqrt(2.0)).margin(1e-12));
}

TEST_CASE("operator_norm matches exhaustive singular values") {
  for (std::uint64_t seed = 0; seed < 12; ++seed) {
    const std::size_t dim = 1 + seed % 4;
    SplitMix64 rng(seed);
    Operator a(dim);
    for (std::size_t i = 0; i < dim; ++i)
      for (std::size_t j = 0; j < dim; ++j) a.at(i, j) = complex_gaussian(rng);
    REQUIRE(operator_norm(a) == Catch::Approx(max_singular_value_eig(a)).margin(1e-9));
  }
}

TEST_CASE("psd_sqrt on reference matrices") {
  const Operator s = psd_sqrt(Operator::diagonal({cplx{4.0, 0.0}, cplx{9.0, 0.0}}));
  REQUIRE(std::abs(s.at(0, 0) - cplx{2.0, 0.0}) < 1e-12);
  REQUIRE(std::abs(s.at(1, 1) - cplx{3.0, 0.0}) < 1e-12);
  REQUIRE(std::abs(s.at(0, 1)) < 1e-12);

  const Operator id = psd_sqrt(Operator::identity(3));
  REQUIRE(max_abs(id - Operator::identity(3)) < 1e-12);
}

TEST_CASE("psd_sqrt of a defect operator") {
  const Operator t = random_contraction(3, 7, 0.9);
  const Operator h = Operator::identity(3) - t.adjoint() * t;
  const Operator s = psd_sqrt(h);
  REQUIRE(max_abs(s * s - h) < 1e-8 * (1.0 + max_abs(h)));

  // idempotent-consistency: sqrt(S S) recovers S entrywise
  const Operator s2 = psd_sqrt(s * s);
  REQUIRE(max_abs(s2 - s) < 1e-7);
}

TEST_CASE("psd_sqrt rejections") {
  Operator nonherm(2);
  nonherm.at(0, 1) = cplx{1.0, 0.0};
  REQUIRE_THROWS_AS(psd_sqrt(nonherm), invalid_argument);

  REQUIRE_THROWS_AS(psd_sqrt(Operator::diagonal({cplx{1.0, 0.0}, cplx{-0.5, 0.0}})),
                    not_psd_error);
}

TEST_CASE("is_unitary thresholds") {
  REQUIRE(is_unitary(Operator::identity(4), 1e-12));
  REQUIRE_FALSE(is_unitary(Operator::diagonal({cplx{0.5, 0.0}}), 1e-12));
  REQUIRE_THROWS_AS(is_unitary(Operator::identity(2), 0.0), invalid_argument);
}

TEST_CASE("jacobi_hermitian reconstructs random Hermitian matrices") {
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const std::size_t dim = 2 + seed % 5;
    SplitMix64 rng(derive_seed(seed, 2));
    Operator g(dim);
    for (std::size_t i = 0; i < dim; ++i)
      for (std::size_t j = 0; j < dim; ++j) g.at(i, j) = complex_gaussian(rng);
    const Operator h = g + g.adjoint();

    const HermitianEigen eig = jacobi_hermitian(h);
    REQUIRE(max_abs(eig.vectors.adjoint() * eig.vectors - Operator::identity(dim)) < 1e-12);
    Operator recon(dim);
    for (std::size_t i = 0; i < dim; ++i)
      for (std::size_t j = 0; j < dim; ++j) {
        cplx acc = 0.0;
        for (std::size_t k = 0; k < dim; ++k)
          acc += eig.vectors.at(i, k) * eig.values[k] * std::conj(eig.vectors.at(j, k));
        recon.at(i, j) = acc;
      }
    REQUIRE(max_abs(recon - h) < 1e-11 * (1.0 + max_abs(h)));
    for (std::size_t k = 0; k + 1 < dim; ++k) REQUIRE(eig.values[k] <= eig.values[k + 1]);
  }
}

TEST_CASE("HVector basics") {
  REQUIRE_THROWS_AS(HVector(std::vector<cplx>{}), invalid_argument);
  HVector v({cplx{3.0, 0.0}, cplx{0.0, 4.0}});
  REQUIRE(v.norm() == Catch::Approx(5.0).margin(1e-15));
  REQUIRE_THROWS_AS(v += HVector::zero(3), invalid_argument);
}
