#include <cmath>
#include <random>

#include "doctest.h"
#include "gcelab/error.hpp"
#include "gcelab/multilinear.hpp"
#include "oracles.hpp"

using namespace gcelab;

namespace {

double diff(const KForm& a, const KForm& b) { return (a - b).max_abs(); }

}  // namespace

TEST_CASE("wedge and interior agree with permutation sums") {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 4 + 2 * (trial % 2);
    const int k = 1 + trial % 3;
    const int l = 1 + (trial / 3) % 3;
    const KForm a = random_form(n, k, rng);
    const KForm b = random_form(n, l, rng);
    if (k + l <= n) {
      CHECK(diff(wedge(a, b), oracle::wedge(a, b)) < 1e-12);
    } else {
      CHECK_THROWS_AS(wedge(a, b), Error);
    }
    const Vector v = random_form(n, 1, rng).components();
    CHECK(diff(interior(v, a), oracle::interior(v, a)) < 1e-12);
  }
}

TEST_CASE("graded algebra identities on random forms") {
  std::mt19937 rng(12);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 6;
    const int k = trial % 3;
    const int l = (trial / 3) % 3;
    const KForm a = random_form(n, k, rng);
    const KForm b = random_form(n, l, rng);
    const KForm c = random_form(n, 1, rng);
    const double sign = (k * l) % 2 ? -1.0 : 1.0;
    CHECK(diff(wedge(a, b), sign * wedge(b, a)) < 1e-12);
    CHECK(diff(wedge(wedge(a, b), c), wedge(a, wedge(b, c))) < 1e-12);
    if (k > 0) {
      const Vector v = random_form(n, 1, rng).components();
      if (l > 0) {
        const KForm lhs = interior(v, wedge(a, b));
        const KForm rhs = wedge(interior(v, a), b) + (k % 2 ? -1.0 : 1.0) * wedge(a, interior(v, b));
        CHECK(diff(lhs, rhs) < 1e-12);
      }
      CHECK(interior(v, interior(v, wedge(a, c))).max_abs() < 1e-12);
    }
  }
}

TEST_CASE("hodge star matches the orthonormal-frame definition") {
  std::mt19937 rng(13);
  for (int m : {2, 3}) {
    for (int s = 0; s < 5; ++s) {
      const HermitianVectorSpace V = random_hermitian_space(m, rng);
      for (int k = 0; k <= 2 * m; ++k) {
        const KForm a = random_form(2 * m, k, rng);
        CHECK(diff(hodge_star(a, V), oracle::hodge_star(a, V.adapted_basis())) < 1e-11);
        const double sign = (k * (2 * m - k)) % 2 ? -1.0 : 1.0;
        CHECK(diff(hodge_star(hodge_star(a, V), V), sign * a) < 1e-11);
        const KForm b = random_form(2 * m, k, rng);
        CHECK(std::abs(inner_product(a, b, V) - oracle::inner_product(a, b, V.adapted_basis())) < 1e-11);
        // a ^ *b = <a, b> vol
        CHECK(diff(wedge(a, hodge_star(b, V)), inner_product(a, b, V) * volume_form(V)) < 1e-11);
      }
    }
  }
}

TEST_CASE("adapted basis is orthonormal and J-adapted") {
  std::mt19937 rng(14);
  const HermitianVectorSpace V = random_hermitian_space(3, rng);
  const Matrix& P = V.adapted_basis();
  CHECK((P.transpose() * V.metric() * P - Matrix::Identity(6, 6)).cwiseAbs().maxCoeff() < 1e-12);
  for (int i = 0; i < 3; ++i) CHECK((V.J() * P.col(2 * i) - P.col(2 * i + 1)).norm() < 1e-12);
}

TEST_CASE("Hodge star identities") {
  std::mt19937 rng(15);
  for (int m : {2, 3, 4}) {
    for (int s = 0; s < 10; ++s) {
      const auto r = hodge_identity_residuals(random_hermitian_space(m, rng), rng, 2);
      for (double x : r) CHECK(x < 1e-12);
    }
  }
}

TEST_CASE("the seventh identity holds with a minus sign") {
  // e^1 ^ (e^34 - e^56) is primitive of type (2,1)+(1,2); by hand its star is
  // e^2 ^ (e^56 - e^34) = -(J-group action of it).
  const HermitianVectorSpace V = HermitianVectorSpace::standard(3);
  const KForm a = KForm::basis(6, {0, 2, 3}) - KForm::basis(6, {0, 4, 5});
  const KForm expected = KForm::basis(6, {1, 4, 5}) - KForm::basis(6, {1, 2, 3});
  CHECK(diff(hodge_star(a, V), expected) < 1e-15);
  CHECK(diff(j_group_action(a, V), -expected) < 1e-15);
  CHECK(omega_trace(a, V).max_abs() < 1e-15);
}

TEST_CASE("J actions and type decomposition") {
  std::mt19937 rng(16);
  const HermitianVectorSpace V = random_hermitian_space(3, rng);
  const KForm omega = kahler_form(V);
  CHECK(omega_trace(omega, V).components()(0) == doctest::Approx(6.0));
  CHECK(j_algebra_action(omega, V).max_abs() < 1e-12);
  CHECK(diff(j_group_action(omega, V), omega) < 1e-12);
  const KForm theta = random_form(6, 1, rng);
  CHECK(diff(j_algebra_action(theta, V), j_group_action(theta, V)) < 1e-12);
  CHECK(diff(omega_trace(wedge(theta, omega), V), 4.0 * theta) < 1e-12);
  for (int k : {2, 3}) {
    const KForm a = random_form(6, k, rng);
    const TypeDecomposition t = type_project(a, V);
    CHECK(diff(t.hermitian + t.antihermitian, a) < 1e-12);
    CHECK(diff(t.trace_part + t.trace_free, t.hermitian) < 1e-12);
    CHECK(std::abs(inner_product(t.hermitian, t.antihermitian, V)) < 1e-12);
    CHECK(omega_trace(t.trace_free, V).max_abs() < 1e-12);
    const TypeDecomposition again = type_project(t.hermitian, V);
    CHECK(again.antihermitian.max_abs() < 1e-12);
    if (k == 2) {
      CHECK(diff(j_group_action(t.hermitian, V), t.hermitian) < 1e-12);
      CHECK(diff(j_group_action(t.antihermitian, V), -t.antihermitian) < 1e-12);
    } else {
      CHECK(diff(j_group_action(t.hermitian, V), j_algebra_action(t.hermitian, V)) < 1e-12);
    }
  }
}

TEST_CASE("volume and Kahler powers") {
  const HermitianVectorSpace V = HermitianVectorSpace::standard(2);
  CHECK(diff(volume_form(V), KForm::basis(4, {0, 1, 2, 3})) < 1e-15);
  CHECK(diff(kahler_power(V, 2), KForm::basis(4, {0, 1, 2, 3})) < 1e-15);
  CHECK(kahler_form(V).value({0, 1}) == doctest::Approx(1.0));
}

TEST_CASE("errors") {
  const HermitianVectorSpace V = HermitianVectorSpace::standard(2);
  auto code = [](auto fn) {
    try {
      fn();
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::ParseError;
  };
  CHECK(code([] { interior(Vector::Ones(4), KForm::scalar(4, 1.0)); }) == ErrorCode::DegreeUnderflow);
  CHECK(code([] { wedge(KForm(4, 3), KForm(4, 2)); }) == ErrorCode::DegreeUnsupported);
  CHECK(code([] { wedge(KForm(4, 1), KForm(6, 1)); }) == ErrorCode::FrameMismatch);
  CHECK(code([&] { type_project(KForm(4, 1), V); }) == ErrorCode::DegreeUnsupported);
  Matrix J = Matrix::Identity(4, 4);
  CHECK(code([&] { HermitianVectorSpace(Matrix::Identity(4, 4), J); }) == ErrorCode::InvariantViolation);
  Matrix G = Matrix::Identity(4, 4);
  G(0, 0) = 2.0;
  CHECK(code([&] { HermitianVectorSpace(G, V.J()); }) == ErrorCode::InvariantViolation);
}
