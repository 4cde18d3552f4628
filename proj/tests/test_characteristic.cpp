#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "gcelab/catalog.hpp"
#include "gcelab/characteristic.hpp"
#include "gcelab/error.hpp"
#include "gcelab/models.hpp"
#include "oracles.hpp"

using namespace gcelab;

namespace {

const std::vector<CatalogEntry>& catalog() {
  static const std::vector<CatalogEntry> c = build_catalog();
  return c;
}

// sum_{i<j} (e_i _| e_j _| a) ^ (e_i _| e_j _| T) over an orthonormal basis.
KForm pair_contraction(const KForm& a, const KForm& T, const Matrix& P) {
  const int n = a.dim();
  KForm out(n, a.degree() - 1);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      out += oracle::wedge(oracle::interior(P.col(i), oracle::interior(P.col(j), a)),
                           oracle::interior(P.col(i), oracle::interior(P.col(j), T)));
    }
  return out;
}

}  // namespace

TEST_CASE("Hopf frame: Lee form, constant and Vaisman class") {
  const HermitianFrame F = hopf_frame(SasakianKind::sphere);
  CHECK((lee_form(F) - KForm::basis(4, {3})).max_abs() < 1e-15);
  CHECK((lee_form_from_codifferential(F) - lee_form(F)).max_abs() < 1e-15);
  const MetricClassification c = classify_metric(F);
  CHECK(c.lck.value);
  CHECK(c.vaisman.value);
  CHECK(c.gce.value);
  REQUIRE(c.lp_constant);
  CHECK(*c.lp_constant == doctest::Approx(1.0));
}

TEST_CASE("Lee potential constants of products and Calabi-Eckmann structures") {
  const SasakianFrame S = sasakian_model(SasakianKind::sphere);
  const MetricClassification p = classify_metric(sasakian_product(S, S));
  REQUIRE(p.lp_constant);
  CHECK(*p.lp_constant == doctest::Approx(2.0));
  CHECK_FALSE(p.lck.value);
  const MetricClassification ce = classify_metric(calabi_eckmann(S, S, {1.0, 1.0}));
  REQUIRE(ce.lp_constant);
  CHECK(*ce.lp_constant == doctest::Approx(4.0));
  CHECK(ce.gce.value);
}

TEST_CASE("Nijenhuis tensor detects non-integrable J") {
  // A generic orthogonal J on su(2) + su(2) is not integrable.
  const SasakianFrame S = sasakian_model(SasakianKind::sphere);
  std::mt19937 rng(21);
  const LieAlgebra g = LieAlgebra::direct_sum(S.algebra, S.algebra);
  const HermitianFrame F(random_hermitian_space(3, rng), g);
  CHECK(nijenhuis_residual(F) > 0.1);
  try {
    characteristic_connection(F);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NoCharacteristicConnection);
  }
  CHECK(nijenhuis_residual(hopf_frame(SasakianKind::sphere)) < 1e-15);
}

TEST_CASE("characteristic connection is hermitian with torsion -J d omega") {
  for (const CatalogEntry& e : catalog()) {
    const HermitianFrame& F = e.frame;
    const Connection nabla = characteristic_connection(F);
    CHECK(metric_compatibility_residual(nabla, F.metric()) < 1e-12);
    CHECK(endomorphism_derivative_residual(F.J(), nabla) < 1e-12);
    const KForm T = characteristic_torsion(F);
    const Tensor tor = lowered_torsion(nabla, F.metric(), F.algebra());
    CHECK((tor - Tensor::from_form(T)).max_abs() < 1e-12);
    CHECK(tor.alternation_defect() < 1e-12);
  }
}

TEST_CASE("dT = 2 Omega, Bianchi identity and codifferentials of T") {
  for (const CatalogEntry& e : catalog()) {
    const HermitianFrame& F = e.frame;
    const KForm T = characteristic_torsion(F);
    const KForm Omega = bianchi_four_form(T, F.space());
    const Connection nabla = characteristic_connection(F);
    CHECK((exterior_derivative(T, F) - 2.0 * Omega).max_abs() < 1e-12);
    CHECK((bianchi_sum(nabla, F) - Tensor::from_form(Omega)).max_abs() < 1e-12);
    CHECK(codifferential(T, F).max_abs() < 1e-12);
    CHECK(nabla_codifferential(T, nabla, F).max_abs() < 1e-12);
  }
}

TEST_CASE("codifferential defect formula against an independent pair contraction") {
  std::mt19937 rng(31);
  const SasakianFrame S = sasakian_model(SasakianKind::sphere);
  const SasakianFrame L = sasakian_model(SasakianKind::sl2);
  const HermitianFrame F = calabi_eckmann(S, L, {0.4, 1.3});
  const KForm T = characteristic_torsion(F);
  const Connection nabla = characteristic_connection(F);
  const Matrix& P = F.space().adapted_basis();
  for (int k : {2, 3, 4}) {
    const KForm a = random_form(F.dim(), k, rng);
    const KForm lhs = nabla_codifferential(a, nabla, F) - codifferential(a, F);
    const KForm pairs = pair_contraction(a, T, P);
    // (-1)^(k+1) sum_{i<j} (e_ij _| a) ^ (e_ij _| T)
    CHECK((lhs - ((k % 2) ? 1.0 : -1.0) * pairs).max_abs() < 1e-12);
    CHECK((codifferential_defect(a, T, F.space()) - lhs).max_abs() < 1e-12);
  }
  // The form with coefficient 1/2 and no sign alternation does not hold.
  const KForm a = random_form(F.dim(), 2, rng);
  const KForm lhs = nabla_codifferential(a, nabla, F) - codifferential(a, F);
  CHECK((lhs - 0.5 * pair_contraction(a, T, P)).max_abs() > 1e-3);
}

TEST_CASE("Lee potential fit and classification of flat space") {
  const MetricClassification c = classify_metric(flat_kahler(2));
  CHECK(c.kahler.value);
  CHECK(c.lp.value);
  CHECK(c.lp_vacuous);
  CHECK_FALSE(c.gce.value);
  CHECK_FALSE(c.vaisman.value);
}

TEST_CASE("Lee form needs m >= 2") {
  const HermitianFrame F(HermitianVectorSpace::standard(1), LieAlgebra::abelian(2));
  try {
    lee_form(F);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UnsupportedDimension);
  }
}
