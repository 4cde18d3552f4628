#include <cmath>
#include <random>

#include "doctest.h"
#include "gcelab/catalog.hpp"
#include "gcelab/error.hpp"
#include "gcelab/models.hpp"
#include "gcelab/torsion_structure.hpp"

using namespace gcelab;

namespace {

const std::vector<CatalogEntry>& catalog() {
  static const std::vector<CatalogEntry> c = build_catalog();
  return c;
}

}  // namespace

TEST_CASE("decomposition residuals vanish on the catalog") {
  for (const CatalogEntry& e : catalog()) {
    if (e.kind == "flat_kahler") continue;
    const TorsionDecomposition D = decompose_torsion(e.frame);
    for (const auto& [key, value] : D.residuals) {
      INFO(e.name << " " << key);
      CHECK(value < 1e-10);
    }
    // T = eta_unit ^ omega_+ + J eta_unit ^ omega_- + T0
    const KForm rebuilt = wedge(D.eta_unit, D.omega_plus) + wedge(D.j_eta_unit, D.omega_minus) + D.T0;
    CHECK((rebuilt - D.T).max_abs() < 1e-12);
  }
}

TEST_CASE("eigenvalues of the model structures") {
  const SasakianFrame S = sasakian_model(SasakianKind::sphere);
  {
    const TorsionDecomposition D = decompose_torsion(hopf_frame(SasakianKind::sphere));
    REQUIRE(D.eigenspaces.size() == 1);
    CHECK(D.eigenspaces[0].a_plus == doctest::Approx(2.0));
    CHECK(std::abs(D.eigenspaces[0].a_minus) < 1e-12);
  }
  {
    const TorsionDecomposition D = decompose_torsion(sasakian_product(S, S));
    REQUIRE(D.eigenspaces.size() == 2);
    const double r = std::sqrt(2.0);
    CHECK(D.eigenspaces[0].a_plus == doctest::Approx(r));
    CHECK(D.eigenspaces[1].a_plus == doctest::Approx(r));
    CHECK(D.eigenspaces[0].a_minus == doctest::Approx(r));
    CHECK(D.eigenspaces[1].a_minus == doctest::Approx(-r));
  }
  {
    const TorsionDecomposition D = decompose_torsion(mixed_heisenberg_line());
    REQUIRE(D.eigenspaces.size() == 2);
    CHECK(D.eigenspaces[0].a_plus == doctest::Approx(2.0));
    CHECK(D.eigenspaces[1].a_plus == doctest::Approx(-1.0));
    const Matrix s = mixed_signature_metric(D, mixed_heisenberg_line().metric());
    Eigen::SelfAdjointEigenSolver<Matrix> es(s);
    CHECK(es.eigenvalues().minCoeff() < 0.0);
    CHECK(es.eigenvalues().maxCoeff() > 0.0);
  }
}

TEST_CASE("local case dispatch over the catalog") {
  for (const CatalogEntry& e : catalog()) {
    if (e.kind == "flat_kahler") {
      CHECK_THROWS_AS(decompose_torsion(e.frame), Error);
      continue;
    }
    const TorsionDecomposition D = decompose_torsion(e.frame);
    const std::string tag = to_string(classify_local(D, e.frame.space()));
    const std::string want = e.kind == "calabi_eckmann" ? "sasakian_product" : e.kind;
    INFO(e.name);
    CHECK(tag == want);
  }
}

TEST_CASE("decomposition preconditions") {
  try {
    decompose_torsion(flat_kahler(2));
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NoLeeDirection);
  }
}

TEST_CASE("modifications preserve the class and match the closed-form tensor") {
  std::mt19937 rng(41);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  std::uniform_real_distribution<double> sc(0.4, 2.5);
  const SasakianFrame N = sasakian_model(SasakianKind::nil);
  const SasakianFrame L = sasakian_model(SasakianKind::sl2);
  for (const HermitianFrame& F : {sasakian_product(N, L), calabi_eckmann(L, L, {-0.4, 0.6})}) {
    const TorsionDecomposition D = decompose_torsion(F);
    const ModificationBasis B = modification_basis(D);
    const Connection nabla = characteristic_connection(F);
    for (int s = 0; s < 5; ++s) {
      std::vector<double> scales{sc(rng), sc(rng)};
      Matrix R(2, 2);
      R << u(rng), u(rng), u(rng), u(rng);
      if (std::abs(R.determinant()) < 0.2) continue;
      const Modification M = modify_structure(F, B, scales, R);
      const MetricClassification c = classify_metric(M.frame);
      CHECK(c.gce.value);
      REQUIRE(c.lp_constant);
      CHECK(*c.lp_constant > 0.0);
      const Tensor A = modification_tensor(F, nabla, M.frame.metric(), M.frame.J());
      const Tensor tau = modified_torsion_tensor(F, nabla, M.frame.metric());
      const ModificationRelations rel = modification_relations(A, tau, M.frame.J());
      CHECK(rel.skew < 1e-12);
      CHECK(rel.j_invariance < 1e-12);
      CHECK(rel.torsion_symmetry < 1e-12);
      const Connection nabla_prime = characteristic_connection(M.frame);
      CHECK((A - connection_difference(nabla_prime, nabla, M.frame.metric())).max_abs() < 1e-12);
    }
  }
}

TEST_CASE("product split matrix recovers the two Sasakian factors") {
  const SasakianFrame S = sasakian_model(SasakianKind::sphere);
  const HermitianFrame F = sasakian_product(S, S);
  const TorsionDecomposition D = decompose_torsion(F);
  const Modification M = modify_structure(F, modification_basis(D), std::vector<double>{1.0, 1.0},
                                          product_split_matrix(D));
  const auto [eta, jeta] = lee_plane_coframe(M.basis);
  const KForm omega = kahler_form(F.space());
  auto restrict = [&](const Matrix& basis) {
    return pullback(basis * (basis.transpose() * F.metric()), omega);
  };
  CHECK((exterior_derivative(eta, F) - 2.0 * restrict(D.eigenspaces[0].basis)).max_abs() < 1e-12);
  CHECK((exterior_derivative(jeta, F) - 2.0 * restrict(D.eigenspaces[1].basis)).max_abs() < 1e-12);
}

TEST_CASE("invalid modifications") {
  const HermitianFrame F = hopf_frame(SasakianKind::nil);
  auto code = [&](std::vector<double> scales, Matrix R) {
    try {
      parallel_modification(F, scales, R);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::ParseError;
  };
  CHECK(code({1.0}, Matrix::Zero(2, 2)) == ErrorCode::InvalidModification);
  CHECK(code({-1.0}, Matrix::Identity(2, 2)) == ErrorCode::InvalidModification);
  CHECK(code({1.0, 2.0}, Matrix::Identity(2, 2)) == ErrorCode::InvalidModification);
  CHECK(code({1.0}, Matrix::Identity(3, 3)) == ErrorCode::InvalidModification);
  const HermitianFrame same = parallel_modification(F, std::vector<double>{1.0}, Matrix::Identity(2, 2));
  CHECK((same.metric() - F.metric()).norm() < 1e-14);
  CHECK((same.J() - F.J()).norm() < 1e-14);
}
