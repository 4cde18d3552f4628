#include <cmath>
#include <random>

#include "doctest.h"
#include "gcelab/catalog.hpp"
#include "gcelab/characteristic.hpp"
#include "gcelab/error.hpp"
#include "gcelab/models.hpp"

using namespace gcelab;

TEST_CASE("homogeneous Sasakian 3-frames satisfy the axioms") {
  const double curvature[3] = {4.0, 0.0, -4.0};
  int i = 0;
  for (SasakianKind k : {SasakianKind::sphere, SasakianKind::nil, SasakianKind::sl2}) {
    const SasakianFrame N = sasakian_model(k);
    const SasakianCheck c = check_sasakian(N);
    CHECK(c.worst() < 1e-14);
    CHECK(c.valid());
    CHECK(base_curvature(N) == doctest::Approx(curvature[i++]));
    // d lambda = -2 omega_0 with omega_0 = e^23 on H.
    const KForm dl = exterior_derivative(N.contact_form(), N.algebra);
    CHECK((dl + 2.0 * KForm::basis(3, {1, 2})).max_abs() < 1e-15);
  }
  CHECK(check_sasakian(heisenberg_sasakian(2)).valid());
}

TEST_CASE("invalid Sasakian data is rejected") {
  SasakianFrame N = sasakian_model(SasakianKind::sphere);
  N.metric(1, 1) = 2.0;
  CHECK_FALSE(check_sasakian(N).valid());
  try {
    sasakian_product(N, sasakian_model(SasakianKind::nil));
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidSasakian);
  }
  CHECK(parse_sasakian_kind("su2") == SasakianKind::sphere);
  CHECK_THROWS_AS(parse_sasakian_kind("so3"), Error);
}

TEST_CASE("Calabi-Eckmann structure on the Lee plane") {
  const std::complex<double> alpha(0.3, 1.7);
  const Matrix g = calabi_eckmann_lee_plane_metric(alpha);
  const Matrix J = calabi_eckmann_lee_plane_J(alpha);
  // J xi_1 = Re xi_1 + Im xi_2, J^2 = -1, |xi_1| = |J xi_1| = 1, g(xi_1, J xi_1) = 0.
  CHECK(J(0, 0) == doctest::Approx(0.3));
  CHECK(J(1, 0) == doctest::Approx(1.7));
  CHECK((J * J + Matrix::Identity(2, 2)).norm() < 1e-14);
  const Eigen::Vector2d x1(1.0, 0.0);
  const Eigen::Vector2d jx1 = J * x1;
  CHECK(x1.dot(g * x1) == doctest::Approx(1.0));
  CHECK(jx1.dot(g * jx1) == doctest::Approx(1.0));
  CHECK(std::abs(x1.dot(g * jx1)) < 1e-14);
  CHECK((J.transpose() * g * J - g).norm() < 1e-14);
  CHECK_THROWS_AS(calabi_eckmann_lee_plane_metric({1.0, 0.0}), Error);
  CHECK_THROWS_AS(calabi_eckmann_lee_plane_J({1.0, -2.0}), Error);
}

TEST_CASE("alpha = i gives the Sasakian product") {
  const SasakianFrame S = sasakian_model(SasakianKind::sphere);
  const SasakianFrame N = sasakian_model(SasakianKind::nil);
  const HermitianFrame a = calabi_eckmann(S, N, {0.0, 1.0});
  const HermitianFrame b = sasakian_product(S, N);
  CHECK((a.metric() - b.metric()).norm() < 1e-15);
  CHECK((a.J() - b.J()).norm() < 1e-15);
}

TEST_CASE("catalog file round trip") {
  const std::vector<CatalogEntry> built = build_catalog();
  const auto text = catalog_to_json(built).dump();
  const std::vector<CatalogEntry> back = catalog_from_json(nlohmann::json::parse(text));
  REQUIRE(back.size() == built.size());
  for (std::size_t i = 0; i < built.size(); ++i) {
    CHECK(back[i].name == built[i].name);
    CHECK((back[i].frame.metric() - built[i].frame.metric()).norm() == 0.0);
    CHECK((back[i].frame.J() - built[i].frame.J()).norm() == 0.0);
  }
  CHECK(find_model(built, "hopf").kind == "vaisman");
  CHECK_THROWS_AS(find_model(built, "nope"), Error);
}

TEST_CASE("shipped catalog matches the constructors") {
  const std::vector<CatalogEntry> shipped = load_catalog(GCELAB_TEST_CATALOG);
  const std::vector<CatalogEntry> built = build_catalog();
  REQUIRE(shipped.size() == built.size());
  for (std::size_t i = 0; i < built.size(); ++i) {
    CHECK(shipped[i].name == built[i].name);
    CHECK(shipped[i].kind == built[i].kind);
    CHECK((shipped[i].frame.metric() - built[i].frame.metric()).norm() < 1e-15);
    CHECK((shipped[i].frame.J() - built[i].frame.J()).norm() < 1e-15);
    CHECK(shipped[i].frame.algebra().brackets().size() == built[i].frame.algebra().brackets().size());
  }
}

TEST_CASE("frame documents: malformed input") {
  using nlohmann::json;
  auto code = [](const json& doc) {
    try {
      frame_from_json(doc);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::FrameMismatch;
  };
  const json ok = frame_to_json(hopf_frame(SasakianKind::nil));
  json missing = ok;
  missing.erase("J");
  CHECK(code(missing) == ErrorCode::ParseError);
  json odd = ok;
  odd["dim"] = 3;
  CHECK(code(odd) == ErrorCode::ParseError);
  json index = ok;
  index["brackets"] = json::array({json::array({0, 1, 2, 1.0})});
  CHECK(code(index) == ErrorCode::ParseError);
  json notj = ok;
  notj["J"] = frame_to_json(flat_kahler(2))["metric"];
  CHECK(code(notj) == ErrorCode::InvariantViolation);
  // Nested rows are accepted as well as flat row-major lists.
  json rows = ok;
  rows["metric"] = json::array({json::array({1, 0, 0, 0}), json::array({0, 1, 0, 0}),
                                json::array({0, 0, 1, 0}), json::array({0, 0, 0, 1})});
  CHECK(frame_from_json(rows).dim() == 4);
}
