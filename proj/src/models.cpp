#include "gcelab/models.hpp"

#include <algorithm>
#include <cmath>

#include "gcelab/error.hpp"

namespace gcelab {

namespace {

double max_abs(const Matrix& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

// Columns form a g-orthonormal basis.
Matrix orthonormal_basis(const Matrix& metric) {
  Eigen::LLT<Matrix> llt(metric);
  return llt.matrixL().transpose().toDenseMatrix().inverse();
}

SasakianFrame make_frame(std::string name, int dim, const std::vector<Bracket>& brackets) {
  SasakianFrame N;
  N.name = std::move(name);
  N.algebra = LieAlgebra(dim, brackets);
  N.metric = Matrix::Identity(dim, dim);
  N.reeb_index = 0;
  return N;
}

}  // namespace

const char* to_string(SasakianKind kind) {
  switch (kind) {
    case SasakianKind::sphere: return "sphere";
    case SasakianKind::nil: return "nil";
    case SasakianKind::sl2: return "sl2";
  }
  return "unknown";
}

SasakianKind parse_sasakian_kind(const std::string& name) {
  if (name == "sphere" || name == "su2") return SasakianKind::sphere;
  if (name == "nil") return SasakianKind::nil;
  if (name == "sl2") return SasakianKind::sl2;
  throw Error(ErrorCode::InvalidParameter, "unknown Sasakian model '" + name + "'");
}

KForm SasakianFrame::contact_form() const { return KForm::covector(metric * reeb()); }

Matrix SasakianFrame::phi() const {
  const Connection lc = levi_civita(metric, algebra);
  Matrix out(dim(), dim());
  for (int j = 0; j < dim(); ++j) out.col(j) = -lc.along(j).col(reeb_index);
  return out;
}

double SasakianCheck::worst() const {
  return std::max({reeb_length, killing, complex_structure, normality, normalization,
                   reeb_invariance});
}

bool SasakianCheck::valid(double tol) const { return worst() <= tol && contact_volume > 1e-6; }

SasakianCheck check_sasakian(const SasakianFrame& N) {
  const int n = N.dim();
  const Matrix& G = N.metric;
  const Vector xi = N.reeb();
  const Vector lambda = G * xi;
  const Matrix phi = N.phi();
  const Connection lc = levi_civita(G, N.algebra);
  SasakianCheck c;
  c.reeb_length = std::abs(xi.dot(G * xi) - 1.0);
  c.killing = max_abs(G * phi + phi.transpose() * G);
  c.complex_structure =
      max_abs(phi * phi + Matrix::Identity(n, n) - xi * lambda.transpose());
  for (int i = 0; i < n; ++i) {
    const Matrix dphi = lc.along(i) * phi - phi * lc.along(i);
    for (int j = 0; j < n; ++j) {
      const Vector target = G(i, j) * xi - lambda(j) * Vector::Unit(n, i);
      c.normality = std::max(c.normality, (dphi.col(j) - target).cwiseAbs().maxCoeff());
    }
  }
  const KForm lam = N.contact_form();
  if (n >= 2) {
    const KForm dlam = exterior_derivative(lam, N.algebra);
    c.normalization = (dlam + 2.0 * KForm::from_matrix(phi.transpose() * G)).max_abs();
  }
  const Matrix ad = N.algebra.ad(N.reeb_index);
  c.reeb_invariance = std::max(max_abs(ad.transpose() * G + G * ad), max_abs(ad * phi - phi * ad));
  KForm vol = lam;
  if (n >= 3) {
    const KForm dlam = exterior_derivative(lam, N.algebra);
    for (int p = 0; p < (n - 1) / 2; ++p) vol = wedge(vol, dlam);
  }
  c.contact_volume = pullback(orthonormal_basis(G), vol).components().norm();
  return c;
}

void require_sasakian(const SasakianFrame& N, double tol) {
  if (N.dim() % 2 == 0) {
    throw Error(ErrorCode::InvalidSasakian, N.name + ": even dimension");
  }
  const SasakianCheck c = check_sasakian(N);
  auto fail = [&](const char* what, double v) {
    throw Error(ErrorCode::InvalidSasakian,
                N.name + ": " + what + " residual " + std::to_string(v));
  };
  if (c.reeb_length > tol) fail("unit Reeb field", c.reeb_length);
  if (c.killing > tol) fail("Killing", c.killing);
  if (c.complex_structure > tol) fail("Phi^2 = -1 on H", c.complex_structure);
  if (c.normality > tol) fail("normality", c.normality);
  if (c.normalization > tol) fail("d lambda = -2 omega_0", c.normalization);
  if (c.reeb_invariance > tol) fail("Reeb invariance", c.reeb_invariance);
  if (c.contact_volume <= 1e-6) fail("contact condition", c.contact_volume);
}

SasakianFrame sasakian_model(SasakianKind kind) {
  double a = 0.0;
  switch (kind) {
    case SasakianKind::sphere: a = 2.0; break;
    case SasakianKind::nil: a = 0.0; break;
    case SasakianKind::sl2: a = -2.0; break;
  }
  std::vector<Bracket> br{{1, 2, 0, 2.0}};
  if (a != 0.0) {
    br.push_back({0, 1, 2, a});
    br.push_back({2, 0, 1, a});
  }
  return make_frame(to_string(kind), 3, br);
}

SasakianFrame heisenberg_sasakian(int p) {
  if (p < 1) throw Error(ErrorCode::InvalidParameter, "Heisenberg algebra needs p >= 1");
  std::vector<Bracket> br;
  for (int i = 0; i < p; ++i) br.push_back({2 * i + 1, 2 * i + 2, 0, 2.0});
  return make_frame("nil" + std::to_string(2 * p + 1), 2 * p + 1, br);
}

SasakianFrame abelian_line() { return make_frame("line", 1, {}); }

double base_curvature(const SasakianFrame& N) {
  if (N.dim() != 3) throw Error(ErrorCode::UnsupportedDimension, "base curvature needs dim 3");
  const Matrix& G = N.metric;
  const Vector xi = N.reeb();
  // Orthonormal horizontal pair.
  Matrix seeds(3, 2);
  int c = 0;
  for (int i = 0; i < 3 && c < 2; ++i) {
    if (i == N.reeb_index) continue;
    Vector v = Vector::Unit(3, i);
    v -= v.dot(G * xi) * xi;
    for (int k = 0; k < c; ++k) v -= v.dot(G * seeds.col(k)) * seeds.col(k);
    seeds.col(c++) = v / std::sqrt(v.dot(G * v));
  }
  const Vector x = seeds.col(0);
  const Vector y = seeds.col(1);
  const Connection lc = levi_civita(G, N.algebra);
  const double vertical = N.algebra.bracket(x, y).dot(G * xi);
  return sectional_curvature(lc, G, N.algebra, x, y) + 0.75 * vertical * vertical;
}

HermitianFrame sasakian_product(const SasakianFrame& N1, const SasakianFrame& N2) {
  require_sasakian(N1);
  require_sasakian(N2);
  const int n1 = N1.dim();
  const int n = n1 + N2.dim();
  Matrix G = Matrix::Zero(n, n);
  G.topLeftCorner(n1, n1) = N1.metric;
  G.bottomRightCorner(N2.dim(), N2.dim()) = N2.metric;
  Matrix J = Matrix::Zero(n, n);
  J.topLeftCorner(n1, n1) = N1.phi();
  J.bottomRightCorner(N2.dim(), N2.dim()) = N2.phi();
  const int r1 = N1.reeb_index;
  const int r2 = n1 + N2.reeb_index;
  J(r2, r1) = 1.0;
  J(r1, r2) = -1.0;
  return HermitianFrame(HermitianVectorSpace(G, J), LieAlgebra::direct_sum(N1.algebra, N2.algebra));
}

Matrix calabi_eckmann_lee_plane_metric(std::complex<double> alpha) {
  const double x = alpha.real();
  const double y = alpha.imag();
  if (!(y > 0.0)) throw Error(ErrorCode::InvalidParameter, "Calabi-Eckmann parameter needs Im > 0");
  Matrix g(2, 2);
  g << 1.0, -x / y, -x / y, (1.0 + x * x) / (y * y);
  return g;
}

Matrix calabi_eckmann_lee_plane_J(std::complex<double> alpha) {
  const double x = alpha.real();
  const double y = alpha.imag();
  if (!(y > 0.0)) throw Error(ErrorCode::InvalidParameter, "Calabi-Eckmann parameter needs Im > 0");
  Matrix j(2, 2);
  j << x, -(1.0 + x * x) / y, y, -x;
  return j;
}

HermitianFrame calabi_eckmann(const SasakianFrame& N1, const SasakianFrame& N2,
                              std::complex<double> alpha) {
  const Matrix gE = calabi_eckmann_lee_plane_metric(alpha);
  const Matrix jE = calabi_eckmann_lee_plane_J(alpha);
  const HermitianFrame base = sasakian_product(N1, N2);
  Matrix G = base.metric();
  Matrix J = base.J();
  const int idx[2] = {N1.reeb_index, N1.dim() + N2.reeb_index};
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      G(idx[a], idx[b]) = gE(a, b);
      J(idx[a], idx[b]) = jE(a, b);
    }
  return HermitianFrame(HermitianVectorSpace(G, J), base.algebra());
}

HermitianFrame hopf_frame(SasakianKind kind) {
  return sasakian_product(sasakian_model(kind), abelian_line());
}

HermitianFrame flat_kahler(int m) {
  return HermitianFrame(HermitianVectorSpace::standard(m), LieAlgebra::abelian(2 * m));
}

HermitianFrame hermitian_sum(const HermitianFrame& a, const HermitianFrame& b) {
  const int na = a.dim();
  const int n = na + b.dim();
  Matrix G = Matrix::Zero(n, n);
  Matrix J = Matrix::Zero(n, n);
  G.topLeftCorner(na, na) = a.metric();
  G.bottomRightCorner(b.dim(), b.dim()) = b.metric();
  J.topLeftCorner(na, na) = a.J();
  J.bottomRightCorner(b.dim(), b.dim()) = b.J();
  return HermitianFrame(HermitianVectorSpace(G, J), LieAlgebra::direct_sum(a.algebra(), b.algebra()));
}

HermitianFrame sasaki_line_kahler(SasakianKind kind) {
  return hermitian_sum(hopf_frame(kind), flat_kahler(1));
}

HermitianFrame mixed_heisenberg_line() {
  const LieAlgebra nil(5, std::vector<Bracket>{{1, 2, 0, 2.0}, {3, 4, 0, -1.0}});
  Matrix J = Matrix::Zero(6, 6);
  J(5, 0) = 1.0;
  J(0, 5) = -1.0;
  J(2, 1) = 1.0;
  J(1, 2) = -1.0;
  J(4, 3) = 1.0;
  J(3, 4) = -1.0;
  return HermitianFrame(HermitianVectorSpace(Matrix::Identity(6, 6), J),
                        LieAlgebra::direct_sum(nil, LieAlgebra::abelian(1)));
}

}  // namespace gcelab
