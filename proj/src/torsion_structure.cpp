#include "gcelab/torsion_structure.hpp"

#include <algorithm>
#include <cmath>

#include "gcelab/error.hpp"

namespace gcelab {

namespace {

// Frobenius norm of an endomorphism in the adapted orthonormal frame.
double endomorphism_norm(const Matrix& A, const HermitianVectorSpace& V) {
  return (V.adapted_coframe() * A * V.adapted_basis()).norm();
}

// Group sorted (descending) eigenvalues into runs closer than `tol`.
std::vector<std::pair<int, int>> clusters(const Vector& sorted_values, double tol) {
  std::vector<std::pair<int, int>> out;
  int start = 0;
  for (int i = 1; i <= sorted_values.size(); ++i) {
    if (i == sorted_values.size() || sorted_values(i - 1) - sorted_values(i) > tol) {
      out.emplace_back(start, i - start);
      start = i;
    }
  }
  return out;
}

// Eigen-decomposition of a symmetric matrix with eigenvalues descending.
void sorted_eigen(const Matrix& M, Vector& values, Matrix& vectors) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (M + M.transpose()));
  const int n = static_cast<int>(M.rows());
  values.resize(n);
  vectors.resize(n, n);
  for (int i = 0; i < n; ++i) {
    values(i) = es.eigenvalues()(n - 1 - i);
    vectors.col(i) = es.eigenvectors().col(n - 1 - i);
  }
}

// t with the endomorphism L applied in the listed slots.
Tensor apply_on_slots(const Tensor& t, const Matrix& L, std::initializer_list<int> slots) {
  Tensor cur = t;
  const int n = t.dim();
  for (int slot : slots) {
    Tensor next(n, t.rank());
    std::vector<int> src(t.rank());
    for_each_index(n, t.rank(), [&](std::span<const int> idx) {
      src.assign(idx.begin(), idx.end());
      double s = 0.0;
      for (int l = 0; l < n; ++l) {
        const double c = L(l, idx[slot]);
        if (c == 0.0) continue;
        src[slot] = l;
        s += c * cur.at(src);
      }
      next.at(idx) = s;
    });
    cur = std::move(next);
  }
  return cur;
}

}  // namespace

const char* to_string(LocalCase c) {
  switch (c) {
    case LocalCase::vaisman: return "vaisman";
    case LocalCase::pseudo_vaisman_mixed: return "pseudo_vaisman_mixed";
    case LocalCase::sasaki_line_kahler: return "sasaki_line_kahler";
    case LocalCase::sasakian_product: return "sasakian_product";
    case LocalCase::not_applicable: return "not_applicable";
  }
  return "unknown";
}

TorsionDecomposition decompose_torsion(const HermitianFrame& F, double tol) {
  const HermitianVectorSpace& V = F.space();
  const Matrix& G = F.metric();
  const Matrix& J = F.J();
  const int n = F.dim();
  const HermitianInvariants inv = hermitian_invariants(F, tol);
  if (form_norm(inv.theta, V) <= kLeeFormThreshold) {
    throw Error(ErrorCode::NoLeeDirection, "the Lee form vanishes");
  }
  if (!inv.integrable) {
    throw Error(ErrorCode::PreconditionViolation,
                "J is not integrable (Nijenhuis residual " + std::to_string(inv.nijenhuis) + ")");
  }
  const Connection nabla = add_three_form(levi_civita(F), inv.T, G, 0.5);
  const double parallel = tensor_norm(covariant_derivative(Tensor::from_form(inv.T), nabla), V);
  if (parallel > tol) {
    throw Error(ErrorCode::PreconditionViolation,
                "characteristic torsion is not parallel (residual " + std::to_string(parallel) + ")");
  }

  TorsionDecomposition D;
  D.residuals["parallel_torsion"] = parallel;
  D.theta = inv.theta;
  D.T = inv.T;
  D.eta = 2.0 * j_covector(inv.theta, V);
  D.eta_length = form_norm(D.eta, V);
  D.eta_unit = (1.0 / D.eta_length) * D.eta;
  D.j_eta_unit = j_covector(D.eta_unit, V);
  D.xi = V.sharp(D.eta_unit.components());
  D.j_xi = J * D.xi;

  Matrix seed(n, 1);
  seed.col(0) = D.xi;
  const Matrix basis = adapted_orthonormal_basis(G, J, seed);
  D.E_basis = basis.leftCols(2);
  D.H_basis = basis.rightCols(n - 2);
  D.H_projector = Matrix::Identity(n, n) - D.xi * (G * D.xi).transpose() -
                  D.j_xi * (G * D.j_xi).transpose();

  D.omega_plus = exterior_derivative(D.eta_unit, F);
  D.omega_minus = exterior_derivative(D.j_eta_unit, F);
  D.T0 = pullback(D.H_projector, D.T);

  auto& r = D.residuals;
  r["reconstruction"] = form_norm(wedge(D.eta_unit, D.omega_plus) +
                                      wedge(D.j_eta_unit, D.omega_minus) + D.T0 - D.T,
                                  V);
  r["omega_plus_type"] =
      form_norm(type_project(pullback(D.H_projector, D.omega_plus), V).antihermitian, V);
  r["omega_minus_type"] =
      form_norm(type_project(pullback(D.H_projector, D.omega_minus), V).antihermitian, V);
  r["omega_plus_on_E"] = std::max(form_norm(interior(D.xi, D.omega_plus), V),
                                  form_norm(interior(D.j_xi, D.omega_plus), V));
  r["omega_minus_on_E"] = std::max(form_norm(interior(D.xi, D.omega_minus), V),
                                   form_norm(interior(D.j_xi, D.omega_minus), V));
  r["omega_plus_is_xi_torsion"] = form_norm(D.omega_plus - interior(D.xi, D.T), V);
  r["omega_minus_is_jxi_torsion"] = form_norm(D.omega_minus - interior(D.j_xi, D.T), V);
  r["T_eta_jeta"] = form_norm(interior(D.j_xi, interior(D.xi, D.T)), V);
  r["T0"] = form_norm(D.T0, V);
  r["T0_trace"] = form_norm(omega_trace(D.T0, V), V);
  r["eta_parallel"] = tensor_norm(covariant_derivative(Tensor::from_form(D.eta_unit), nabla), V);
  {
    const Tensor grad = covariant_derivative(Tensor::from_form(D.eta_unit), levi_civita(F));
    Tensor sym(n, 2);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) sym({i, j}) = grad({i, j}) + grad({j, i});
    r["eta_killing"] = tensor_norm(sym, V);
  }
  {
    const Vector br = F.algebra().bracket(D.xi, D.j_xi);
    r["lee_plane_bracket"] = std::sqrt(std::max(0.0, br.dot(G * br)));
  }

  D.A_plus = -V.metric_inverse() * D.omega_plus.to_matrix();
  D.A_minus = -V.metric_inverse() * D.omega_minus.to_matrix();
  r["commutator"] = endomorphism_norm(D.A_plus * D.A_minus - D.A_minus * D.A_plus, V);
  r["A_plus_J"] = endomorphism_norm(D.A_plus * J - J * D.A_plus, V);
  r["A_minus_J"] = endomorphism_norm(D.A_minus * J - J * D.A_minus, V);
  r["A_plus_T0"] = form_norm(derivation(D.A_plus, D.T0), V);
  r["A_minus_T0"] = form_norm(derivation(D.A_minus, D.T0), V);
  if (r["commutator"] > tol) {
    throw Error(ErrorCode::DecompositionFailure,
                "A_+ and A_- do not commute (residual " + std::to_string(r["commutator"]) + ")");
  }
  D.eigenspaces = split_eigenspaces(D, V, tol);
  return D;
}

std::vector<Eigenspace> split_eigenspaces(TorsionDecomposition& D, const HermitianVectorSpace& V,
                                          double tol, double cluster_tol) {
  const Matrix& G = V.metric();
  const Matrix& J = V.J();
  const double comm = endomorphism_norm(D.A_plus * D.A_minus - D.A_minus * D.A_plus, V);
  if (comm > tol) {
    throw Error(ErrorCode::DecompositionFailure,
                "A_+ and A_- do not commute (residual " + std::to_string(comm) + ")");
  }
  const Matrix& Bh = D.H_basis;
  const Matrix Mp = Bh.transpose() * G * (-J * D.A_plus) * Bh;
  const Matrix Mm = Bh.transpose() * G * (-J * D.A_minus) * Bh;

  std::vector<Eigenspace> out;
  Vector vp;
  Matrix Up;
  sorted_eigen(Mp, vp, Up);
  for (auto [start, count] : clusters(vp, cluster_tol)) {
    const Matrix U = Up.middleCols(start, count);
    Vector vm;
    Matrix Um;
    sorted_eigen(U.transpose() * Mm * U, vm, Um);
    for (auto [s2, c2] : clusters(vm, cluster_tol)) {
      const Matrix coords = U * Um.middleCols(s2, c2);
      const Matrix seeds = Bh * coords;
      Eigenspace e;
      e.basis = adapted_orthonormal_basis(G, J, seeds).leftCols(c2);
      e.a_plus = (e.basis.transpose() * G * (-J * D.A_plus) * e.basis).trace() / c2;
      e.a_minus = (e.basis.transpose() * G * (-J * D.A_minus) * e.basis).trace() / c2;
      out.push_back(std::move(e));
    }
  }
  std::sort(out.begin(), out.end(), [&](const Eigenspace& a, const Eigenspace& b) {
    if (std::abs(a.a_plus - b.a_plus) > cluster_tol) return a.a_plus > b.a_plus;
    return a.a_minus > b.a_minus;
  });
  double split = 0.0;
  for (const Eigenspace& e : out) {
    const Matrix rp = (D.A_plus - e.a_plus * J) * e.basis;
    const Matrix rm = (D.A_minus - e.a_minus * J) * e.basis;
    // Columns are orthonormal, so the Frobenius norm of the image coordinates
    // in the orthonormal frame is frame independent.
    split = std::max({split, (V.adapted_coframe() * rp).norm(), (V.adapted_coframe() * rm).norm()});
  }
  D.residuals["eigen_split"] = split;
  return out;
}

LocalCase classify_local(const TorsionDecomposition& D, const HermitianVectorSpace& V, double tol) {
  if (form_norm(D.omega_minus, V) > tol) return LocalCase::sasakian_product;
  if (D.eigenspaces.empty()) return LocalCase::not_applicable;
  const double a1 = D.eigenspaces.front().a_plus;
  const double a2 = D.eigenspaces.back().a_plus;
  if (a1 <= tol) return LocalCase::not_applicable;
  if (a2 < -tol) return LocalCase::pseudo_vaisman_mixed;
  if (a2 <= tol) return LocalCase::sasaki_line_kahler;
  return LocalCase::vaisman;
}

Matrix mixed_signature_metric(const TorsionDecomposition& D, const Matrix& metric) {
  const int n = static_cast<int>(metric.rows());
  // Rebuild the metric from an orthonormal basis adapted to E + sum H_i.
  Matrix Q(n, n);
  Vector signs(n);
  Q.leftCols(2) = D.E_basis;
  signs.head(2).setOnes();
  int col = 2;
  for (const Eigenspace& e : D.eigenspaces) {
    const int k = static_cast<int>(e.basis.cols());
    const double scale = std::abs(e.a_plus) > kEigenClusterTolerance ? std::abs(e.a_plus) : 1.0;
    Q.middleCols(col, k) = e.basis / std::sqrt(scale);
    signs.segment(col, k).setConstant(e.a_plus < -kEigenClusterTolerance ? -1.0 : 1.0);
    col += k;
  }
  const Matrix Qi = Q.inverse();
  return Qi.transpose() * signs.asDiagonal() * Qi;
}

ModificationBasis modification_basis(const TorsionDecomposition& D) {
  ModificationBasis B;
  B.E = D.E_basis;
  for (const Eigenspace& e : D.eigenspaces) B.H.push_back(e.basis);
  return B;
}

Modification modify_structure(const HermitianFrame& F, const ModificationBasis& B,
                              std::span<const double> scales, const Matrix& R) {
  const int n = F.dim();
  if (scales.size() != B.H.size()) {
    throw Error(ErrorCode::InvalidModification,
                "expected " + std::to_string(B.H.size()) + " scales, got " + std::to_string(scales.size()));
  }
  for (double a : scales) {
    if (!(a > 0.0)) throw Error(ErrorCode::InvalidModification, "scales must be positive");
  }
  if (R.rows() != 2 || R.cols() != 2) throw Error(ErrorCode::InvalidModification, "R must be 2x2");
  const double det = R.determinant();
  if (!(std::abs(det) > 1e-12 * std::max(1.0, R.cwiseAbs().maxCoeff() * R.cwiseAbs().maxCoeff()))) {
    throw Error(ErrorCode::InvalidModification, "R is singular");
  }
  Modification out{F, {}};
  out.basis.E = B.E * R;
  Matrix Q(n, n);
  Q.leftCols(2) = out.basis.E;
  int col = 2;
  for (std::size_t i = 0; i < B.H.size(); ++i) {
    const Matrix h = B.H[i] / std::sqrt(scales[i]);
    Q.middleCols(col, h.cols()) = h;
    out.basis.H.push_back(h);
    col += static_cast<int>(h.cols());
  }
  if (col != n) throw Error(ErrorCode::InvalidModification, "basis does not span the frame");
  Matrix J0 = Matrix::Zero(n, n);
  for (int i = 0; i < n; i += 2) {
    J0(i + 1, i) = 1.0;
    J0(i, i + 1) = -1.0;
  }
  const Matrix Qi = Q.inverse();
  const Matrix G = Qi.transpose() * Qi;
  const Matrix J = Q * J0 * Qi;
  out.frame = HermitianFrame(HermitianVectorSpace(0.5 * (G + G.transpose()), J), F.algebra());
  return out;
}

HermitianFrame parallel_modification(const HermitianFrame& F, std::span<const double> scales,
                                     const Matrix& R, double tol) {
  const TorsionDecomposition D = decompose_torsion(F, tol);
  return modify_structure(F, modification_basis(D), scales, R).frame;
}

Matrix product_split_matrix(const TorsionDecomposition& D) {
  if (D.eigenspaces.size() != 2) {
    throw Error(ErrorCode::DecompositionFailure, "product split needs exactly two eigenspaces");
  }
  Matrix R(2, 2);
  R << D.eigenspaces[0].a_plus, D.eigenspaces[1].a_plus, D.eigenspaces[0].a_minus,
      D.eigenspaces[1].a_minus;
  return 0.5 * R;
}

std::pair<KForm, KForm> lee_plane_coframe(const ModificationBasis& B) {
  const int n = static_cast<int>(B.E.rows());
  Matrix Q(n, n);
  Q.leftCols(2) = B.E;
  int col = 2;
  for (const Matrix& h : B.H) {
    Q.middleCols(col, h.cols()) = h;
    col += static_cast<int>(h.cols());
  }
  const Matrix Qi = Q.inverse();
  return {KForm::covector(Qi.row(0).transpose()), KForm::covector(Qi.row(1).transpose())};
}

Tensor modified_torsion_tensor(const HermitianFrame& F, const Connection& nabla,
                               const Matrix& g_prime) {
  return lowered_torsion(nabla, g_prime, F.algebra());
}

Tensor modification_tensor(const HermitianFrame& F, const Connection& nabla, const Matrix& g_prime,
                           const Matrix& J_prime, double tol) {
  const double metric_res = metric_compatibility_residual(nabla, g_prime);
  const double j_res = endomorphism_derivative_residual(J_prime, nabla);
  if (metric_res > tol || j_res > tol) {
    throw Error(ErrorCode::PreconditionViolation,
                "(g', J') is not parallel (residuals " + std::to_string(metric_res) + ", " +
                    std::to_string(j_res) + ")");
  }
  const int n = F.dim();
  const Tensor tau = modified_torsion_tensor(F, nabla, g_prime);
  const Tensor t01 = apply_on_slots(tau, J_prime, {0, 1});
  const Tensor t12 = apply_on_slots(tau, J_prime, {1, 2});
  const Tensor t02 = apply_on_slots(tau, J_prime, {0, 2});
  Tensor A(n, 3);
  for_each_index(n, 3, [&](std::span<const int> idx) {
    const int x = idx[0], y = idx[1], z = idx[2];
    A.at(idx) = 0.5 * ((-tau({x, y, z}) + t01({x, y, z})) + (tau({y, z, x}) + t01({y, z, x})) -
                       (t12({z, x, y}) + t02({z, x, y})));
  });
  return A;
}

ModificationRelations modification_relations(const Tensor& A, const Tensor& tau, const Matrix& J_prime) {
  const int n = A.dim();
  const Tensor aj = apply_on_slots(A, J_prime, {1, 2});
  ModificationRelations r;
  for_each_index(n, 3, [&](std::span<const int> idx) {
    const int x = idx[0], y = idx[1], z = idx[2];
    r.skew = std::max(r.skew, std::abs(A({x, y, z}) + A({x, z, y})));
    r.j_invariance = std::max(r.j_invariance, std::abs(aj({x, y, z}) - A({x, y, z})));
    r.torsion_symmetry = std::max(
        r.torsion_symmetry,
        std::abs(A({y, x, z}) + A({z, x, y}) - tau({x, y, z}) - tau({x, z, y})));
  });
  return r;
}

Tensor connection_difference(const Connection& nabla_prime, const Connection& nabla,
                             const Matrix& g_prime) {
  const int n = nabla.dim();
  Tensor A(n, 3);
  for (int i = 0; i < n; ++i) {
    const Matrix low = (nabla_prime.along(i) - nabla.along(i)).transpose() * g_prime;
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) A({i, j, k}) = low(j, k);
  }
  return A;
}

}  // namespace gcelab
