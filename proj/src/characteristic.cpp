#include "gcelab/characteristic.hpp"

#include <algorithm>
#include <cmath>

#include "gcelab/error.hpp"

namespace gcelab {

namespace {

void require_m2(const HermitianFrame& F) {
  if (F.m() < 2) {
    throw Error(ErrorCode::UnsupportedDimension, "the Lee form needs complex dimension >= 2");
  }
}

}  // namespace

KForm j_covector(const KForm& theta, const HermitianVectorSpace& V) {
  if (theta.degree() != 1) throw Error(ErrorCode::DegreeUnsupported, "j_covector needs a 1-form");
  return j_algebra_action(theta, V);
}

KForm lee_form(const HermitianFrame& F) {
  require_m2(F);
  const KForm domega = exterior_derivative(kahler_form(F.space()), F);
  // trace(-2 theta ^ omega + Omega_0) = -2 theta
  return -0.5 * type_project(domega, F.space()).trace;
}

KForm lee_form_from_codifferential(const HermitianFrame& F) {
  require_m2(F);
  const KForm delta_omega = codifferential(kahler_form(F.space()), F);
  return (-1.0 / (2.0 * (F.m() - 1))) * j_covector(delta_omega, F.space());
}

Tensor nijenhuis(const HermitianFrame& F) {
  const int n = F.dim();
  const Matrix& J = F.J();
  const LieAlgebra& g = F.algebra();
  Tensor out(n, 3);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const Vector x = Vector::Unit(n, i);
      const Vector y = Vector::Unit(n, j);
      const Vector jx = J * x;
      const Vector jy = J * y;
      const Vector v = 0.25 * (g.bracket(jx, jy) - J * g.bracket(jx, y) - J * g.bracket(x, jy) -
                               g.bracket(x, y));
      for (int k = 0; k < n; ++k) out({i, j, k}) = v(k);
    }
  return out;
}

double nijenhuis_residual(const HermitianFrame& F) { return nijenhuis(F).max_abs(); }

KForm characteristic_torsion(const HermitianFrame& F) {
  const KForm domega = exterior_derivative(kahler_form(F.space()), F);
  return -j_group_action(domega, F.space());
}

Connection characteristic_connection(const HermitianFrame& F, double tol) {
  const double nij = nijenhuis_residual(F);
  if (nij > tol) {
    throw Error(ErrorCode::NoCharacteristicConnection,
                "J is not integrable (Nijenhuis residual " + std::to_string(nij) + ")");
  }
  return add_three_form(levi_civita(F), characteristic_torsion(F), F.metric(), 0.5);
}

KForm bianchi_four_form(const KForm& T, const HermitianVectorSpace& V) {
  if (T.degree() != 3) throw Error(ErrorCode::DegreeUnsupported, "bianchi_four_form needs a 3-form");
  if (T.dim() != V.dim()) throw Error(ErrorCode::FrameMismatch, "bianchi_four_form: dimension");
  const Matrix& P = V.adapted_basis();
  KForm out(V.dim(), 4);
  for (int i = 0; i < V.dim(); ++i) {
    const KForm ti = interior(P.col(i), T);
    out += wedge(ti, ti);
  }
  return 0.5 * out;
}

KForm codifferential_defect(const KForm& a, const KForm& T, const HermitianVectorSpace& V) {
  if (T.degree() != 3) throw Error(ErrorCode::DegreeUnsupported, "codifferential_defect needs a 3-form T");
  if (T.dim() != V.dim() || a.dim() != V.dim()) {
    throw Error(ErrorCode::FrameMismatch, "codifferential_defect: dimension");
  }
  if (a.degree() == 0) throw Error(ErrorCode::DegreeUnderflow, "codifferential of a 0-form");
  KForm out(V.dim(), a.degree() - 1);
  if (a.degree() < 2) return out;
  const Matrix& P = V.adapted_basis();
  for (int i = 0; i < V.dim(); ++i)
    for (int j = i + 1; j < V.dim(); ++j) {
      const KForm tij = interior(P.col(i), interior(P.col(j), T));
      const KForm aij = interior(P.col(i), interior(P.col(j), a));
      out -= wedge(tij, aij);
    }
  return out;
}

Tensor bianchi_sum(const Connection& C, const HermitianFrame& F) {
  const Tensor R = curvature(C, F);
  const int n = F.dim();
  Tensor out(n, 4);
  for_each_index(n, 4, [&](std::span<const int> idx) {
    const int x = idx[0], y = idx[1], z = idx[2], v = idx[3];
    out.at(idx) = R({x, y, z, v}) + R({y, z, x, v}) + R({z, x, y, v});
  });
  return out;
}

HermitianInvariants hermitian_invariants(const HermitianFrame& F, double tol) {
  require_m2(F);
  const HermitianVectorSpace& V = F.space();
  HermitianInvariants inv;
  inv.omega = kahler_form(V);
  inv.domega = exterior_derivative(inv.omega, F);
  inv.theta = -0.5 * type_project(inv.domega, V).trace;
  inv.j_theta = j_covector(inv.theta, V);
  inv.Omega0 = inv.domega + 2.0 * wedge(inv.theta, inv.omega);
  inv.T = -j_group_action(inv.domega, V);
  inv.Omega4 = bianchi_four_form(inv.T, V);
  inv.nijenhuis = nijenhuis_residual(F);
  inv.integrable = inv.nijenhuis <= tol;
  return inv;
}

LeePotentialFit fit_lee_potential(const KForm& domega, const KForm& theta, const HermitianFrame& F) {
  const HermitianVectorSpace& V = F.space();
  const Matrix& P = V.adapted_basis();
  const KForm dtheta = exterior_derivative(theta, F);
  const KForm jtheta = j_covector(theta, V);
  const KForm basis = wedge(dtheta, jtheta) - wedge(theta, exterior_derivative(jtheta, F));
  const Vector b = pullback(P, basis).components();
  const Vector w = pullback(P, domega).components();
  LeePotentialFit fit;
  fit.dtheta_antihermitian = form_norm(type_project(dtheta, V).antihermitian, V);
  if (b.squaredNorm() > 1e-24) {
    const double c = b.dot(w) / b.squaredNorm();
    fit.c = c;
    fit.residual = (w - c * b).norm();
  } else {
    fit.residual = w.norm();
  }
  return fit;
}

MetricClassification classify_metric(const HermitianFrame& F, double tol) {
  const HermitianVectorSpace& V = F.space();
  const HermitianInvariants inv = hermitian_invariants(F, tol);
  MetricClassification r;
  r.tolerance = tol;
  r.theta_norm = form_norm(inv.theta, V);
  r.theta_nonzero = r.theta_norm > kLeeFormThreshold;
  r.integrable = {inv.integrable, inv.nijenhuis};

  const double domega_norm = form_norm(inv.domega, V);
  r.kahler = {domega_norm <= tol, domega_norm};

  const KForm dtheta = exterior_derivative(inv.theta, F);
  const double lck_res = std::max(form_norm(inv.Omega0, V), form_norm(dtheta, V));
  r.lck = {lck_res <= tol, lck_res};

  if (!r.theta_nonzero) {
    r.lp = {domega_norm <= tol, domega_norm};
    r.lp_vacuous = r.lp.value;
  } else {
    const LeePotentialFit fit = fit_lee_potential(inv.domega, inv.theta, F);
    const double res = std::max(fit.residual, fit.dtheta_antihermitian);
    r.lp_constant = fit.c;
    r.lp = {fit.c.has_value() && *fit.c > 0.0 && res <= tol, res};
  }

  const Connection lc = levi_civita(F);
  const double grad_theta = tensor_norm(covariant_derivative(Tensor::from_form(inv.theta), lc), V);
  const double vaisman_res = std::max(lck_res, grad_theta);
  r.vaisman = {r.theta_nonzero && vaisman_res <= tol, vaisman_res};

  if (inv.integrable) {
    const Connection nabla = add_three_form(lc, inv.T, F.metric(), 0.5);
    const double res = tensor_norm(covariant_derivative(Tensor::from_form(inv.T), nabla), V);
    r.parallel_torsion = {res <= tol, res};
  } else {
    r.parallel_torsion = {false, inv.nijenhuis};
  }

  r.gce = {r.lp.value && !r.lp_vacuous && r.parallel_torsion.value && r.theta_nonzero,
           std::max(r.lp.residual, r.parallel_torsion.residual)};
  return r;
}

}  // namespace gcelab
