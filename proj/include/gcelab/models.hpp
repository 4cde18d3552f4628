#pragma once

// Homogeneous Sasakian frames and the hermitian frames built from them:
// Sasakian products, Calabi-Eckmann structures, Hopf (Vaisman) frames.

#include <complex>
#include <string>

#include "gcelab/lie_frame.hpp"

namespace gcelab {

enum class SasakianKind { sphere, nil, sl2 };

const char* to_string(SasakianKind kind);
SasakianKind parse_sasakian_kind(const std::string& name);

/// Odd-dimensional metric Lie algebra with Reeb vector e_{reeb_index}.
struct SasakianFrame {
  std::string name;
  LieAlgebra algebra;
  Matrix metric;
  int reeb_index = 0;

  int dim() const { return algebra.dim(); }
  Vector reeb() const { return Vector::Unit(dim(), reeb_index); }
  /// lambda = g(xi, .).
  KForm contact_form() const;
  /// Phi = -nabla^g xi; a complex structure on H = xi-perp, zero on xi.
  Matrix phi() const;
};

/// Residuals of the Sasakian axioms; all vanish for a valid frame except
/// contact_volume, which must stay away from zero.
struct SasakianCheck {
  double reeb_length = 0.0;
  double killing = 0.0;
  /// Phi^2 + 1 - xi (x) lambda.
  double complex_structure = 0.0;
  /// (nabla_X Phi) Y - g(X, Y) xi + lambda(Y) X.
  double normality = 0.0;
  /// d lambda + 2 g(Phi ., .).
  double normalization = 0.0;
  /// Lie derivatives of g and Phi along xi.
  double reeb_invariance = 0.0;
  /// |lambda ^ (d lambda)^p| in an orthonormal frame.
  double contact_volume = 0.0;

  double worst() const;
  bool valid(double tol = 1e-10) const;
};

SasakianCheck check_sasakian(const SasakianFrame& N);

/// 3-dimensional models with [e2,e3] = 2 e1, [e1,e2] = a e3, [e3,e1] = a e2 and
/// orthonormal basis: a = 2 (SU(2)), 0 (Nil), -2 (SL(2,R)).
SasakianFrame sasakian_model(SasakianKind kind);
/// Heisenberg algebra of dimension 2p+1, [e_{2i}, e_{2i+1}] = 2 e_1.
SasakianFrame heisenberg_sasakian(int p);
/// The real line, a 1-dimensional Sasakian frame with H = 0.
SasakianFrame abelian_line();

/// Sectional curvature of the quotient by the Reeb flow, for dim-3 frames.
double base_curvature(const SasakianFrame& N);

/// Throws Error(InvalidSasakian) listing the first failing axiom.
void require_sasakian(const SasakianFrame& N, double tol = 1e-10);

/// Product metric with J = Phi_i on H_i and J xi_1 = xi_2.
HermitianFrame sasakian_product(const SasakianFrame& N1, const SasakianFrame& N2);

/// J xi_1 = Re(alpha) xi_1 + Im(alpha) xi_2 with the metric on span{xi_1, xi_2}
/// making xi_1, J xi_1 orthonormal. Throws Error(InvalidParameter) when
/// Im(alpha) <= 0.
HermitianFrame calabi_eckmann(const SasakianFrame& N1, const SasakianFrame& N2,
                              std::complex<double> alpha);

/// Metric of the Calabi-Eckmann structure on span{xi_1, xi_2} and the matrix
/// of J there.
Matrix calabi_eckmann_lee_plane_metric(std::complex<double> alpha);
Matrix calabi_eckmann_lee_plane_J(std::complex<double> alpha);

/// N x R, the Hopf-type frame.
HermitianFrame hopf_frame(SasakianKind kind);

/// Flat C^m on the abelian algebra.
HermitianFrame flat_kahler(int m);

/// Orthogonal block sum of two hermitian frames.
HermitianFrame hermitian_sum(const HermitianFrame& a, const HermitianFrame& b);

/// Hopf frame of `kind` plus a flat C: one eigenspace with a_plus = 0.
HermitianFrame sasaki_line_kahler(SasakianKind kind);

/// Heisenberg frame with [e2,e3] = 2 e1, [e4,e5] = -e1, times R: the two
/// eigenvalues a_plus have opposite signs.
HermitianFrame mixed_heisenberg_line();

}  // namespace gcelab
