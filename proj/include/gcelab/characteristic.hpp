#pragma once

// Hermitian invariants of an invariant structure (g, J) on a Lie algebra:
// Lee form, Nijenhuis tensor, characteristic connection and its torsion, the
// Bianchi 4-form and the metric-class predicates.

#include <optional>

#include "gcelab/lie_frame.hpp"

namespace gcelab {

/// Below this frame norm the Lee form counts as zero.
inline constexpr double kLeeFormThreshold = 1e-6;

/// theta from d omega = -2 theta ^ omega + Omega_0, Omega_0 trace free.
KForm lee_form(const HermitianFrame& F);
/// theta = -1/(2(m-1)) J.(delta omega). Agrees with lee_form.
KForm lee_form_from_codifferential(const HermitianFrame& F);

/// J acting on 1-forms, theta |-> -theta o J.
KForm j_covector(const KForm& theta, const HermitianVectorSpace& V);

/// Entry (i, j, k) is the e_k component of N(e_i, e_j), with
/// 4N(X,Y) = [JX,JY] - J[JX,Y] - J[X,JY] - [X,Y].
Tensor nijenhuis(const HermitianFrame& F);
double nijenhuis_residual(const HermitianFrame& F);

/// T = -(group action of J)(d omega).
KForm characteristic_torsion(const HermitianFrame& F);

/// Levi-Civita plus half the torsion. Throws Error(NoCharacteristicConnection)
/// when the Nijenhuis residual exceeds `tol`.
Connection characteristic_connection(const HermitianFrame& F, double tol = kDefaultTolerance);

/// Omega = 1/2 sum_i (e_i _| T) ^ (e_i _| T) over an orthonormal basis.
KForm bianchi_four_form(const KForm& T, const HermitianVectorSpace& V);

/// -sum_{i<j} (e_i _| e_j _| T) ^ (e_i _| e_j _| a) over an orthonormal
/// basis; equals nabla_codifferential(a) - codifferential(a) for the
/// characteristic connection with torsion T.
KForm codifferential_defect(const KForm& a, const KForm& T, const HermitianVectorSpace& V);

/// Cyclic sum g(R(X,Y)Z + R(Y,Z)X + R(Z,X)Y, V) as a 4-index tensor.
Tensor bianchi_sum(const Connection& C, const HermitianFrame& F);

struct HermitianInvariants {
  KForm omega;
  KForm domega;
  KForm theta;
  KForm j_theta;
  /// d omega + 2 theta ^ omega.
  KForm Omega0;
  KForm T;
  KForm Omega4;
  bool integrable = false;
  double nijenhuis = 0.0;
};

HermitianInvariants hermitian_invariants(const HermitianFrame& F, double tol = kDefaultTolerance);

/// Least-squares fit of d omega = c (d theta ^ J theta - theta ^ d(J theta)).
struct LeePotentialFit {
  std::optional<double> c;
  /// Frame norm of d omega - c (...), or of d omega when no c was fitted.
  double residual = 0.0;
  /// Frame norm of the (2,0)+(0,2) part of d theta.
  double dtheta_antihermitian = 0.0;
};

LeePotentialFit fit_lee_potential(const KForm& domega, const KForm& theta, const HermitianFrame& F);

struct Flag {
  bool value = false;
  double residual = 0.0;
};

struct MetricClassification {
  double tolerance = kDefaultTolerance;
  double theta_norm = 0.0;
  bool theta_nonzero = false;
  Flag integrable;
  Flag kahler;
  Flag lck;
  Flag lp;
  /// lp holds only because theta = 0 and d omega = 0.
  bool lp_vacuous = false;
  std::optional<double> lp_constant;
  Flag vaisman;
  Flag parallel_torsion;
  Flag gce;
};

MetricClassification classify_metric(const HermitianFrame& F, double tol = kDefaultTolerance);

}  // namespace gcelab
