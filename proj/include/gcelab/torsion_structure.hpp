#pragma once

// Decomposition of a parallel characteristic torsion along the Lee plane,
// simultaneous eigenspaces of the induced endomorphisms, the local case
// dispatch, and parallel modifications of the hermitian structure.

#include <map>
#include <span>
#include <string>
#include <vector>

#include "gcelab/characteristic.hpp"

namespace gcelab {

inline constexpr double kEigenClusterTolerance = 1e-7;

/// J-invariant subspace H_i of H on which A_+ = a_plus J and A_- = a_minus J.
struct Eigenspace {
  /// g-orthonormal, J-adapted columns (f, Jf, ...).
  Matrix basis;
  double a_plus = 0.0;
  double a_minus = 0.0;
};

struct TorsionDecomposition {
  KForm theta;
  KForm T;
  /// 2 J.theta, its length and its normalization; the decomposition uses the
  /// unit forms.
  KForm eta;
  double eta_length = 0.0;
  KForm eta_unit;
  KForm j_eta_unit;
  /// d(eta_unit), d(J eta_unit).
  KForm omega_plus;
  KForm omega_minus;
  /// Restriction of T to H.
  KForm T0;
  /// Metric duals of eta_unit and J eta_unit.
  Vector xi;
  Vector j_xi;
  /// Columns (xi, J xi) and a J-adapted orthonormal basis of H.
  Matrix E_basis;
  Matrix H_basis;
  /// Projection onto H along E.
  Matrix H_projector;
  /// omega_pm(X, Y) = g(A_pm X, Y); zero on E.
  Matrix A_plus;
  Matrix A_minus;
  /// Sorted by a_plus descending, ties by a_minus descending.
  std::vector<Eigenspace> eigenspaces;
  std::map<std::string, double> residuals;
};

/// Throws Error(NoLeeDirection) when theta = 0, Error(PreconditionViolation)
/// when nabla T exceeds `tol`, Error(DecompositionFailure) when A_+ and A_-
/// do not commute.
TorsionDecomposition decompose_torsion(const HermitianFrame& F, double tol = kDefaultTolerance);

/// Simultaneous eigenspaces of -J A_+ and -J A_- on H. Fills the
/// "eigen_split" residual.
std::vector<Eigenspace> split_eigenspaces(TorsionDecomposition& D, const HermitianVectorSpace& V,
                                          double tol = kDefaultTolerance,
                                          double cluster_tol = kEigenClusterTolerance);

enum class LocalCase { vaisman, pseudo_vaisman_mixed, sasaki_line_kahler, sasakian_product, not_applicable };

const char* to_string(LocalCase c);

LocalCase classify_local(const TorsionDecomposition& D, const HermitianVectorSpace& V,
                         double tol = kDefaultTolerance);

/// For omega_- = 0: the indefinite metric equal to g' on E and on H_i with
/// a_plus > 0 and to -g' on H_i with a_plus < 0, where g' = |a_plus_i| g on
/// H_i.
Matrix mixed_signature_metric(const TorsionDecomposition& D, const Matrix& metric);

/// Data needed to apply a modification: E columns (e, f) with J e = f, and an
/// orthonormal J-adapted basis of each H_i (for the current metric).
struct ModificationBasis {
  Matrix E;
  std::vector<Matrix> H;
};

ModificationBasis modification_basis(const TorsionDecomposition& D);

struct Modification {
  HermitianFrame frame;
  ModificationBasis basis;
};

/// New structure: E vectors (e', f') = (e, f) R, made g'-orthonormal with
/// J' e' = f'; g' = scales[i] g and J' = J on H_i. The returned basis is
/// adapted to the new structure, so modifications compose as
/// (a, R1) then (b, R2) = (a b, R1 R2).
Modification modify_structure(const HermitianFrame& F, const ModificationBasis& B,
                              std::span<const double> scales, const Matrix& R);

/// decompose_torsion followed by modify_structure. Throws
/// Error(InvalidModification) for singular R, non-positive scales or a scale
/// count different from the number of eigenspaces.
HermitianFrame parallel_modification(const HermitianFrame& F, std::span<const double> scales,
                                     const Matrix& R, double tol = kDefaultTolerance);

/// R = 1/2 [a_plus; a_minus] (rows), for which the dual forms eta', J'eta' of
/// the new E vectors satisfy d eta' = 2 omega|H_1 and d(J'eta') = 2 omega|H_2.
Matrix product_split_matrix(const TorsionDecomposition& D);

/// The new E covectors (dual to e', f' and vanishing on H).
std::pair<KForm, KForm> lee_plane_coframe(const ModificationBasis& B);

/// tau(X, Y, Z) = g'(T(X, Y), Z) for the torsion T of `nabla`.
Tensor modified_torsion_tensor(const HermitianFrame& F, const Connection& nabla,
                               const Matrix& g_prime);

/// The tensor A(X, Y, Z) = g'(A_X Y, Z) given by the closed formula in tau
/// and J'. Throws Error(PreconditionViolation) unless nabla g' = 0 and
/// nabla J' = 0 within `tol`.
Tensor modification_tensor(const HermitianFrame& F, const Connection& nabla, const Matrix& g_prime,
                           const Matrix& J_prime, double tol = kDefaultTolerance);

struct ModificationRelations {
  /// A(X,Y,Z) + A(X,Z,Y)
  double skew = 0.0;
  /// A(X,J'Y,J'Z) - A(X,Y,Z)
  double j_invariance = 0.0;
  /// A(Y,X,Z) + A(Z,X,Y) - tau(X,Y,Z) - tau(X,Z,Y)
  double torsion_symmetry = 0.0;
};

ModificationRelations modification_relations(const Tensor& A, const Tensor& tau, const Matrix& J_prime);

/// Lowered difference g'((nabla' - nabla)_X Y, Z).
Tensor connection_difference(const Connection& nabla_prime, const Connection& nabla,
                             const Matrix& g_prime);

}  // namespace gcelab
