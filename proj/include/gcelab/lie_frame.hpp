#pragma once

// Left-invariant calculus on a Lie algebra with a fixed basis e_1..e_n.
// All tensors are invariant, so directional derivatives of components vanish
// and every formula below is purely algebraic.

#include <span>
#include <vector>

#include "gcelab/multilinear.hpp"
#include "gcelab/tensor.hpp"

namespace gcelab {

inline constexpr double kJacobiTolerance = 1e-10;

/// [e_i, e_j] += value * e_k, and the antisymmetric counterpart. 0-based.
struct Bracket {
  int i = 0;
  int j = 0;
  int k = 0;
  double value = 0.0;
};

class LieAlgebra {
 public:
  LieAlgebra() = default;
  /// Rejects i == j with nonzero value, conflicting duplicates and Jacobi
  /// residual above `jacobi_tol` with Error(InvariantViolation).
  LieAlgebra(int dim, std::span<const Bracket> brackets, double jacobi_tol = kJacobiTolerance);
  static LieAlgebra abelian(int dim);

  int dim() const { return dim_; }
  /// c^k_ij, with [e_i, e_j] = sum_k c^k_ij e_k.
  double constant(int i, int j, int k) const { return ad_[i](k, j); }
  /// ad(e_i) as a matrix: column j is [e_i, e_j].
  const Matrix& ad(int i) const { return ad_[i]; }
  Matrix ad(const Vector& x) const;
  Vector bracket(const Vector& x, const Vector& y) const;

  /// Nonzero c^k_ij with i < j, in (i, j, k) order.
  std::vector<Bracket> brackets() const;
  double jacobi_residual() const;
  /// trace(ad x) = 0 for all x.
  bool unimodular(double tol = kDefaultTolerance) const;

  /// Block sum; the second algebra's basis follows the first.
  static LieAlgebra direct_sum(const LieAlgebra& a, const LieAlgebra& b);

 private:
  int dim_ = 0;
  std::vector<Matrix> ad_;
};

class HermitianFrame {
 public:
  HermitianFrame(HermitianVectorSpace space, LieAlgebra algebra);

  const HermitianVectorSpace& space() const { return space_; }
  const LieAlgebra& algebra() const { return algebra_; }
  int dim() const { return space_.dim(); }
  int m() const { return space_.m(); }
  const Matrix& metric() const { return space_.metric(); }
  const Matrix& J() const { return space_.J(); }

 private:
  HermitianVectorSpace space_;
  LieAlgebra algebra_;
};

/// Invariant affine connection: nabla_{e_i} e_j = sum_k Gamma^k_ij e_k.
class Connection {
 public:
  Connection() = default;
  explicit Connection(std::vector<Matrix> by_direction);
  static Connection zero(int dim);

  int dim() const { return static_cast<int>(m_.size()); }
  double gamma(int i, int j, int k) const { return m_[i](k, j); }
  /// Endomorphism Y |-> nabla_{e_i} Y.
  const Matrix& along(int i) const { return m_[i]; }
  Matrix along(const Vector& x) const;
  Vector apply(const Vector& x, const Vector& y) const { return along(x) * y; }

  Connection& operator+=(const Connection& other);
  Connection& operator-=(const Connection& other);

 private:
  std::vector<Matrix> m_;
};

Connection operator+(Connection a, const Connection& b);
Connection operator-(Connection a, const Connection& b);

/// Chevalley-Eilenberg differential. A top-degree input returns the zero
/// top-degree form.
KForm exterior_derivative(const KForm& a, const LieAlgebra& g);
KForm exterior_derivative(const KForm& a, const HermitianFrame& F);

Connection levi_civita(const Matrix& metric, const LieAlgebra& g);
Connection levi_civita(const HermitianFrame& F);

/// T(e_i, e_j) = nabla_i e_j - nabla_j e_i - [e_i, e_j]; entry (i, j, k) is
/// the e_k component.
Tensor torsion(const Connection& C, const LieAlgebra& g);
/// Torsion with its last index lowered: (X, Y, Z) |-> g(T(X, Y), Z).
Tensor lowered_torsion(const Connection& C, const Matrix& metric, const LieAlgebra& g);

/// Connection with g(nabla_X Y, Z) = g(base_X Y, Z) + scale * T(X, Y, Z).
Connection add_three_form(const Connection& base, const KForm& T, const Matrix& metric,
                          double scale);

/// nabla_X of an invariant form: -sum_s a(.., nabla_X Y_s, ..).
KForm covariant_derivative(const KForm& a, const Vector& x, const Connection& C);
/// nabla t as a tensor of rank r+1, direction in the first slot. Inputs of
/// rank above 4 raise Error(UnsupportedValence).
Tensor covariant_derivative(const Tensor& t, const Connection& C);
/// Largest component of nabla of the endomorphism A (A commuting with each
/// nabla_{e_i}).
double endomorphism_derivative_residual(const Matrix& A, const Connection& C);

/// Endomorphisms R(e_i, e_j) = [nabla_i, nabla_j] - nabla_{[e_i, e_j]}, indexed
/// i * n + j.
std::vector<Matrix> curvature_operators(const Connection& C, const LieAlgebra& g);
/// R(X, Y, Z, V) = g(R(X, Y) Z, V).
Tensor curvature(const Connection& C, const Matrix& metric, const LieAlgebra& g);
Tensor curvature(const Connection& C, const HermitianFrame& F);

/// delta = -*d*.
KForm codifferential(const KForm& a, const HermitianFrame& F);
/// delta^nabla a = -sum_i e_i _| nabla_{e_i} a over an orthonormal basis.
KForm nabla_codifferential(const KForm& a, const Connection& C, const HermitianFrame& F);

/// Largest defect of torsion-freeness and metric compatibility.
double torsion_free_residual(const Connection& C, const LieAlgebra& g);
double metric_compatibility_residual(const Connection& C, const Matrix& metric);

/// Sectional curvature of the plane spanned by x, y.
double sectional_curvature(const Connection& C, const Matrix& metric, const LieAlgebra& g,
                           const Vector& x, const Vector& y);

}  // namespace gcelab
