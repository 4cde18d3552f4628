#pragma once

// Exterior algebra over a real inner-product space of dimension 2m carrying a
// compatible complex structure.
//
// Conventions used throughout the library:
//  * vectors are column vectors of coordinates in a fixed basis e_1..e_n;
//  * a k-form is stored by its values a(e_i1, ..., e_ik) on strictly increasing
//    index tuples, in lexicographic order (so e^1 ^ e^2 evaluates to 1 on
//    (e_1, e_2));
//  * matrices acting on vectors have the image of e_j in column j.

#include <array>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace gcelab {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

inline constexpr double kDefaultTolerance = 1e-9;
inline constexpr int kMaxDimension = 16;

/// Bit masks of the degree-k index sets of {0..dim-1}, lexicographic order.
const std::vector<std::uint32_t>& multi_indices(int dim, int degree);

/// Position of `mask` inside multi_indices(dim, popcount(mask)).
int multi_index_position(int dim, std::uint32_t mask);

/// Sign of the permutation that sorts the concatenation (I, J) of two disjoint
/// index sets.
int shuffle_sign(std::uint32_t first, std::uint32_t second);

class HermitianVectorSpace {
 public:
  /// Validates symmetry and positivity of the metric, J^2 = -1 and
  /// g(J., J.) = g. Throws Error(InvariantViolation) otherwise.
  HermitianVectorSpace(Matrix metric, Matrix complex_structure, double tol = kDefaultTolerance);

  /// Flat C^m with the standard basis e_1, Je_1 = e_2, ...
  static HermitianVectorSpace standard(int m);

  int dim() const { return static_cast<int>(metric_.rows()); }
  int m() const { return dim() / 2; }

  const Matrix& metric() const { return metric_; }
  const Matrix& metric_inverse() const { return metric_inverse_; }
  const Matrix& J() const { return J_; }

  /// Orthonormal basis f_1, Jf_1, f_2, Jf_2, ... (columns).
  const Matrix& adapted_basis() const { return adapted_; }
  /// Inverse of adapted_basis(); row j is the covector f^j.
  const Matrix& adapted_coframe() const { return adapted_inverse_; }

  double inner(const Vector& x, const Vector& y) const { return x.dot(metric_ * y); }
  Vector flat(const Vector& v) const { return metric_ * v; }
  Vector sharp(const Vector& covector) const { return metric_inverse_ * covector; }

 private:
  Matrix metric_;
  Matrix metric_inverse_;
  Matrix J_;
  Matrix adapted_;
  Matrix adapted_inverse_;
};

/// J-adapted Gram-Schmidt: orthonormalizes `seeds` (columns, taken in order)
/// together with their J-images, then completes to a full basis. Returned
/// columns come in pairs (f, Jf).
Matrix adapted_orthonormal_basis(const Matrix& metric, const Matrix& J, const Matrix& seeds,
                                 double tol = 1e-10);

class KForm {
 public:
  KForm() = default;
  KForm(int dim, int degree);
  KForm(int dim, int degree, Vector components);

  static KForm scalar(int dim, double value);
  static KForm covector(const Vector& components);
  /// Basis form e^{i1} ^ ... ^ e^{ik} (0-based indices, any order; sign kept).
  static KForm basis(int dim, std::initializer_list<int> indices);
  /// 2-form with values a(e_i, e_j) = m(i, j); m must be antisymmetric.
  static KForm from_matrix(const Matrix& m);

  int dim() const { return dim_; }
  int degree() const { return degree_; }
  std::size_t size() const { return static_cast<std::size_t>(coeffs_.size()); }

  const Vector& components() const { return coeffs_; }
  Vector& components() { return coeffs_; }

  double at_mask(std::uint32_t mask) const;
  void set_mask(std::uint32_t mask, double value);

  /// a(e_{i1}, ..., e_{ik}) for arbitrary (possibly repeated) indices.
  double value(std::span<const int> indices) const;
  double value(std::initializer_list<int> indices) const {
    return value(std::span<const int>(indices.begin(), indices.size()));
  }

  /// a(X_1, ..., X_k) with X_r the columns of `vectors`.
  double evaluate(const Matrix& vectors) const;

  /// Antisymmetric matrix of a 2-form.
  Matrix to_matrix() const;

  double max_abs() const { return coeffs_.size() ? coeffs_.cwiseAbs().maxCoeff() : 0.0; }

  KForm& operator+=(const KForm& other);
  KForm& operator-=(const KForm& other);
  KForm& operator*=(double s);

 private:
  int dim_ = 0;
  int degree_ = 0;
  Vector coeffs_;
};

KForm operator+(KForm a, const KForm& b);
KForm operator-(KForm a, const KForm& b);
KForm operator-(KForm a);
KForm operator*(double s, KForm a);
KForm operator*(KForm a, double s);

KForm wedge(const KForm& a, const KForm& b);

/// v _| a, contraction in the first slot.
KForm interior(const Vector& v, const KForm& a);

/// (L^* a)(X_1, ...) = a(L X_1, ...). `L` maps R^{L.cols()} into R^{a.dim()}.
KForm pullback(const Matrix& L, const KForm& a);

/// Lie-algebra action of an endomorphism: (A.a)(X_1..X_k) = -sum_s a(.., A X_s, ..).
KForm derivation(const Matrix& A, const KForm& a);

/// Group action of J: (-1)^k a(JX_1, ..., JX_k).
KForm j_group_action(const KForm& a, const HermitianVectorSpace& V);
/// Lie-algebra action of J: -sum_s a(.., JX_s, ..). On 1-forms this is
/// theta |-> -theta o J, the operator written J theta.
KForm j_algebra_action(const KForm& a, const HermitianVectorSpace& V);

/// omega = g(J., .).
KForm kahler_form(const HermitianVectorSpace& V);
/// omega^k / k!.
KForm kahler_power(const HermitianVectorSpace& V, int k);
/// Riemannian volume form sqrt(det g) e^1 ^ ... ^ e^n, oriented by the complex
/// structure.
KForm volume_form(const HermitianVectorSpace& V);

/// Inner product on forms induced by g (determinant extension to k-vectors).
double inner_product(const KForm& a, const KForm& b, const HermitianVectorSpace& V);
double form_norm(const KForm& a, const HermitianVectorSpace& V);

/// Hodge star, characterized by <*a, b> vol = a ^ b.
KForm hodge_star(const KForm& a, const HermitianVectorSpace& V);

/// Contraction with omega: a |-> sum_i a(f_i, J f_i, ...) over a full
/// orthonormal basis f_1..f_2m. omega_trace(omega) = 2m and
/// omega_trace(gamma ^ omega) = 2(m-1) gamma for a 1-form gamma.
KForm omega_trace(const KForm& a, const HermitianVectorSpace& V);

struct TypeDecomposition {
  int degree = 0;
  /// (1,1) part (degree 2) or (2,1)+(1,2) part (degree 3).
  KForm hermitian;
  /// (2,0)+(0,2) part (degree 2) or (3,0)+(0,3) part (degree 3).
  KForm antihermitian;
  /// Scalar (degree 2) or 1-form (degree 3) t with trace_part = t ^ omega.
  KForm trace;
  KForm trace_part;
  /// hermitian - trace_part; in the kernel of omega_trace.
  KForm trace_free;
};

/// Orthogonal splitting of a 2- or 3-form into U(m)-types.
TypeDecomposition type_project(const KForm& a, const HermitianVectorSpace& V);

/// Random hermitian structure on R^2m: g = P^-T P^-1, J = P J_0 P^-1 with P
/// having singular values in [0.8, 1.25].
HermitianVectorSpace random_hermitian_space(int m, std::mt19937& rng);
/// Components drawn from N(0, 1).
KForm random_form(int dim, int degree, std::mt19937& rng);

/// Residuals of the Hodge star identities on random forms, in order:
///   vol = omega^m/m!
///   *a = J.a ^ omega^(m-1)/(m-1)!                  a a 1-form
///   *(omega^k/k!) = omega^(m-k)/(m-k)!              max over k
///   *a = -a ^ omega^(m-2)/(m-2)!                    a primitive (1,1)
///   *a = a ^ omega^(m-2)/(m-2)!                     a of type (2,0)+(0,2)
///   *(a ^ omega) = J.a ^ omega^(m-2)/(m-2)!         a a 1-form
///   *a = -(J-group a) ^ omega^(m-3)/(m-3)!          a primitive (2,1)+(1,2)
/// Each sample's residual is the frame max norm of the difference.
std::array<double, 7> hodge_identity_residuals(const HermitianVectorSpace& V, std::mt19937& rng,
                                               int samples = 1);

}  // namespace gcelab
