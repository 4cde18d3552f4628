#include "gcelab/multilinear.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <mutex>
#include <string>

#include "gcelab/error.hpp"

namespace gcelab {

namespace {

struct IndexTable {
  std::vector<std::vector<std::uint32_t>> by_degree;
  std::vector<int> position;
};

const IndexTable& index_table(int dim) {
  static std::array<IndexTable, kMaxDimension + 1> tables;
  static std::array<std::once_flag, kMaxDimension + 1> flags;
  if (dim < 0 || dim > kMaxDimension) {
    throw Error(ErrorCode::UnsupportedDimension, "dimension " + std::to_string(dim));
  }
  std::call_once(flags[dim], [dim] {
    IndexTable& t = tables[dim];
    t.by_degree.assign(dim + 1, {});
    t.position.assign(std::size_t{1} << dim, -1);
    // Lexicographic order of increasing tuples, generated recursively.
    auto emit = [&](auto&& self, int start, int remaining, std::uint32_t mask,
                    std::vector<std::uint32_t>& out) -> void {
      if (remaining == 0) {
        out.push_back(mask);
        return;
      }
      for (int i = start; i <= dim - remaining; ++i) {
        self(self, i + 1, remaining - 1, mask | (1u << i), out);
      }
    };
    for (int k = 0; k <= dim; ++k) {
      emit(emit, 0, k, 0u, t.by_degree[k]);
      for (std::size_t p = 0; p < t.by_degree[k].size(); ++p) {
        t.position[t.by_degree[k][p]] = static_cast<int>(p);
      }
    }
  });
  return tables[dim];
}

std::vector<int> mask_indices(std::uint32_t mask) {
  std::vector<int> out;
  while (mask) {
    int i = std::countr_zero(mask);
    out.push_back(i);
    mask &= mask - 1;
  }
  return out;
}

void require_same_dim(const KForm& a, const KForm& b, const char* op) {
  if (a.dim() != b.dim() || a.degree() != b.degree()) {
    throw Error(ErrorCode::FrameMismatch,
                std::string(op) + ": forms of shape (" + std::to_string(a.dim()) + "," +
                    std::to_string(a.degree()) + ") and (" + std::to_string(b.dim()) + "," +
                    std::to_string(b.degree()) + ")");
  }
}

void require_space(const KForm& a, const HermitianVectorSpace& V, const char* op) {
  if (a.dim() != V.dim()) {
    throw Error(ErrorCode::FrameMismatch, std::string(op) + ": form of dimension " +
                                              std::to_string(a.dim()) + " on space of dimension " +
                                              std::to_string(V.dim()));
  }
}

}  // namespace

const std::vector<std::uint32_t>& multi_indices(int dim, int degree) {
  const IndexTable& t = index_table(dim);
  if (degree < 0 || degree > dim) {
    throw Error(ErrorCode::DegreeUnsupported,
                "degree " + std::to_string(degree) + " in dimension " + std::to_string(dim));
  }
  return t.by_degree[degree];
}

int multi_index_position(int dim, std::uint32_t mask) { return index_table(dim).position[mask]; }

int shuffle_sign(std::uint32_t first, std::uint32_t second) {
  // Count pairs (i in first, j in second) with i > j.
  int inversions = 0;
  std::uint32_t s = second;
  while (s) {
    int j = std::countr_zero(s);
    inversions += std::popcount(first >> (j + 1));
    s &= s - 1;
  }
  return (inversions & 1) ? -1 : 1;
}

// ---------------------------------------------------------------------------
// HermitianVectorSpace

Matrix adapted_orthonormal_basis(const Matrix& metric, const Matrix& J, const Matrix& seeds,
                                 double tol) {
  const int n = static_cast<int>(metric.rows());
  Matrix basis(n, 0);
  auto try_add = [&](Vector v) {
    if (basis.cols() >= n) return;
    for (int pass = 0; pass < 2; ++pass) {
      for (int c = 0; c < basis.cols(); ++c) {
        v -= basis.col(c).dot(metric * v) * basis.col(c);
      }
    }
    double nrm = std::sqrt(std::max(0.0, v.dot(metric * v)));
    if (nrm <= tol) return;
    v /= nrm;
    Vector jv = J * v;
    basis.conservativeResize(n, basis.cols() + 2);
    basis.col(basis.cols() - 2) = v;
    basis.col(basis.cols() - 1) = jv;
  };
  for (int c = 0; c < seeds.cols(); ++c) try_add(seeds.col(c));
  for (int i = 0; i < n && basis.cols() < n; ++i) try_add(Vector::Unit(n, i));
  return basis;
}

HermitianVectorSpace::HermitianVectorSpace(Matrix metric, Matrix complex_structure, double tol)
    : metric_(std::move(metric)), J_(std::move(complex_structure)) {
  const auto n = metric_.rows();
  if (metric_.cols() != n || J_.rows() != n || J_.cols() != n) {
    throw Error(ErrorCode::FrameMismatch, "metric and J must be square of equal size");
  }
  if (n == 0 || n % 2 != 0) {
    throw Error(ErrorCode::UnsupportedDimension,
                "hermitian space needs even positive dimension, got " + std::to_string(n));
  }
  if (n > kMaxDimension) {
    throw Error(ErrorCode::UnsupportedDimension, "dimension above " + std::to_string(kMaxDimension));
  }
  const double scale = std::max(1.0, metric_.cwiseAbs().maxCoeff());
  if ((metric_ - metric_.transpose()).cwiseAbs().maxCoeff() > tol * scale) {
    throw Error(ErrorCode::InvariantViolation, "metric is not symmetric");
  }
  metric_ = 0.5 * (metric_ + metric_.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Matrix> eig(metric_);
  if (eig.eigenvalues().minCoeff() <= tol * scale) {
    throw Error(ErrorCode::InvariantViolation, "metric is not positive definite");
  }
  const Matrix id = Matrix::Identity(n, n);
  const double jscale = std::max(1.0, J_.cwiseAbs().maxCoeff());
  if ((J_ * J_ + id).cwiseAbs().maxCoeff() > tol * jscale * jscale) {
    throw Error(ErrorCode::InvariantViolation, "J^2 != -1");
  }
  if ((J_.transpose() * metric_ * J_ - metric_).cwiseAbs().maxCoeff() > tol * scale * jscale * jscale) {
    throw Error(ErrorCode::InvariantViolation, "metric is not J-invariant");
  }
  metric_inverse_ = metric_.inverse();
  adapted_ = adapted_orthonormal_basis(metric_, J_, Matrix(n, 0));
  adapted_inverse_ = adapted_.inverse();
}

HermitianVectorSpace HermitianVectorSpace::standard(int m) {
  const int n = 2 * m;
  Matrix J = Matrix::Zero(n, n);
  for (int i = 0; i < m; ++i) {
    J(2 * i + 1, 2 * i) = 1.0;
    J(2 * i, 2 * i + 1) = -1.0;
  }
  return HermitianVectorSpace(Matrix::Identity(n, n), J);
}

// ---------------------------------------------------------------------------
// KForm

KForm::KForm(int dim, int degree) : dim_(dim), degree_(degree) {
  coeffs_ = Vector::Zero(static_cast<Eigen::Index>(multi_indices(dim, degree).size()));
}

KForm::KForm(int dim, int degree, Vector components) : dim_(dim), degree_(degree) {
  if (static_cast<std::size_t>(components.size()) != multi_indices(dim, degree).size()) {
    throw Error(ErrorCode::FrameMismatch, "component count does not match (dim, degree)");
  }
  coeffs_ = std::move(components);
}

KForm KForm::scalar(int dim, double value) {
  KForm f(dim, 0);
  f.coeffs_(0) = value;
  return f;
}

KForm KForm::covector(const Vector& components) {
  return KForm(static_cast<int>(components.size()), 1, components);
}

KForm KForm::basis(int dim, std::initializer_list<int> indices) {
  KForm f(dim, static_cast<int>(indices.size()));
  std::vector<int> idx(indices);
  // Sign of the sorting permutation.
  int sign = 1;
  for (std::size_t i = 0; i < idx.size(); ++i) {
    for (std::size_t j = i + 1; j < idx.size(); ++j) {
      if (idx[i] == idx[j]) return f;
      if (idx[i] > idx[j]) sign = -sign;
    }
  }
  std::uint32_t mask = 0;
  for (int i : idx) mask |= 1u << i;
  f.set_mask(mask, sign);
  return f;
}

KForm KForm::from_matrix(const Matrix& m) {
  const int n = static_cast<int>(m.rows());
  KForm f(n, 2);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) f.set_mask((1u << i) | (1u << j), 0.5 * (m(i, j) - m(j, i)));
  }
  return f;
}

double KForm::at_mask(std::uint32_t mask) const { return coeffs_(multi_index_position(dim_, mask)); }

void KForm::set_mask(std::uint32_t mask, double value) {
  coeffs_(multi_index_position(dim_, mask)) = value;
}

double KForm::value(std::span<const int> indices) const {
  if (static_cast<int>(indices.size()) != degree_) {
    throw Error(ErrorCode::FrameMismatch, "wrong number of arguments for form evaluation");
  }
  std::uint32_t mask = 0;
  int sign = 1;
  for (std::size_t r = 0; r < indices.size(); ++r) {
    const std::uint32_t bit = 1u << indices[r];
    if (mask & bit) return 0.0;
    // Each previously placed larger index is one inversion.
    if (std::popcount(mask >> (indices[r] + 1)) & 1) sign = -sign;
    mask |= bit;
  }
  return sign * at_mask(mask);
}

double KForm::evaluate(const Matrix& vectors) const {
  if (vectors.cols() != degree_ || (degree_ > 0 && vectors.rows() != dim_)) {
    throw Error(ErrorCode::FrameMismatch, "evaluate: argument shape mismatch");
  }
  if (degree_ == 0) return coeffs_(0);
  const auto& masks = multi_indices(dim_, degree_);
  Matrix sub(degree_, degree_);
  double total = 0.0;
  for (std::size_t p = 0; p < masks.size(); ++p) {
    if (coeffs_(p) == 0.0) continue;
    auto rows = mask_indices(masks[p]);
    for (int r = 0; r < degree_; ++r) sub.row(r) = vectors.row(rows[r]);
    total += coeffs_(p) * sub.determinant();
  }
  return total;
}

Matrix KForm::to_matrix() const {
  if (degree_ != 2) throw Error(ErrorCode::DegreeUnsupported, "to_matrix needs a 2-form");
  Matrix m = Matrix::Zero(dim_, dim_);
  for (int i = 0; i < dim_; ++i) {
    for (int j = i + 1; j < dim_; ++j) {
      m(i, j) = at_mask((1u << i) | (1u << j));
      m(j, i) = -m(i, j);
    }
  }
  return m;
}

KForm& KForm::operator+=(const KForm& other) {
  require_same_dim(*this, other, "operator+");
  coeffs_ += other.coeffs_;
  return *this;
}

KForm& KForm::operator-=(const KForm& other) {
  require_same_dim(*this, other, "operator-");
  coeffs_ -= other.coeffs_;
  return *this;
}

KForm& KForm::operator*=(double s) {
  coeffs_ *= s;
  return *this;
}

KForm operator+(KForm a, const KForm& b) { return a += b; }
KForm operator-(KForm a, const KForm& b) { return a -= b; }
KForm operator-(KForm a) { return a *= -1.0; }
KForm operator*(double s, KForm a) { return a *= s; }
KForm operator*(KForm a, double s) { return a *= s; }

// ---------------------------------------------------------------------------
// Algebraic operations

KForm wedge(const KForm& a, const KForm& b) {
  if (a.dim() != b.dim()) throw Error(ErrorCode::FrameMismatch, "wedge: dimension mismatch");
  const int n = a.dim();
  const int p = a.degree();
  const int q = b.degree();
  if (p + q > n) {
    throw Error(ErrorCode::DegreeUnsupported, "wedge: total degree exceeds dimension");
  }
  KForm out(n, p + q);
  const auto& ma = multi_indices(n, p);
  const auto& mb = multi_indices(n, q);
  for (std::size_t i = 0; i < ma.size(); ++i) {
    const double ai = a.components()(i);
    if (ai == 0.0) continue;
    for (std::size_t j = 0; j < mb.size(); ++j) {
      if (ma[i] & mb[j]) continue;
      const double bj = b.components()(j);
      if (bj == 0.0) continue;
      out.components()(multi_index_position(n, ma[i] | mb[j])) +=
          shuffle_sign(ma[i], mb[j]) * ai * bj;
    }
  }
  return out;
}

KForm interior(const Vector& v, const KForm& a) {
  if (a.degree() < 1) throw Error(ErrorCode::DegreeUnderflow, "interior product of a 0-form");
  if (v.size() != a.dim()) throw Error(ErrorCode::FrameMismatch, "interior: vector size mismatch");
  const int n = a.dim();
  KForm out(n, a.degree() - 1);
  const auto& masks = multi_indices(n, a.degree() - 1);
  for (std::size_t p = 0; p < masks.size(); ++p) {
    double s = 0.0;
    for (int i = 0; i < n; ++i) {
      const std::uint32_t bit = 1u << i;
      if (v(i) == 0.0 || (masks[p] & bit)) continue;
      // a(e_i, e_J) = sign(i, J) a_{i u J}
      s += v(i) * shuffle_sign(bit, masks[p]) * a.at_mask(masks[p] | bit);
    }
    out.components()(p) = s;
  }
  return out;
}

KForm pullback(const Matrix& L, const KForm& a) {
  if (L.rows() != a.dim()) throw Error(ErrorCode::FrameMismatch, "pullback: shape mismatch");
  const int k = a.degree();
  const int n_new = static_cast<int>(L.cols());
  KForm out(n_new, k);
  if (k == 0) {
    out.components()(0) = a.components()(0);
    return out;
  }
  const auto& masks = multi_indices(n_new, k);
  Matrix cols(a.dim(), k);
  for (std::size_t p = 0; p < masks.size(); ++p) {
    auto idx = mask_indices(masks[p]);
    for (int r = 0; r < k; ++r) cols.col(r) = L.col(idx[r]);
    out.components()(p) = a.evaluate(cols);
  }
  return out;
}

KForm derivation(const Matrix& A, const KForm& a) {
  const int n = a.dim();
  if (A.rows() != n || A.cols() != n) {
    throw Error(ErrorCode::FrameMismatch, "derivation: endomorphism size mismatch");
  }
  const int k = a.degree();
  KForm out(n, k);
  if (k == 0) return out;
  const auto& masks = multi_indices(n, k);
  std::vector<int> args(k);
  for (std::size_t p = 0; p < masks.size(); ++p) {
    auto idx = mask_indices(masks[p]);
    double s = 0.0;
    for (int slot = 0; slot < k; ++slot) {
      args = idx;
      for (int j = 0; j < n; ++j) {
        const double coeff = A(j, idx[slot]);
        if (coeff == 0.0) continue;
        args[slot] = j;
        s += coeff * a.value(args);
      }
    }
    out.components()(p) = -s;
  }
  return out;
}

KForm j_group_action(const KForm& a, const HermitianVectorSpace& V) {
  require_space(a, V, "j_group_action");
  KForm out = pullback(V.J(), a);
  if (a.degree() % 2) out *= -1.0;
  return out;
}

KForm j_algebra_action(const KForm& a, const HermitianVectorSpace& V) {
  require_space(a, V, "j_algebra_action");
  return derivation(V.J(), a);
}

KForm kahler_form(const HermitianVectorSpace& V) {
  return KForm::from_matrix(V.J().transpose() * V.metric());
}

KForm kahler_power(const HermitianVectorSpace& V, int k) {
  if (k < 0 || k > V.m()) throw Error(ErrorCode::DegreeUnsupported, "kahler_power out of range");
  const KForm omega = kahler_form(V);
  KForm out = KForm::scalar(V.dim(), 1.0);
  for (int i = 1; i <= k; ++i) out = (1.0 / i) * wedge(out, omega);
  return out;
}

KForm volume_form(const HermitianVectorSpace& V) {
  KForm out(V.dim(), V.dim());
  const double orientation = V.adapted_basis().determinant() > 0 ? 1.0 : -1.0;
  out.components()(0) = orientation * std::sqrt(V.metric().determinant());
  return out;
}

double inner_product(const KForm& a, const KForm& b, const HermitianVectorSpace& V) {
  require_same_dim(a, b, "inner_product");
  require_space(a, V, "inner_product");
  const int k = a.degree();
  if (k == 0) return a.components()(0) * b.components()(0);
  const auto& masks = multi_indices(a.dim(), k);
  const Matrix& gi = V.metric_inverse();
  Matrix sub(k, k);
  double total = 0.0;
  for (std::size_t p = 0; p < masks.size(); ++p) {
    if (a.components()(p) == 0.0) continue;
    auto ri = mask_indices(masks[p]);
    for (std::size_t q = 0; q < masks.size(); ++q) {
      if (b.components()(q) == 0.0) continue;
      auto ci = mask_indices(masks[q]);
      for (int r = 0; r < k; ++r)
        for (int c = 0; c < k; ++c) sub(r, c) = gi(ri[r], ci[c]);
      total += a.components()(p) * b.components()(q) * sub.determinant();
    }
  }
  return total;
}

double form_norm(const KForm& a, const HermitianVectorSpace& V) {
  require_space(a, V, "form_norm");
  // Components in an orthonormal frame.
  return pullback(V.adapted_basis(), a).components().norm();
}

KForm hodge_star(const KForm& a, const HermitianVectorSpace& V) {
  require_space(a, V, "hodge_star");
  const int n = V.dim();
  const int p = a.degree();
  const KForm on = pullback(V.adapted_basis(), a);
  KForm star_on(n, n - p);
  const std::uint32_t full = (1u << n) - 1u;
  const auto& masks = multi_indices(n, p);
  for (std::size_t i = 0; i < masks.size(); ++i) {
    const std::uint32_t comp = full & ~masks[i];
    star_on.set_mask(comp, shuffle_sign(masks[i], comp) * on.components()(i));
  }
  return pullback(V.adapted_coframe(), star_on);
}

KForm omega_trace(const KForm& a, const HermitianVectorSpace& V) {
  require_space(a, V, "omega_trace");
  if (a.degree() < 2) throw Error(ErrorCode::DegreeUnderflow, "omega_trace needs degree >= 2");
  const int n = V.dim();
  // sum_i a(f_i, J f_i, ...) = sum_{x,y} M(x,y) a(e_x, e_y, ...), M = g^{-1} J^T.
  const Matrix M = V.metric_inverse() * V.J().transpose();
  KForm out(n, a.degree() - 2);
  const auto& masks = multi_indices(n, a.degree() - 2);
  for (std::size_t p = 0; p < masks.size(); ++p) {
    double s = 0.0;
    for (int x = 0; x < n; ++x) {
      for (int y = x + 1; y < n; ++y) {
        const std::uint32_t pair = (1u << x) | (1u << y);
        if (masks[p] & pair) continue;
        const double w = M(x, y) - M(y, x);
        if (w == 0.0) continue;
        s += w * shuffle_sign(pair, masks[p]) * a.at_mask(pair | masks[p]);
      }
    }
    out.components()(p) = s;
  }
  return out;
}

TypeDecomposition type_project(const KForm& a, const HermitianVectorSpace& V) {
  require_space(a, V, "type_project");
  TypeDecomposition t;
  t.degree = a.degree();
  const int m = V.m();
  const KForm omega = kahler_form(V);
  if (a.degree() == 2) {
    const KForm ja = j_group_action(a, V);
    t.hermitian = 0.5 * (a + ja);
    t.antihermitian = 0.5 * (a - ja);
    t.trace = (1.0 / (2.0 * m)) * omega_trace(t.hermitian, V);
    t.trace_part = t.trace.components()(0) * omega;
  } else if (a.degree() == 3) {
    // (J.)^2 is -1 on (2,1)+(1,2) and -9 on (3,0)+(0,3).
    const KForm jja = j_algebra_action(j_algebra_action(a, V), V);
    t.hermitian = 0.125 * (jja + 9.0 * a);
    t.antihermitian = a - t.hermitian;
    if (m < 2) throw Error(ErrorCode::UnsupportedDimension, "3-forms need m >= 2");
    t.trace = (1.0 / (2.0 * (m - 1))) * omega_trace(t.hermitian, V);
    t.trace_part = wedge(t.trace, omega);
  } else {
    throw Error(ErrorCode::DegreeUnsupported,
                "type_project supports degrees 2 and 3, got " + std::to_string(a.degree()));
  }
  t.trace_free = t.hermitian - t.trace_part;
  return t;
}

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::FrameMismatch: return "frame-mismatch";
    case ErrorCode::DegreeUnderflow: return "degree-underflow";
    case ErrorCode::DegreeUnsupported: return "degree-unsupported";
    case ErrorCode::UnsupportedDimension: return "unsupported-dimension";
    case ErrorCode::UnsupportedValence: return "unsupported-valence";
    case ErrorCode::InvariantViolation: return "invariant-violation";
    case ErrorCode::NoCharacteristicConnection: return "no-characteristic-connection";
    case ErrorCode::PreconditionViolation: return "precondition-violation";
    case ErrorCode::NoLeeDirection: return "no-lee-direction";
    case ErrorCode::DecompositionFailure: return "decomposition-failure";
    case ErrorCode::InvalidModification: return "invalid-modification";
    case ErrorCode::InvalidSasakian: return "invalid-sasakian";
    case ErrorCode::InvalidParameter: return "invalid-parameter";
    case ErrorCode::InvalidConformalFactor: return "invalid-conformal-factor";
    case ErrorCode::ParseError: return "parse-error";
  }
  return "unknown";
}

HermitianVectorSpace random_hermitian_space(int m, std::mt19937& rng) {
  const int n = 2 * m;
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> scale(0.8, 1.25);
  Matrix A(n, n);
  Matrix B(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      A(i, j) = normal(rng);
      B(i, j) = normal(rng);
    }
  const Matrix U = Eigen::HouseholderQR<Matrix>(A).householderQ();
  const Matrix W = Eigen::HouseholderQR<Matrix>(B).householderQ();
  Vector s(n);
  for (int i = 0; i < n; ++i) s(i) = scale(rng);
  const Matrix P = U * s.asDiagonal() * W.transpose();
  const Matrix Pinv = P.inverse();
  const Matrix J0 = HermitianVectorSpace::standard(m).J();
  Matrix G = Pinv.transpose() * Pinv;
  G = 0.5 * (G + G.transpose());
  return HermitianVectorSpace(G, P * J0 * Pinv);
}

KForm random_form(int dim, int degree, std::mt19937& rng) {
  std::normal_distribution<double> normal;
  KForm a(dim, degree);
  for (Eigen::Index i = 0; i < a.components().size(); ++i) a.components()(i) = normal(rng);
  return a;
}

std::array<double, 7> hodge_identity_residuals(const HermitianVectorSpace& V, std::mt19937& rng,
                                               int samples) {
  const int m = V.m();
  const int n = V.dim();
  auto power = [&](int k) { return kahler_power(V, k); };
  const KForm omega = kahler_form(V);
  std::array<double, 7> r{};
  auto note = [&](int i, const KForm& diff) { r[i] = std::max(r[i], diff.max_abs()); };
  note(0, volume_form(V) - power(m));
  for (int k = 0; k <= m; ++k) note(2, hodge_star(power(k), V) - power(m - k));
  for (int s = 0; s < samples; ++s) {
    const KForm a = random_form(n, 1, rng);
    note(1, hodge_star(a, V) - wedge(j_algebra_action(a, V), power(m - 1)));
    if (m >= 2) {
      note(5, hodge_star(wedge(a, omega), V) - wedge(j_algebra_action(a, V), power(m - 2)));
      const TypeDecomposition t2 = type_project(random_form(n, 2, rng), V);
      note(3, hodge_star(t2.trace_free, V) + wedge(t2.trace_free, power(m - 2)));
      note(4, hodge_star(t2.antihermitian, V) - wedge(t2.antihermitian, power(m - 2)));
    }
    if (m >= 3) {
      const TypeDecomposition t3 = type_project(random_form(n, 3, rng), V);
      note(6, hodge_star(t3.trace_free, V) + wedge(j_group_action(t3.trace_free, V), power(m - 3)));
    }
  }
  return r;
}

}  // namespace gcelab
