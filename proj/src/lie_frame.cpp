#include "gcelab/lie_frame.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gcelab/error.hpp"

namespace gcelab {

// ---------------------------------------------------------------------------
// LieAlgebra

LieAlgebra::LieAlgebra(int dim, std::span<const Bracket> brackets, double jacobi_tol)
    : dim_(dim), ad_(dim, Matrix::Zero(dim, dim)) {
  if (dim <= 0 || dim > kMaxDimension) {
    throw Error(ErrorCode::UnsupportedDimension, "Lie algebra of dimension " + std::to_string(dim));
  }
  std::vector<Matrix> seen(dim, Matrix::Zero(dim, dim));
  for (const Bracket& b : brackets) {
    if (b.i < 0 || b.j < 0 || b.k < 0 || b.i >= dim || b.j >= dim || b.k >= dim) {
      throw Error(ErrorCode::InvariantViolation, "bracket index out of range");
    }
    if (b.i == b.j) {
      if (b.value != 0.0) {
        throw Error(ErrorCode::InvariantViolation,
                    "antisymmetry: [e" + std::to_string(b.i + 1) + ", e" + std::to_string(b.i + 1) +
                        "] must vanish");
      }
      continue;
    }
    const double prev = ad_[b.i](b.k, b.j);
    if (seen[b.i](b.k, b.j) != 0.0 && prev != b.value) {
      throw Error(ErrorCode::InvariantViolation,
                  "antisymmetry: conflicting values for c^" + std::to_string(b.k + 1) + "_" +
                      std::to_string(b.i + 1) + std::to_string(b.j + 1));
    }
    seen[b.i](b.k, b.j) = seen[b.j](b.k, b.i) = 1.0;
    ad_[b.i](b.k, b.j) = b.value;
    ad_[b.j](b.k, b.i) = -b.value;
  }
  const double jac = jacobi_residual();
  if (jac > jacobi_tol) {
    throw Error(ErrorCode::InvariantViolation, "Jacobi identity residual " + std::to_string(jac));
  }
}

LieAlgebra LieAlgebra::abelian(int dim) { return LieAlgebra(dim, std::span<const Bracket>()); }

Matrix LieAlgebra::ad(const Vector& x) const {
  Matrix out = Matrix::Zero(dim_, dim_);
  for (int i = 0; i < dim_; ++i)
    if (x(i) != 0.0) out += x(i) * ad_[i];
  return out;
}

Vector LieAlgebra::bracket(const Vector& x, const Vector& y) const { return ad(x) * y; }

std::vector<Bracket> LieAlgebra::brackets() const {
  std::vector<Bracket> out;
  for (int i = 0; i < dim_; ++i)
    for (int j = i + 1; j < dim_; ++j)
      for (int k = 0; k < dim_; ++k)
        if (ad_[i](k, j) != 0.0) out.push_back({i, j, k, ad_[i](k, j)});
  return out;
}

double LieAlgebra::jacobi_residual() const {
  double worst = 0.0;
  for (int i = 0; i < dim_; ++i)
    for (int j = i + 1; j < dim_; ++j)
      for (int k = j + 1; k < dim_; ++k) {
        // [e_i,[e_j,e_k]] + [e_j,[e_k,e_i]] + [e_k,[e_i,e_j]]
        Vector s = ad_[i] * ad_[j].col(k) + ad_[j] * ad_[k].col(i) + ad_[k] * ad_[i].col(j);
        worst = std::max(worst, s.cwiseAbs().maxCoeff());
      }
  return worst;
}

bool LieAlgebra::unimodular(double tol) const {
  for (const Matrix& a : ad_)
    if (std::abs(a.trace()) > tol) return false;
  return true;
}

LieAlgebra LieAlgebra::direct_sum(const LieAlgebra& a, const LieAlgebra& b) {
  std::vector<Bracket> all = a.brackets();
  for (Bracket br : b.brackets()) {
    br.i += a.dim();
    br.j += a.dim();
    br.k += a.dim();
    all.push_back(br);
  }
  return LieAlgebra(a.dim() + b.dim(), all);
}

HermitianFrame::HermitianFrame(HermitianVectorSpace space, LieAlgebra algebra)
    : space_(std::move(space)), algebra_(std::move(algebra)) {
  if (space_.dim() != algebra_.dim()) {
    throw Error(ErrorCode::FrameMismatch, "space and Lie algebra dimensions differ");
  }
}

// ---------------------------------------------------------------------------
// Connection

Connection::Connection(std::vector<Matrix> by_direction) : m_(std::move(by_direction)) {
  for (const Matrix& m : m_) {
    if (m.rows() != dim() || m.cols() != dim()) {
      throw Error(ErrorCode::FrameMismatch, "connection coefficient shape");
    }
  }
}

Connection Connection::zero(int dim) {
  return Connection(std::vector<Matrix>(dim, Matrix::Zero(dim, dim)));
}

Matrix Connection::along(const Vector& x) const {
  Matrix out = Matrix::Zero(dim(), dim());
  for (int i = 0; i < dim(); ++i)
    if (x(i) != 0.0) out += x(i) * m_[i];
  return out;
}

Connection& Connection::operator+=(const Connection& other) {
  if (other.dim() != dim()) throw Error(ErrorCode::FrameMismatch, "connection dimension");
  for (int i = 0; i < dim(); ++i) m_[i] += other.m_[i];
  return *this;
}

Connection& Connection::operator-=(const Connection& other) {
  if (other.dim() != dim()) throw Error(ErrorCode::FrameMismatch, "connection dimension");
  for (int i = 0; i < dim(); ++i) m_[i] -= other.m_[i];
  return *this;
}

Connection operator+(Connection a, const Connection& b) { return a += b; }
Connection operator-(Connection a, const Connection& b) { return a -= b; }

// ---------------------------------------------------------------------------
// Calculus

KForm exterior_derivative(const KForm& a, const LieAlgebra& g) {
  const int n = g.dim();
  if (a.dim() != n) throw Error(ErrorCode::FrameMismatch, "exterior_derivative: dimension");
  const int k = a.degree();
  if (k >= n) return KForm(n, n);
  KForm out(n, k + 1);
  if (k == 0) return out;
  const auto& masks = multi_indices(n, k + 1);
  std::vector<int> idx;
  // args = ([X_x, X_y] component l, remaining arguments in order)
  std::vector<int> args(k);
  for (std::size_t p = 0; p < masks.size(); ++p) {
    idx.clear();
    for (int i = 0; i < n; ++i)
      if (masks[p] & (1u << i)) idx.push_back(i);
    double s = 0.0;
    for (int x = 0; x <= k; ++x) {
      for (int y = x + 1; y <= k; ++y) {
        const auto br = g.ad(idx[x]).col(idx[y]);
        int w = 1;
        for (int r = 0; r <= k; ++r)
          if (r != x && r != y) args[w++] = idx[r];
        double term = 0.0;
        for (int l = 0; l < n; ++l) {
          if (br(l) == 0.0) continue;
          args[0] = l;
          term += br(l) * a.value(args);
        }
        s += ((x + y) % 2 ? -1.0 : 1.0) * term;
      }
    }
    out.components()(p) = s;
  }
  return out;
}

KForm exterior_derivative(const KForm& a, const HermitianFrame& F) {
  return exterior_derivative(a, F.algebra());
}

Connection levi_civita(const Matrix& metric, const LieAlgebra& g) {
  const int n = g.dim();
  const Matrix gi = metric.inverse();
  std::vector<Matrix> m(n, Matrix::Zero(n, n));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      // 2 g(nabla_i e_j, e_l) = g([e_i,e_j],e_l) - g([e_j,e_l],e_i) + g([e_l,e_i],e_j)
      Vector low(n);
      for (int l = 0; l < n; ++l) {
        low(l) = 0.5 * (metric.col(l).dot(g.ad(i).col(j)) - metric.col(i).dot(g.ad(j).col(l)) +
                        metric.col(j).dot(g.ad(l).col(i)));
      }
      m[i].col(j) = gi * low;
    }
  }
  return Connection(std::move(m));
}

Connection levi_civita(const HermitianFrame& F) { return levi_civita(F.metric(), F.algebra()); }

Tensor torsion(const Connection& C, const LieAlgebra& g) {
  const int n = g.dim();
  Tensor t(n, 3);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const Vector v = C.along(i).col(j) - C.along(j).col(i) - g.ad(i).col(j);
      for (int k = 0; k < n; ++k) t({i, j, k}) = v(k);
    }
  return t;
}

Tensor lowered_torsion(const Connection& C, const Matrix& metric, const LieAlgebra& g) {
  const int n = g.dim();
  Tensor t = torsion(C, g);
  Tensor out(n, 3);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        double s = 0.0;
        for (int l = 0; l < n; ++l) s += t({i, j, l}) * metric(l, k);
        out({i, j, k}) = s;
      }
  return out;
}

Connection add_three_form(const Connection& base, const KForm& T, const Matrix& metric,
                          double scale) {
  const int n = base.dim();
  if (T.dim() != n || T.degree() != 3) {
    throw Error(ErrorCode::FrameMismatch, "add_three_form needs a 3-form on the frame");
  }
  const Matrix gi = metric.inverse();
  std::vector<Matrix> m(n);
  for (int i = 0; i < n; ++i) {
    m[i] = base.along(i);
    for (int j = 0; j < n; ++j) {
      Vector low(n);
      for (int l = 0; l < n; ++l) low(l) = T.value({i, j, l});
      m[i].col(j) += scale * (gi * low);
    }
  }
  return Connection(std::move(m));
}

KForm covariant_derivative(const KForm& a, const Vector& x, const Connection& C) {
  return derivation(C.along(x), a);
}

Tensor covariant_derivative(const Tensor& t, const Connection& C) {
  const int n = t.dim();
  const int r = t.rank();
  if (r > 4) throw Error(ErrorCode::UnsupportedValence, "covariant derivative of rank " + std::to_string(r));
  if (C.dim() != n) throw Error(ErrorCode::FrameMismatch, "covariant_derivative: dimension");
  Tensor out(n, r + 1);
  std::vector<int> src(r);
  for_each_index(n, r + 1, [&](std::span<const int> idx) {
    const Matrix& M = C.along(idx[0]);
    double s = 0.0;
    for (int slot = 0; slot < r; ++slot) {
      for (int q = 0; q < r; ++q) src[q] = idx[q + 1];
      for (int l = 0; l < n; ++l) {
        const double c = M(l, idx[slot + 1]);
        if (c == 0.0) continue;
        src[slot] = l;
        s += c * t.at(src);
      }
    }
    out.at(idx) = -s;
  });
  return out;
}

double endomorphism_derivative_residual(const Matrix& A, const Connection& C) {
  double worst = 0.0;
  for (int i = 0; i < C.dim(); ++i) {
    worst = std::max(worst, (C.along(i) * A - A * C.along(i)).cwiseAbs().maxCoeff());
  }
  return worst;
}

std::vector<Matrix> curvature_operators(const Connection& C, const LieAlgebra& g) {
  const int n = g.dim();
  std::vector<Matrix> out(n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      out[i * n + j] = C.along(i) * C.along(j) - C.along(j) * C.along(i) -
                       C.along(Vector(g.ad(i).col(j)));
    }
  return out;
}

Tensor curvature(const Connection& C, const Matrix& metric, const LieAlgebra& g) {
  const int n = g.dim();
  const auto ops = curvature_operators(C, g);
  Tensor out(n, 4);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const Matrix low = ops[i * n + j].transpose() * metric;  // (k, l) -> g(R e_k, e_l)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) out({i, j, k, l}) = low(k, l);
    }
  return out;
}

Tensor curvature(const Connection& C, const HermitianFrame& F) {
  return curvature(C, F.metric(), F.algebra());
}

KForm codifferential(const KForm& a, const HermitianFrame& F) {
  if (a.degree() < 1) throw Error(ErrorCode::DegreeUnderflow, "codifferential of a 0-form");
  const HermitianVectorSpace& V = F.space();
  return -hodge_star(exterior_derivative(hodge_star(a, V), F), V);
}

KForm nabla_codifferential(const KForm& a, const Connection& C, const HermitianFrame& F) {
  if (a.degree() < 1) throw Error(ErrorCode::DegreeUnderflow, "nabla_codifferential of a 0-form");
  const int n = F.dim();
  const Matrix& gi = F.space().metric_inverse();
  KForm out(n, a.degree() - 1);
  for (int b = 0; b < n; ++b) {
    out -= interior(gi.col(b), derivation(C.along(b), a));
  }
  return out;
}

double torsion_free_residual(const Connection& C, const LieAlgebra& g) {
  return torsion(C, g).max_abs();
}

double metric_compatibility_residual(const Connection& C, const Matrix& metric) {
  double worst = 0.0;
  for (int i = 0; i < C.dim(); ++i) {
    const Matrix r = C.along(i).transpose() * metric + metric * C.along(i);
    worst = std::max(worst, r.cwiseAbs().maxCoeff());
  }
  return worst;
}

double sectional_curvature(const Connection& C, const Matrix& metric, const LieAlgebra& g,
                           const Vector& x, const Vector& y) {
  const auto ops = curvature_operators(C, g);
  const int n = g.dim();
  Matrix rxy = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (x(i) * y(j) != 0.0) rxy += x(i) * y(j) * ops[i * n + j];
  const double num = (rxy * y).dot(metric * x);
  const double den = x.dot(metric * x) * y.dot(metric * y) - std::pow(x.dot(metric * y), 2);
  return num / den;
}

}  // namespace gcelab
