#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace oracle {

int permutation_sign(const std::vector<int>& p) {
  int inversions = 0;
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = i + 1; j < p.size(); ++j)
      if (p[i] > p[j]) ++inversions;
  return inversions % 2 ? -1 : 1;
}

std::vector<std::vector<int>> increasing_tuples(int n, int k) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  auto rec = [&](auto&& self, int start) -> void {
    if (static_cast<int>(cur.size()) == k) {
      out.push_back(cur);
      return;
    }
    for (int i = start; i < n; ++i) {
      cur.push_back(i);
      self(self, i + 1);
      cur.pop_back();
    }
  };
  rec(rec, 0);
  return out;
}

namespace {

// Component of a on an arbitrary index tuple.
double component(const KForm& a, std::vector<int> idx) {
  for (std::size_t i = 0; i < idx.size(); ++i)
    for (std::size_t j = i + 1; j < idx.size(); ++j)
      if (idx[i] == idx[j]) return 0.0;
  const int sign = permutation_sign(idx);
  std::sort(idx.begin(), idx.end());
  const auto tuples = increasing_tuples(a.dim(), a.degree());
  const auto it = std::find(tuples.begin(), tuples.end(), idx);
  return sign * a.components()(it - tuples.begin());
}

KForm from_values(int n, int k, auto value_of) {
  KForm out(n, k);
  const auto tuples = increasing_tuples(n, k);
  for (std::size_t t = 0; t < tuples.size(); ++t) out.components()(t) = value_of(tuples[t]);
  return out;
}

Matrix columns(int n, const std::vector<int>& idx) {
  Matrix X = Matrix::Zero(n, idx.size());
  for (std::size_t r = 0; r < idx.size(); ++r) X(idx[r], r) = 1.0;
  return X;
}

}  // namespace

double evaluate(const KForm& a, const Matrix& X) {
  const int n = a.dim();
  const int k = a.degree();
  if (k == 0) return a.components()(0);
  double s = 0.0;
  std::vector<int> idx(k, 0);
  for (;;) {
    double prod = 1.0;
    for (int r = 0; r < k && prod != 0.0; ++r) prod *= X(idx[r], r);
    if (prod != 0.0) s += prod * component(a, idx);
    int r = k - 1;
    while (r >= 0 && ++idx[r] == n) idx[r--] = 0;
    if (r < 0) break;
  }
  return s;
}

KForm wedge(const KForm& a, const KForm& b) {
  const int n = a.dim();
  const int k = a.degree();
  const int l = b.degree();
  double fact = 1.0;
  for (int i = 2; i <= k; ++i) fact *= i;
  for (int i = 2; i <= l; ++i) fact *= i;
  return from_values(n, k + l, [&](const std::vector<int>& I) {
    std::vector<int> sigma(k + l);
    std::iota(sigma.begin(), sigma.end(), 0);
    double s = 0.0;
    do {
      std::vector<int> first, second;
      for (int r = 0; r < k; ++r) first.push_back(I[sigma[r]]);
      for (int r = 0; r < l; ++r) second.push_back(I[sigma[k + r]]);
      s += permutation_sign(sigma) * component(a, first) * component(b, second);
    } while (std::next_permutation(sigma.begin(), sigma.end()));
    return s / fact;
  });
}

KForm interior(const Vector& v, const KForm& a) {
  const int n = a.dim();
  return from_values(n, a.degree() - 1, [&](const std::vector<int>& I) {
    Matrix X(n, I.size() + 1);
    X.col(0) = v;
    X.rightCols(I.size()) = columns(n, I);
    return evaluate(a, X);
  });
}

KForm hodge_star(const KForm& a, const Matrix& P) {
  const int n = a.dim();
  const int k = a.degree();
  const Matrix Q = P.inverse();
  // Components in the orthonormal coframe.
  const auto tuples = increasing_tuples(n, k);
  std::vector<double> on(tuples.size());
  for (std::size_t t = 0; t < tuples.size(); ++t) {
    Matrix X(n, k);
    for (int r = 0; r < k; ++r) X.col(r) = P.col(tuples[t][r]);
    on[t] = evaluate(a, X);
  }
  KForm star_on(n, n - k);
  const auto co = increasing_tuples(n, n - k);
  for (std::size_t t = 0; t < tuples.size(); ++t) {
    std::vector<int> comp;
    for (int i = 0; i < n; ++i)
      if (std::find(tuples[t].begin(), tuples[t].end(), i) == tuples[t].end()) comp.push_back(i);
    std::vector<int> joined = tuples[t];
    joined.insert(joined.end(), comp.begin(), comp.end());
    const auto pos = std::find(co.begin(), co.end(), comp) - co.begin();
    star_on.components()(pos) = permutation_sign(joined) * on[t];
  }
  // Back to the coordinate coframe: b(e_J) = b_on(Q e_J).
  return from_values(n, n - k, [&](const std::vector<int>& J) {
    Matrix X(n, J.size());
    for (std::size_t r = 0; r < J.size(); ++r) X.col(r) = Q.col(J[r]);
    return evaluate(star_on, X);
  });
}

double inner_product(const KForm& a, const KForm& b, const Matrix& P) {
  const int n = a.dim();
  double s = 0.0;
  for (const auto& I : increasing_tuples(n, a.degree())) {
    Matrix X(n, I.size());
    for (std::size_t r = 0; r < I.size(); ++r) X.col(r) = P.col(I[r]);
    s += evaluate(a, X) * evaluate(b, X);
  }
  return s;
}

KForm exterior_derivative(const KForm& a, const gcelab::LieAlgebra& g) {
  const int n = a.dim();
  const int k = a.degree();
  if (k == n) return KForm(n, n);
  return from_values(n, k + 1, [&](const std::vector<int>& I) {
    double s = 0.0;
    for (int i = 0; i <= k; ++i)
      for (int j = i + 1; j <= k; ++j) {
        Matrix X(n, k);
        Vector br = Vector::Zero(n);
        for (int c = 0; c < n; ++c) br(c) = g.constant(I[i], I[j], c);
        X.col(0) = br;
        int col = 1;
        for (int r = 0; r <= k; ++r)
          if (r != i && r != j) X.col(col++) = Vector::Unit(n, I[r]);
        s += ((i + j) % 2 ? -1.0 : 1.0) * evaluate(a, X);
      }
    return s;
  });
}

std::vector<Matrix> koszul(const Matrix& G, const gcelab::LieAlgebra& g) {
  const int n = G.rows();
  auto br = [&](int i, int j) {
    Vector v(n);
    for (int c = 0; c < n; ++c) v(c) = g.constant(i, j, c);
    return v;
  };
  const Matrix Ginv = G.inverse();
  std::vector<Matrix> out(n, Matrix::Zero(n, n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Vector lowered(n);
      for (int k = 0; k < n; ++k) {
        const Vector ek = Vector::Unit(n, k);
        const Vector ei = Vector::Unit(n, i);
        const Vector ej = Vector::Unit(n, j);
        lowered(k) = 0.5 * (br(i, j).dot(G * ek) - br(j, k).dot(G * ei) + br(k, i).dot(G * ej));
      }
      out[i].col(j) = Ginv * lowered;
    }
  return out;
}

double holonomy_shift(std::array<double, 2> V, std::array<double, 2> W) {
  static const double x[5] = {-0.9061798459386640, -0.5384693101056831, 0.0, 0.5384693101056831,
                              0.9061798459386640};
  static const double c[5] = {0.2369268850561891, 0.4786286704993665, 0.5688888888888889,
                              0.4786286704993665, 0.2369268850561891};
  // lambda = dt + y dx - x dy; d lambda = d(y) ^ dx - d(x) ^ dy, evaluated on
  // (V, W) at the point (x, y) of the parallelogram.
  auto dlambda = [&](double, double) {
    const double dy_dx = V[1] * W[0] - W[1] * V[0];
    const double dx_dy = V[0] * W[1] - W[0] * V[1];
    return dy_dx - dx_dy;
  };
  double integral = 0.0;
  for (int p = 0; p < 5; ++p)
    for (int q = 0; q < 5; ++q) {
      const double u = 0.5 * (x[p] + 1.0);
      const double v = 0.5 * (x[q] + 1.0);
      integral += 0.25 * c[p] * c[q] * dlambda(u * V[0] + v * W[0], u * V[1] + v * W[1]);
    }
  // The horizontal lift closes up to the Reeb displacement -integral of d lambda.
  return -integral;
}

}  // namespace oracle
