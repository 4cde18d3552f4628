#include "gcelab/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gcelab/error.hpp"

namespace gcelab {

Tensor::Tensor(int dim, int rank) : dim_(dim), rank_(rank) {
  if (rank < 0 || rank > kMaxTensorRank) {
    throw Error(ErrorCode::UnsupportedValence, "tensor rank " + std::to_string(rank));
  }
  std::size_t n = 1;
  for (int r = 0; r < rank; ++r) n *= static_cast<std::size_t>(dim);
  data_.assign(n, 0.0);
}

std::size_t Tensor::offset(std::span<const int> idx) const {
  std::size_t off = 0;
  for (int i : idx) off = off * dim_ + static_cast<std::size_t>(i);
  return off;
}

Tensor Tensor::from_form(const KForm& a) {
  Tensor t(a.dim(), a.degree());
  for_each_index(a.dim(), a.degree(), [&](std::span<const int> idx) { t.at(idx) = a.value(idx); });
  return t;
}

Tensor Tensor::from_matrix(const Matrix& m) {
  Tensor t(static_cast<int>(m.rows()), 2);
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) t({i, j}) = m(i, j);
  return t;
}

double Tensor::max_abs() const {
  double r = 0.0;
  for (double v : data_) r = std::max(r, std::abs(v));
  return r;
}

KForm Tensor::to_form() const {
  KForm a(dim_, rank_);
  const auto& masks = multi_indices(dim_, rank_);
  std::vector<int> idx;
  for (std::size_t p = 0; p < masks.size(); ++p) {
    idx.clear();
    for (int i = 0; i < dim_; ++i)
      if (masks[p] & (1u << i)) idx.push_back(i);
    a.components()(p) = at(idx);
  }
  return a;
}

double Tensor::alternation_defect() const {
  return (*this - from_form(to_form())).max_abs();
}

Tensor& Tensor::operator+=(const Tensor& other) {
  if (other.dim_ != dim_ || other.rank_ != rank_) {
    throw Error(ErrorCode::FrameMismatch, "tensor shape mismatch");
  }
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

Tensor& Tensor::operator-=(const Tensor& other) {
  if (other.dim_ != dim_ || other.rank_ != rank_) {
    throw Error(ErrorCode::FrameMismatch, "tensor shape mismatch");
  }
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
  return *this;
}

Tensor& Tensor::operator*=(double s) {
  for (double& v : data_) v *= s;
  return *this;
}

Tensor operator+(Tensor a, const Tensor& b) { return a += b; }
Tensor operator-(Tensor a, const Tensor& b) { return a -= b; }
Tensor operator*(double s, Tensor a) { return a *= s; }

Tensor pullback(const Matrix& L, const Tensor& t) {
  if (L.rows() != t.dim()) throw Error(ErrorCode::FrameMismatch, "tensor pullback: shape");
  const int n_new = static_cast<int>(L.cols());
  // Transform one slot at a time.
  Tensor cur = t;
  for (int slot = 0; slot < t.rank(); ++slot) {
    // Slots before `slot` already live in R^{n_new}; later ones in R^{t.dim()}.
    const int n_old = t.dim();
    auto dims = [&](int r) { return r <= slot ? n_new : n_old; };
    std::vector<int> idx(t.rank(), 0);
    std::vector<int> src(t.rank());
    std::vector<double> out;
    std::size_t total = 1;
    for (int r = 0; r < t.rank(); ++r) total *= static_cast<std::size_t>(dims(r));
    out.assign(total, 0.0);
    auto src_offset = [&](const std::vector<int>& s) {
      std::size_t off = 0;
      for (int r = 0; r < t.rank(); ++r) off = off * (r < slot ? n_new : n_old) + s[r];
      return off;
    };
    for (std::size_t flat = 0; flat < total; ++flat) {
      std::size_t rem = flat;
      for (int r = t.rank() - 1; r >= 0; --r) {
        idx[r] = static_cast<int>(rem % dims(r));
        rem /= dims(r);
      }
      double s = 0.0;
      src = idx;
      for (int l = 0; l < n_old; ++l) {
        const double c = L(l, idx[slot]);
        if (c == 0.0) continue;
        src[slot] = l;
        s += c * cur.data()[src_offset(src)];
      }
      out[flat] = s;
    }
    cur.data() = std::move(out);
  }
  Tensor result(n_new, t.rank());
  result.data() = std::move(cur.data());
  return result;
}

double tensor_norm(const Tensor& t, const HermitianVectorSpace& V) {
  const Tensor on = pullback(V.adapted_basis(), t);
  double s = 0.0;
  for (double v : on.data()) s += v * v;
  return std::sqrt(s);
}

}  // namespace gcelab
