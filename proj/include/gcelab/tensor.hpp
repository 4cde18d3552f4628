#pragma once

// Dense covariant tensors of small rank in frame coordinates. Index order is
// row-major: the first index varies slowest.

#include <initializer_list>
#include <span>
#include <vector>

#include "gcelab/multilinear.hpp"

namespace gcelab {

inline constexpr int kMaxTensorRank = 5;

class Tensor {
 public:
  Tensor() = default;
  Tensor(int dim, int rank);

  /// Full alternating expansion of a form.
  static Tensor from_form(const KForm& a);
  static Tensor from_matrix(const Matrix& m);

  int dim() const { return dim_; }
  int rank() const { return rank_; }
  std::size_t size() const { return data_.size(); }

  double& at(std::span<const int> idx) { return data_[offset(idx)]; }
  double at(std::span<const int> idx) const { return data_[offset(idx)]; }
  double& operator()(std::initializer_list<int> idx) {
    return at(std::span<const int>(idx.begin(), idx.size()));
  }
  double operator()(std::initializer_list<int> idx) const {
    return at(std::span<const int>(idx.begin(), idx.size()));
  }

  std::vector<double>& data() { return data_; }
  const std::vector<double>& data() const { return data_; }

  double max_abs() const;

  /// Components on increasing index tuples; meaningful when the tensor is
  /// alternating (see alternation_defect).
  KForm to_form() const;
  /// Largest deviation from full antisymmetry.
  double alternation_defect() const;

  Tensor& operator+=(const Tensor& other);
  Tensor& operator-=(const Tensor& other);
  Tensor& operator*=(double s);

 private:
  std::size_t offset(std::span<const int> idx) const;

  int dim_ = 0;
  int rank_ = 0;
  std::vector<double> data_;
};

Tensor operator+(Tensor a, const Tensor& b);
Tensor operator-(Tensor a, const Tensor& b);
Tensor operator*(double s, Tensor a);

/// t(L X_1, ..., L X_r); L maps R^{L.cols()} into R^{t.dim()}.
Tensor pullback(const Matrix& L, const Tensor& t);
/// Frobenius norm of the components in the adapted orthonormal frame.
double tensor_norm(const Tensor& t, const HermitianVectorSpace& V);

/// Calls fn(idx) for every index tuple of the given rank in row-major order.
template <class Fn>
void for_each_index(int dim, int rank, Fn&& fn) {
  std::vector<int> idx(rank, 0);
  if (dim == 0 && rank > 0) return;
  while (true) {
    fn(std::span<const int>(idx));
    int r = rank - 1;
    while (r >= 0 && ++idx[r] == dim) idx[r--] = 0;
    if (r < 0) return;
  }
}

}  // namespace gcelab
