#ifndef TRN_TENSOR_HPP
#define TRN_TENSOR_HPP

#include <cassert>
#include <cstdint>
#include <numeric>
#include <vector>

namespace trn::ag {

using Shape = std::vector<int>;

// Dense row-major tensor of doubles. All model math runs at 64-bit precision
// so the finite-difference suites can use tight tolerances.
struct Tensor {
  Shape shape;
  std::vector<double> v;

  Tensor() = default;
  explicit Tensor(Shape s) : shape(std::move(s)), v(count(shape), 0.0) {}
  Tensor(Shape s, std::vector<double> data) : shape(std::move(s)), v(std::move(data)) {
    assert(static_cast<int64_t>(v.size()) == count(shape));
  }

  static int64_t count(const Shape& s) {
    int64_t n = 1;
    for (int d : s) n *= d;
    return n;
  }

  static Tensor zeros(Shape s) { return Tensor(std::move(s)); }
  static Tensor full(Shape s, double x) {
    Tensor t(std::move(s));
    std::fill(t.v.begin(), t.v.end(), x);
    return t;
  }
  static Tensor scalar(double x) { return Tensor({1}, {x}); }

  int64_t numel() const { return static_cast<int64_t>(v.size()); }
  int rank() const { return static_cast<int>(shape.size()); }
  int dim(int i) const { return shape[static_cast<size_t>(i)]; }

  double& at(int64_t i) { return v[static_cast<size_t>(i)]; }
  double at(int64_t i) const { return v[static_cast<size_t>(i)]; }

  // Row-major offset helpers for the common 2-D / 3-D cases.
  double& at2(int i, int j) { return v[static_cast<size_t>(i) * shape[1] + j]; }
  double at2(int i, int j) const { return v[static_cast<size_t>(i) * shape[1] + j]; }
  double& at3(int b, int i, int j) {
    return v[(static_cast<size_t>(b) * shape[1] + i) * shape[2] + j];
  }
  double at3(int b, int i, int j) const {
    return v[(static_cast<size_t>(b) * shape[1] + i) * shape[2] + j];
  }

  bool same_shape(const Tensor& o) const { return shape == o.shape; }
};

}  // namespace trn::ag

#endif
