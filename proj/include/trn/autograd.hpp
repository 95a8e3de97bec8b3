#ifndef TRN_AUTOGRAD_HPP
#define TRN_AUTOGRAD_HPP

#include <functional>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "trn/tensor.hpp"

namespace trn::ag {

// Reverse-mode autodiff over a dynamically built graph. Each op allocates a
// Node holding the forward value and a closure that scatters the incoming
// gradient to the parents. Graphs are rebuilt per step and freed with the
// last shared_ptr.
struct Node;
using Value = std::shared_ptr<Node>;

struct Node {
  Tensor val;
  Tensor grad;  // allocated lazily by g()
  bool requires_grad = false;
  bool grad_ready = false;
  std::vector<Value> parents;
  std::function<void(Node&)> back;  // scatter self.grad into parents

  Tensor& g() {
    if (!grad_ready) {
      grad = Tensor::zeros(val.shape);
      grad_ready = true;
    }
    return grad;
  }
};

Value constant(Tensor t);
Value parameter(Tensor t);

// Elementwise / shape ops -----------------------------------------------
Value add(const Value& a, const Value& b);              // same shape
Value sub(const Value& a, const Value& b);              // same shape
Value mul(const Value& a, const Value& b);              // hadamard, same shape
Value scale(const Value& a, double s);
Value add_rows(const Value& x, const Value& b);         // x[..,d] + b[d]
Value reshape(const Value& x, Shape s);
Value permute(const Value& x, std::vector<int> axes);
Value gather_rows(const Value& x, std::vector<int> idx);  // x[n,d] -> [k,d]
Value row_scale(const Value& x, const Value& s);        // x[n,d] * s[n] (or [n,1])
Value stack0(const std::vector<Value>& xs);             // k x [s...] -> [k,s...]
Value slice0(const Value& x, int i);                    // [k,s...] -> [s...]

// Linear algebra ---------------------------------------------------------
Value matmul(const Value& a, const Value& b);           // [m,k]x[k,n]
Value affine(const Value& x, const Value& w, const Value& b);  // x[m,k]*w[n,k]^T (+b[n])
Value bmm(const Value& a, const Value& b);              // [B,m,k]x[B,k,n]

// Nonlinearities / normalization ------------------------------------------
Value sigmoid(const Value& x);
Value relu(const Value& x);
// Softmax over the last axis. `keep` has x's shape with 1 for live entries;
// dropped entries behave as -inf scores (exactly zero weight). A fully
// dropped row yields all-zero weights.
Value softmax_masked(const Value& x, const Tensor& keep);
Value layer_norm(const Value& x, const Value& gain, const Value& bias, double eps = 1e-5);
Value dropout(const Value& x, double p, std::mt19937_64& rng, bool training);

// Reductions / losses -----------------------------------------------------
Value sum_all(const Value& x);
Value mean_all(const Value& x);
// Mean softmax cross-entropy over rows of logits[n,C] against integer labels.
Value cross_entropy(const Value& logits, const std::vector<int>& labels);

// Runs reverse-mode accumulation from a scalar root.
void backward(const Value& root);

// Named parameter registry; creation order is the serialization and
// optimizer order, which keeps runs bit-reproducible.
class ParamStore {
 public:
  Value create(const std::string& name, Tensor init);
  void add(const std::string& name, const Value& v);
  const std::vector<std::pair<std::string, Value>>& items() const { return items_; }
  Value find(const std::string& name) const;
  int64_t total_size() const;
  void zero_grad();

 private:
  std::vector<std::pair<std::string, Value>> items_;
};

}  // namespace trn::ag

#endif
