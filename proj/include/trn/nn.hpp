#ifndef TRN_NN_HPP
#define TRN_NN_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "trn/autograd.hpp"

namespace trn::nn {

using ag::ParamStore;
using ag::Shape;
using ag::Tensor;
using ag::Value;

// Deterministic RNG built on splitmix64 + Box-Muller. Using hand-rolled
// sampling keeps runs bit-identical across standard library versions.
class Rng {
 public:
  explicit Rng(uint64_t seed) : state_(seed) {}
  uint64_t next_u64();
  double uniform();             // [0, 1)
  double normal();              // standard normal
  uint64_t fork(uint64_t tag);  // derive an independent stream seed
  // Fisher-Yates over [0, n) index vector.
  std::vector<int> permutation(int n);

 private:
  uint64_t state_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

Tensor randn(Shape shape, Rng& rng, double stddev);

struct LinearParams {
  Value w;  // [out, in]
  Value b;  // [out] (may be null)
};

struct LayerNormParams {
  Value gain;
  Value bias;
};

struct AttentionParams {
  LinearParams query, key, value, output;
};

LinearParams make_linear(ParamStore& store, const std::string& name, int out_dim, int in_dim,
                         Rng& rng, double init_std = 0.02, bool bias = true);
LayerNormParams make_layer_norm(ParamStore& store, const std::string& name, int dim);
AttentionParams make_attention(ParamStore& store, const std::string& name, int dim, Rng& rng,
                               double init_std = 0.02);

// x: [batch, seq, dim] -> [batch*seq, dim] affine -> back. Convenience for
// position-wise layers.
Value linear3(const Value& x, const LinearParams& lin);

// Multi-head scaled dot-product attention over the middle axis of
// x [batch, seq, dim]. key_keep [batch, seq] marks live key positions; dead
// keys get exactly zero weight. Queries are not masked: outputs at dead
// positions are garbage by contract and must be ignored by the caller.
Value multi_head_attention(const Value& x, const AttentionParams& p, int heads,
                           const Tensor& key_keep);

// Standard 64-bit FNV-1a, used for config hashes in artifact headers.
uint64_t fnv1a(const std::string& bytes);

struct AdamConfig {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  double weight_decay = 0.0;  // decoupled, applied to rank>=2 tensors only
};

class Adam {
 public:
  Adam(ParamStore& store, AdamConfig cfg);
  // lr_scale multiplies cfg.lr (warmup / decay schedules).
  void step(double lr_scale = 1.0);
  int64_t steps_taken() const { return t_; }

 private:
  ParamStore& store_;
  AdamConfig cfg_;
  int64_t t_ = 0;
  std::vector<Tensor> m_, v_;
};

}  // namespace trn::nn

#endif
