#include "trn/nn.hpp"

#include <cassert>
#include <cmath>

#include "trn/errors.hpp"

namespace trn::nn {

namespace {
uint64_t splitmix64(uint64_t& s) {
  s += 0x9e3779b97f4a7c15ULL;
  uint64_t z = s;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}
}  // namespace

uint64_t Rng::next_u64() { return splitmix64(state_); }

double Rng::uniform() {
  // 53-bit mantissa construction.
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * M_PI * u2;
  spare_ = r * std::sin(theta);
  has_spare_ = true;
  return r * std::cos(theta);
}

uint64_t Rng::fork(uint64_t tag) {
  uint64_t s = state_ ^ (0x517cc1b727220a95ULL * (tag + 1));
  return splitmix64(s);
}

std::vector<int> Rng::permutation(int n) {
  std::vector<int> p(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) p[static_cast<size_t>(i)] = i;
  for (int i = n - 1; i > 0; --i) {
    const int j = static_cast<int>(next_u64() % static_cast<uint64_t>(i + 1));
    std::swap(p[static_cast<size_t>(i)], p[static_cast<size_t>(j)]);
  }
  return p;
}

Tensor randn(Shape shape, Rng& rng, double stddev) {
  Tensor t(std::move(shape));
  for (auto& v : t.v) v = rng.normal() * stddev;
  return t;
}

LinearParams make_linear(ParamStore& store, const std::string& name, int out_dim, int in_dim,
                         Rng& rng, double init_std, bool bias) {
  LinearParams lin;
  lin.w = store.create(name + ".w", randn({out_dim, in_dim}, rng, init_std));
  lin.b = bias ? store.create(name + ".b", Tensor::zeros({out_dim})) : nullptr;
  return lin;
}

LayerNormParams make_layer_norm(ParamStore& store, const std::string& name, int dim) {
  LayerNormParams ln;
  ln.gain = store.create(name + ".gain", Tensor::full({dim}, 1.0));
  ln.bias = store.create(name + ".bias", Tensor::zeros({dim}));
  return ln;
}

AttentionParams make_attention(ParamStore& store, const std::string& name, int dim, Rng& rng,
                               double init_std) {
  AttentionParams p;
  p.query = make_linear(store, name + ".q", dim, dim, rng, init_std);
  p.key = make_linear(store, name + ".k", dim, dim, rng, init_std);
  p.value = make_linear(store, name + ".v", dim, dim, rng, init_std);
  p.output = make_linear(store, name + ".o", dim, dim, rng, init_std);
  return p;
}

Value linear3(const Value& x, const LinearParams& lin) {
  assert(x->val.rank() == 3);
  const int b = x->val.dim(0), s = x->val.dim(1), d = x->val.dim(2);
  const int out = lin.w->val.dim(0);
  auto flat = ag::reshape(x, {b * s, d});
  auto y = ag::affine(flat, lin.w, lin.b);
  return ag::reshape(y, {b, s, out});
}

Value multi_head_attention(const Value& x, const AttentionParams& p, int heads,
                           const Tensor& key_keep) {
  assert(x->val.rank() == 3);
  const int B = x->val.dim(0), S = x->val.dim(1), d = x->val.dim(2);
  if (d % heads != 0) throw Error("attention: head count must divide hidden size");
  const int dh = d / heads;
  assert(key_keep.rank() == 2 && key_keep.dim(0) == B && key_keep.dim(1) == S);

  auto split = [&](const Value& t) {
    // [B,S,d] -> [B*heads, S, dh]
    auto r = ag::reshape(t, {B, S, heads, dh});
    auto pm = ag::permute(r, {0, 2, 1, 3});
    return ag::reshape(pm, {B * heads, S, dh});
  };
  auto q = split(linear3(x, p.query));
  auto k = split(linear3(x, p.key));
  auto v = split(linear3(x, p.value));

  auto scores = ag::scale(ag::bmm(q, ag::permute(k, {0, 2, 1})), 1.0 / std::sqrt(dh));

  // Expand the key mask to [B*heads, S(query), S(key)].
  Tensor keep({B * heads, S, S});
  for (int b = 0; b < B; ++b)
    for (int h = 0; h < heads; ++h)
      for (int i = 0; i < S; ++i)
        for (int j = 0; j < S; ++j)
          keep.at3(b * heads + h, i, j) = key_keep.at2(b, j);

  auto probs = ag::softmax_masked(scores, keep);
  auto ctx = ag::bmm(probs, v);  // [B*heads, S, dh]
  auto merged = ag::reshape(ag::permute(ag::reshape(ctx, {B, heads, S, dh}), {0, 2, 1, 3}), {B, S, d});
  return linear3(merged, p.output);
}

uint64_t fnv1a(const std::string& bytes) {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

Adam::Adam(ParamStore& store, AdamConfig cfg) : store_(store), cfg_(cfg) {
  for (const auto& [_, p] : store_.items()) {
    m_.push_back(Tensor::zeros(p->val.shape));
    v_.push_back(Tensor::zeros(p->val.shape));
  }
}

void Adam::step(double lr_scale) {
  ++t_;
  const double lr = cfg_.lr * lr_scale;
  const double bc1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(t_));
  const double bc2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(t_));
  const auto& items = store_.items();
  for (size_t pi = 0; pi < items.size(); ++pi) {
    auto& p = items[pi].second;
    if (!p->grad_ready) continue;  // parameter untouched this step
    const bool decay = cfg_.weight_decay > 0.0 && p->val.rank() >= 2;
    for (int64_t i = 0; i < p->val.numel(); ++i) {
      const double g = p->grad.v[i];
      m_[pi].v[i] = cfg_.beta1 * m_[pi].v[i] + (1.0 - cfg_.beta1) * g;
      v_[pi].v[i] = cfg_.beta2 * v_[pi].v[i] + (1.0 - cfg_.beta2) * g * g;
      const double mhat = m_[pi].v[i] / bc1;
      const double vhat = v_[pi].v[i] / bc2;
      double upd = mhat / (std::sqrt(vhat) + cfg_.eps);
      if (decay) upd += cfg_.weight_decay * p->val.v[i];
      p->val.v[i] -= lr * upd;
    }
  }
}

}  // namespace trn::nn
