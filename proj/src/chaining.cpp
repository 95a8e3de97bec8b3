#include "trn/chaining.hpp"

#include "trn/errors.hpp"

namespace trn {

using ag::Tensor;
using ag::Value;

ChainingParameters ChainingParameters::create(ag::ParamStore& store, const std::string& prefix,
                                              int layers, int d_model, int heads, int ffn_dim,
                                              double dropout, nn::Rng& rng, double init_std) {
  if (d_model % heads != 0) throw Error("chaining: head count must divide hidden size");
  ChainingParameters p;
  p.heads = heads;
  p.d_model = d_model;
  p.ffn_dim = ffn_dim;
  p.dropout = dropout;
  for (int i = 0; i < layers; ++i) {
    const std::string base = prefix + ".layer_" + std::to_string(i);
    ChainLayerParams lp;
    lp.self_attn = nn::make_attention(store, base + ".self", d_model, rng, init_std);
    lp.cross_attn = nn::make_attention(store, base + ".cross", d_model, rng, init_std);
    lp.ffn_in = nn::make_linear(store, base + ".ffn_in", ffn_dim, d_model, rng, init_std);
    lp.ffn_out = nn::make_linear(store, base + ".ffn_out", d_model, ffn_dim, rng, init_std);
    lp.norm_self = nn::make_layer_norm(store, base + ".norm_self", d_model);
    lp.norm_cross = nn::make_layer_norm(store, base + ".norm_cross", d_model);
    lp.norm_ffn = nn::make_layer_norm(store, base + ".norm_ffn", d_model);
    p.layers.push_back(std::move(lp));
  }
  return p;
}

EvidenceStack collect_evidence(const std::vector<AnswerRepr>& group_reprs,
                               const std::string& group_id) {
  if (group_reprs.empty()) throw Error("collect_evidence: empty group " + group_id);
  const std::string& pid = group_reprs.front().passage_id;
  const int m = group_reprs.front().rows->val.dim(0);
  std::vector<Value> slices;
  slices.reserve(group_reprs.size());
  for (const auto& r : group_reprs) {
    if (r.passage_id != pid)
      throw ValidationError("collect_evidence: group " + group_id +
                            " mixes passages " + pid + " and " + r.passage_id);
    if (r.rows->val.dim(0) != m)
      throw ValidationError("collect_evidence: group " + group_id +
                            " members disagree on passage word count");
    slices.push_back(r.rows);
  }
  EvidenceStack stack;
  stack.x = ag::stack0(slices);
  stack.mask = Tensor::full({static_cast<int>(group_reprs.size()), m}, 1.0);
  stack.group_id = group_id;
  stack.passage_id = pid;
  return stack;
}

EvidenceStack pad_stack(const EvidenceStack& stack, int total_slices) {
  const int l = stack.slices(), m = stack.words(), d = stack.width();
  if (total_slices < l) throw Error("pad_stack: cannot shrink a stack");
  if (total_slices == l) return stack;
  std::vector<Value> slices;
  for (int i = 0; i < l; ++i) slices.push_back(ag::slice0(stack.x, i));
  auto zero = ag::constant(Tensor::zeros({m, d}));
  for (int i = l; i < total_slices; ++i) slices.push_back(zero);
  EvidenceStack out;
  out.x = ag::stack0(slices);
  out.mask = Tensor::zeros({total_slices, m});
  for (int i = 0; i < l; ++i)
    for (int k = 0; k < m; ++k) out.mask.at2(i, k) = stack.mask.at2(i, k);
  out.group_id = stack.group_id;
  out.passage_id = stack.passage_id;
  return out;
}

namespace {

// mask [l,m] transposed into the cross-time batch layout [m,l].
Tensor transpose_mask(const Tensor& mask) {
  const int l = mask.dim(0), m = mask.dim(1);
  Tensor out({m, l});
  for (int i = 0; i < l; ++i)
    for (int k = 0; k < m; ++k) out.at2(k, i) = mask.at2(i, k);
  return out;
}

// Zeroes padded slots so their contents can never leak through attention or
// the position-wise sublayers.
Value apply_mask(const Value& x, const Tensor& mask) {
  const int l = x->val.dim(0), m = x->val.dim(1), d = x->val.dim(2);
  Tensor expanded({l, m, d});
  for (int i = 0; i < l; ++i)
    for (int k = 0; k < m; ++k)
      for (int j = 0; j < d; ++j) expanded.at3(i, k, j) = mask.at2(i, k);
  return ag::mul(x, ag::constant(std::move(expanded)));
}

}  // namespace

Value cross_time_attention(const EvidenceStack& stack, const nn::AttentionParams& params,
                           int heads) {
  // [l,m,d] -> [m,l,d]: each word position becomes one attention batch whose
  // sequence runs over the group's questions.
  auto by_position = ag::permute(stack.x, {1, 0, 2});
  auto attended = nn::multi_head_attention(by_position, params, heads, transpose_mask(stack.mask));
  return ag::permute(attended, {1, 0, 2});
}

EvidenceStack chaining_layer(const EvidenceStack& stack, const ChainLayerParams& params,
                             int heads, double dropout, nn::Rng* dropout_rng, bool training) {
  auto drop = [&](const Value& v) -> Value {
    if (!training || dropout <= 0.0 || dropout_rng == nullptr) return v;
    std::mt19937_64 gen(dropout_rng->next_u64());
    return ag::dropout(v, dropout, gen, true);
  };

  EvidenceStack cur = stack;

  // (1) self-attention within each slice, along the word axis
  auto self_out = nn::multi_head_attention(cur.x, params.self_attn, heads, cur.mask);
  cur.x = ag::layer_norm(ag::add(cur.x, drop(self_out)), params.norm_self.gain,
                         params.norm_self.bias);

  // (2) cross-time attention across slices at each word position
  auto cross_out = cross_time_attention(cur, params.cross_attn, heads);
  cur.x = ag::layer_norm(ag::add(cur.x, drop(cross_out)), params.norm_cross.gain,
                         params.norm_cross.bias);

  // (3) position-wise feed-forward
  auto ff = nn::linear3(ag::relu(nn::linear3(cur.x, params.ffn_in)), params.ffn_out);
  cur.x = ag::layer_norm(ag::add(cur.x, drop(ff)), params.norm_ffn.gain, params.norm_ffn.bias);

  return cur;
}

EvidenceStack chain_evidence(const EvidenceStack& stack, const ChainingParameters& params,
                             nn::Rng* dropout_rng, bool training) {
  if (params.layers.empty()) throw Error("chain_evidence: no layers configured");
  EvidenceStack cur = stack;
  cur.x = apply_mask(cur.x, cur.mask);
  for (const auto& layer : params.layers)
    cur = chaining_layer(cur, layer, params.heads, params.dropout, dropout_rng, training);
  return cur;
}

}  // namespace trn
