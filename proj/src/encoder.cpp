#include "trn/encoder.hpp"

#include "trn/errors.hpp"

namespace trn {

using ag::Tensor;
using ag::Value;

TinyEncoder::TinyEncoder(ag::ParamStore& store, int vocab_size, int max_positions, int hidden,
                         int layers, int heads, int ffn_dim, double dropout, nn::Rng& rng)
    : hidden_(hidden), heads_(heads), max_positions_(max_positions), dropout_(dropout) {
  if (hidden % heads != 0) throw Error("encoder: head count must divide hidden size");
  tok_emb_ = store.create("encoder.tok_emb", nn::randn({vocab_size, hidden}, rng, 0.02));
  pos_emb_ = store.create("encoder.pos_emb", nn::randn({max_positions, hidden}, rng, 0.02));
  emb_norm_ = nn::make_layer_norm(store, "encoder.emb_norm", hidden);
  for (int i = 0; i < layers; ++i) {
    const std::string base = "encoder.layer_" + std::to_string(i);
    Layer l;
    l.attn = nn::make_attention(store, base + ".attn", hidden, rng);
    l.ffn_in = nn::make_linear(store, base + ".ffn_in", ffn_dim, hidden, rng);
    l.ffn_out = nn::make_linear(store, base + ".ffn_out", hidden, ffn_dim, rng);
    l.norm_attn = nn::make_layer_norm(store, base + ".norm_attn", hidden);
    l.norm_ffn = nn::make_layer_norm(store, base + ".norm_ffn", hidden);
    layers_.push_back(std::move(l));
  }
}

Value TinyEncoder::encode(const ModelInput& input, nn::Rng* dropout_rng, bool training) {
  const int seq = input.seq_len();
  if (seq > max_positions_)
    throw TruncationError("sequence of " + std::to_string(seq) +
                          " tokens exceeds encoder positions " + std::to_string(max_positions_));
  auto drop = [&](const Value& v) -> Value {
    if (!training || dropout_ <= 0.0 || dropout_rng == nullptr) return v;
    std::mt19937_64 gen(dropout_rng->next_u64());
    return ag::dropout(v, dropout_, gen, true);
  };

  std::vector<int> positions(static_cast<size_t>(seq));
  for (int i = 0; i < seq; ++i) positions[static_cast<size_t>(i)] = i;
  auto x = ag::add(ag::gather_rows(tok_emb_, input.token_ids),
                   ag::gather_rows(pos_emb_, positions));
  x = drop(ag::layer_norm(x, emb_norm_.gain, emb_norm_.bias));

  Tensor keep({1, seq});
  for (int i = 0; i < seq; ++i)
    keep.at2(0, i) = input.attention_mask[static_cast<size_t>(i)] ? 1.0 : 0.0;

  for (const auto& l : layers_) {
    auto x3 = ag::reshape(x, {1, seq, hidden_});
    auto attended = ag::reshape(nn::multi_head_attention(x3, l.attn, heads_, keep), {seq, hidden_});
    x = ag::layer_norm(ag::add(x, drop(attended)), l.norm_attn.gain, l.norm_attn.bias);
    auto ff = ag::affine(ag::relu(ag::affine(x, l.ffn_in.w, l.ffn_in.b)), l.ffn_out.w, l.ffn_out.b);
    x = ag::layer_norm(ag::add(x, drop(ff)), l.norm_ffn.gain, l.norm_ffn.bias);
  }
  return x;
}

}  // namespace trn
