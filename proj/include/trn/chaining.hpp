#ifndef TRN_CHAINING_HPP
#define TRN_CHAINING_HPP

#include <string>
#include <vector>

#include "trn/autograd.hpp"
#include "trn/extraction.hpp"
#include "trn/nn.hpp"

namespace trn {

// Stacked answer representations for one question group: l question slices
// over the same m passage words. mask[l][m] == 1 marks real slots; padded
// slots never influence real outputs.
struct EvidenceStack {
  ag::Value x;      // [l, m, d]
  ag::Tensor mask;  // [l, m], 1.0 live / 0.0 padded
  std::string group_id;
  std::string passage_id;

  int slices() const { return x->val.dim(0); }
  int words() const { return x->val.dim(1); }
  int width() const { return x->val.dim(2); }
};

struct ChainLayerParams {
  nn::AttentionParams self_attn;   // along the word axis, per slice
  nn::AttentionParams cross_attn;  // along the question axis, per word position
  nn::LinearParams ffn_in, ffn_out;
  nn::LayerNormParams norm_self, norm_cross, norm_ffn;
};

struct ChainingParameters {
  std::vector<ChainLayerParams> layers;
  int heads = 8;
  int d_model = 0;
  int ffn_dim = 0;
  double dropout = 0.0;

  static ChainingParameters create(ag::ParamStore& store, const std::string& prefix, int layers,
                                   int d_model, int heads, int ffn_dim, double dropout,
                                   nn::Rng& rng, double init_std = 0.02);
};

// Stacks the group's answer representations in the given order. All members
// must come from the same passage and have identical word counts.
EvidenceStack collect_evidence(const std::vector<AnswerRepr>& group_reprs,
                               const std::string& group_id);

// Pads the question axis with masked zero slices up to total_slices.
EvidenceStack pad_stack(const EvidenceStack& stack, int total_slices);

// Cross-time attention (no residual/norm): at each word position k the l
// slice entries attend to one another; nothing crosses word positions.
// Masked entries act as -inf scores.
ag::Value cross_time_attention(const EvidenceStack& stack, const nn::AttentionParams& params,
                               int heads);

// One transformer layer: word-axis self-attention, cross-time attention,
// FFN; each sub-layer followed by residual add and layer norm.
EvidenceStack chaining_layer(const EvidenceStack& stack, const ChainLayerParams& params,
                             int heads, double dropout, nn::Rng* dropout_rng, bool training);

// Zeroes padded slots, then applies `layers` chaining layers in sequence.
EvidenceStack chain_evidence(const EvidenceStack& stack, const ChainingParameters& params,
                             nn::Rng* dropout_rng, bool training);

}  // namespace trn

#endif
