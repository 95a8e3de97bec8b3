#ifndef TRN_ENCODER_HPP
#define TRN_ENCODER_HPP

#include <string>
#include <vector>

#include "trn/autograd.hpp"
#include "trn/corpus.hpp"
#include "trn/nn.hpp"

namespace trn {

// Contextual encoder interface. Production deployments plug a pre-trained
// language model in here; this build ships a trainable small transformer.
class Encoder {
 public:
  virtual ~Encoder() = default;
  // Returns [seq_len, hidden] token vectors.
  virtual ag::Value encode(const ModelInput& input, nn::Rng* dropout_rng, bool training) = 0;
  virtual int hidden_size() const = 0;
};

// Token + position embeddings followed by post-norm transformer layers.
class TinyEncoder : public Encoder {
 public:
  TinyEncoder(ag::ParamStore& store, int vocab_size, int max_positions, int hidden, int layers,
              int heads, int ffn_dim, double dropout, nn::Rng& rng);

  ag::Value encode(const ModelInput& input, nn::Rng* dropout_rng, bool training) override;
  int hidden_size() const override { return hidden_; }

 private:
  struct Layer {
    nn::AttentionParams attn;
    nn::LinearParams ffn_in, ffn_out;
    nn::LayerNormParams norm_attn, norm_ffn;
  };

  int hidden_;
  int heads_;
  int max_positions_;
  double dropout_;
  ag::Value tok_emb_;  // [vocab, hidden]
  ag::Value pos_emb_;  // [max_positions, hidden]
  nn::LayerNormParams emb_norm_;
  std::vector<Layer> layers_;
};

}  // namespace trn

#endif
