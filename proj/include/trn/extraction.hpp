#ifndef TRN_EXTRACTION_HPP
#define TRN_EXTRACTION_HPP

#include <string>
#include <vector>

#include "trn/autograd.hpp"
#include "trn/corpus.hpp"
#include "trn/graph.hpp"
#include "trn/nn.hpp"

namespace trn {

// Parameters of the graph reasoning stack. One projection, one relevance
// scorer, one propagation matrix per edge type, one shared update matrix,
// and the add-and-norm that folds the encoder representation back in.
struct GraphParameters {
  ag::Value w_proj, b_proj;    // node init from encoder vectors
  ag::Value w_rel, b_rel;      // per-node relevance logit
  ag::Value w_type[4];         // indexed by EdgeType
  ag::Value w_update, b_update;
  ag::Value ln_gain, ln_bias;  // residual add-and-norm
  int d_model = 0;
  int d_graph = 0;

  static GraphParameters create(ag::ParamStore& store, const std::string& prefix, int d_model,
                                nn::Rng& rng, double init_std = 0.02);
};

// Per-passage-word answer representation coming out of the extraction step.
struct AnswerRepr {
  ag::Value rows;  // [n_passage_words, d_model]
  std::string question_id;
  std::string passage_id;
};

// Token position of each graph node's first encoder token (question nodes
// first, then passage nodes). Throws when a node has no token vector.
std::vector<int> graph_node_token_positions(const ModelInput& input, const JointGraph& graph);

// Node initialization: states = W_m * enc[first token] + b_m.
ag::Value project_nodes(const ag::Value& encoder_out, const std::vector<int>& node_token_pos,
                        const GraphParameters& params);

// Per-node relevance gate in (0,1): sigmoid(W_v * state + b_v). Shape [n,1].
ag::Value node_relevance(const ag::Value& states, const GraphParameters& params);

// Mean of relevance-gated typed messages over incoming neighbors; nodes with
// no incoming edges receive the zero vector.
ag::Value propagate_messages(const ag::Value& states, const ag::Value& alphas,
                             const JointGraph& graph, const GraphParameters& params);

// state' = ReLU(W_u * state + message) + b_u.
ag::Value update_nodes(const ag::Value& states, const ag::Value& messages,
                       const GraphParameters& params);

// Full extraction step: projection, `iterations` rounds of
// relevance/propagate/update, then residual add of the encoder passage
// vectors and layer normalization. Returns one row per passage word.
ag::Value extract_evidence(const ag::Value& encoder_out, const ModelInput& input,
                           const JointGraph& graph, const GraphParameters& params,
                           int iterations);

}  // namespace trn

#endif
