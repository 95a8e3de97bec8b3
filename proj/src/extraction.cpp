#include "trn/extraction.hpp"

#include "trn/errors.hpp"

namespace trn {

using ag::Tensor;
using ag::Value;

GraphParameters GraphParameters::create(ag::ParamStore& store, const std::string& prefix,
                                        int d_model, nn::Rng& rng, double init_std) {
  GraphParameters p;
  p.d_model = d_model;
  p.d_graph = d_model;  // residual add requires matching widths
  p.w_proj = store.create(prefix + ".proj.w", nn::randn({p.d_graph, d_model}, rng, init_std));
  p.b_proj = store.create(prefix + ".proj.b", Tensor::zeros({p.d_graph}));
  p.w_rel = store.create(prefix + ".rel.w", nn::randn({1, p.d_graph}, rng, init_std));
  p.b_rel = store.create(prefix + ".rel.b", Tensor::zeros({1}));
  for (int t = 0; t < 4; ++t)
    p.w_type[t] = store.create(prefix + ".type_" + edge_type_name(static_cast<EdgeType>(t)) + ".w",
                               nn::randn({p.d_graph, p.d_graph}, rng, init_std));
  p.w_update = store.create(prefix + ".update.w", nn::randn({p.d_graph, p.d_graph}, rng, init_std));
  p.b_update = store.create(prefix + ".update.b", Tensor::zeros({p.d_graph}));
  p.ln_gain = store.create(prefix + ".norm.gain", Tensor::full({d_model}, 1.0));
  p.ln_bias = store.create(prefix + ".norm.bias", Tensor::zeros({d_model}));
  return p;
}

std::vector<int> graph_node_token_positions(const ModelInput& input, const JointGraph& graph) {
  if (graph.n_question != static_cast<int>(input.question_map.word_to_token.size()) ||
      graph.n_passage != static_cast<int>(input.passage_map.word_to_token.size()))
    throw Error("graph node count does not match the input word maps for question " +
                input.question_id);
  std::vector<int> pos;
  pos.reserve(static_cast<size_t>(graph.n_nodes()));
  for (int w = 0; w < graph.n_question; ++w)
    pos.push_back(input.question_map.word_to_token[static_cast<size_t>(w)]);
  for (int w = 0; w < graph.n_passage; ++w)
    pos.push_back(input.passage_map.word_to_token[static_cast<size_t>(w)]);
  for (size_t i = 0; i < pos.size(); ++i)
    if (pos[i] < 0 || pos[i] >= input.seq_len())
      throw Error("graph node " + std::to_string(i) + " has no token vector (question " +
                  input.question_id + ")");
  return pos;
}

Value project_nodes(const Value& encoder_out, const std::vector<int>& node_token_pos,
                    const GraphParameters& params) {
  auto node_vecs = ag::gather_rows(encoder_out, node_token_pos);
  return ag::affine(node_vecs, params.w_proj, params.b_proj);
}

Value node_relevance(const Value& states, const GraphParameters& params) {
  return ag::sigmoid(ag::affine(states, params.w_rel, params.b_rel));
}

Value propagate_messages(const Value& states, const Value& alphas, const JointGraph& graph,
                         const GraphParameters& params) {
  const int n = graph.n_nodes();
  if (states->val.dim(0) != n) throw Error("propagate: state rows do not match graph nodes");

  // Gated, type-transformed neighbor states, averaged per receiving node:
  // message_i = (1/|N_i|) * sum_{j in N_i} alpha_j * W_{type(j->i)} * state_j.
  // Realized as one dense adjacency matmul per edge type; A_r[i][j] holds
  // 1/|N_i| for each edge j->i of type r.
  Value gated[4];
  bool type_used[4] = {false, false, false, false};
  Tensor adj[4];
  for (auto& a : adj) a = Tensor::zeros({n, n});
  for (int i = 0; i < n; ++i) {
    const auto& inc = graph.incoming[static_cast<size_t>(i)];
    if (inc.empty()) continue;
    const double inv = 1.0 / static_cast<double>(inc.size());
    for (const auto& [src, type] : inc) {
      adj[static_cast<int>(type)].at2(i, src) = inv;
      type_used[static_cast<int>(type)] = true;
    }
  }

  Value result;
  for (int t = 0; t < 4; ++t) {
    if (!type_used[t]) continue;
    if (!gated[t])
      gated[t] = ag::row_scale(ag::affine(states, params.w_type[t], nullptr), alphas);
    auto contrib = ag::matmul(ag::constant(std::move(adj[t])), gated[t]);
    result = result ? ag::add(result, contrib) : contrib;
  }
  if (!result) {
    // Graph with no edges at all: every node gets the zero message.
    return ag::constant(Tensor::zeros({n, params.d_graph}));
  }
  return result;
}

Value update_nodes(const Value& states, const Value& messages, const GraphParameters& params) {
  auto pre = ag::add(ag::affine(states, params.w_update, nullptr), messages);
  return ag::add_rows(ag::relu(pre), params.b_update);
}

Value extract_evidence(const Value& encoder_out, const ModelInput& input, const JointGraph& graph,
                       const GraphParameters& params, int iterations) {
  if (iterations < 1) throw Error("extraction iteration count must be >= 1");
  const auto node_pos = graph_node_token_positions(input, graph);
  Value states = project_nodes(encoder_out, node_pos, params);
  for (int t = 0; t < iterations; ++t) {
    auto alphas = node_relevance(states, params);
    auto messages = propagate_messages(states, alphas, graph, params);
    states = update_nodes(states, messages, params);
  }

  std::vector<int> passage_nodes(static_cast<size_t>(graph.n_passage));
  for (int w = 0; w < graph.n_passage; ++w)
    passage_nodes[static_cast<size_t>(w)] = graph.n_question + w;
  auto passage_states = ag::gather_rows(states, passage_nodes);

  std::vector<int> passage_token_pos(node_pos.begin() + graph.n_question, node_pos.end());
  auto passage_vecs = ag::gather_rows(encoder_out, passage_token_pos);

  return ag::layer_norm(ag::add(passage_vecs, passage_states), params.ln_gain, params.ln_bias);
}

}  // namespace trn
