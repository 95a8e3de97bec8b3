#ifndef TRN_MODEL_HPP
#define TRN_MODEL_HPP

#include <array>
#include <memory>
#include <string>
#include <vector>

#include "trn/chaining.hpp"
#include "trn/config.hpp"
#include "trn/corpus.hpp"
#include "trn/encoder.hpp"
#include "trn/extraction.hpp"
#include "trn/graph.hpp"
#include "trn/tbdense.hpp"

namespace trn {

// A question with all pure preprocessing done: encoder input, joint graph,
// and training labels.
struct PreparedQuestion {
  std::string question_id;
  ModelInput input;
  JointGraph graph;
  std::vector<int> word_labels;    // torque: 1 answer / 0 not, per passage word
  std::vector<int> gold_answers;   // torque gold set (sorted)
  int class_label = -1;            // tbdense gold relation
  int event2_word = -1;            // tbdense pooling position
};

struct PreparedGroup {
  std::string group_id;
  std::string passage_id;
  std::vector<PreparedQuestion> members;  // deterministic group order
};

struct PredictionRecord {
  std::string question_id;
  std::vector<int> answers;  // sorted predicted word indices
  std::vector<std::string> answer_surfaces;
  std::vector<std::array<double, 2>> extract_scores;  // per passage word
  std::vector<std::array<double, 2>> chain_scores;
};

// One-layer classifier head over per-word representations.
ag::Value word_logits(const ag::Value& repr_rows, const nn::LinearParams& head);

// Full model: encoder + graph reasoning + evidence chaining + the two
// classifier heads, with every parameter in one store.
class TrnModel {
 public:
  TrnModel(const RunConfig& cfg, Vocabulary vocab);

  struct GroupForward {
    std::vector<ag::Value> extract_logits;  // per member: [m, C] (torque) / [1, C] (tbdense)
    std::vector<ag::Value> chain_logits;
    EvidenceStack chained;
  };

  GroupForward forward_group(const PreparedGroup& group, bool training);

  // (L_extract + L_chain) / 2 for this group.
  ag::Value group_loss(const GroupForward& fwd, const PreparedGroup& group) const;

  // Deterministic inference (dropout off): chaining-step argmax with ties
  // resolved to not-answer / the first label.
  std::vector<PredictionRecord> predict_group(const PreparedGroup& group);
  std::vector<TbPrediction> classify_group(const PreparedGroup& group);

  void save_checkpoint(const std::string& path) const;
  static std::unique_ptr<TrnModel> load_checkpoint(const std::string& path);

  const RunConfig& config() const { return cfg_; }
  const Vocabulary& vocab() const { return vocab_; }
  ag::ParamStore& params() { return store_; }
  GraphParameters& graph_params() { return graph_; }
  ChainingParameters& chain_params() { return chain_; }
  nn::LinearParams& extract_head() { return head_extract_; }
  nn::LinearParams& chain_head() { return head_chain_; }
  Encoder& encoder() { return *encoder_; }

 private:
  RunConfig cfg_;
  Vocabulary vocab_;
  ag::ParamStore store_;
  nn::Rng dropout_rng_;
  std::unique_ptr<TinyEncoder> encoder_;
  GraphParameters graph_;
  ChainingParameters chain_;
  nn::LinearParams head_extract_, head_chain_;
};

}  // namespace trn

#endif
